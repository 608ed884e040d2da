"""One exact, timed check per acceptance criterion; each prints a single pass/fail line."""

import math
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction as F
from pathlib import Path

from conftest import ACCEPTANCE_LINES

from hermlambda import perms
from hermlambda.algebra import goldman_checks, goldman_element, make_field, make_matrix_algebra, make_quaternion, nrd_by_ratio
from hermlambda.hermitian import (
    FreeForm,
    TraceForms,
    addition_isometry,
    alt_power_form,
    diagonal_form,
    restriction_scalar_holds,
)
from hermlambda.lambdaring import (
    IntegerInstance,
    MixedInstance,
    MonoidRingInstance,
    WittInstance,
    add,
    check_lambda_axioms,
    contraction_check,
    det_involution,
    determinant_class,
    herm,
    lam,
    multiply,
    quad,
    quad_gram,
    square_class_of,
)
from hermlambda.linalg import MatrixQ
from hermlambda.morita import k_form, module_equivalence, morita_pushforward
from hermlambda.qform import diagonalize, gram_invariants, invariants, is_isometric, reciprocity_holds, square_class
from hermlambda.reduced import reduced_alt_even
from hermlambda.tensor import (
    FreeModule,
    TensorPower,
    alt_power,
    kernel_image_lemma,
    rdim_binomial_ok,
    shuffle_product,
    tensor_vectors,
)

K = make_field()
GOLDEN = Path(__file__).parent / "golden"
SEED = 20240601


@contextmanager
def criterion(n: int, title: str, limit: float | None):
    """Records ``criterion n: PASS|FAIL`` with the elapsed time; over the limit counts as a failure."""
    t0 = time.perf_counter()
    state = {"ok": False}
    try:
        yield state
    finally:
        dt = time.perf_counter() - t0
        ok = state["ok"] and (limit is None or dt < limit)
        lim = f" / limit {limit:g}s" if limit is not None else ""
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {title} ({dt:.2f}s{lim})"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert state["ok"]
    if limit is not None:
        assert dt < limit, f"criterion {n} took {dt:.2f}s, limit {limit}s"


def test_criterion_01_goldman_suite():
    with criterion(1, "Goldman element suite", 5) as st:
        algebras = [make_matrix_algebra(2), make_quaternion(-1, -1), make_quaternion(-1, -3),
                    make_quaternion(2, 5), make_matrix_algebra(3)]
        for a in algebras:
            assert goldman_checks(a) == {"sandwich": True, "square": True, "sigma_invariant": True}, a.name
        # e_st acts on column space K^2 as the matrix unit; g acts on K^2 (x) K^2 as the switch
        units = [MatrixQ(2, 2, [1 if t == s else 0 for t in range(4)]) for s in range(4)]
        switch = MatrixQ.from_rows([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
        assert goldman_element(algebras[0]).operator_on(units) == switch
        st["ok"] = True


def _symmetric_suite(tp: TensorPower) -> None:
    d = tp.d
    a = tp.base.algebra
    eye = MatrixQ.identity(tp.size)
    ts = [tp.matrix(lambda v, i=i: tp.transposition(i, v)) for i in range(d - 1)]
    # Coxeter relations
    for i, t in enumerate(ts):
        assert t @ t == eye
        if i + 1 < len(ts):
            u = ts[i + 1]
            assert t @ u @ t == u @ t @ u
        for j in range(i + 2, len(ts)):
            assert t @ ts[j] == ts[j] @ t
    # commutation with the right A^{(x) d}-action
    for t in ts:
        for f in range(d):
            for b in range(a.dim):
                r = tp.right_matrix(f, b)
                assert t @ r == r @ t
    # pi (v_1 (x) ... (x) v_d) pi^{-1} permutes the factors
    for p in perms.all_perms(d):
        inv = perms.inverse(p)
        for idx in range(tp.size):
            v = {idx: F(1)}
            assert tp.goldman(p, tp.right_translate(inv, v)) == tp.permute_factors(p, v)
    s = tp.antisymmetrizer_matrix()
    assert s @ s == s.scale(math.factorial(d))
    assert kernel_image_lemma(tp) == {"image": True, "kernel": True}


def test_criterion_02_symmetric_group_action():
    with criterion(2, "S_d action suite", 30) as st:
        for a in (make_quaternion(-1, -1), make_quaternion(-1, -3, "orthogonal", [0, 1, 0, 0])):
            for d in (1, 2, 3):
                _symmetric_suite(TensorPower(FreeModule(a, 1), d))
        for d in (1, 2, 3):
            _symmetric_suite(TensorPower(FreeModule(K, 3), d))
        st["ok"] = True


def test_criterion_03_dimension_law():
    with criterion(3, "rdim Alt^d = C(rdim V, d)", 60) as st:
        cases = [(make_quaternion(-1, -1), m) for m in (1, 2)]
        cases += [(K, m) for m in (1, 2, 3, 4)]
        cases += [(make_matrix_algebra(2), m) for m in (1, 2)]
        count = 0
        for a, m in cases:
            base = FreeModule(a, m)
            for d in range(5):
                alt = alt_power(base, d)
                assert rdim_binomial_ok(alt, base), (a.name, m, d)
                if d > base.rdim:
                    assert alt.dim == 0
                count += 1
        assert count == 40
        st["ok"] = True


def test_criterion_04_shuffle_and_addition():
    with criterion(4, "shuffle product and addition isometry", 60) as st:
        rng = random.Random(SEED)
        a = make_quaternion(-1, -1)
        base = FreeModule(a, 1)
        tps = {d: TensorPower(base, d) for d in range(1, 4)}

        def rand_vec(tp):
            return {rng.randrange(tp.size): F(rng.randint(-3, 3) or 1) for _ in range(3)}

        for _ in range(10):
            x, y, z = (rand_vec(tps[1]) for _ in range(3))
            xy = shuffle_product(tps[1], x, tps[1], y)
            yz = shuffle_product(tps[1], y, tps[1], z)
            assert shuffle_product(tps[2], xy, tps[1], z) == shuffle_product(tps[1], x, tps[2], yz)
        for p, q in ((1, 1), (1, 2), (2, 1)):
            for _ in range(5):
                x, y = rand_vec(tps[p]), rand_vec(tps[q])
                lhs = shuffle_product(tps[p], tps[p].antisymmetrize(x), tps[q], tps[q].antisymmetrize(y))
                rhs = tps[p + q].antisymmetrize(tensor_vectors(x, y, tps[q].size))
                assert lhs == rhs
        one = diagonal_form(a, [1])
        for d in range(3):
            assert addition_isometry(one, diagonal_form(a, [1]), d).verify()
        split = make_quaternion(1, 1)
        for d in range(4):
            assert addition_isometry(diagonal_form(split, [1]), diagonal_form(split, [-1]), d).verify()
            assert addition_isometry(diagonal_form(K, [1, 2]), diagonal_form(K, [-3]), d).verify()
        st["ok"] = True


def test_criterion_05_restriction_scalars():
    with criterion(5, "restriction scalars d! and (2d)!", None) as st:
        for a in (make_quaternion(-1, -1), make_quaternion(1, 1)):
            h = diagonal_form(a, [a.one, a.scalar(-2)])
            for d in (1, 2, 3):
                assert restriction_scalar_holds(alt_power_form(h, d))
            assert reduced_alt_even(h, 1).restriction_scalar_holds()
            assert reduced_alt_even(diagonal_form(a, [a.one]), 1).restriction_scalar_holds()
        st["ok"] = True


def test_criterion_06_lambda2_of_unit_form():
    with criterion(6, "invariants(lambda^2 <1>) = invariants(<2> T^-eps)", 60) as st:
        algebras = [make_quaternion(-1, -1), make_quaternion(-1, -3),
                    make_quaternion(-1, -1, "orthogonal", [0, 1, 0, 0]), make_matrix_algebra(2),
                    make_matrix_algebra(2, "conjugate", MatrixQ.diag([1, 3]).inverse())]
        for a in algebras:
            lhs = gram_invariants(reduced_alt_even(diagonal_form(a, [a.one]), 1).scalar_gram())
            rhs = invariants([2 * x for x in diagonalize(TraceForms(a).part(-a.epsilon))])
            assert lhs == rhs, a.name
            assert lam(2, herm(diagonal_form(a, [a.one]))).same(
                multiply(quad([2]), quad_gram(TraceForms(a).part(-a.epsilon))))
        st["ok"] = True


def test_criterion_07_mixed_ring():
    with criterion(7, "mixed ring: <1>^2 = T, contraction D=4, pushforward", None) as st:
        for a in (make_quaternion(-1, -1), make_quaternion(-1, -3, "orthogonal", [0, 1, 0, 0]),
                  make_matrix_algebra(2)):
            one = herm(diagonal_form(a, [a.one]))
            assert multiply(one, one).same(quad_gram(TraceForms(a).full))
        assert all(ln.ok for ln in contraction_check(4))
        split = make_quaternion(1, 1)
        i = MatrixQ.diag([1, -1])
        j = MatrixQ.from_rows([[0, 1], [1, 0]])
        g = FreeForm(K, [[(0,), (1,)], [(-1,), (0,)]], -1)
        eq = module_equivalence(split, g, [MatrixQ.identity(2), i, j, i @ j])
        assert all(eq.check().values())
        for entries in ([1, 1], [1, -3], [split.basis(1), split.basis(2)]):
            h = diagonal_form(split, entries)
            lhs = morita_pushforward(alt_power_form(h, 2), eq)
            rhs = alt_power_form(k_form(morita_pushforward(h, eq)), 2)
            assert lhs.dim == rhs.dim and lhs.eps == rhs.eps == 1
            assert gram_invariants(lhs.trace_gram()) == gram_invariants(rhs.trace_gram())
        st["ok"] = True


def test_criterion_08_lambda_axioms():
    with criterion(8, "lambda-axiom harness, zero failures", 300) as st:
        mixed = MixedInstance(make_quaternion(-1, -1), count=10, max_rank=2, max_d=3)
        assert len(mixed.pairs(random.Random(SEED))) >= 25
        reports = [check_lambda_axioms(IntegerInstance(span=5, max_d=5), SEED),
                   check_lambda_axioms(MonoidRingInstance(), SEED),
                   check_lambda_axioms(WittInstance(), SEED),
                   check_lambda_axioms(mixed, SEED)]
        for r in reports:
            assert r.ok, "\n".join(ln.text() for ln in r.failures)
        st["ok"] = True


def test_criterion_09_determinants():
    with criterion(9, "determinant suite", None) as st:
        rng = random.Random(SEED)

        def r():
            return F(rng.choice([-1, 1]) * rng.randint(1, 12), rng.randint(1, 5))

        for _ in range(10):
            a, b, c = r(), r(), r()
            assert square_class_of(determinant_class(quad([a, b]))) == square_class(a * b)
            x, y = quad([a, b]), quad([c, a])
            assert determinant_class(add(x, y)).same(multiply(determinant_class(x), determinant_class(y)))
        for a in (make_quaternion(-1, -1), make_quaternion(-1, -3), make_quaternion(2, 5)):
            assert det_involution(a).same(quad([1]))
        alg = make_quaternion(-1, -3, "orthogonal", [0, 1, 0, 0])
        for elt in (alg.basis(2), alg.elt([0, 0, 1, 1])):
            lhs = determinant_class(herm(diagonal_form(alg, [elt])))
            assert lhs.same(multiply(quad([alg.nrd(elt)]), det_involution(alg)))
        for a in (make_matrix_algebra(2), make_quaternion(-1, -1), make_quaternion(-1, -3),
                  make_quaternion(2, 5), make_matrix_algebra(3)):
            for _ in range(20):
                x = a.elt([F(rng.randint(-5, 5)) for _ in range(a.dim)])
                assert a.nrd(x) == nrd_by_ratio(a, x)
        st["ok"] = True


def test_criterion_10_quadratic_forms():
    with criterion(10, "qform backbone", None) as st:
        rng = random.Random(SEED)

        def r():
            return F(rng.choice([-1, 1]) * rng.randint(1, 200), rng.randint(1, 30))

        assert all(reciprocity_holds(r(), r()) for _ in range(50))
        for _ in range(20):
            n = rng.randint(1, 5)
            vals = [r() for _ in range(n)]
            while True:
                p = MatrixQ.from_rows([[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)], n)
                if p.det():
                    break
            assert gram_invariants(p.T @ MatrixQ.diag(vals) @ p) == invariants(vals)
        assert is_isometric([1, 1], [2, 2]) and not is_isometric([1, 1], [1, -1])
        st["ok"] = True


def _cli(*args) -> bytes:
    r = subprocess.run([sys.executable, "-m", "hermlambda.cli", *args], capture_output=True, check=False)
    assert r.returncode == 0, r.stderr.decode()
    return r.stdout


def test_criterion_11_cli():
    with criterion(11, "CLI determinism and golden tables", None) as st:
        jobs = sorted((GOLDEN / "jobs").glob("*.json"))
        assert len(jobs) >= 6
        for job in jobs:
            assert _cli("invariants", "--input", str(job)).decode() == (GOLDEN / f"{job.stem}.txt").read_text()
        job = str(GOLDEN / "jobs" / "quat_m1_m1_canonical.json")
        args = ("check-axioms", "--input", job, "--samples", "4", "--seed", "5", "--truncation", "3")
        assert _cli(*args) == _cli(*args)
        st["ok"] = True
