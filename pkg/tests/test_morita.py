import pytest

from hermlambda.algebra import make_field, make_matrix_algebra, make_quaternion
from hermlambda.hermitian import FormError, FreeForm, alt_power_form, diagonal_form, quadratic_form, tensor_form
from hermlambda.linalg import MatrixQ
from hermlambda.morita import (
    explicit_compose,
    explicit_transfer,
    identity_equivalence,
    k_form,
    module_equivalence,
    morita_compose,
    morita_pushforward,
    morita_transfer,
    trace_equivalence,
)
from hermlambda.qform import gram_invariants
from hermlambda.reduced import reduced_alt

K = make_field()
H = make_quaternion(-1, -1)
HI = make_quaternion(-1, -1, "orthogonal", [0, 1, 0, 0])
M2 = make_matrix_algebra(2)
SPLIT = make_quaternion(1, 1)


def split_equivalence():
    """(1, 1) acting on K^2 with the alternating form; i -> diag(1, -1), j -> swap."""
    i = MatrixQ.diag([1, -1])
    j = MatrixQ.from_rows([[0, 1], [1, 0]])
    rho = [MatrixQ.identity(2), i, j, i @ j]
    g = FreeForm(K, [[(0,), (1,)], [(-1,), (0,)]], -1)
    return module_equivalence(SPLIT, g, rho)


def _all(d):
    return all(d.values())


@pytest.mark.parametrize("a,k", [(H, 1), (H, 2), (HI, 2), (M2, 2), (H, 3)])
def test_trace_equivalence_is_valid(a, k):
    assert _all(trace_equivalence(a, k).check())


def test_identity_and_module_equivalences():
    assert _all(identity_equivalence(HI).check())
    eq = split_equivalence()
    assert _all(eq.check())
    assert _all(morita_compose(identity_equivalence(SPLIT), eq).check())


def test_transfer_of_unit_square():
    t = morita_transfer(tensor_form(diagonal_form(H, [1]), diagonal_form(H, [1])))
    assert not t.algebras
    assert t.scalar_gram() == MatrixQ.diag([2, 2, 2, 2])


@pytest.mark.parametrize("a,e1,e2", [(H, [1], [3]), (HI, [1], [HI.basis(2)]), (M2, [1], [-1])])
def test_radical_route_matches_explicit_quotient(a, e1, e2):
    phi = tensor_form(diagonal_form(a, e1), diagonal_form(a, e2))
    r = morita_transfer(phi)
    x = explicit_transfer(phi)
    assert r.dim == x.dim
    if r.eps == 1:
        assert gram_invariants(r.scalar_gram()) == gram_invariants(x.scalar_gram())


def test_compose_matches_explicit_on_module_equivalence():
    eq = split_equivalence()
    h = diagonal_form(SPLIT, [1, -3])
    r = morita_pushforward(h, eq)
    x = explicit_compose(h, eq)
    # rank 2 over B = M_2(K) goes to dim 2 * 4 * 2 / 4 over K
    assert r.dim == x.dim == 4 and r.eps == x.eps == -1
    assert r.trace_gram().det() and x.trace_gram().det()


@pytest.mark.parametrize("a", [H, HI, M2], ids=lambda a: a.name)
def test_transfer_of_alternating_power_is_reduced_power(a):
    h = diagonal_form(a, [a.one, a.scalar(2)])
    t = morita_transfer(alt_power_form(h, 2))
    r = reduced_alt(h, 2)
    assert t.dim == r.dim
    assert gram_invariants(t.scalar_gram()) == gram_invariants(r.scalar_gram())


def test_transfer_of_odd_power_is_hermitian():
    h = diagonal_form(H, [1])
    t = morita_transfer(h)
    assert list(t.algebras) == [H] and t.dim == 4
    assert t.trace_invariants() == h.trace_invariants()


@pytest.mark.parametrize("entries", [[1], [1, 1], [1, -3], [SPLIT.basis(1), SPLIT.basis(2)]])
def test_pushforward_commutes_with_alt2(entries):
    eq = split_equivalence()
    h = diagonal_form(SPLIT, entries)
    pushed = morita_pushforward(h, eq)
    pushed.check()
    lhs = morita_pushforward(alt_power_form(h, 2), eq)
    rhs = alt_power_form(k_form(pushed), 2)
    assert lhs.dim == rhs.dim and lhs.eps == rhs.eps
    if lhs.eps == 1 and lhs.dim:
        assert gram_invariants(lhs.trace_gram()) == gram_invariants(rhs.trace_gram())


def test_errors():
    with pytest.raises(FormError):
        morita_transfer(quadratic_form([1, 2]))
    with pytest.raises(FormError):
        k_form(diagonal_form(H, [1]))
