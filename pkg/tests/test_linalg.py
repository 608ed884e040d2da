from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hermlambda import _kernels_py, kernels
from hermlambda.linalg import (
    InputError,
    MatrixQ,
    Subspace,
    image,
    intersect,
    kernel,
    kron,
    modular_rank,
    solve,
)

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(small, min_size=r * c, max_size=r * c).map(
                lambda e: MatrixQ(r, c, e))))


def e(i, n):
    return [1 if k == i else 0 for k in range(n)]


def test_kernel_examples():
    assert kernel(MatrixQ.identity(3)).dim == 0
    assert kernel(MatrixQ.zero(2, 3)) == Subspace.full(3)
    k = kernel(MatrixQ.from_rows([[1, 1], [1, 1]]))
    assert k == Subspace.span(2, [[1, -1]])


def test_solve_examples():
    assert solve(MatrixQ.identity(2), [3, 4]) == (3, 4)
    assert solve(MatrixQ.from_rows([[1, 0], [0, 0]]), [0, 1]) is None
    assert solve(MatrixQ.from_rows([[2]]), [1]) == (F(1, 2),)
    with pytest.raises(InputError):
        solve(MatrixQ.identity(2), [1, 2, 3])


def test_kron_examples():
    assert kron(MatrixQ.identity(2), MatrixQ.identity(3)) == MatrixQ.identity(6)
    m = MatrixQ.from_rows([[1, 2], [3, F(1, 2)]])
    assert kron(MatrixQ.from_rows([[2]]), m) == m.scale(2)


def test_intersect_examples():
    v = Subspace.span(3, [[1, 2, 0]])
    assert intersect(Subspace.full(3), v) == v
    assert intersect(Subspace.span(2, [e(0, 2)]), Subspace.span(2, [e(1, 2)])).dim == 0
    a = Subspace.span(3, [[1, 1, 0], [0, 0, 1]])
    b = Subspace.span(3, [[1, 1, 0], [1, 0, 0]])
    assert intersect(a, b) == Subspace.span(3, [[1, 1, 0]])
    with pytest.raises(InputError):
        intersect(Subspace.full(2), Subspace.full(3))


def test_inverse_and_det():
    m = MatrixQ.from_rows([[2, 1], [7, 4]])
    assert m.det() == 1
    assert m @ m.inverse() == MatrixQ.identity(2)
    with pytest.raises(InputError):
        MatrixQ.from_rows([[1, 2], [2, 4]]).inverse()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert m.rank() + kernel(m).dim == m.cols
    for v in kernel(m).vectors():
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_against_sympy(m):
    sm = sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for x in m.entries])
    assert m.rank() == sm.rank()
    assert 0 <= modular_rank(m) <= m.rank()
    assert image(m).dim == m.rank()


@settings(max_examples=40, deadline=None)
@given(matrices(2, 2), matrices(2, 2))
def test_kron_rank_multiplicative(a, b):
    assert kron(a, b).rank() == a.rank() * b.rank()


@settings(max_examples=30, deadline=None)
@given(matrices(2, 2), matrices(2, 2), matrices(2, 2))
def test_kron_associative(a, b, c):
    assert kron(kron(a, b), c) == kron(a, kron(b, c))


@settings(max_examples=30, deadline=None)
@given(matrices(4, 4), matrices(4, 4))
def test_kron_mixed_product(a, b):
    # (a (x) b)(x (x) y) = ax (x) by on the standard basis
    x = [F(i + 1) for i in range(a.cols)]
    y = [F(2 - i) for i in range(b.cols)]
    lhs = kron(a, b).apply([xi * yj for xi in x for yj in y])
    ax, by = a.apply(x), b.apply(y)
    assert lhs == tuple(u * w for u in ax for w in by)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(small, min_size=n, max_size=n), max_size=4),
    st.lists(st.lists(small, min_size=n, max_size=n), max_size=4))))
def test_dimension_formula(args):
    n, us, vs = args
    u, v = Subspace.span(n, us), Subspace.span(n, vs)
    w = intersect(u, v)
    assert u.dim + v.dim == w.dim + (u + v).dim
    assert u.contains_subspace(w) and v.contains_subspace(w)


@settings(max_examples=40, deadline=None)
@given(matrices(6, 6), st.lists(small, min_size=6, max_size=6))
def test_solve_consistent(m, x):
    b = m.apply(x[:m.cols])
    sol = solve(m, b)
    assert sol is not None and m.apply(sol) == b


@settings(max_examples=60, deadline=None)
@given(matrices(6, 6))
def test_backends_agree(m):
    rows = m.row_list()
    assert kernels.rref(rows, m.cols) == _kernels_py.rref(rows, m.cols)
    assert kernels.rank_mod_p(rows, m.cols, kernels.PRIME) == \
        _kernels_py.rank_mod_p(rows, m.cols, kernels.PRIME)


def test_backends_agree_on_big_entries():
    rows = [[F(3 ** 80 + i * j, 7 ** 30 + i) for j in range(5)] for i in range(4)]
    rows.append([F(0)] * 5)
    assert kernels.rref(rows, 5) == _kernels_py.rref(rows, 5)


def test_canonical_basis():
    a = Subspace.span(3, [[1, 2, 3], [0, 1, 1]])
    b = Subspace.span(3, [[1, 3, 4], [2, 4, 6]])
    assert a == b
    assert a.coordinates([1, 3, 4]) is not None
    assert a.coordinates([0, 0, 1]) is None
