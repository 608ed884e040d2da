import math

import pytest

from hermlambda.algebra import make_matrix_algebra, make_quaternion
from hermlambda.hermitian import TraceForms, diagonal_form
from hermlambda.lambdaring import decidable_hermitian, herm, lam, multiply, quad, quad_gram
from hermlambda.qform import diagonalize, gram_invariants, invariants
from hermlambda.reduced import ReducedPower, anti_mirror_check, ralt_unit_form, reduced_alt, reduced_alt_even

H = make_quaternion(-1, -1)
H13 = make_quaternion(-1, -3)
HI = make_quaternion(-1, -1, "orthogonal", [0, 1, 0, 0])
SPLIT = make_quaternion(1, 1)
M2 = make_matrix_algebra(2)
M2_13 = make_matrix_algebra(2, "conjugate", [[1, 0], [0, 3]])
CASES = [H, H13, HI, M2, M2_13]


@pytest.mark.parametrize("a", CASES, ids=lambda a: a.name)
def test_lambda2_of_unit_form(a):
    """RAlt^2(<1>) has the invariants of <2> T^{-eps}."""
    r = reduced_alt_even(diagonal_form(a, [a.one]), 1)
    tf = TraceForms(a)
    target = tf.part(-a.epsilon)
    assert r.dim == target.rows
    expected = [2 * x for x in diagonalize(target)]
    assert gram_invariants(r.scalar_gram()) == invariants(expected)


@pytest.mark.parametrize("a", [H, SPLIT, HI], ids=lambda a: a.name)
def test_restriction_scalar_reduced(a):
    r = reduced_alt(diagonal_form(a, [a.one, a.scalar(-2)]), 2)
    assert r.restriction_scalar_holds()
    r3 = reduced_alt(diagonal_form(a, [a.one]), 2)
    assert r3.restriction_scalar_holds()


@pytest.mark.parametrize("a,m,k,dim", [(H, 2, 2, 6), (H, 2, 3, 8), (H, 2, 4, 1), (H, 1, 1, 4), (H, 1, 3, 0),
                                       (M2, 1, 2, 1), (SPLIT, 2, 2, 6)])
def test_reduced_dimension(a, m, k, dim):
    h = diagonal_form(a, [a.one] * m)
    r = reduced_alt(h, k)
    assert r.dim == dim
    assert r.rdim == math.comb(2 * m, k)


def test_odd_reduced_power_is_hermitian_over_algebra():
    r = reduced_alt(diagonal_form(H, [1, 3]), 3)
    assert list(r.algebras) == [H]
    assert r.eps == 1 and r.is_hermitian() and r.is_sesquilinear()
    assert r.restriction_scalar_holds()


@pytest.mark.parametrize("a", [H, HI, M2], ids=lambda a: a.name)
def test_anti_mirror_description(a):
    assert anti_mirror_check(diagonal_form(a, [a.one]), 1) == {"intersection": True, "mirror_goldman": True}


@pytest.mark.parametrize("a", [H, HI, M2], ids=lambda a: a.name)
def test_unit_model(a):
    u = ralt_unit_form(a, 1)
    assert u.ta_alt_check()
    r = reduced_alt_even(diagonal_form(a, [a.one]), 1)
    assert gram_invariants(u.scalar_gram()) == gram_invariants(r.scalar_gram())


def test_reduced_power_transpositions_are_involutions():
    sp = ReducedPower(diagonal_form(H13, [1]), 1)
    for i in range(sp.d - 1):
        t = sp.matrix(lambda v, i=i: sp.transposition(i, v))
        assert t @ t == t.power(0)


def test_class_layer_uses_reduced_powers():
    a = H
    one = herm(diagonal_form(a, [a.one]))
    assert decidable_hermitian(a, 1)
    assert lam(2, one).same(multiply(quad([2]), quad_gram(TraceForms(a).part(-a.epsilon))))
    assert lam(3, one).is_zero() and lam(5, one).is_zero()
