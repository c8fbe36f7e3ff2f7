"""Truncated Laurent arithmetic: windows, tails, sigma, derivations."""

from fractions import Fraction

import pytest

from phinabla.errors import NonInvertible
from phinabla.padic import PadicNumber, RingMode, RingParams
from phinabla.series import LaurentElement


P = RingParams(5, 20, (16, 16), RingMode.LAURENT)
PS = RingParams(5, 20, (0, 16), RingMode.POWER_SERIES)


def L(*terms):
    return LaurentElement.from_terms(P, terms)


def test_ring_axioms_on_samples():
    x = L((0, 1), (2, Fraction(1, 3)), (-1, 2))
    y = L((1, -1), (3, 7))
    z = L((0, Fraction(5)))
    assert ((x + y) + z).congruent(x + (y + z))
    assert (x * (y + z)).congruent(x * y + x * z)
    assert (x * y).congruent(y * x)


def test_window_clipping_sets_tails():
    t15 = LaurentElement.monomial(P, 15)
    sq = t15 * t15
    assert sq.is_zero()
    assert sq.tail_pos and not sq.tail_neg
    inv15 = LaurentElement.monomial(P, -15)
    low = inv15 * inv15
    assert low.tail_neg


def test_power_series_mode_has_no_negative_exponents():
    x = LaurentElement.from_terms(PS, [(-3, 1), (2, 1)])
    assert x.min_exponent() == 2
    assert not x.tail_neg  # negative part is not representable, not a tail


def test_inverse_of_monomial_times_unit_is_exact():
    x = LaurentElement.from_terms(P, [(3, Fraction(2, 7))])
    xi = x.inverse()
    assert (x * xi).congruent(1)
    assert not xi.has_tail()


def test_inverse_of_one_plus_t():
    x = L((0, 1), (1, 1))
    xi = x.inverse()
    prod = x * xi
    # geometric series does not terminate: the inverse is correct to the
    # window edge and flagged as truncated
    assert xi.tail_pos
    for e in range(-5, 10):
        want = 1 if e == 0 else 0
        assert prod.coefficient(e).congruent(
            PadicNumber.from_rational(P, want))


def test_zero_not_invertible():
    with pytest.raises(NonInvertible):
        LaurentElement.zero(P).inverse()


def test_sigma_on_monomials():
    x = LaurentElement.monomial(P, 2, 3)
    sx = x.sigma()
    assert sx.coefficient(10).to_fraction() == 3
    assert sx.min_exponent() == 10


def test_sigma_is_ring_hom():
    x = L((0, 1), (1, 2))
    y = L((-1, 3), (2, Fraction(1, 2)))
    assert (x * y).sigma().congruent(x.sigma() * y.sigma())


def test_d_dt_product_rule():
    x = L((1, 1), (2, 4))
    y = L((-1, 2), (0, 1))
    lhs = (x * y).d_dt()
    rhs = x.d_dt() * y + x * y.d_dt()
    assert lhs.congruent(rhs)


def test_twisted_chain_rule():
    # d/dt sigma(x) = p t^(p-1) sigma(dx/dt)
    x = L((1, 1), (3, Fraction(2, 3)), (-2, 1))
    lhs = x.sigma().d_dt()
    tw = LaurentElement.monomial(P, P.p - 1, P.p)
    rhs = tw * x.d_dt().sigma()
    assert lhs.congruent(rhs)


def test_D_operator():
    x = L((3, 2), (-1, 5), (0, 7))
    dx = x.D()
    assert dx.coefficient(3).to_fraction() == 6
    assert dx.coefficient(-1).to_fraction() == -5
    assert dx.coefficient(0).is_zero()


def test_D_equals_t_ddt():
    x = L((2, 1), (-3, Fraction(4, 7)))
    assert x.D().congruent(x.d_dt().shift(1))


def test_json_roundtrip():
    x = L((-2, Fraction(3, 4)), (0, 1), (5, -2))
    back = LaurentElement.from_json(P, x.to_json())
    assert back.congruent(x)


def test_rebase_across_windows():
    wide = RingParams(5, 20, (32, 32), RingMode.LAURENT)
    x = L((4, 1), (-4, 2))
    y = x.rebase(wide)
    assert y.coefficient(4).to_fraction() == 1
    assert y.params == wide
