from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qperiods.ratfunc import (Poly, RF, Zv, IQv, AVv, VAR_Z, VAR_IQ, VAR_AV,
                              rf_equal, ratio_if_proportional, pretty_rf,
                              format_poly, geometric_inverse_factor)


def test_poly_basics():
    p = Poly.monomial(2, 0, 0, 3) + Poly.const(1)
    assert p == Poly({(2, 0, 0): Fraction(3), (0, 0, 0): Fraction(1)})
    assert not Poly().terms
    assert Poly.const(0).is_zero()
    assert (p - p).is_zero()


def test_poly_laurent_exponents():
    p = Poly.monomial(0, -2, 0)
    assert p.min_exp(VAR_IQ) == -2
    assert p.max_exp(VAR_IQ) == -2
    q = p * Poly.monomial(0, 5, 0)
    assert q == Poly.monomial(0, 3, 0)


def test_poly_subst_monomial():
    # z -> z*iq turns z^2 into z^2 iq^2
    p = Poly.monomial(2, 0, 0) + Poly.monomial(1, 1, 0)
    got = p.subst_monomial(VAR_Z, 1, (1, 1, 0))
    assert got == Poly.monomial(2, 2, 0) + Poly.monomial(1, 2, 0)
    # with a scalar: av -> 2*av
    q = Poly.monomial(0, 0, 2).subst_monomial(VAR_AV, 2, (0, 0, 1))
    assert q == Poly.monomial(0, 0, 2, 4)


def test_poly_eval_partial_and_fraction():
    p = Poly.monomial(1, 1, 0, 6) + Poly.monomial(0, 0, 1)
    half = p.eval_partial(z=Fraction(1, 2), iq=Fraction(1, 3))
    assert half == Poly.monomial(0, 0, 1) + Poly.const(1)
    assert half.eval_partial(av=2).as_fraction() == 3
    with pytest.raises(ValueError):
        half.as_fraction()


def test_rf_normalization_cancels():
    f = (RF.const(1) - Zv ** 2) / (RF.const(1) - Zv)
    assert f == RF.const(1) + Zv
    assert (Zv / Zv) == RF.const(1)


def test_rf_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RF(Poly.const(1), Poly.const(0))
    with pytest.raises(ZeroDivisionError):
        Zv / RF.const(0)


def test_rf_equality_cross_multiplied():
    f = RF(Poly.monomial(1, 0, 0), Poly.monomial(0, 1, 0))
    g = RF(Poly.monomial(1, 1, 0), Poly.monomial(0, 2, 0))
    assert f == g
    assert rf_equal(f, g)
    assert f != g + RF.const(1)


def test_rf_series_geometric():
    f = RF.const(1) / (RF.const(1) - Zv * IQv)
    assert f.series_z(4, iq=Fraction(1, 2)) == [
        Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8),
        Fraction(1, 16)]
    with pytest.raises(ValueError):
        f.series_z(3)  # iq still symbolic


def test_rf_series_pole_at_zero():
    with pytest.raises(ValueError):
        (RF.const(1) / Zv).series_z(2)


def test_rf_eval_partial_pole():
    f = RF.const(1) / (RF.const(1) - Zv)
    with pytest.raises(ZeroDivisionError):
        f.eval_partial(z=1)


def test_geometric_inverse_factor():
    assert geometric_inverse_factor(1, 1) == RF.const(1) / (RF.const(1) - Zv * IQv)
    g = geometric_inverse_factor(0, 2, 0, Fraction(3, 2))
    assert g * (RF.const(1) - RF.monomial(0, 2, 0, Fraction(3, 2))) == RF.const(1)


def test_ratio_if_proportional():
    f = (RF.const(2) * AVv) / (RF.const(1) - Zv)
    g = AVv / (RF.const(1) - Zv)
    assert ratio_if_proportional(f, g) == RF.const(2)
    # ratio depends on av, so banning av makes it fail
    h = AVv * AVv / (RF.const(1) - Zv)
    assert ratio_if_proportional(h, g, constant_free_of=(VAR_AV,)) is None
    assert ratio_if_proportional(h, g, constant_free_of=(VAR_Z,)) == AVv
    # fully banned: f/g must be an honest constant
    assert ratio_if_proportional(g + RF.const(1), g) is None
    # nothing banned: any nonzero quotient counts
    assert ratio_if_proportional(g + RF.const(1), g, ()) == (g + RF.const(1)) / g


def test_ratio_zero_cases():
    z = RF.const(0)
    assert ratio_if_proportional(z, z) == RF.const(1)
    # zero against nonzero is treated as a mismatch, not as c = 0
    assert ratio_if_proportional(z, Zv) is None
    assert ratio_if_proportional(Zv, z) is None


def test_pretty_printing():
    f = (RF.const(1) - Zv * IQv) / (RF.const(1) - AVv)
    s = pretty_rf(f, ("z", "1/q", "a"))
    assert "z*1/q" in s and "a" in s
    assert format_poly(Poly.const(1) - Poly.monomial(1, 0, 0)) == "1 - z"


small_coeffs = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw):
    p = Poly()
    for _ in range(draw(st.integers(0, 4))):
        c = draw(small_coeffs)
        ez = draw(st.integers(0, 3))
        eiq = draw(st.integers(-2, 3))
        eav = draw(st.integers(0, 2))
        p = p + Poly.monomial(ez, eiq, eav, c)
    return p


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_poly_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_rf_field_laws(a, b):
    f = RF(a, Poly.const(1) + Poly.monomial(1, 0, 0))
    g = RF(b, Poly.const(1) - Poly.monomial(0, 1, 0, Fraction(1, 2)))
    assert f + g - g == f
    if not g.is_zero():
        assert (f / g) * g == f
    assert f * g == g * f
