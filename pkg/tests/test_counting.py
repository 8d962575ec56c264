from fractions import Fraction

import pytest

from qperiods.kernels import EnumBudgetError
from qperiods.localfield import make_field, hilbert_symbol
from qperiods.qform import DiagonalForm
from qperiods.counting import (TruncatedSeries, count_level_naive,
                               count_level_histogram, x_series, x_series_at,
                               pi_truncated, conic_measure,
                               residually_anisotropic_pair)

Q2 = make_field(2)
Q4 = make_field(2, 2, "unramified")
R2 = make_field(2, 1, "ramified", c1=0, c0=-2)
F3 = make_field(3)


def test_truncated_series_container():
    s = TruncatedSeries([1, Fraction(1, 2), Fraction(1, 4)])
    assert s.L == 2 and len(s) == 3
    assert s[1] == Fraction(1, 2)
    assert list(s) == [1, Fraction(1, 2), Fraction(1, 4)]
    assert s == [1, Fraction(1, 2), Fraction(1, 4)]
    assert s.to_json() == {"L": 2, "coeffs": ["1", "1/2", "1/4"]}


def test_truncated_series_validation():
    with pytest.raises(ValueError):
        TruncatedSeries([])
    with pytest.raises(ValueError):
        TruncatedSeries([2])  # a measure cannot exceed 1
    with pytest.raises(ValueError):
        TruncatedSeries([Fraction(-1, 2)])


def test_histogram_equals_naive_counting():
    grid = [
        (Q2, [1], 0), (Q2, [1, -5], 0), (Q2, [1, 1, 1], 0), (Q2, [1, -5], 1),
        (Q2, [2, 3], 0),
        (Q4, [1], 0), (Q4, [1, -5], 0),
        (R2, [1], 0), (R2, [3, 1], 0),
        (F3, [1, 1], 0), (F3, [1, -1], 1),
    ]
    for field, coeffs, planes in grid:
        B = DiagonalForm(field, coeffs, planes=planes)
        pi = field.uniformizer()
        for rho in [field.zero(), field.one(), pi, pi * pi, field.elt(-3)]:
            for ell in (0, 1, 2, 3):
                a = count_level_naive(B, rho, ell)
                b = count_level_histogram(B, rho, ell)
                assert a == b, (field.q, coeffs, planes, rho, ell)


def test_empty_form_counts():
    B = DiagonalForm(Q2, [])
    assert count_level_histogram(B, Q2.zero(), 3) == 1
    assert count_level_histogram(B, Q2.one(), 3) == 0
    # the empty sum still hits targets divisible by the modulus
    assert count_level_histogram(B, Q2.elt(16), 3) == 1


def test_x_series_spec_example():
    B = DiagonalForm(Q2, [1])
    assert list(x_series(B, Q2.elt(1), 4)) == [
        Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 4),
        Fraction(1, 8)]


def test_x_series_stabilized_equals_direct():
    # note <1, -5> would be isotropic over Q4: 5 generates the unramified
    # extension, so it is a square up there; use a prime discriminant
    forms = [DiagonalForm(Q2, [1]), DiagonalForm(Q2, [1, 1, 1]),
             DiagonalForm(Q4, [1, -2]), DiagonalForm(R2, [1]),
             DiagonalForm(F3, [1, 1])]
    for B in forms:
        pi = B.field.uniformizer()
        for rho in [None, B.field.one(), pi * pi]:
            fast = x_series(B, rho, 8)
            slow = x_series(B, rho, 8, direct=True)
            assert fast == slow, (B, rho)


def test_x_series_verify_mode_is_quiet():
    B = DiagonalForm(Q2, [1, -5])
    x_series(B, Q2.one(), 9, verify=3)  # recount three extended levels


def test_x_series_rejects_isotropic_unless_direct():
    B = DiagonalForm(Q2, [1, -1])
    with pytest.raises(ValueError):
        x_series(B, Q2.one(), 3)
    assert x_series(B, Q2.one(), 3, direct=True)[0] == Fraction(1, 2)
    with pytest.raises(ValueError):
        x_series(DiagonalForm(Q2, [1], planes=1), Q2.one(), 3)


def test_x_series_zero_target_two_step_law():
    B = DiagonalForm(Q2, [1, -5])
    s = x_series(B, None, 9)
    n, q = B.n, B.field.q
    for l in range(2, 8):
        assert s[l + 2] == s[l] / Fraction(q ** n)


def test_x_series_at_canonical_targets():
    B = DiagonalForm(Q2, [1, 1, 1])
    assert x_series_at(B, 1, 5) == x_series(B, Q2.elt(4), 5)
    assert x_series_at(B, None, 5) == x_series(B, None, 5)
    with pytest.raises(ValueError):
        x_series_at(B, -1, 5)


def test_pi_truncated_is_the_weighted_sum():
    B = DiagonalForm(Q2, [1])
    a = Fraction(1, 3)
    got = pi_truncated(B, a, 3, 4)
    want = [Fraction(0)] * 4
    for T in range(5):
        s = x_series_at(B, T, 3)
        for i in range(4):
            want[i] += a ** T * s[i]
    assert list(got) == want


def test_residually_anisotropic_pair():
    for field in (Q2, Q4):
        u, v = residually_anisotropic_pair(field)
        a = field.one() + field.elt(2) * u
        b = field.one() + field.elt(2) * v
        assert hilbert_symbol(field, a, b) == -1
    with pytest.raises(ValueError):
        residually_anisotropic_pair(R2)
    with pytest.raises(ValueError):
        residually_anisotropic_pair(F3)


def test_conic_measure_lemma_values():
    for field in (Q2, Q4):
        q = field.q
        u, v = residually_anisotropic_pair(field)
        # unit constant term, no linear part: P(0, 0) = d0 is a unit
        for ell in (1, 2, 3):
            got = conic_measure(field, u, v, ell, C=1, bx=0, ay=0, d0=1)
            assert got == Fraction(1, q ** ell) + Fraction(1, q ** (ell + 1))


def test_conic_measure_validation():
    u, v = residually_anisotropic_pair(Q2)
    with pytest.raises(ValueError):
        conic_measure(Q2, u, v, 0)
    with pytest.raises(ValueError):
        conic_measure(R2, R2.elt(1), R2.elt(1), 2)


def test_count_level_naive_budget_forwarded():
    B = DiagonalForm(Q2, [1, 1, 1, 1])
    with pytest.raises(EnumBudgetError):
        count_level_naive(B, Q2.one(), 5, budget=1000)
