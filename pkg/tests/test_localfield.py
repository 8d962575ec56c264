from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qperiods.localfield import (make_field, quadratic_defect, is_square,
                                 unit_defect_kind, unit_class_reps,
                                 square_class_key, square_class_rep,
                                 square_class_reps, hilbert_symbol,
                                 count_square_roots)

Q2 = make_field(2)
Q4 = make_field(2, 2, "unramified")
R2 = make_field(2, 1, "ramified", c1=0, c0=-2)
F3 = make_field(3)
F9 = make_field(3, 2, "unramified")

ALL_FIELDS = [Q2, Q4, R2, F3, F9]


def test_make_field_validation():
    with pytest.raises(ValueError):
        make_field(6)
    with pytest.raises(ValueError):
        make_field(2, 2, "base")
    with pytest.raises(ValueError):
        make_field(3, 1, "ramified", c1=0, c0=-3)
    with pytest.raises(ValueError):
        make_field(2, 1, "ramified", c1=0, c0=-4)  # ord c0 = 2, not Eisenstein
    with pytest.raises(ValueError):
        make_field(2, 1, "ramified")  # coefficients missing


def test_make_field_is_cached():
    assert make_field(2) is Q2
    assert make_field(2, 2, "unramified") is Q4
    assert make_field(2, 1, "ramified", c1=0, c0=-2) is R2


def test_field_shape_constants():
    assert (Q2.q, Q2.e, Q2.ncoords) == (2, 1, 1)
    assert (Q4.q, Q4.e, Q4.ncoords) == (4, 1, 2)
    assert (R2.q, R2.e, R2.ncoords) == (2, 2, 2)
    assert (F3.q, F3.e) == (3, 0)
    assert (F9.q, F9.e) == (9, 0)


def test_ramified_uniformizer_squares_to_minus_c0():
    w = R2.uniformizer()
    assert w * w == R2.elt(2)
    assert int(w.ord()) == 1
    assert int(R2.elt(2).ord()) == 2


def test_unramified_generator_relation():
    # second coordinate g satisfies g^2 = -c1 g - c0; for q = 4 a cube root
    # of unity: g^2 + g + 1 = 0
    g = Q4.elt(0, 1)
    assert g * g + g + 1 == Q4.zero()
    assert g.is_unit()


def test_elt_ord_and_arithmetic():
    assert int(Q2.elt(12).ord()) == 2
    assert Q2.elt(5) + Q2.elt(3) == Q2.elt(8)
    assert Q2.elt(5) * 3 == Q2.elt(15)
    assert 1 - Q2.elt(3) == Q2.elt(-2)
    assert Q2.elt(7) ** 2 == Q2.elt(49)
    assert F3.elt(0).is_zero()
    with pytest.raises(ValueError):
        Q2.elt(1) + F3.elt(1)


def test_dyadic_unit_defects():
    # mod-8 classes of odd integers decide everything over the base field
    assert is_square(Q2, 1) and is_square(Q2, 17) and is_square(Q2, -7)
    assert unit_defect_kind(Q2, Q2.elt(5)) == ("unit4", 2)
    assert unit_defect_kind(Q2, Q2.elt(-3)) == ("unit4", 2)
    assert unit_defect_kind(Q2, Q2.elt(3))[0] == "unitd"
    assert unit_defect_kind(Q2, Q2.elt(3))[1] == 1
    assert unit_defect_kind(Q2, Q2.elt(7)) == ("unitd", 1)
    assert unit_defect_kind(Q2, Q2.elt(1)) == ("square", None)


def test_defect_result_fields():
    # d is the absolute pi-exponent of the defect ideal, so scaling by
    # squares shifts it: 20 = 4 * 5 has ideal 16 o
    res = quadratic_defect(Q2, Q2.elt(20))
    assert res.o == 2 and res.kind == "defect" and res.d == 4
    assert not res.is_square
    assert quadratic_defect(Q2, Q2.elt(12)).d == 3
    assert quadratic_defect(Q2, Q2.elt(6)).d == 1  # odd ord: the ideal is (6)
    sq = quadratic_defect(Q2, Q2.elt(16))
    assert sq.is_square and sq.o == 4
    with pytest.raises(ValueError):
        quadratic_defect(Q2, Q2.elt(0))


def test_odd_residue_defects():
    # odd primes: units are squares or single nonsquare class, defect o
    assert is_square(F3, 1) and is_square(F3, 4)
    kind, d = unit_defect_kind(F3, F3.elt(2))
    assert (kind, d) == ("unit4", 0)


def test_ramified_defect_range():
    # over the ramified field odd defects up to 2e - 1 = 3 all occur
    seen = set()
    for u in unit_class_reps(R2):
        res = quadratic_defect(R2, u)
        seen.add(None if res.is_square else res.d)
    assert seen == {None, 1, 3, 4}


def test_unit_class_rep_counts():
    assert len(unit_class_reps(Q2)) == 4
    assert len(unit_class_reps(Q4)) == 8
    assert len(unit_class_reps(R2)) == 8
    assert len(unit_class_reps(F3)) == 2
    assert len(unit_class_reps(F9)) == 2


def test_unit_classes_are_distinct_and_complete():
    for field in ALL_FIELDS:
        reps = unit_class_reps(field)
        for i, u in enumerate(reps):
            for v in reps[i + 1:]:
                assert not is_square(field, u * v)
        # a few arbitrary even-order elements land in exactly one class
        for probe in (1, 3, 5, 7, 9, -1, -5):
            x = field.elt(probe)
            if int(x.ord()) % 2:
                continue  # 3 is the uniformizer over the odd fields
            hits = [u for u in reps if is_square(field, u * x)]
            assert len(hits) == 1


def test_square_class_key_and_rep():
    for field in (Q2, R2, F3):
        pi = field.uniformizer()
        for x in [field.elt(3), field.elt(5) * pi, field.elt(-7) * pi ** 3,
                  field.elt(12)]:
            par, idx = square_class_key(field, x)
            assert par == int(x.ord()) % 2
            rep = square_class_rep(field, x)
            assert is_square(field, rep * x) or _same_class(field, rep, x)
    with pytest.raises(ValueError):
        square_class_key(Q2, Q2.elt(0))


def _same_class(field, a, b):
    # a/b a square, checked multiplicatively: a*b in (squares) * b^2
    return is_square(field, a * b)


def test_square_class_reps_cover_both_parities():
    reps = square_class_reps(Q2)
    assert len(reps) == 8
    assert sorted(int(r.ord()) for r in reps) == [0, 0, 0, 0, 1, 1, 1, 1]


KNOWN_Q2_SYMBOLS = [
    # classical values over the dyadic rationals: for units,
    # (a, b) = (-1)^(eps(a) eps(b)) with eps(u) = (u-1)/2 mod 2,
    # and (2, u) = (-1)^((u^2-1)/8)
    (2, 7, +1), (2, -1, +1), (2, 5, -1), (2, 3, -1),
    (-1, -1, -1), (-1, 3, -1), (-1, 5, +1), (-1, 7, -1),
    (3, 3, -1), (5, 5, +1), (3, 5, +1), (2, 2, +1), (6, 3, +1),
]


def test_hilbert_symbol_known_values():
    for a, b, want in KNOWN_Q2_SYMBOLS:
        assert hilbert_symbol(Q2, a, b) == want, (a, b)


def test_hilbert_symbol_squares_always_plus():
    for field in ALL_FIELDS:
        pi = field.uniformizer()
        for x in [field.elt(3), pi, field.elt(5) * pi]:
            assert hilbert_symbol(field, field.elt(1), x) == 1
            assert hilbert_symbol(field, x * x, field.elt(-1)) == 1


def test_hilbert_symbol_tame_case():
    # odd residue characteristic: (pi, u) = -1 exactly for nonsquare units
    for field in (F3, F9):
        pi = field.uniformizer()
        for u in unit_class_reps(field):
            want = 1 if is_square(field, u) else -1
            assert hilbert_symbol(field, pi, u) == want


def test_hilbert_symbol_rejects_zero():
    with pytest.raises(ValueError):
        hilbert_symbol(Q2, Q2.elt(0), Q2.elt(1))


@given(st.sampled_from(range(8)), st.sampled_from(range(8)),
       st.integers(0, 2), st.integers(0, 2))
@settings(max_examples=40, deadline=None)
def test_hilbert_symmetry_random(ia, ib, oa, ob):
    reps = square_class_reps(Q4)
    a = reps[ia] * Q4.elt(2) ** oa
    b = reps[ib] * Q4.elt(2) ** ob
    assert hilbert_symbol(Q4, a, b) == hilbert_symbol(Q4, b, a)


def test_count_square_roots_spot_values():
    # odd squares: every odd number squares to 1 mod 8
    assert count_square_roots(Q2, Q2.elt(1), 3) == Fraction(1, 2)
    assert count_square_roots(Q2, Q2.elt(1), 4) == Fraction(1, 4)
    assert count_square_roots(Q2, Q2.elt(1), 5) == Fraction(1, 8)
    # nonsquare units have no roots once the level separates them
    assert count_square_roots(Q2, Q2.elt(3), 3) == 0
    assert count_square_roots(Q2, Q2.elt(5), 3) == 0
    # shallow levels cannot tell: mod 2 everything odd is 1
    assert count_square_roots(Q2, Q2.elt(3), 1) == Fraction(1, 2)
    assert count_square_roots(Q2, Q2.elt(0), 0) == 1
    with pytest.raises(ValueError):
        count_square_roots(Q2, Q2.elt(1), -1)


def test_count_square_roots_vs_enumeration_sample():
    for field, L in [(Q2, 4), (R2, 4), (F3, 3)]:
        ring6 = field.ring(L + 2)
        for coords in ring6.elements():
            rho = ring6.lift(coords)
            if rho.is_zero():
                continue
            for ell in (1, L):
                rl = field.ring(ell)
                target = tuple(rl.reduce(rho))
                hits = sum(1 for x in rl.elements()
                           if tuple(rl.mul(x, x)) == target)
                assert count_square_roots(field, rho, ell) == \
                    Fraction(hits, rl.size), (field, rho, ell)
