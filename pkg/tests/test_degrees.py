from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from slopes.degrees import (
    DegreeValue,
    SlopeError,
    SlopeKey,
    VariantMismatchError,
    cmp_slope,
)

rationals = st.fractions(max_denominator=50)
positives = st.fractions(min_value=Fraction(1, 40), max_value=40, max_denominator=40)
ranks = st.integers(min_value=1, max_value=9)


def key(q, r):
    return SlopeKey(DegreeValue.rational(q), r)


def logkey(d, r):
    return SlopeKey(DegreeValue.log_positive(d), r)


def test_cmp_slope_examples():
    assert cmp_slope(key(3, 2), key(1, 1)) > 0
    assert cmp_slope(logkey(2, 1), logkey(1, 1)) < 0
    assert cmp_slope(key(2, 4), key(1, 2)) == 0


def test_mixed_variants_rejected():
    with pytest.raises(VariantMismatchError):
        cmp_slope(key(1, 1), logkey(2, 1))
    with pytest.raises(VariantMismatchError):
        DegreeValue.rational(1) + DegreeValue.log_positive(2)


def test_zero_rank_rejected():
    with pytest.raises(SlopeError):
        SlopeKey(DegreeValue.rational(1), 0)


def test_log_positive_needs_positive_carrier():
    with pytest.raises(SlopeError):
        DegreeValue.log_positive(0)


@given(rationals, rationals, ranks, ranks)
def test_rational_cmp_matches_fraction_order(a, b, r, s):
    expected = (Fraction(a, r) > Fraction(b, s)) - (Fraction(a, r) < Fraction(b, s))
    assert cmp_slope(key(a, r), key(b, s)) == expected


@given(positives, positives, ranks, ranks)
def test_log_cmp_is_reversed_power_order(d, e, r, s):
    # -1/2 log(d)/r vs -1/2 log(e)/s compare opposite to d^s vs e^r
    lhs = d**s
    rhs = e**r
    expected = (lhs < rhs) - (lhs > rhs)
    assert cmp_slope(logkey(d, r), logkey(e, s)) == expected


@given(rationals, rationals, st.integers(min_value=-6, max_value=6))
def test_rational_group_laws(a, b, n):
    da, db = DegreeValue.rational(a), DegreeValue.rational(b)
    assert (da + db).value == a + b
    assert da.scale(n).value == a * n
    assert (-da).value == -a


@given(positives, positives, st.integers(min_value=-4, max_value=4))
def test_log_group_laws(d, e, n):
    da, db = DegreeValue.log_positive(d), DegreeValue.log_positive(e)
    assert (da + db).value == d * e
    assert da.scale(n).value == d**n
    assert (-da).value == 1 / d


@given(positives, ranks)
def test_log_reduction_preserves_slope(d, r):
    k = logkey(d**r, r)
    assert k.reduced().slope_eq(k)
    assert k.reduced().rk == 1


@given(rationals, ranks, rationals, ranks, rationals, ranks)
def test_cmp_transitive(a, r, b, s, c, t):
    x, y, z = key(a, r), key(b, s), key(c, t)
    if x.cmp(y) <= 0 and y.cmp(z) <= 0:
        assert x.cmp(z) <= 0


def test_json_roundtrip():
    for d in (DegreeValue.rational(Fraction(3, 7)), DegreeValue.log_positive(2)):
        assert DegreeValue.from_json(d.to_json()).cmp(d) == 0
