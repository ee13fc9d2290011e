from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from slopes.degrees import DegreeValue, SlopeError, SlopeKey
from slopes.polygon import (
    DIRECT_SUM,
    DUAL,
    TENSOR_BOUNDED_MAX,
    TENSOR_MULT,
    NewtonPolygon,
    polygon_combine,
    polygon_dominates,
    polygon_from_points,
    polygon_of_flag,
)


def seg(slope, mult):
    return SlopeKey(DegreeValue.rational(Fraction(slope) * mult), mult)


def poly(*pairs):
    return NewtonPolygon(tuple(seg(s, m) for s, m in pairs))


def rational_points(steps):
    return [(r, DegreeValue.rational(d)) for r, d in steps]


# -- oracle: a concave hull must sit on the points and above all of them ------


def hull_oracle_check(points, hull: NewtonPolygon):
    """Independent hull verification by exhaustive chord comparisons."""
    best = {}
    for r, d in points:
        if r not in best or d > best[r]:
            best[r] = d
    best[0] = max(best.get(0, Fraction(0)), Fraction(0))
    verts = {r: d.value for r, d in hull.vertices()}
    # every point lies at or below the hull (linear interpolation)
    vs = sorted(verts.items())
    for r, d in best.items():
        left = max((p for p in vs if p[0] <= r), key=lambda p: p[0])
        right = min((p for p in vs if p[0] >= r), key=lambda p: p[0])
        if left[0] == right[0]:
            height = left[1]
        else:
            t = Fraction(r - left[0], right[0] - left[0])
            height = left[1] + t * (right[1] - left[1])
        assert d <= height
    # every hull vertex is one of the points (or the origin)
    for r, h in verts.items():
        assert best.get(r) == h or (r == 0 and h == 0)


def test_flag_polygon_examples():
    p = polygon_of_flag(rational_points([(1, 1), (2, 1)]))
    assert p.to_json()["segments"] == [
        {"slope": "1", "mult": 1},
        {"slope": "0", "mult": 1},
    ]
    p = polygon_of_flag(rational_points([(1, -1), (2, 0)]))
    assert p.to_json()["segments"] == [{"slope": "0", "mult": 2}]
    p = polygon_of_flag(rational_points([(2, 1)]))
    assert p.to_json()["segments"] == [{"slope": "1/2", "mult": 2}]


def test_flag_validation():
    with pytest.raises(SlopeError):
        polygon_of_flag([])
    with pytest.raises(SlopeError):
        polygon_of_flag(rational_points([(2, 1), (1, 0)]))


@settings(max_examples=120)
@given(
    st.lists(
        st.tuples(
            st.integers(min_value=1, max_value=8),
            st.fractions(max_denominator=12),
        ),
        min_size=1,
        max_size=7,
    )
)
def test_hull_oracle(raw):
    pts = [(r, DegreeValue.rational(d)) for r, d in raw]
    hull = polygon_from_points(pts)
    hull_oracle_check([(r, d) for r, d in raw], hull)
    # slopes strictly decrease by construction; endpoint preserved
    rmax = max(r for r, _ in raw)
    assert hull.total_rank() == rmax


def test_dominance_examples():
    peaked = poly((1, 1), (-1, 1))
    flat = poly((0, 2))
    assert polygon_dominates(peaked, flat)
    assert not polygon_dominates(flat, peaked)
    assert polygon_dominates(peaked, peaked)


def test_dominance_rejects_mismatched_endpoints():
    assert not polygon_dominates(poly((1, 1)), poly((0, 1)))
    assert not polygon_dominates(poly((1, 1)), poly((1, 2)))


def test_combine_tensor_mult():
    got = polygon_combine(poly((1, 1), (0, 1)), poly((2, 1)), TENSOR_MULT)
    assert got.to_json()["segments"] == [
        {"slope": "3", "mult": 1},
        {"slope": "2", "mult": 1},
    ]


def test_combine_dual():
    got = polygon_combine(poly((1, 2), (0, 1)), None, DUAL)
    assert got.to_json()["segments"] == [
        {"slope": "0", "mult": 1},
        {"slope": "-1", "mult": 2},
    ]


def test_combine_direct_sum_merges():
    got = polygon_combine(poly((1, 1)), poly((1, 2)), DIRECT_SUM)
    assert got.to_json()["segments"] == [{"slope": "1", "mult": 3}]


def test_combine_bounded_max():
    got = polygon_combine(poly((2, 1), (0, 1)), poly((1, 3)), TENSOR_BOUNDED_MAX)
    assert got.to_json()["segments"] == [{"slope": "2", "mult": 6}]


def test_combine_rejects_log_variant():
    lp = NewtonPolygon((SlopeKey(DegreeValue.log_positive(2), 1),))
    with pytest.raises(Exception):
        polygon_combine(lp, lp, TENSOR_MULT)
    with pytest.raises(Exception):
        polygon_combine(lp, None, DUAL)


segments_strategy = st.lists(
    st.tuples(
        st.fractions(min_value=-5, max_value=5, max_denominator=6),
        st.integers(min_value=1, max_value=4),
    ),
    min_size=1,
    max_size=4,
    unique_by=lambda t: t[0],
)


def _mk(seq):
    pairs = sorted(seq, key=lambda t: t[0], reverse=True)
    return poly(*pairs)


@given(segments_strategy, segments_strategy)
def test_direct_sum_is_break_multiset_union(a, b):
    pa, pb = _mk(a), _mk(b)
    got = polygon_combine(pa, pb, DIRECT_SUM)
    want = {}
    for s, m in a + b:
        want[Fraction(s)] = want.get(Fraction(s), 0) + m
    have = {}
    for k, m in got.breaks_multiset():
        have[k.deg.value / k.rk if k.rk != 1 else k.deg.value] = m
    assert have == want


@given(segments_strategy, segments_strategy)
def test_tensor_mult_endpoint_law(a, b):
    pa, pb = _mk(a), _mk(b)
    got = polygon_combine(pa, pb, TENSOR_MULT)
    assert got.total_rank() == pa.total_rank() * pb.total_rank()
    # deg(M (x) N) = rk N * deg M + rk M * deg N
    want = pa.total_degree().value * pb.total_rank() + pb.total_degree().value * pa.total_rank()
    assert got.total_degree().value == want


@given(segments_strategy)
def test_dual_is_involutive(a):
    p = _mk(a)
    assert polygon_combine(polygon_combine(p, None, DUAL), None, DUAL) == p


def test_polygon_json_roundtrip():
    p = poly((Fraction(3, 2), 2), (0, 1))
    assert NewtonPolygon.from_json(p.to_json()).to_json() == p.to_json()


def test_empty_polygon_only_for_zero():
    assert NewtonPolygon(()).is_empty()
    with pytest.raises(SlopeError):
        NewtonPolygon(()).highest_break()
