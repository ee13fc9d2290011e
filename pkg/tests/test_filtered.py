import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from slopes import linalg
from slopes.core import hn_filtration, is_semistable
from slopes.filtered import (
    FilteredBackend,
    FilteredError,
    FilteredSpace,
    candidate_subspaces,
    degree_filtered,
    destabilizer_filtered,
    dual_filtered,
    induced_filtration,
    make_filtered,
    tensor_filtered,
)
from slopes.laws import sample_filtered_space

FULL2 = [[1, 0], [0, 1]]


def two_jump_same_line():
    return make_filtered(
        2,
        [
            [(1, [[1, 0]]), (0, FULL2)],
            [(1, [[1, 0]]), (0, FULL2)],
        ],
    )


def two_jump_transverse():
    return make_filtered(
        2,
        [
            [(1, [[1, 0]]), (0, FULL2)],
            [(1, [[0, 1]]), (0, FULL2)],
        ],
    )


def three_lines():
    return make_filtered(
        2,
        [
            [(1, [[1, 0]]), (0, FULL2)],
            [(1, [[0, 1]]), (0, FULL2)],
            [(1, [[1, 1]]), (0, FULL2)],
        ],
    )


def test_degree_examples():
    one = make_filtered(1, [[(3, [[1]])]])
    assert degree_filtered(one).value == 3
    assert degree_filtered(two_jump_transverse()).value == 2
    triv = make_filtered(2, [[(0, FULL2)]])
    assert degree_filtered(triv).value == 0


def test_induced_examples():
    v = two_jump_transverse()
    line = linalg.subspace(((Fraction(1), Fraction(0)),))
    sub = induced_filtration(v, line, "sub")
    assert sub.dim == 1 and degree_filtered(sub).value == 1
    whole = induced_filtration(v, linalg.identity(2), "sub")
    assert degree_filtered(whole).value == 2
    quo = induced_filtration(v, line, "quotient")
    assert quo.dim == 1 and degree_filtered(quo).value == 1
    assert induced_filtration(v, (), "sub").dim == 0


def test_degree_additive_on_sub_quotient():
    v = two_jump_same_line()
    line = linalg.subspace(((Fraction(1), Fraction(1)),))
    sub = induced_filtration(v, line, "sub")
    quo = induced_filtration(v, line, "quotient")
    assert (
        degree_filtered(sub).value + degree_filtered(quo).value
        == degree_filtered(v).value
    )


def test_candidate_subspaces_examples():
    v1 = make_filtered(2, [[(2, [[1, 0]]), (0, FULL2)]])
    cands, cert, stab = candidate_subspaces(v1)
    assert stab and cert.complete
    assert [len(c) for c in cands] == [0, 1, 2]

    cands, cert, _ = candidate_subspaces(two_jump_transverse())
    lines = [c for c in cands if len(c) == 1]
    assert len(lines) == 2 and cert.complete

    cands, cert, _ = candidate_subspaces(three_lines())
    lines = [c for c in cands if len(c) == 1]
    # three step lines plus one generic representative
    assert len(lines) == 4 and cert.complete


def test_destabilizer_examples():
    v = two_jump_same_line()
    rows, key, cert = destabilizer_filtered(v)
    assert rows == linalg.subspace(((Fraction(1), Fraction(0)),))
    assert key.deg.value == 2 and key.rk == 1 and cert.complete

    rows, key, cert = destabilizer_filtered(two_jump_transverse())
    assert len(rows) == 2 and cert.complete  # semistable, whole space
    assert key.deg.value == 2 and key.rk == 2

    # n = 1 tautology: the destabilizer is the top filtration step
    v1 = make_filtered(3, [[(2, [[1, 0, 0]]), (1, [[1, 0, 0], [0, 1, 0]]), (0, None or [[1, 0, 0], [0, 1, 0], [0, 0, 1]])]])
    rows, key, cert = destabilizer_filtered(v1)
    assert rows == linalg.subspace(((Fraction(1), Fraction(0), Fraction(0)),))
    assert key.deg.value == 2


def test_hn_flag_two_jump():
    b = FilteredBackend()
    res = hn_filtration(b, two_jump_same_line())
    assert res.polygon.to_json()["segments"] == [
        {"slope": "2", "mult": 1},
        {"slope": "0", "mult": 1},
    ]
    assert res.certificate.complete


def test_rank_one_always_semistable():
    b = FilteredBackend()
    for jump in ("3", "-5/2", "0"):
        v = make_filtered(1, [[(Fraction(jump), [[1]])]])
        ok, cert = is_semistable(b, v)
        assert ok and cert.complete


def test_hn_of_single_filtration_is_the_filtration():
    """With one filtration the slope flag is the filtration itself."""
    b = FilteredBackend()
    v = make_filtered(
        3,
        [
            [
                (2, [[1, 0, 0]]),
                (1, [[1, 0, 0], [0, 1, 0]]),
                (-1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            ]
        ],
    )
    res = hn_filtration(b, v)
    flag_rows = [
        linalg.rref(s.handle[1]) if isinstance(s.handle, tuple) else linalg.identity(3)
        for s in res.flag.steps
    ]
    want = [linalg.rref(step) for _, step in v.filtrations[0].steps]
    assert flag_rows == want
    assert [str(k.reduced().deg.value) for k in res.graded_slopes()] == [
        "2",
        "1",
        "-1",
    ]


def test_three_line_fixture_is_stable():
    v = three_lines()
    b = FilteredBackend()
    ok, cert = is_semistable(b, v)
    assert ok and cert.complete
    assert degree_filtered(v).value == 3
    subs, _ = b.strict_subobjects(v)
    mu = b.slope(v)
    for _, rows in subs:
        sub = induced_filtration(v, rows, "sub")
        key = b.slope(sub)
        assert key.cmp(mu) < 0  # stable: strictly smaller everywhere


def test_tensor_examples():
    a = make_filtered(1, [[(2, [[1]])]])
    b = make_filtered(1, [[(3, [[1]])]])
    t = tensor_filtered(a, b)
    assert t.dim == 1 and degree_filtered(t).value == 5

    v = make_filtered(2, [[(1, [[1, 0]]), (0, FULL2)]])
    w = make_filtered(1, [[(2, [[1]])]])
    t = tensor_filtered(v, w)
    assert [(str(j), len(s)) for j, s in t.filtrations[0].steps] == [
        ("3", 1),
        ("2", 2),
    ]

    unit = make_filtered(1, [[(0, [[1]])]])
    vt = tensor_filtered(v, unit)
    assert degree_filtered(vt).value == degree_filtered(v).value
    assert [len(s) for _, s in vt.filtrations[0].steps] == [1, 2]

    with pytest.raises(FilteredError):
        tensor_filtered(v, two_jump_same_line())


def test_dual_examples():
    one = make_filtered(1, [[(Fraction(5, 2), [[1]])]])
    d = dual_filtered(one)
    assert [str(j) for j, _ in d.filtrations[0].steps] == ["-5/2"]

    v = make_filtered(2, [[(1, [[1, 0]]), (0, FULL2)]])
    d = dual_filtered(v)
    assert [str(j) for j, _ in d.filtrations[0].steps] == ["0", "-1"]
    assert degree_filtered(d).value == -degree_filtered(v).value
    assert dual_filtered(d).to_json() == v.to_json()


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_dual_hn_flag_is_reversed_annihilators(seed):
    """The slope flag of the dual consists of the annihilators of the
    original flag's steps, in reverse order."""
    rng = random.Random(seed)
    v = sample_filtered_space(rng, dim_max=3, n=rng.choice((1, 2)))
    b = FilteredBackend()
    res = hn_filtration(b, v)
    res_dual = hn_filtration(b, dual_filtered(v))
    orig = [linalg.rref(s.handle[1]) if isinstance(s.handle, tuple) else linalg.identity(v.dim) for s in res.flag.steps]
    dual_steps = [
        linalg.rref(s.handle[1]) if isinstance(s.handle, tuple) else linalg.identity(v.dim)
        for s in res_dual.flag.steps
    ]
    want = [
        linalg.annihilator(step, v.dim) for step in reversed(orig[:-1])
    ] + [linalg.identity(v.dim)]
    assert dual_steps == want


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_dual_involution_and_degree(seed):
    rng = random.Random(seed)
    v = sample_filtered_space(rng, dim_max=3, n=rng.choice((1, 2)))
    d = dual_filtered(v)
    assert degree_filtered(d).value == -degree_filtered(v).value
    assert dual_filtered(d).to_json() == v.to_json()


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_induced_additivity_random(seed):
    rng = random.Random(seed)
    v = sample_filtered_space(rng, dim_max=3, n=2)
    rows = linalg.rref(
        [tuple(Fraction(rng.randint(-2, 2)) for _ in range(v.dim))]
    )
    if not 0 < len(rows) < v.dim:
        return
    sub = induced_filtration(v, rows, "sub")
    quo = induced_filtration(v, rows, "quotient")
    assert (
        degree_filtered(sub).value + degree_filtered(quo).value
        == degree_filtered(v).value
    )


def test_validation_errors():
    with pytest.raises(FilteredError):
        make_filtered(2, [[(1, FULL2), (0, FULL2)]])  # dims not strictly growing
    with pytest.raises(FilteredError):
        make_filtered(2, [[(0, [[1, 0]]), (1, FULL2)]])  # jumps increasing
    with pytest.raises(FilteredError):
        make_filtered(2, [[(1, [[1, 0]])]])  # not exhaustive


def test_from_json_roundtrip():
    v = two_jump_same_line()
    assert FilteredSpace.from_json(v.to_json()).to_json() == v.to_json()
