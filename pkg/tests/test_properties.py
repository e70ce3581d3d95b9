"""Property-based tests of the library invariants."""

import math
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from boxstab.core import (
    AxisFlat,
    Box,
    Family,
    Interval,
    co_stabbable,
    contains,
    lift_flat,
    slice_box,
    stabs,
)
from boxstab.scattered import greedy_scattered, max_scattered, verify_scattered
from boxstab.transversal import (
    canonical_flats,
    greedy_transversal,
    min_transversal,
    verify_transversal,
)

from conftest import brute_min_cover_size, coverage_masks, endpoint_grid_flats

rationals = st.fractions(
    min_value=F(-12), max_value=F(12), max_denominator=4
)


@st.composite
def intervals(draw):
    lo = draw(rationals)
    width = draw(st.fractions(min_value=F(0), max_value=F(8), max_denominator=4))
    return Interval(lo, lo + width)


@st.composite
def boxes(draw, d=None):
    if d is None:
        d = draw(st.integers(min_value=1, max_value=3))
    return Box(tuple(draw(intervals()) for _ in range(d)))


@st.composite
def box_pairs_with_k(draw):
    d = draw(st.integers(min_value=1, max_value=3))
    b1 = draw(boxes(d=d))
    b2 = draw(boxes(d=d))
    k = draw(st.integers(min_value=0, max_value=d - 1))
    return b1, b2, k


@st.composite
def families_with_k(draw, max_boxes=6):
    d = draw(st.integers(min_value=1, max_value=2))
    n = draw(st.integers(min_value=1, max_value=max_boxes))
    fam = Family(d, tuple(draw(boxes(d=d)) for _ in range(n)))
    k = draw(st.integers(min_value=0, max_value=d - 1))
    return fam, k


@st.composite
def containing_pairs(draw):
    """(outer, inner) with inner inside outer, plus a flat of the same dim."""
    d = draw(st.integers(min_value=1, max_value=3))
    inner = draw(boxes(d=d))
    grow = [draw(st.fractions(min_value=F(0), max_value=F(3), max_denominator=3))
            for _ in range(2 * d)]
    outer = Box(tuple(
        Interval(s.lo - grow[2 * i], s.hi + grow[2 * i + 1])
        for i, s in enumerate(inner.sides)
    ))
    axes = draw(st.sets(st.integers(min_value=1, max_value=d), max_size=d))
    flat_ = AxisFlat(d, tuple((a, draw(rationals)) for a in sorted(axes)))
    return outer, inner, flat_


@given(containing_pairs())
def test_stabs_monotone_under_containment(data):
    outer, inner, f = data
    assert contains(outer, inner)
    if stabs(f, inner):
        assert stabs(f, outer)


@given(box_pairs_with_k())
def test_co_stabbable_symmetric(data):
    b1, b2, k = data
    assert (co_stabbable(b1, b2, k) is None) == (co_stabbable(b2, b1, k) is None)


@given(boxes(), st.integers(min_value=0, max_value=2))
def test_co_stabbable_reflexive(b, k):
    if k <= b.dim - 1:
        w = co_stabbable(b, b, k)
        assert w is not None and stabs(w, b)


@given(box_pairs_with_k())
def test_co_stabbable_monotone_in_k(data):
    b1, b2, k = data
    if co_stabbable(b1, b2, k) is not None:
        for k2 in range(k, b1.dim):
            assert co_stabbable(b1, b2, k2) is not None


@given(box_pairs_with_k())
def test_witness_soundness(data):
    b1, b2, k = data
    w = co_stabbable(b1, b2, k)
    if w is not None:
        assert stabs(w, b1) and stabs(w, b2)
        assert len(w.fixed) == b1.dim - k


@st.composite
def slice_lift_cases(draw):
    d = draw(st.integers(min_value=2, max_value=4))
    b = draw(boxes(d=d))
    axis = draw(st.integers(min_value=1, max_value=d))
    side = b.sides[axis - 1]
    value = draw(st.sampled_from([side.lo, side.hi, side.midpoint]))
    sub_axes = draw(st.sets(st.integers(min_value=1, max_value=d - 1), max_size=d - 1))
    g = AxisFlat(d - 1, tuple((a, draw(rationals)) for a in sorted(sub_axes)))
    return b, axis, value, g


@given(slice_lift_cases())
def test_slice_lift_equivalence(case):
    b, axis, value, g = case
    sliced = slice_box(b, axis, value)
    assert sliced is not None
    assert stabs(g, sliced) == stabs(lift_flat(g, axis, value), b)


@given(families_with_k())
@settings(max_examples=60, deadline=None)
def test_canonical_completeness(data):
    """tau over canonical flats equals tau over the full endpoint grid."""
    fam, k = data
    cert = min_transversal(fam, k)
    assert len(cert.flats) == brute_min_cover_size(fam, k)


@given(families_with_k())
@settings(max_examples=60, deadline=None)
def test_canonical_flats_dominate_grid(data):
    """Every grid flat's stabbed set is contained in some canonical flat's."""
    fam, k = data
    canon = coverage_masks(fam, canonical_flats(fam, k))
    for mask in coverage_masks(fam, endpoint_grid_flats(fam, k)):
        assert any(mask & ~c == 0 for c in canon)


@given(families_with_k())
@settings(max_examples=80, deadline=None)
def test_weak_duality_all_certificates(data):
    fam, k = data
    scattered_sizes = [
        len(max_scattered(fam, k).indices),
        len(greedy_scattered(fam.boxes, k).indices),
    ]
    cover_sizes = [
        len(min_transversal(fam, k).flats),
        len(greedy_transversal(fam, k).flats),
    ]
    assert max(scattered_sizes) <= min(cover_sizes)


@given(families_with_k())
@settings(max_examples=60, deadline=None)
def test_certificates_verify(data):
    fam, k = data
    assert verify_transversal(fam, min_transversal(fam, k))
    assert verify_transversal(fam, greedy_transversal(fam, k))
    assert verify_scattered(fam, max_scattered(fam, k))
    assert verify_scattered(fam, greedy_scattered(fam.boxes, k))


@given(families_with_k(max_boxes=8))
@settings(max_examples=60, deadline=None)
def test_greedy_cover_within_log_factor(data):
    fam, k = data
    tau = len(min_transversal(fam, k).flats)
    greedy = len(greedy_transversal(fam, k).flats)
    n = len(fam.boxes)
    assert greedy <= (1 + math.log(n)) * tau + 1e-9
