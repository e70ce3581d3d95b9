from fractions import Fraction as F

import pytest

from boxstab.core import (
    AxisFlat,
    Interval,
    Strip,
    box,
    co_stabbable,
    contains,
    cube,
    family_of,
    flat,
    lift_flat,
    overlap_axes,
    slice_box,
    stabs,
)


def test_interval_rejects_floats():
    with pytest.raises(TypeError):
        Interval(0.1, 0.2)


def test_interval_order_enforced():
    with pytest.raises(ValueError):
        Interval(1, 0)
    assert Interval(1, 1).width == 0  # degenerate allowed


def test_exact_decimal_strings():
    assert Interval("0.1", "0.2") == Interval(F(1, 10), F(1, 5))


class TestStabs:
    def test_line_through_box(self):
        assert stabs(flat(2, {1: 5}), box((4, 6), (0, 1)))

    def test_closed_boundary(self):
        assert stabs(flat(2, {1: 6}), box((6, 7), (0, 1)))

    def test_point_corner_and_miss(self):
        p = flat(2, {1: 2, 2: 3})
        assert stabs(p, box((1, 2), (3, 4)))
        assert not stabs(p, box((1, 2), (4, 5)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            stabs(flat(1, {1: 0}), box((0, 1), (0, 1)))

    def test_free_flat_stabs_everything(self):
        assert stabs(AxisFlat(2, ()), box((5, 6), (7, 8)))


class TestOverlapAxes:
    def test_single_axis(self):
        assert overlap_axes(box((0, 1), (0, 1)), box((0, 1), (5, 6))) == {1}

    def test_identical_boxes(self):
        b = box((0, 1), (0, 1), (0, 1))
        assert overlap_axes(b, b) == {1, 2, 3}

    def test_touching_endpoint_counts(self):
        assert overlap_axes(box((0, 1), (0, 1)), box((1, 2), (3, 4))) == {1}

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            overlap_axes(box((0, 1)), box((0, 1), (0, 1)))


class TestCoStabbable:
    def test_line_witness(self):
        w = co_stabbable(box((0, 1), (0, 1)), box((0, 1), (5, 6)), 1)
        assert w == flat(2, {1: 1})

    def test_no_overlap(self):
        assert co_stabbable(box((0, 1), (0, 1)), box((2, 3), (4, 5)), 1) is None

    def test_point_witness_right_endpoint(self):
        w = co_stabbable(cube(0, 2, 2), cube(1, 3, 2), 0)
        assert w == flat(2, {1: 2, 2: 2})

    def test_witness_stabs_both(self):
        b1, b2 = cube(0, 2, 2), cube(1, 3, 2)
        w = co_stabbable(b1, b2, 0)
        assert stabs(w, b1) and stabs(w, b2)

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            co_stabbable(cube(0, 1, 2), cube(0, 1, 2), 2)
        with pytest.raises(ValueError):
            co_stabbable(cube(0, 1, 2), cube(0, 1, 2), -1)


class TestContains:
    def test_strict(self):
        assert contains(cube(0, 1, 2), cube(F(1, 4), F(1, 2), 2))

    def test_reflexive(self):
        assert contains(cube(0, 1, 3), cube(0, 1, 3))

    def test_not_contained(self):
        assert not contains(box((0, 1)), box((0, 2)))


class TestSlice:
    def test_interior(self):
        assert slice_box(box((0, 2), (3, 4), (5, 6)), 1, 1) == box((3, 4), (5, 6))

    def test_miss(self):
        assert slice_box(box((0, 2), (3, 4), (5, 6)), 1, 7) is None

    def test_boundary(self):
        assert slice_box(box((0, 2), (3, 4), (5, 6)), 2, 3) == box((0, 2), (5, 6))

    def test_axis_out_of_range(self):
        with pytest.raises(ValueError):
            slice_box(box((0, 1), (0, 1)), 3, 0)

    def test_one_dimensional_refused(self):
        with pytest.raises(ValueError):
            slice_box(box((0, 1)), 1, 0)


class TestLiftFlat:
    def test_reindex_after_axis(self):
        lifted = lift_flat(flat(2, {1: 3}), 1, 1)
        assert lifted == flat(3, {1: 1, 2: 3})

    def test_empty_fixed(self):
        assert lift_flat(AxisFlat(1, ()), 2, 0) == flat(2, {2: 0})

    def test_skip_reindex(self):
        assert lift_flat(flat(2, {2: 5}), 2, 4) == flat(3, {2: 4, 3: 5})

    def test_axis_out_of_range(self):
        with pytest.raises(ValueError):
            lift_flat(flat(2, {1: 0}), 4, 0)


class TestStrip:
    def test_levels(self):
        s = Strip(3, (Interval(0, 1), None, None))
        assert s.level == 2
        assert s.bounded_axes == (1,)
        assert Strip.empty(3).level == -1

    def test_contains_box(self):
        s = Strip(2, (Interval(0, 10), None))
        assert s.contains_box(box((1, 2), (100, 200)))
        assert not s.contains_box(box((1, 11), (0, 1)))
        assert not Strip.empty(2).contains_box(box((0, 1), (0, 1)))


def test_family_indexing_and_bounds():
    fam = family_of([box((0, 1)), box((4, 9))])
    assert fam.box_at(2) == box((4, 9))
    assert fam.bounding_interval(1) == Interval(0, 9)
    with pytest.raises(ValueError):
        fam.box_at(3)


def test_family_dimension_checked():
    with pytest.raises(ValueError):
        family_of([box((0, 1)), box((0, 1), (0, 1))])
