"""Exact-rational geometric primitives.

Everything downstream is built on five value types (Interval, Box, AxisFlat,
Strip, Family) and a handful of pure predicates over them.  All coordinates
are `fractions.Fraction` values: arithmetic and comparisons are exact, and
boundary cases (touching endpoints, degenerate sides) are decided without
rounding.  Floats are rejected at construction time.

Conventions:
  * intervals and boxes are closed; a single shared endpoint counts as an
    intersection,
  * zero-width sides are allowed,
  * axis indices are 1-based in every public interface,
  * an axis-parallel k-flat in dimension d fixes exactly d-k coordinates
    (k=0 is a point, k=d-1 a hyperplane).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Fraction:
    """Coerce an exact value to Fraction.  Floats are refused: binary floats
    would silently change coordinates, and every predicate here is exact."""
    if isinstance(value, float):
        raise TypeError(f"float coordinate {value!r} is not exact; pass int, str or Fraction")
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"interval lower end {self.lo} exceeds upper end {self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains_value(self, value: RationalLike) -> bool:
        v = rat(value)
        return self.lo <= v <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> Optional["Interval"]:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def halves(self) -> tuple["Interval", "Interval"]:
        mid = self.midpoint
        return Interval(self.lo, mid), Interval(mid, self.hi)

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True, slots=True)
class Box:
    """Axis-parallel box: the product of `dim` closed intervals."""

    sides: tuple[Interval, ...]

    def __post_init__(self) -> None:
        sides = tuple(self.sides)
        if not sides:
            raise ValueError("a box needs at least one side")
        object.__setattr__(self, "sides", sides)

    @property
    def dim(self) -> int:
        return len(self.sides)

    def projection(self, axis: int) -> Interval:
        """Projection onto the given axis (1-based)."""
        _check_axis(axis, self.dim)
        return self.sides[axis - 1]

    def min_side_width(self) -> Fraction:
        return min(s.width for s in self.sides)

    def is_nondegenerate(self) -> bool:
        return all(s.width > 0 for s in self.sides)

    def __repr__(self) -> str:
        return "x".join(repr(s) for s in self.sides)


def box(*sides: tuple[RationalLike, RationalLike]) -> Box:
    """Convenience constructor: box((0,1), (2,3)) is [0,1]x[2,3]."""
    return Box(tuple(Interval(lo, hi) for lo, hi in sides))


def cube(lo: RationalLike, hi: RationalLike, dim: int) -> Box:
    return Box(tuple(Interval(lo, hi) for _ in range(dim)))


@dataclass(frozen=True, slots=True)
class AxisFlat:
    """Axis-parallel flat in R^dim: fixes the listed axes at constant values
    and is unconstrained on the rest.  `fixed` is kept as a sorted tuple of
    (axis, value) pairs so flats are hashable and compare canonically;
    k = dim - len(fixed).
    """

    dim: int
    fixed: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("flat dimension must be positive")
        items = self.fixed.items() if isinstance(self.fixed, Mapping) else self.fixed
        pairs = tuple(sorted((int(a), rat(v)) for a, v in items))
        axes = [a for a, _ in pairs]
        if len(set(axes)) != len(axes):
            raise ValueError(f"duplicate fixed axes in {axes}")
        for a in axes:
            _check_axis(a, self.dim)
        object.__setattr__(self, "fixed", pairs)

    @property
    def k(self) -> int:
        return self.dim - len(self.fixed)

    @property
    def fixed_axes(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.fixed)

    def fixed_map(self) -> dict[int, Fraction]:
        return dict(self.fixed)

    def value_on(self, axis: int) -> Optional[Fraction]:
        for a, v in self.fixed:
            if a == axis:
                return v
        return None

    def __repr__(self) -> str:
        inner = ", ".join(f"x{a}={v}" for a, v in self.fixed)
        return f"Flat({self.dim}d; {inner or 'all free'})"


def flat(dim: int, fixed: Mapping[int, RationalLike]) -> AxisFlat:
    return AxisFlat(dim, tuple((a, rat(v)) for a, v in fixed.items()))


@dataclass(frozen=True, slots=True)
class Strip:
    """Product set with some sides bounded (an Interval) and the rest all of R
    (None).  A strip with i unbounded sides is an i-strip; `sides=None` is the
    distinguished empty strip.
    """

    dim: int
    sides: Optional[tuple[Optional[Interval], ...]]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("strip dimension must be positive")
        if self.sides is not None:
            sides = tuple(self.sides)
            if len(sides) != self.dim:
                raise ValueError(f"strip has {len(sides)} sides for dimension {self.dim}")
            object.__setattr__(self, "sides", sides)

    @classmethod
    def empty(cls, dim: int) -> "Strip":
        return cls(dim, None)

    @property
    def is_empty(self) -> bool:
        return self.sides is None

    @property
    def level(self) -> int:
        """Number of unbounded sides (the i of an i-strip); -1 when empty."""
        if self.sides is None:
            return -1
        return sum(1 for s in self.sides if s is None)

    @property
    def bounded_axes(self) -> tuple[int, ...]:
        if self.sides is None:
            return ()
        return tuple(i + 1 for i, s in enumerate(self.sides) if s is not None)

    def contains_box(self, b: Box) -> bool:
        if self.sides is None:
            return False
        if b.dim != self.dim:
            raise ValueError(f"dimension mismatch: strip {self.dim}, box {b.dim}")
        return all(s is None or s.contains_interval(side) for s, side in zip(self.sides, b.sides))

    def __repr__(self) -> str:
        if self.sides is None:
            return "Strip(empty)"
        return "x".join("R" if s is None else repr(s) for s in self.sides)


@dataclass(frozen=True, slots=True)
class Family:
    """Finite ordered collection of boxes sharing one dimension."""

    dim: int
    boxes: tuple[Box, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        boxes = tuple(self.boxes)
        object.__setattr__(self, "boxes", boxes)
        if self.dim < 1:
            raise ValueError("family dimension must be positive")
        for i, b in enumerate(boxes, start=1):
            if b.dim != self.dim:
                raise ValueError(f"box {i} has dimension {b.dim}, family has {self.dim}")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(boxes):
                raise ValueError("labels and boxes differ in length")
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def box_at(self, index: int) -> Box:
        """Box at 1-based index."""
        if not 1 <= index <= len(self.boxes):
            raise ValueError(f"box index {index} out of range 1..{len(self.boxes)}")
        return self.boxes[index - 1]

    def bounding_interval(self, axis: int) -> Interval:
        """Smallest interval containing every projection onto `axis`."""
        if not self.boxes:
            raise ValueError("empty family has no bounding interval")
        sides = [b.projection(axis) for b in self.boxes]
        return Interval(min(s.lo for s in sides), max(s.hi for s in sides))


def family_of(boxes: Iterable[Box], dim: Optional[int] = None,
              labels: Optional[Iterable[str]] = None) -> Family:
    boxes = tuple(boxes)
    if dim is None:
        if not boxes:
            raise ValueError("cannot infer dimension of an empty family")
        dim = boxes[0].dim
    return Family(dim, boxes, tuple(labels) if labels is not None else None)


@dataclass(frozen=True, slots=True)
class FamilySequence:
    """Ordered, 1-indexed sequence of families sharing one dimension."""

    families: tuple[Family, ...]

    def __post_init__(self) -> None:
        fams = tuple(self.families)
        if not fams:
            raise ValueError("family sequence must be nonempty")
        d = fams[0].dim
        for i, f in enumerate(fams, start=1):
            if f.dim != d:
                raise ValueError(f"family {i} has dimension {f.dim}, expected {d}")
        object.__setattr__(self, "families", fams)

    @property
    def dim(self) -> int:
        return self.families[0].dim

    def __len__(self) -> int:
        return len(self.families)

    def family_at(self, index: int) -> Family:
        if not 1 <= index <= len(self.families):
            raise ValueError(f"family index {index} out of range 1..{len(self.families)}")
        return self.families[index - 1]


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def _check_axis(axis: int, dim: int) -> None:
    if not 1 <= axis <= dim:
        raise ValueError(f"axis {axis} out of range 1..{dim}")


def _check_same_dim(a_dim: int, b_dim: int) -> None:
    if a_dim != b_dim:
        raise ValueError(f"dimension mismatch: {a_dim} vs {b_dim}")


def check_k(k: int, dim: int) -> None:
    """Valid flat levels are 0 <= k <= dim-1."""
    if not 0 <= k <= dim - 1:
        raise ValueError(f"k={k} out of range 0..{dim - 1} for dimension {dim}")


def stabs(f: AxisFlat, b: Box) -> bool:
    """True iff the flat meets the box: every fixed coordinate of the flat
    lies in the box's projection onto that axis (closed membership)."""
    _check_same_dim(f.dim, b.dim)
    return all(b.sides[a - 1].contains_value(v) for a, v in f.fixed)


def overlap_axes(b1: Box, b2: Box) -> frozenset[int]:
    """Set of axes on which the two boxes' projections intersect.  Touching
    endpoints count: the boxes are closed."""
    _check_same_dim(b1.dim, b2.dim)
    return frozenset(
        i + 1 for i, (s1, s2) in enumerate(zip(b1.sides, b2.sides)) if s1.intersects(s2)
    )


def co_stabbable(b1: Box, b2: Box, k: int) -> Optional[AxisFlat]:
    """Witness flat of level k stabbing both boxes, or None.

    Two boxes admit a common axis-parallel k-flat exactly when their
    projections overlap on at least d-k axes: the flat must fix d-k
    coordinates, and each fixed coordinate must lie in both projections.
    The witness fixes the d-k smallest overlapping axes at the right
    endpoint of the per-axis intersection (the same canonical value the
    transversal solver uses, so certificates compose).
    """
    _check_same_dim(b1.dim, b2.dim)
    d = b1.dim
    check_k(k, d)
    shared = sorted(overlap_axes(b1, b2))
    need = d - k
    if len(shared) < need:
        return None
    fixed = []
    for axis in shared[:need]:
        inter = b1.sides[axis - 1].intersection(b2.sides[axis - 1])
        assert inter is not None
        fixed.append((axis, inter.hi))
    return AxisFlat(d, tuple(fixed))


def contains(outer: Box, inner: Box) -> bool:
    """Exact per-axis containment of closed boxes."""
    _check_same_dim(outer.dim, inner.dim)
    return all(o.contains_interval(i) for o, i in zip(outer.sides, inner.sides))


def slice_box(b: Box, axis: int, value: RationalLike) -> Optional[Box]:
    """Intersection of the box with the hyperplane {x_axis = value}, written
    in the hyperplane's own d-1 coordinates (the sliced side is deleted).
    None when the hyperplane misses the box."""
    _check_axis(axis, b.dim)
    if b.dim < 2:
        raise ValueError("cannot slice a 1-dimensional box to dimension 0")
    v = rat(value)
    if not b.sides[axis - 1].contains_value(v):
        return None
    return Box(b.sides[: axis - 1] + b.sides[axis:])


def lift_flat(f: AxisFlat, axis: int, value: RationalLike) -> AxisFlat:
    """Embed a flat living in the hyperplane {x_axis = value} back into
    d = f.dim + 1 dimensions: axes >= `axis` shift up by one, and the pair
    (axis, value) is added to the fixed coordinates."""
    d = f.dim + 1
    _check_axis(axis, d)
    v = rat(value)
    fixed = [(a if a < axis else a + 1, val) for a, val in f.fixed]
    fixed.append((axis, v))
    return AxisFlat(d, tuple(fixed))
