"""Shared fixtures: deterministic random instances and independent oracles.

The oracles deliberately avoid the library's search machinery: minimum
covers are found over the *full* endpoint grid (both interval ends, not just
the canonical right endpoints) by exhaustive subset-lattice search, and
maximum scattered sets by enumerating every subset.  They are the ground
truth the solvers are measured against.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from boxstab.core import AxisFlat, Box, Family, Interval, stabs, overlap_axes


def random_interval(rng: random.Random) -> Interval:
    den = rng.choice((1, 2, 3, 4))
    lo = Fraction(rng.randrange(-16, 16), den)
    width = Fraction(rng.randrange(0, 9), rng.choice((1, 2, 3, 4)))
    return Interval(lo, lo + width)


def random_box(rng: random.Random, d: int) -> Box:
    return Box(tuple(random_interval(rng) for _ in range(d)))


def random_family(rng: random.Random, d: int, max_boxes: int = 8) -> Family:
    n = rng.randrange(1, max_boxes + 1)
    return Family(d, tuple(random_box(rng, d) for _ in range(n)))


def endpoint_grid_flats(family: Family, k: int) -> list[AxisFlat]:
    """Candidate flats over the full endpoint grid: every fixed value is a lo
    or hi of some projection (a strict superset of the canonical flats)."""
    d = family.dim
    values = {
        axis: sorted(
            {b.sides[axis - 1].lo for b in family.boxes}
            | {b.sides[axis - 1].hi for b in family.boxes}
        )
        for axis in range(1, d + 1)
    }
    flats = []
    for axes in itertools.combinations(range(1, d + 1), d - k):
        for combo in itertools.product(*(values[a] for a in axes)):
            flats.append(AxisFlat(d, tuple(zip(axes, combo))))
    return flats


def coverage_masks(family: Family, flats: list[AxisFlat]) -> list[int]:
    masks = []
    for f in flats:
        m = 0
        for i, b in enumerate(family.boxes):
            if stabs(f, b):
                m |= 1 << i
        masks.append(m)
    return masks


def brute_min_cover_size(family: Family, k: int) -> int:
    """Minimum transversal size by subset-lattice search over all coverage
    patterns of the full endpoint grid."""
    n = len(family.boxes)
    full = (1 << n) - 1
    masks = sorted(set(coverage_masks(family, endpoint_grid_flats(family, k))))
    INF = n + 1
    dp = [INF] * (full + 1)
    dp[0] = 0
    for state in range(full + 1):
        if dp[state] >= INF:
            continue
        for m in masks:
            nxt = state | m
            if dp[nxt] > dp[state] + 1:
                dp[nxt] = dp[state] + 1
    assert dp[full] <= n, "every box is covered by a grid flat through its own corner"
    return dp[full]


def brute_min_cover_size_by_subsets(family: Family, k: int) -> int:
    """Literal smallest-subset search over the grid flats (tiny instances
    only); used to validate the lattice oracle itself."""
    n = len(family.boxes)
    full = (1 << n) - 1
    masks = sorted(set(coverage_masks(family, endpoint_grid_flats(family, k))))
    for size in range(0, n + 1):
        for combo in itertools.combinations(masks, size):
            covered = 0
            for m in combo:
                covered |= m
            if covered == full:
                return size
    raise AssertionError("no cover found")


def brute_max_scattered_size(family: Family, k: int) -> int:
    """Maximum scattered set by enumerating all subsets."""
    n = len(family.boxes)
    need = family.dim - k
    boxes = family.boxes
    conflict = [
        [len(overlap_axes(boxes[i], boxes[j])) >= need for j in range(n)] for i in range(n)
    ]
    best = 0
    for mask in range(1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if len(members) <= best:
            continue
        if all(not conflict[i][j] for i, j in itertools.combinations(members, 2)):
            best = len(members)
    return best
