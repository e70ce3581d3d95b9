"""Explicit box families with no small flat transversal, plus the nesting
witnesses that certify how they trap any would-be scattered selection.

For the enumerated point Q_n = (q_{n,1}, ..., q_{n,d}) of `enumeration`, the
family member with indices (n, m) is the dyadic-offset box

    B(n, m) = prod_i [ q_{n,i} - 2^-(n+2m),  q_{n,i} - 2^-(n+2m+1) ]

Members of one family have pairwise disjoint projections on every axis, so a
level-k flat stabs at most one of them: tau_k of any m_max-prefix is exactly
m_max, for every k.  At the same time every nondegenerate box contains some
enumerated point Q_r with all boxes of family r nested inside it, which is
what `nesting_witness` finds and `verify_nesting` checks exactly.

Witness searches walk the enumeration in index order under an explicit step
budget; exhausting the budget returns None (for a nondegenerate box a witness
always exists mathematically, so None never means nonexistence).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Box, Family, Interval, contains
from .enumeration import (
    component_indices,
    rational_at,
    rational_point_at,
    signed_rationals,
)

DEFAULT_SEARCH_BUDGET = 1_000_000

NESTING_SPOT_CHECKS = 20


def counterexample_box(n: int, m: int, d: int) -> Box:
    """The (n, m) member: per axis [q - 2^-(n+2m), q - 2^-(n+2m+1)] around
    the n-th enumerated point of Q^d.  Side length is 2^-(n+2m+1)."""
    if n < 1 or m < 1:
        raise ValueError("family index n and member index m must be >= 1")
    point = rational_point_at(n, d)
    wide = Fraction(1, 2 ** (n + 2 * m))
    narrow = Fraction(1, 2 ** (n + 2 * m + 1))
    return Box(tuple(Interval(q - wide, q - narrow) for q in point))


def counterexample_family(n: int, d: int, m_max: int) -> Family:
    """Members B(n, 1), ..., B(n, m_max) in order."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    return Family(d, tuple(counterexample_box(n, m, d) for m in range(1, m_max + 1)))


def union_prefix_family(d: int, n_max: int, m_max: int) -> Family:
    """Union of the first n_max families, each truncated to m_max members,
    ordered by (n, m)."""
    boxes = tuple(
        counterexample_box(n, m, d)
        for n in range(1, n_max + 1)
        for m in range(1, m_max + 1)
    )
    return Family(d, boxes)


def first_rational_in_box(
    box: Box,
    min_index: int = 1,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Optional[tuple[int, tuple[Fraction, ...]]]:
    """Smallest enumeration index r >= min_index whose point lies in the box.

    Scans at most `budget` candidate indices; None means the budget ran out
    before a hit (never nonexistence: a nondegenerate rational box contains
    infinitely many enumerated points)."""
    if not box.is_nondegenerate():
        raise ValueError("first_rational_in_box needs a nondegenerate box on every axis")
    min_index = max(1, min_index)
    d = box.dim
    if d == 1:
        side = box.sides[0]
        for steps, (r, value) in enumerate(signed_rationals(min_index)):
            if steps >= budget:
                return None
            if side.lo <= value <= side.hi:
                return r, (value,)
        return None
    sides = box.sides
    for offset in range(budget):
        r = min_index + offset
        idx = component_indices(r, d)
        point = tuple(rational_at(i) for i in idx)
        if all(s.lo <= q <= s.hi for s, q in zip(sides, point)):
            return r, point
    return None


@dataclass(frozen=True, slots=True)
class NestingWitness:
    """Data certifying that the whole family r nests inside `input_box`:

      epsilon  - the box's minimum side length,
      n_prime  - 2^-l < epsilon/8 for every l > n_prime,
      r        - enumeration index > n_prime with Q_r in the shrunken
                 center box prod [mid_i - eps/4, mid_i + eps/4],
      point    - Q_r itself,
      bounding - prod [q_{r,i} - 2^-r, q_{r,i}], which contains every
                 B(r, m) and is contained in input_box.
    """

    input_box: Box
    epsilon: Fraction
    n_prime: int
    r: int
    point: tuple[Fraction, ...]
    bounding: Box


def _smallest_power_exponent(eps: Fraction) -> int:
    """Smallest t >= 0 with 2^-t < eps/8."""
    target = eps / 8
    t = 0
    while Fraction(1, 2 ** t) >= target:
        t += 1
    return t


def center_box(box: Box, eps: Fraction) -> Box:
    return Box(tuple(
        Interval(s.midpoint - eps / 4, s.midpoint + eps / 4) for s in box.sides
    ))


def nesting_witness(box: Box, budget: int = DEFAULT_SEARCH_BUDGET) -> Optional[NestingWitness]:
    """Search the enumeration for a nesting witness; None on budget
    exhaustion.  All arithmetic is exact and the final containment is checked
    before the witness is returned."""
    if not box.is_nondegenerate():
        raise ValueError("nesting witness requires a nondegenerate box on every axis")
    eps = box.min_side_width()
    n_prime = _smallest_power_exponent(eps) - 1
    found = first_rational_in_box(center_box(box, eps), min_index=n_prime + 1, budget=budget)
    if found is None:
        return None
    r, point = found
    shrink = Fraction(1, 2 ** r)
    bounding = Box(tuple(Interval(q - shrink, q) for q in point))
    assert contains(box, bounding), "containment must follow from the search region"
    return NestingWitness(box, eps, n_prime, r, point, bounding)


def nesting_violation(witness: NestingWitness) -> Optional[str]:
    """First violated invariant of the witness, or None when exact."""
    box = witness.input_box
    d = box.dim
    if not box.is_nondegenerate():
        return "input box is degenerate on some axis"
    eps = box.min_side_width()
    if witness.epsilon != eps:
        return f"epsilon {witness.epsilon} is not the minimum side length {eps}"
    if Fraction(2) ** (-(witness.n_prime + 1)) >= eps / 8:
        return f"2^-(n'+1) >= epsilon/8 for n'={witness.n_prime}"
    if witness.r <= witness.n_prime:
        return f"r={witness.r} is not greater than n'={witness.n_prime}"
    if witness.r < 1:
        return f"r={witness.r} is not a valid enumeration index"
    expected_point = rational_point_at(witness.r, d)
    if tuple(witness.point) != expected_point:
        return f"point does not match enumeration value at index {witness.r}"
    center = center_box(box, eps)
    for axis, (q, side) in enumerate(zip(witness.point, center.sides), start=1):
        if not side.contains_value(q):
            return f"coordinate {axis} of Q_r lies outside the center box"
    shrink = Fraction(1, 2 ** witness.r)
    expected_bounding = Box(tuple(Interval(q - shrink, q) for q in witness.point))
    if witness.bounding != expected_bounding:
        return "bounding box does not equal prod [q - 2^-r, q]"
    if not contains(box, witness.bounding):
        return "bounding box is not contained in the input box"
    for m in range(1, NESTING_SPOT_CHECKS + 1):
        member = counterexample_box(witness.r, m, d)
        if not contains(box, member):
            return f"family member m={m} of family {witness.r} escapes the input box"
    return None


def verify_nesting(witness: NestingWitness) -> bool:
    return nesting_violation(witness) is None
