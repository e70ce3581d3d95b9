"""Minimum axis-parallel k-flat transversals of finite box families.

A transversal is a set of level-k flats such that every box in the family is
stabbed by at least one of them; tau_k is the minimum size.  The search space
is reduced to *canonical* flats: any flat can slide each fixed coordinate
rightward to the smallest right endpoint among the boxes it currently stabs
without losing any of them, so flats whose fixed values are right endpoints
of box projections suffice for exact optimization.

`min_transversal` is an exact, deterministic branch-and-bound (iterative
deepening over the transversal size, greedy upper bound, independent-set
lower bound).  `is_t_heavy` answers the threshold question "tau_k > t?" with
an early exit, which is the finite stand-in for a family not being pierceable
by any finite set of flats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import _search
from .core import AxisFlat, Family, check_k, stabs, overlap_axes

DEFAULT_NODE_BUDGET = 1_000_000

# Exact-solver instance caps: beyond these the solver refuses rather than
# silently approximating.  Hyperplane instances (k = d-1) branch far less.
EXACT_CAP_GENERAL = 25
EXACT_CAP_HYPERPLANE = 40


@dataclass(frozen=True, slots=True)
class TransversalCert:
    """Verifiable transversal: flats plus a box -> flat assignment.

    Box indices and flat indices in `assignment` are 1-based.  `optimal` is
    True only when produced by a solver that proved minimality;
    `budget_exhausted` marks a best-so-far result returned after the node
    budget ran out.
    """

    k: int
    flats: tuple[AxisFlat, ...]
    assignment: dict[int, int]
    optimal: bool = False
    budget_exhausted: bool = False

    def __len__(self) -> int:
        return len(self.flats)


@dataclass(frozen=True, slots=True)
class HeavinessReport:
    """Answer to "is tau_k > t?".  `heavy` is None when the node budget ran
    out before the question was decided; `tau` is filled in exactly when the
    early-exit search happened to pin it down (tau <= t)."""

    k: int
    t: int
    heavy: Optional[bool]
    tau: Optional[int] = None


def canonical_flats(family: Family, k: int) -> list[AxisFlat]:
    """All candidate flats for exact optimization, in canonical order:
    axis subsets of size d-k lexicographically, then fixed values (right
    endpoints of the projections, deduplicated and sorted) lexicographically.
    """
    d = family.dim
    check_k(k, d)
    if not family.boxes:
        raise ValueError("empty family has no candidate flats")
    values: dict[int, list[Fraction]] = {}
    for axis in range(1, d + 1):
        values[axis] = sorted({b.sides[axis - 1].hi for b in family.boxes})
    flats = []
    for axes in itertools.combinations(range(1, d + 1), d - k):
        for combo in itertools.product(*(values[a] for a in axes)):
            flats.append(AxisFlat(d, tuple(zip(axes, combo))))
    return flats


def _axis_value_masks(family: Family) -> dict[int, dict[Fraction, int]]:
    """For each axis and candidate value, the bitmask of boxes whose
    projection contains the value; flat coverage is the AND over fixed axes."""
    masks: dict[int, dict[Fraction, int]] = {}
    for axis in range(1, family.dim + 1):
        per_value: dict[Fraction, int] = {}
        for v in {b.sides[axis - 1].hi for b in family.boxes}:
            m = 0
            for i, b in enumerate(family.boxes):
                side = b.sides[axis - 1]
                if side.lo <= v <= side.hi:
                    m |= 1 << i
            per_value[v] = m
        masks[axis] = per_value
    return masks


def _coverage(family: Family, flats: list[AxisFlat]) -> list[int]:
    axis_masks = _axis_value_masks(family)
    full = (1 << len(family.boxes)) - 1
    out = []
    for f in flats:
        m = full
        for axis, v in f.fixed:
            m &= axis_masks[axis][v]
        out.append(m)
    return out


def _stab_adjacency(family: Family, k: int) -> list[int]:
    """Bitmask adjacency of box-level co-stabbability (projections overlap on
    at least d-k axes)."""
    n = len(family.boxes)
    need = family.dim - k
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if len(overlap_axes(family.boxes[i], family.boxes[j])) >= need:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def _assignment(flats: tuple[AxisFlat, ...], family: Family) -> dict[int, int]:
    assignment: dict[int, int] = {}
    for bi, b in enumerate(family.boxes, start=1):
        for fi, f in enumerate(flats, start=1):
            if stabs(f, b):
                assignment[bi] = fi
                break
    return assignment


def greedy_transversal(family: Family, k: int) -> TransversalCert:
    """Max-coverage greedy over canonical flats; ties broken by canonical
    flat order so the certificate is reproducible."""
    check_k(k, family.dim)
    if not family.boxes:
        return TransversalCert(k, (), {}, optimal=True)
    flats = canonical_flats(family, k)
    coverage = _coverage(family, flats)
    uncovered = (1 << len(family.boxes)) - 1
    chosen: list[int] = []
    while uncovered:
        best_i, best_gain = -1, 0
        for i, m in enumerate(coverage):
            gain = (m & uncovered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        assert best_i >= 0, "every box is stabbed by its own corner flat"
        chosen.append(best_i)
        uncovered &= ~coverage[best_i]
    picked = tuple(flats[i] for i in chosen)
    return TransversalCert(k, picked, _assignment(picked, family))


def exact_cap(k: int, dim: int) -> int:
    return EXACT_CAP_HYPERPLANE if k == dim - 1 else EXACT_CAP_GENERAL


def min_transversal(
    family: Family,
    k: int,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
    cap: Optional[int] = None,
) -> TransversalCert:
    """Exact minimum transversal.

    Deterministic: iterative deepening over the size, DFS branching on the
    lowest uncovered box with canonical-flat ordering, so the returned
    certificate is the first minimum cover in canonical order.  If the node
    budget runs out, the greedy certificate is returned flagged
    non-optimal/budget_exhausted instead of an unproven answer.
    """
    check_k(k, family.dim)
    n = len(family.boxes)
    if n == 0:
        return TransversalCert(k, (), {}, optimal=True)
    cap = exact_cap(k, family.dim) if cap is None else cap
    if n > cap:
        raise ValueError(
            f"family of {n} boxes exceeds the exact-solver cap {cap} for k={k}; "
            "raise `cap` explicitly or use greedy_transversal"
        )
    flats = canonical_flats(family, k)
    coverage = _coverage(family, flats)
    adj = _stab_adjacency(family, k)
    full = (1 << n) - 1

    # Deduplicate identical coverage masks, keeping the canonical-first flat:
    # a later duplicate can never appear in the first cover found.
    seen: dict[int, int] = {}
    kept_flats: list[AxisFlat] = []
    kept_masks: list[int] = []
    for f, m in zip(flats, coverage):
        if m and m not in seen:
            seen[m] = len(kept_masks)
            kept_flats.append(f)
            kept_masks.append(m)

    b = _search.Budget(budget)
    greedy_cert = greedy_transversal(family, k)
    upper = len(greedy_cert.flats)
    try:
        lower = max(
            _search.greedy_independent_mask(adj, full).bit_count(),
            _search.mis_size(adj, full, {}, b),
        )
        for size in range(lower, upper + 1):
            picked = _search.first_cover_of_size(kept_masks, full, size, adj, b)
            if picked is not None:
                chosen = tuple(kept_flats[i] for i in picked)
                return TransversalCert(k, chosen, _assignment(chosen, family), optimal=True)
        raise AssertionError("greedy cover guarantees a solution at the upper bound")
    except _search.BudgetExhausted:
        return TransversalCert(
            greedy_cert.k, greedy_cert.flats, greedy_cert.assignment,
            optimal=False, budget_exhausted=True,
        )


def transversal_violation(family: Family, cert: TransversalCert) -> Optional[str]:
    """First reason the certificate fails to verify, or None when valid."""
    need = family.dim - cert.k
    for fi, f in enumerate(cert.flats, start=1):
        if f.dim != family.dim:
            return f"flat {fi} has dimension {f.dim}, family has {family.dim}"
        if len(f.fixed) != need:
            return f"flat {fi} fixes {len(f.fixed)} axes, expected d-k={need}"
    for bi in range(1, len(family.boxes) + 1):
        fi = cert.assignment.get(bi)
        if fi is None:
            return f"box {bi} has no assigned flat"
        if not 1 <= fi <= len(cert.flats):
            return f"box {bi} assigned to nonexistent flat {fi}"
        if not stabs(cert.flats[fi - 1], family.boxes[bi - 1]):
            return f"assigned flat {fi} does not stab box {bi}"
    return None


def verify_transversal(family: Family, cert: TransversalCert) -> bool:
    return transversal_violation(family, cert) is None


def is_t_heavy(
    family: Family,
    k: int,
    t: int,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
) -> HeavinessReport:
    """Decide tau_k(family) > t with early exit.

    Runs the same deepening search as `min_transversal` but only up to size
    t: either some size s <= t covers (then tau = s exactly and the family is
    not heavy) or all of them were excluded (heavy).  The lower-bound check
    often decides heaviness without any search.  Unlike the full solver this
    has no instance cap: the work is bounded by t, not the family size.
    """
    return heavy_with_budget(family, k, t, _search.Budget(budget))


def heavy_with_budget(family: Family, k: int, t: int, b: _search.Budget) -> HeavinessReport:
    """`is_t_heavy` against a caller-owned budget, so procedures that ask the
    heaviness question many times can share one node allowance."""
    if t < 0:
        raise ValueError("threshold t must be >= 0")
    check_k(k, family.dim)
    n = len(family.boxes)
    if n == 0:
        return HeavinessReport(k, t, heavy=False, tau=0)

    adj = _stab_adjacency(family, k)
    full = (1 << n) - 1
    try:
        lower = _search.greedy_independent_mask(adj, full).bit_count()
        if lower > t:
            return HeavinessReport(k, t, heavy=True)
        flats = canonical_flats(family, k)
        coverage = _coverage(family, flats)
        masks = sorted(set(m for m in coverage if m), reverse=True)
        for size in range(lower, t + 1):
            if _search.first_cover_of_size(masks, full, size, adj, b) is not None:
                return HeavinessReport(k, t, heavy=False, tau=size)
        return HeavinessReport(k, t, heavy=True)
    except _search.BudgetExhausted:
        return HeavinessReport(k, t, heavy=None)
