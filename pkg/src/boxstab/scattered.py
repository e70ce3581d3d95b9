"""Scattered subfamilies: sets of boxes no two of which share a level-k flat.

Scattered sets are the combinatorial dual of transversals (one flat stabs at
most one scattered box, so any scattered set lower-bounds tau_k).  Besides
the exact maximum (`max_scattered`, an independent-set search on the
co-stabbability graph) this module implements the constructive extraction
procedures:

  * `greedy_scattered`  - online single pass over a box stream,
  * `scattered_by_slicing` - find a hyperplane stabbing a heavy subfamily,
    slice, recurse one dimension down, lift the result back,
  * `strip_refine`      - locate accumulation strips by repeated exact
    halving, tracking midpoint estimates of the accumulation coordinates,
  * `rainbow_scattered` - one pick per family with strictly increasing
    family indices.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from . import _search
from .core import (
    Box,
    Family,
    FamilySequence,
    Interval,
    Strip,
    check_k,
    co_stabbable,
    overlap_axes,
)
from .transversal import DEFAULT_NODE_BUDGET, heavy_with_budget

# Certificates keep explicit per-pair evidence only up to this many indices;
# larger certificates are verified by recomputation instead of carrying a
# quadratic payload around.
EVIDENCE_INDEX_LIMIT = 128


@dataclass(frozen=True, slots=True)
class StabGraph:
    """Co-stabbability graph: vertices are 1-based box indices, an edge means
    the two boxes admit a common level-k flat."""

    n: int
    k: int
    edges: frozenset[tuple[int, int]]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


@dataclass(frozen=True, slots=True)
class ScatteredCert:
    """Scattered set: 1-based box indices, pairwise non-co-stabbable at level
    k.  `evidence` maps each pair (i, j), i < j, to the number of axes on
    which the projections overlap (necessarily < d-k); it is None when the
    certificate is too large to carry it and verification recomputes.
    """

    k: int
    indices: tuple[int, ...]
    evidence: Optional[dict[tuple[int, int], int]] = None
    optimal: bool = False
    budget_exhausted: bool = False

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True, slots=True)
class RainbowCert:
    """Picks (family index, box index within family), both 1-based, with
    strictly increasing family indices and pairwise non-co-stabbable boxes."""

    k: int
    picks: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.picks)


@dataclass(frozen=True, slots=True)
class StripRefinement:
    """Trace of the halving procedure: nested strips, each containing a
    t-heavy subfamily, with the count of contained boxes; `estimates` holds
    the midpoints of the final strip's bounded sides (the accumulation
    coordinate estimates), and `depth` the number of exact halvings."""

    trace: tuple[tuple[Strip, int], ...]
    bounded_axes: frozenset[int]
    estimates: dict[int, Fraction]
    depth: int
    budget_exhausted: bool = False


def pair_evidence(boxes: tuple[Box, ...], indices: tuple[int, ...], k: int,
                  force: bool = False) -> Optional[dict[tuple[int, int], int]]:
    """Per-pair overlap counts for the indexed boxes, or None for certs past
    the evidence size limit (unless forced)."""
    if not force and len(indices) > EVIDENCE_INDEX_LIMIT:
        return None
    ev: dict[tuple[int, int], int] = {}
    for a, b in itertools.combinations(indices, 2):
        i, j = (a, b) if a < b else (b, a)
        ev[(i, j)] = len(overlap_axes(boxes[i - 1], boxes[j - 1]))
    return ev


def stab_graph(family: Family, k: int) -> StabGraph:
    check_k(k, family.dim)
    need = family.dim - k
    edges = set()
    boxes = family.boxes
    for i in range(1, len(boxes) + 1):
        for j in range(i + 1, len(boxes) + 1):
            if len(overlap_axes(boxes[i - 1], boxes[j - 1])) >= need:
                edges.add((i, j))
    return StabGraph(len(boxes), k, frozenset(edges))


def _adjacency_masks(family: Family, k: int) -> list[int]:
    need = family.dim - k
    n = len(family.boxes)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if len(overlap_axes(family.boxes[i], family.boxes[j])) >= need:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def max_scattered(
    family: Family,
    k: int,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
) -> ScatteredCert:
    """Maximum scattered set; among all maximum sets, the lexicographically
    smallest index set.  On budget exhaustion the greedy (inclusion-maximal)
    set is returned flagged non-optimal."""
    check_k(k, family.dim)
    n = len(family.boxes)
    if n == 0:
        return ScatteredCert(k, (), {}, optimal=True)
    adj = _adjacency_masks(family, k)
    b = _search.Budget(budget)
    try:
        picked = _search.lex_min_max_independent_set(adj, n, b)
        indices = tuple(v + 1 for v in picked)
        return ScatteredCert(
            k, indices, pair_evidence(family.boxes, indices, k), optimal=True
        )
    except _search.BudgetExhausted:
        mask = _search.greedy_independent_mask(adj, (1 << n) - 1)
        indices = tuple(v + 1 for v in range(n) if mask >> v & 1)
        return ScatteredCert(
            k, indices, pair_evidence(family.boxes, indices, k),
            optimal=False, budget_exhausted=True,
        )


class _OverlapIndex:
    """Per-axis sorted endpoint arrays over the accepted boxes, answering
    "which accepted boxes overlap the new box on >= threshold axes" in time
    proportional to the smaller candidate side per axis (O(log) for streams
    whose projections march away from the accepted ones, like staircases)."""

    def __init__(self, dim: int, threshold: int):
        self.dim = dim
        self.threshold = threshold
        self._boxes: dict[int, Box] = {}
        self._los = [[] for _ in range(dim)]
        self._lo_ids = [[] for _ in range(dim)]
        self._his = [[] for _ in range(dim)]
        self._hi_ids = [[] for _ in range(dim)]

    def _axis_overlaps(self, a: int, lo: Fraction, hi: Fraction) -> list[int]:
        los, lo_ids = self._los[a], self._lo_ids[a]
        his, hi_ids = self._his[a], self._hi_ids[a]
        c1 = bisect_right(los, hi)            # accepted with lo <= hi(new)
        start = bisect_left(his, lo)
        c2 = len(his) - start                 # accepted with hi >= lo(new)
        if c1 == 0 or c2 == 0:
            return []
        if c1 <= c2:
            return [i for i in lo_ids[:c1] if self._boxes[i].sides[a].hi >= lo]
        return [i for i in hi_ids[start:] if self._boxes[i].sides[a].lo <= hi]

    def conflict(self, b: Box) -> Optional[int]:
        """Smallest accepted id co-stabbable with `b`, or None."""
        counts: dict[int, int] = {}
        for a in range(self.dim):
            side = b.sides[a]
            for i in self._axis_overlaps(a, side.lo, side.hi):
                counts[i] = counts.get(i, 0) + 1
        hits = [i for i, c in counts.items() if c >= self.threshold]
        return min(hits) if hits else None

    def add(self, b: Box, ident: int) -> None:
        self._boxes[ident] = b
        for a in range(self.dim):
            side = b.sides[a]
            pos = bisect_right(self._los[a], side.lo)
            self._los[a].insert(pos, side.lo)
            self._lo_ids[a].insert(pos, ident)
            pos = bisect_right(self._his[a], side.hi)
            self._his[a].insert(pos, side.hi)
            self._hi_ids[a].insert(pos, ident)


def greedy_scattered(
    boxes: Iterable[Box],
    k: int,
    limit: Optional[int] = None,
) -> ScatteredCert:
    """Online greedy: accept a box iff it is non-co-stabbable with every box
    accepted so far.  The result is inclusion-maximal over the processed
    prefix; every rejection is justified by a concrete accepted conflict
    (asserted as the stream runs).  `limit` stops the stream once that many
    boxes are accepted."""
    if limit is not None and limit <= 0:
        return ScatteredCert(k, (), {})
    index: Optional[_OverlapIndex] = None
    accepted: list[int] = []
    for pos, b in enumerate(boxes, start=1):
        if index is None:
            check_k(k, b.dim)
            index = _OverlapIndex(b.dim, b.dim - k)
        elif b.dim != index.dim:
            raise ValueError(f"box {pos} has dimension {b.dim}, stream started with {index.dim}")
        hit = index.conflict(b)
        if hit is None:
            index.add(b, pos)
            accepted.append(pos)
            if limit is not None and len(accepted) >= limit:
                break
        else:
            assert co_stabbable(index._boxes[hit], b, k) is not None
    indices = tuple(accepted)
    evidence = None
    if index is not None and len(indices) <= EVIDENCE_INDEX_LIMIT:
        evidence = {
            (i, j): len(overlap_axes(index._boxes[i], index._boxes[j]))
            for i, j in itertools.combinations(indices, 2)
        }
    return ScatteredCert(k, indices, evidence)


def scattered_by_slicing(
    family: Family,
    k: int,
    t: int,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
) -> ScatteredCert:
    """Scattered set via hyperplane slicing.

    If some canonical hyperplane (axis fixed at a projection right endpoint)
    stabs a subfamily with tau_k > t, every stabbed box is sliced by that
    hyperplane and the procedure recurses one dimension lower at the same k;
    scatteredness of the slices lifts back to the original boxes because all
    of them meet the hyperplane.  Otherwise the greedy extraction runs at
    hyperplane level, whose output is scattered for every smaller k as well.
    """
    check_k(k, family.dim)
    if t < 0:
        raise ValueError("threshold t must be >= 0")
    b = _search.Budget(budget)
    exhausted = [False]
    indices = _slice_extract(family.boxes, k, t, b, exhausted)
    indices = tuple(sorted(indices))
    cert = ScatteredCert(
        k, indices, pair_evidence(family.boxes, indices, k),
        budget_exhausted=exhausted[0],
    )
    violation = scattered_violation(family, cert)
    assert violation is None, f"slicing produced an invalid certificate: {violation}"
    return cert


def _slice_extract(
    boxes: tuple[Box, ...],
    k: int,
    t: int,
    b: _search.Budget,
    exhausted: list[bool],
) -> tuple[int, ...]:
    """Returns accepted 1-based positions within `boxes`."""
    if not boxes:
        return ()
    d = boxes[0].dim
    if k == d - 1:
        return greedy_scattered(boxes, k).indices

    for axis in range(1, d + 1):
        for value in sorted({bx.sides[axis - 1].hi for bx in boxes}):
            stabbed = [pos for pos, bx in enumerate(boxes, start=1)
                       if bx.sides[axis - 1].contains_value(value)]
            if len(stabbed) <= t:
                continue  # tau of the stabbed subfamily is at most its size
            sub = Family(d, tuple(boxes[p - 1] for p in stabbed))
            report = heavy_with_budget(sub, k, t, b)
            if report.heavy is None:
                exhausted[0] = True
                continue
            if report.heavy:
                sliced = tuple(_slice_unchecked(boxes[p - 1], axis, value) for p in stabbed)
                inner = _slice_extract(sliced, k, t, b, exhausted)
                return tuple(stabbed[i - 1] for i in inner)

    return greedy_scattered(boxes, d - 1).indices


def _slice_unchecked(bx: Box, axis: int, value: Fraction) -> Box:
    assert bx.sides[axis - 1].contains_value(value)
    return Box(bx.sides[: axis - 1] + bx.sides[axis:])


def strip_refine(
    family: Family,
    k: int,
    t: int,
    max_depth: int = 20,
    budget: Optional[int] = DEFAULT_NODE_BUDGET,
) -> StripRefinement:
    """Locate accumulation strips by exact repeated halving.

    For each count of unbounded axes (fewest first) and each bounded-axis
    subset (lexicographic), start from the strip whose bounded sides are the
    family's bounding intervals and repeatedly split every bounded side at
    its midpoint, descending into the first child whose contained subfamily
    still has tau_k > t.  The first configuration that sustains the full
    `max_depth` halvings is returned; if none does, the deepest descent seen
    wins.  A family that is not t-heavy at all yields an empty trace.
    """
    check_k(k, family.dim)
    if t < 0:
        raise ValueError("threshold t must be >= 0")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    d = family.dim
    b = _search.Budget(budget)
    exhausted = [False]
    empty = StripRefinement((), frozenset(), {}, 0)

    if not family.boxes:
        return empty
    root = heavy_with_budget(family, k, t, b)
    if root.heavy is None:
        return StripRefinement((), frozenset(), {}, 0, budget_exhausted=True)
    if not root.heavy:
        return empty

    best: Optional[StripRefinement] = None
    for unbounded in range(d):
        for bounded in itertools.combinations(range(1, d + 1), d - unbounded):
            ref = _descend(family, k, t, bounded, max_depth, b, exhausted)
            if ref.depth >= max_depth:
                return ref
            if best is None or ref.depth > best.depth:
                best = ref
    assert best is not None
    if exhausted[0]:
        return StripRefinement(best.trace, best.bounded_axes, best.estimates,
                               best.depth, budget_exhausted=True)
    return best


def _descend(
    family: Family,
    k: int,
    t: int,
    bounded: tuple[int, ...],
    max_depth: int,
    b: _search.Budget,
    exhausted: list[bool],
) -> StripRefinement:
    d = family.dim
    sides: dict[int, Interval] = {a: family.bounding_interval(a) for a in bounded}

    def as_strip(s: dict[int, Interval]) -> Strip:
        return Strip(d, tuple(s.get(a) for a in range(1, d + 1)))

    def contained(s: dict[int, Interval]) -> list[Box]:
        return [
            bx for bx in family.boxes
            if all(s[a].contains_interval(bx.sides[a - 1]) for a in bounded)
        ]

    trace: list[tuple[Strip, int]] = [(as_strip(sides), len(contained(sides)))]
    depth = 0
    while depth < max_depth:
        advanced = False
        # children in lexicographic half order: lower half first per axis
        for combo in itertools.product((0, 1), repeat=len(bounded)):
            child = dict(sides)
            for a, pick in zip(bounded, combo):
                child[a] = sides[a].halves()[pick]
            inside = contained(child)
            if not inside:
                continue
            report = heavy_with_budget(Family(d, tuple(inside)), k, t, b)
            if report.heavy is None:
                exhausted[0] = True
                continue
            if report.heavy:
                sides = child
                depth += 1
                trace.append((as_strip(sides), len(inside)))
                advanced = True
                break
        if not advanced:
            break
    estimates = {a: sides[a].midpoint for a in bounded}
    return StripRefinement(tuple(trace), frozenset(bounded), estimates, depth)


def rainbow_scattered(
    seq: FamilySequence,
    k: int,
    limit: Optional[int] = None,
) -> RainbowCert:
    """Greedy colorful extraction: scan families in order, pick at most one
    box per family (the first compatible one), skip families with none.
    Family indices are strictly increasing by construction."""
    check_k(k, seq.dim)
    need = seq.dim - k
    picks: list[tuple[int, int]] = []
    chosen: list[Box] = []
    for n, fam in enumerate(seq.families, start=1):
        if limit is not None and len(picks) >= limit:
            break
        for i, bx in enumerate(fam.boxes, start=1):
            if all(len(overlap_axes(bx, prev)) < need for prev in chosen):
                picks.append((n, i))
                chosen.append(bx)
                break
    return RainbowCert(k, tuple(picks))


def scattered_violation(
    source: Union[Family, FamilySequence],
    cert: Union[ScatteredCert, RainbowCert],
    k: Optional[int] = None,
) -> Optional[str]:
    """First reason the certificate fails, or None.  Reports the offending
    pair together with the witness flat that stabs both boxes."""
    k = cert.k if k is None else k
    if k != cert.k:
        return f"certificate is for k={cert.k}, expected k={k}"

    if isinstance(cert, RainbowCert):
        if not isinstance(source, FamilySequence):
            return "rainbow certificate needs a family sequence"
        check_k(k, source.dim)
        labelled: list[tuple[tuple[int, int], Box]] = []
        prev_n = 0
        for n, i in cert.picks:
            if n <= prev_n:
                return f"family indices not strictly increasing at pick ({n}, {i})"
            prev_n = n
            if not 1 <= n <= len(source.families):
                return f"family index {n} out of range"
            fam = source.families[n - 1]
            if not 1 <= i <= len(fam.boxes):
                return f"box index {i} out of range in family {n}"
            labelled.append(((n, i), fam.boxes[i - 1]))
        return _pairwise_violation(labelled, k)

    if not isinstance(source, Family):
        return "scattered certificate needs a family"
    check_k(k, source.dim)
    seen: set[int] = set()
    labelled = []
    for i in cert.indices:
        if not 1 <= i <= len(source.boxes):
            return f"box index {i} out of range 1..{len(source.boxes)}"
        if i in seen:
            return f"duplicated box index {i}"
        seen.add(i)
        labelled.append((i, source.boxes[i - 1]))
    if cert.evidence is not None:
        d = source.dim
        for (i, j), count in cert.evidence.items():
            if not (i in seen and j in seen and i < j):
                return f"evidence pair ({i}, {j}) does not match the certificate indices"
            actual = len(overlap_axes(source.boxes[i - 1], source.boxes[j - 1]))
            if actual != count:
                return f"evidence for pair ({i}, {j}) says {count} overlapping axes, actual {actual}"
            if count >= d - k:
                return f"evidence for pair ({i}, {j}) admits a level-{k} flat"
    return _pairwise_violation(labelled, k)


def _pairwise_violation(labelled: list[tuple[object, Box]], k: int) -> Optional[str]:
    """Pairwise non-co-stabbability via the incremental overlap index, so
    large certificates stay near-linear when projections are disjoint."""
    if not labelled:
        return None
    dim = labelled[0][1].dim
    index = _OverlapIndex(dim, dim - k)
    for pos, (label, bx) in enumerate(labelled, start=1):
        if bx.dim != dim:
            return f"box {label} has dimension {bx.dim}, expected {dim}"
        hit = index.conflict(bx)
        if hit is not None:
            other = labelled[hit - 1][0]
            witness = co_stabbable(index._boxes[hit], bx, k)
            return f"boxes {other} and {label} are both stabbed by {witness}"
        index.add(bx, pos)
    return None


def verify_scattered(
    source: Union[Family, FamilySequence],
    cert: Union[ScatteredCert, RainbowCert],
    k: Optional[int] = None,
) -> bool:
    return scattered_violation(source, cert, k) is None


def refinement_violation(family: Family, ref: StripRefinement) -> Optional[str]:
    """Structural check of a refinement trace against the family: strips are
    nested, bounded widths halve exactly at every step, the bounded axes
    match, the recorded sizes count the contained subfamily, and the
    estimates are the final strip's midpoints.  (Heaviness itself depends on
    the threshold t used at run time and is re-established by rerunning.)"""
    if not ref.trace:
        if ref.depth != 0 or ref.estimates or ref.bounded_axes:
            return "empty trace with nonempty refinement data"
        return None
    if ref.depth != len(ref.trace) - 1:
        return f"depth {ref.depth} does not match trace length {len(ref.trace)}"
    bounded = tuple(sorted(ref.bounded_axes))
    prev: Optional[Strip] = None
    for step, (strip, size) in enumerate(ref.trace):
        if strip.is_empty:
            return f"step {step}: empty strip in trace"
        if strip.dim != family.dim:
            return f"step {step}: strip dimension {strip.dim} != family dimension {family.dim}"
        if strip.bounded_axes != bounded:
            return f"step {step}: strip bounds axes {strip.bounded_axes}, expected {bounded}"
        contained = sum(1 for bx in family.boxes if strip.contains_box(bx))
        if contained != size:
            return f"step {step}: recorded size {size}, strip contains {contained}"
        if prev is not None:
            for a in bounded:
                outer = prev.sides[a - 1]
                inner = strip.sides[a - 1]
                if not outer.contains_interval(inner):
                    return f"step {step}: strip not nested in predecessor on axis {a}"
                if inner.width * 2 != outer.width:
                    return f"step {step}: width on axis {a} does not halve exactly"
        prev = strip
    final = ref.trace[-1][0]
    for a in bounded:
        expected = final.sides[a - 1].midpoint
        if ref.estimates.get(a) != expected:
            return f"estimate on axis {a} is not the final strip midpoint {expected}"
    return None
