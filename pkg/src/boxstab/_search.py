"""Budgeted exact-search cores shared by the transversal and scattered solvers.

Boxes are bitmask-encoded (bit i = box with 1-based index i+1).  Everything
here is deterministic: candidates are explored in the order supplied, so the
first solution found is a canonical function of the input.
"""

from __future__ import annotations

from typing import Optional, Sequence


class BudgetExhausted(Exception):
    """Raised internally when a node budget runs out mid-search."""


class Budget:
    """Mutable node counter.  `spend()` raises once the limit is crossed;
    a limit of None never exhausts."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted()


def greedy_independent_mask(adj: Sequence[int], mask: int) -> int:
    """Greedy independent set inside `mask`, lowest index first.  Its size is
    a valid lower bound for any cover: distinct independent boxes need
    distinct covering sets."""
    chosen = 0
    remaining = mask
    while remaining:
        bit = remaining & -remaining
        v = bit.bit_length() - 1
        chosen |= bit
        remaining &= ~adj[v]
        remaining &= ~bit
    return chosen


def mis_size(adj: Sequence[int], mask: int, memo: dict[int, int], budget: Budget) -> int:
    """Exact maximum independent set size within `mask` (branch on the lowest
    vertex: exclude, or include and drop its neighbourhood)."""
    if mask == 0:
        return 0
    cached = memo.get(mask)
    if cached is not None:
        return cached
    budget.spend()
    bit = mask & -mask
    v = bit.bit_length() - 1
    without = mis_size(adj, mask & ~bit, memo, budget)
    with_v = 1 + mis_size(adj, mask & ~bit & ~adj[v], memo, budget)
    best = max(without, with_v)
    memo[mask] = best
    return best


def lex_min_max_independent_set(adj: Sequence[int], n: int, budget: Budget) -> list[int]:
    """The lexicographically smallest maximum independent set (0-based vertex
    list, ascending).  Greedy extraction against the exact size oracle: take
    vertex v iff the target size stays reachable among later vertices."""
    full = (1 << n) - 1
    memo: dict[int, int] = {}
    target = mis_size(adj, full, memo, budget)
    chosen: list[int] = []
    mask = full
    need = target
    for v in range(n):
        if need == 0:
            break
        bit = 1 << v
        if not mask & bit:
            continue
        later = mask & ~bit & ~((bit << 1) - 1)
        if 1 + mis_size(adj, later & ~adj[v], memo, budget) >= need:
            chosen.append(v)
            need -= 1
            mask = later & ~adj[v]
        else:
            mask &= ~bit
    assert len(chosen) == target
    return chosen


def first_cover_of_size(
    masks: Sequence[int],
    full: int,
    size: int,
    adj: Sequence[int],
    budget: Budget,
) -> Optional[list[int]]:
    """First (in DFS order) cover of `full` using at most `size` candidate
    masks.  Branches on the lowest uncovered box and tries the candidates
    stabbing it in supplied order, which makes the result canonical.

    `adj` is box-level co-stabbability, used for the independent-set lower
    bound at every node.
    """
    by_box: list[list[int]] = [[] for _ in range(full.bit_length())]
    for ci, m in enumerate(masks):
        rest = m & full
        while rest:
            bit = rest & -rest
            by_box[bit.bit_length() - 1].append(ci)
            rest &= ~bit
    max_cover = max((m.bit_count() for m in masks), default=0)

    def lower_bound(uncovered: int) -> int:
        if uncovered == 0:
            return 0
        simple = -(-uncovered.bit_count() // max_cover)
        independent = greedy_independent_mask(adj, uncovered).bit_count()
        return max(simple, independent)

    chosen: list[int] = []

    def dfs(uncovered: int, remaining: int) -> bool:
        budget.spend()
        if uncovered == 0:
            return True
        if remaining == 0 or lower_bound(uncovered) > remaining:
            return False
        bit = uncovered & -uncovered
        for ci in by_box[bit.bit_length() - 1]:
            chosen.append(ci)
            if dfs(uncovered & ~masks[ci], remaining - 1):
                return True
            chosen.pop()
        return False

    if dfs(full, size):
        return chosen
    return None
