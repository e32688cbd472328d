"""Exact set cover and maximum independent set at desk scale.

Bitmask branch-and-bound, deliberately budget-bounded: both solvers give
up and return None once their node budget is exhausted, and callers fall
back to the greedy answer with a logged warning (never silently).
Universe sizes are capped by the effort config (default 60 elements /
400 sets), so Python-int bitsets are fast enough.
"""

from __future__ import annotations

from typing import Optional


def greedy_set_cover_masks(masks: list[int], universe: int) -> Optional[list[int]]:
    chosen = []
    uncovered = universe
    while uncovered:
        best, best_gain = -1, 0
        for i, m in enumerate(masks):
            gain = (m & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = i, gain
        if best < 0:
            return None
        chosen.append(best)
        uncovered &= ~masks[best]
    return chosen


def exact_set_cover(masks: list[int], universe: int,
                    node_budget: int = 200_000) -> Optional[list[int]]:
    """Minimum set cover, or None if infeasible or out of budget."""
    init = greedy_set_cover_masks(masks, universe)
    if init is None:
        return None
    # drop duplicate and dominated sets (kept sets answer for them)
    order = sorted(range(len(masks)), key=lambda i: -masks[i].bit_count())
    kept_ids: list[int] = []
    for i in order:
        m = masks[i]
        if m and not any(m | masks[j] == masks[j] for j in kept_ids):
            kept_ids.append(i)
    remap = kept_ids
    masks = [masks[i] for i in kept_ids]
    best_r = _exact_set_cover_reduced(masks, universe, node_budget,
                                      len(init))
    if best_r is None:
        return None
    return [remap[i] for i in best_r]


def _exact_set_cover_reduced(masks: list[int], universe: int,
                             node_budget: int, init_size: int) -> Optional[list[int]]:
    init = greedy_set_cover_masks(masks, universe)
    if init is None:
        return None
    best = list(init)
    max_size = max((m.bit_count() for m in masks), default=1)
    covers_elt: dict[int, list[int]] = {}

    def sets_covering(bit: int) -> list[int]:
        if bit not in covers_elt:
            covers_elt[bit] = [i for i, m in enumerate(masks) if m >> bit & 1]
        return covers_elt[bit]

    nodes = 0
    exhausted = False

    def rec(uncovered: int, chosen: list[int]) -> None:
        nonlocal best, nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > node_budget:
            exhausted = True
            return
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        lb = -(-uncovered.bit_count() // max_size)
        if len(chosen) + lb >= len(best):
            return
        # branch on the uncovered element with the fewest covering sets
        pick_bit, pick_opts = -1, None
        rest = uncovered
        while rest:
            bit = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            opts = [i for i in sets_covering(bit)]
            if pick_opts is None or len(opts) < len(pick_opts):
                pick_bit, pick_opts = bit, opts
                if len(opts) <= 1:
                    break
        if not pick_opts:
            return
        pick_opts.sort(key=lambda i: -(masks[i] & uncovered).bit_count())
        for i in pick_opts:
            chosen.append(i)
            rec(uncovered & ~masks[i], chosen)
            chosen.pop()

    rec(universe, [])
    if exhausted:
        return None
    return best


def greedy_independent_set(adj: list[int]) -> list[int]:
    n = len(adj)
    kept, blocked = [], 0
    for i in range(n):
        if not (blocked >> i) & 1:
            kept.append(i)
            blocked |= adj[i] | (1 << i)
    return kept


def exact_max_independent_set(adj: list[int],
                              node_budget: int = 200_000) -> Optional[list[int]]:
    """Maximum independent set, or None once out of budget."""
    n = len(adj)
    best = greedy_independent_set(adj)
    nodes = 0
    exhausted = False
    full = (1 << n) - 1

    def rec(cand: int, cur: list[int]) -> None:
        nonlocal best, nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > node_budget:
            exhausted = True
            return
        if len(cur) + cand.bit_count() <= len(best):
            return
        if cand == 0:
            if len(cur) > len(best):
                best = list(cur)
            return
        # pivot: candidate vertex of maximum degree within cand
        pivot, pivot_deg = -1, -1
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            deg = (adj[v] & cand).bit_count()
            if deg > pivot_deg:
                pivot, pivot_deg = v, deg
        if pivot_deg == 0:
            # cand is fully independent
            merged = list(cur)
            rest = cand
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                merged.append(v)
            if len(merged) > len(best):
                best = merged
            return
        v = pivot
        cur.append(v)
        rec(cand & ~adj[v] & ~(1 << v), cur)
        cur.pop()
        rec(cand & ~(1 << v), cur)

    rec(full, [])
    if exhausted:
        return None
    return sorted(best)
