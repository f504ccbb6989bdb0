"""Exhaustive reference solvers.

Nothing here is space-efficient; these functions exist to produce ground
truth for tests, acceptance runs and the ``--oracle`` cross-checks.  Where
useful, each problem has two independent methods so they can check each
other.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Callable, Sequence

from .collide import CollisionReport


# ---------------------------------------------------------------- List Disjointness


def ld_oracle(x: Sequence[int], y: Sequence[int]) -> set[tuple[int, int]]:
    """All (i, j), 1-based, with x[i] == y[j], by sorting and merging."""
    xs = sorted((v, i) for i, v in enumerate(x, 1))
    ys = sorted((v, j) for j, v in enumerate(y, 1))
    out = set()
    a = b = 0
    while a < len(xs) and b < len(ys):
        if xs[a][0] < ys[b][0]:
            a += 1
        elif xs[a][0] > ys[b][0]:
            b += 1
        else:
            v = xs[a][0]
            a2, b2 = a, b
            while a2 < len(xs) and xs[a2][0] == v:
                a2 += 1
            while b2 < len(ys) and ys[b2][0] == v:
                b2 += 1
            out.update((xs[p][1], ys[q][1]) for p in range(a, a2) for q in range(b, b2))
            a, b = a2, b2
    return out


def ld_oracle_quadratic(x: Sequence[int], y: Sequence[int]) -> set[tuple[int, int]]:
    return {(i, j) for i, xv in enumerate(x, 1) for j, yv in enumerate(y, 1) if xv == yv}


# ---------------------------------------------------------------- Subset Sum


def subset_sum_oracle(w: Sequence[int], t: int) -> list[frozenset[int]]:
    """Every subset (1-based indices) summing to ``t``, by enumeration."""
    n = len(w)
    if n > 24:
        raise ValueError("enumeration limited to 24 items")
    sums = [0] * (1 << n)
    out = []
    for mask in range(1 << n):
        if mask:
            low = (mask & -mask).bit_length() - 1
            sums[mask] = sums[mask & (mask - 1)] + w[low]
        if sums[mask] == t:
            out.append(frozenset(i + 1 for i in range(n) if mask >> i & 1))
    return out


def subset_sums(w: Sequence[int]) -> list[int]:
    """Sums of all subsets, indexed by bitmask."""
    sums = [0]
    for v in w:
        sums += [s + v for s in sums]
    return sums


def subset_sum_mitm_count(w: Sequence[int], t: int) -> int:
    """Number of subsets summing to ``t`` via a hash table over one half."""
    h = len(w) // 2
    table = defaultdict(int)
    for s in subset_sums(w[:h]):
        table[s] += 1
    return sum(table.get(t - s, 0) for s in subset_sums(w[h:]))


def subset_sum_decide(w: Sequence[int], t: int) -> bool:
    h = len(w) // 2
    left = set(subset_sums(w[:h]))
    return any(t - s in left for s in subset_sums(w[h:]))


# ---------------------------------------------------------------- k-Sum


def ksum_oracle(lists: Sequence[Sequence[int]], t: int) -> tuple[int, ...] | None:
    """First index tuple (1-based) with sum ``t`` in lexicographic order."""
    if not lists:
        return None
    total = 1
    for lst in lists:
        total *= len(lst)
    if total > 10**8:
        raise ValueError("search space too large")
    *outer, last = lists
    where = {}
    for j, v in enumerate(last, 1):
        where.setdefault(v, j)
    for idx in itertools.product(*(range(1, len(lst) + 1) for lst in outer)):
        rest = t - sum(lst[i - 1] for lst, i in zip(outer, idx))
        j = where.get(rest)
        if j is not None:
            return idx + (j,)
    return None


def ksum_oracle_join(lists: Sequence[Sequence[int]], t: int) -> bool:
    """Decision by joining sum tables of the two halves."""
    h = len(lists) // 2

    def sums(part):
        acc = {0}
        for lst in part:
            acc = {a + v for a in acc for v in lst}
        return acc

    left = sums(lists[:h])
    return any(t - s in left for s in sums(lists[h:]))


# ---------------------------------------------------------------- collide


def reachable_prefix(step: Callable[[int], int], K: Sequence[int], L: int) -> tuple[set[int], int]:
    """Reachable set of the longest prefix of ``K`` with at most ``L`` vertices."""
    seen: set[int] = set()
    used = 0
    for k in K:
        v = k
        fresh = set()
        while v not in seen and v not in fresh:
            fresh.add(v)
            v = step(v)
        if len(seen) + len(fresh) > L:
            break
        seen |= fresh
        used += 1
    return seen, used


def collide_oracle(step: Callable[[int], int], K: Sequence[int], L: int) -> CollisionReport:
    reached, used = reachable_prefix(step, K, L)
    preds: dict[int, set[int]] = defaultdict(set)
    for u in reached:
        preds[step(u)].add(u)
    entries = {v: frozenset(p) for v, p in preds.items() if len(p) > 1}
    return CollisionReport(entries, prefix=used, visited=len(reached))


# ---------------------------------------------------------------- Knapsack and BIP


def knapsack_oracle(w: Sequence[int], v: Sequence[int], t: int) -> tuple[int, frozenset[int]] | None:
    """Best value and a maximizer over all subsets with weight at most ``t``."""
    n = len(w)
    best = None
    for mask in range(1 << n):
        items = [i for i in range(n) if mask >> i & 1]
        if sum(w[i] for i in items) > t:
            continue
        val = sum(v[i] for i in items)
        if best is None or val > best[0]:
            best = (val, frozenset(i + 1 for i in items))
    return best


def bip_oracle(objective: Sequence[int], constraints: Sequence[tuple[Sequence[int], int]]):
    """Minimum of <v, x> over feasible binary x, with a minimizer, or None."""
    n = len(objective)
    best = None
    for x in itertools.product((0, 1), repeat=n):
        if all(sum(a * b for a, b in zip(row, x)) <= u for row, u in constraints):
            val = sum(a * b for a, b in zip(objective, x))
            if best is None or val < best[0]:
                best = (val, x)
    return best
