"""Collision search on functional graphs.

:func:`floyd_find` analyses a single walk in constant space.
:func:`collide` runs many walks and reports every vertex reached from two
or more distinct discovered vertices, keeping only O(s) words of state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels


class FunctionalGraph:
    """Vertices ``1..n`` with one out-edge each, given by ``step``.

    ``step`` may be any pure callable; :meth:`from_array` builds a graph
    over an explicit successor table, which lets :func:`collide` use the
    compiled kernel.
    """

    def __init__(self, n: int, step: Callable[[int], int], successors: np.ndarray | None = None):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        self.n = n
        self._step = step
        self.successors = successors
        self.eval_counter = 0

    @classmethod
    def from_array(cls, successors: Sequence[int]) -> "FunctionalGraph":
        succ = np.asarray(successors, dtype=np.int64)
        if succ.ndim != 1 or succ.size == 0:
            raise ValueError("successor table must be a non-empty vector")
        n = int(succ.size)
        if succ.min() < 1 or succ.max() > n:
            raise ValueError("successors must lie in [1, n]")
        table = succ.tolist()
        return cls(n, lambda v: table[v - 1], succ)

    def step(self, v: int) -> int:
        self.eval_counter += 1
        return self._step(v)

    __call__ = step


@dataclass(frozen=True)
class CycleInfo:
    tail_len: int
    cycle_len: int
    entry_vertex: int
    colliding_pair: tuple[int, int] | None
    steps: int = 0


def floyd_find(g: FunctionalGraph, start: int, step_budget: int) -> CycleInfo | None:
    """Tail and cycle length of the walk from ``start``; None if over budget.

    Uses Floyd's tortoise and hare: at most about ``3 * (mu + lambda)``
    step evaluations.
    """
    if not 1 <= start <= g.n:
        raise ValueError("start vertex out of range")
    if step_budget <= 0:
        raise ValueError("budget must be positive")
    steps = 0

    def adv(v):
        nonlocal steps
        steps += 1
        if steps > step_budget:
            raise _OverBudget
        return g.step(v)

    try:
        tort = adv(start)
        hare = adv(adv(start))
        while tort != hare:
            tort = adv(tort)
            hare = adv(adv(hare))
        # tail length: restart one pointer, advance both to the entry
        mu = 0
        a, b = start, hare
        pa = pb = None
        while a != b:
            pa, pb = a, b
            a, b = adv(a), adv(b)
            mu += 1
        lam = 1
        c = adv(a)
        while c != a:
            c = adv(c)
            lam += 1
    except _OverBudget:
        return None
    pair = (pa, pb) if mu >= 1 else None
    return CycleInfo(mu, lam, a, pair, steps)


class _OverBudget(Exception):
    pass


@dataclass
class CollisionReport:
    entries: dict[int, frozenset[int]] = field(default_factory=dict)
    steps: int = 0
    peak_words: int = 0
    prefix: int = 0
    visited: int = 0

    def as_set(self) -> set[tuple[int, frozenset[int]]]:
        return set(self.entries.items())

    def __len__(self) -> int:
        return len(self.entries)


def _py_step(ctx, v):
    return ctx(v)


def collide(g: FunctionalGraph, K: Sequence[int], L: int, compiled: bool | None = None) -> CollisionReport:
    """Merge points of the walks from the longest admissible prefix of ``K``.

    Returns every vertex ``v`` together with its in-neighbours inside the
    set reached from ``K[:l]``, where ``l`` is the largest prefix whose
    reachable set has at most ``L`` vertices, whenever there are two or
    more of them.  Requires ``1 <= len(K) <= L``.
    """
    s = len(K)
    if s < 1 or L < 1:
        raise ValueError("need at least one start and L >= 1")
    if s > L:
        raise ValueError("number of starts must not exceed L")
    starts = np.asarray(K, dtype=np.int64)
    if starts.min() < 1 or starts.max() > g.n:
        raise ValueError("start vertex out of range")
    ws = _kernels.new_workspace(s)
    if compiled is None:
        compiled = g.successors is not None
    if compiled:
        if g.successors is None:
            raise ValueError("compiled collide needs an explicit successor table")
        out = _kernels.collide_array(g.successors, starts, L, *ws)
        g.eval_counter += int(out[0])
    else:
        out = _kernels.collide_core.py_func(_py_step, g.step, starts, L, *ws)
    steps, peak, prefix, visited, _ = (int(v) for v in out)
    return CollisionReport(_read_entries(*ws), steps, peak, prefix, visited)


def _read_entries(keys, nxt, dist, phead, pcount, pred_v, pred_next):
    entries = {}
    for slot in np.flatnonzero((keys != 0) & (pcount >= 2)):
        preds = []
        e = int(phead[slot])
        while e >= 0:
            preds.append(int(pred_v[e]))
            e = int(pred_next[e])
        entries[int(keys[slot])] = frozenset(preds)
    return entries


def walk_trace(g: FunctionalGraph, z: Sequence[int], K: Sequence[int], L: int) -> list[int]:
    """Concatenated walks from ``K``, each cut at the first repeated z-value.

    The vertex carrying the repeated value is kept; the trace stops after
    ``L`` vertices.
    """
    seen: set[int] = set()
    trace: list[int] = []
    for k in K:
        v = k
        while len(trace) < L:
            trace.append(v)
            if z[v - 1] in seen:
                break
            seen.add(z[v - 1])
            v = g.step(v)
        if len(trace) >= L:
            break
    return trace
