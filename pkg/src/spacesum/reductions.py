"""Knapsack and Binary Linear Programming on top of the Subset Sum solver.

Every linear side condition ``l <= w(X) <= u`` becomes a short list of
equality queries ``w_i(X) = t_i`` (weights halved at each level, with
boundary bands caught explicitly).  One query per constraint is packed
into a single Subset Sum instance in base ``B``, so each optimisation
step is a walk over a Cartesian product of queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .metrics import RunMetrics
from .rand_oracle import derive_subseed, normalize_seed
from .subset_sum import SubsetSumConfig, SubsetSumInstance, sss_solve

# The instances built here have small total weight, so a wide prime range
# lets phase one count exactly: NO answers are then certain.
REDUCTION_CONFIG = SubsetSumConfig(c_M=4096.0)
WORD_LIMIT = 1 << 62


@dataclass(frozen=True)
class EqualityQuery:
    weights: tuple[int, ...]
    target: int

    def holds(self, X) -> bool:
        return sum(self.weights[i - 1] for i in X) == self.target

    @property
    def attainable(self) -> bool:
        """Cheap necessary condition: the target lies between the extreme sums."""
        lo = sum(v for v in self.weights if v < 0)
        hi = sum(v for v in self.weights if v > 0)
        return lo <= self.target <= hi


def interval_to_equalities(w: Sequence[int], l: int, u: int) -> list[EqualityQuery]:
    """Queries such that ``l <= w(X) <= u`` iff some query holds for ``X``.

    Writing ``w = 2*w' + e`` with ``w' = floor(w / 2)`` gives
    ``w(X) = 2*w'(X) + e(X)`` with ``0 <= e(X) <= n``.  Values within ``n``
    of either end are asked for directly; the middle part recurses on
    ``w'`` over ``[ceil(l/2), floor((u-n)/2)]``.
    """
    n = len(w)
    w = tuple(int(v) for v in w)
    queries: list[EqualityQuery] = []
    while l <= u:
        if u - l + 1 > 4 * n + 4:
            lo = sum(v for v in w if v < 0)
            hi = sum(v for v in w if v > 0)
            l, u = max(l, lo), min(u, hi)
        if u - l + 1 <= 4 * n + 4:
            queries.extend(EqualityQuery(w, t) for t in range(l, u + 1))
            break
        queries.extend(EqualityQuery(w, t) for t in range(l, l + n))
        queries.extend(EqualityQuery(w, t) for t in range(u - n + 1, u + 1))
        w = tuple(v // 2 for v in w)
        l, u = -((-l) // 2), (u - n) // 2
    return queries


def query_count_bound(n: int, N: int, c_K: int = 12) -> float:
    return c_K * n * (math.log2(max(n * N, 1)) + 2)


def digit_base(queries: Sequence[EqualityQuery]) -> int:
    """Smallest power of two exceeding ``2*m*n`` and every digit's range."""
    n = len(queries[0].weights)
    m = max((abs(v) for q in queries for v in q.weights), default=0)
    need = 2 * m * n + 1
    for q in queries:
        need = max(need, sum(abs(v) for v in q.weights) + abs(q.target) + 1)
    return 1 << (need - 1).bit_length()


def combine_equalities(queries: Sequence[EqualityQuery], B: int | None = None) -> SubsetSumInstance:
    """Pack equality queries over the same ground set into one instance.

    Query ``j`` (from 1) occupies digit ``B**(j-1)``.  ``B`` must beat every
    digit's range ``sum|w| + |t|`` so that no carries can mix digits.
    """
    if not queries:
        raise ValueError("need at least one query")
    n = len(queries[0].weights)
    if any(len(q.weights) != n for q in queries):
        raise ValueError("queries must share the ground set")
    smallest = digit_base(queries)
    if B is None:
        B = smallest
    elif B & (B - 1) or B < smallest:
        raise ValueError(f"B must be a power of two >= {smallest}")
    w = [0] * n
    t = 0
    scale = 1
    for q in queries:
        for i, v in enumerate(q.weights):
            w[i] += v * scale
        t += q.target * scale
        scale *= B
    if sum(abs(v) for v in w) + abs(t) >= WORD_LIMIT:
        raise OverflowError("combined instance exceeds the 64-bit word width")
    return SubsetSumInstance(w, t)


def decode_digits(total: int, B: int, d: int) -> list[int]:
    """Balanced base-``B`` digits of ``total``, least significant first."""
    digits = []
    half = B // 2
    for _ in range(d):
        r = total % B
        if r >= half:
            r -= B
        digits.append(r)
        total = (total - r) // B
    return digits


# ---------------------------------------------------------------------------
# systems of interval constraints


@dataclass
class SystemResult:
    witness: frozenset[int] | None
    calls: int
    metrics: RunMetrics


def _solve_equalities(queries, seed: int, config: SubsetSumConfig, repeats: int, metrics: RunMetrics):
    # the top digit dominates the total weight, so give it the lightest query
    order = sorted(queries, key=lambda q: -sum(abs(v) for v in q.weights))
    inst = combine_equalities(order)
    for r in range(repeats):
        res = sss_solve(inst, derive_subseed(seed, r), config=config)
        metrics.merge(res.metrics)
        if res.found:
            X = res.witness
            if not all(q.holds(X) for q in queries):
                raise AssertionError("combined witness violates a query")
            return X, 1 + r
        if res.phase != "mitm":
            return None, 1 + r
    return None, repeats


def solve_interval_system(
    n: int,
    constraints: Sequence[tuple[Sequence[int], int, int]],
    seed: int,
    config: SubsetSumConfig = REDUCTION_CONFIG,
    repeats: int = 2,
) -> SystemResult:
    """Find ``X`` with ``l_j <= w_j(X) <= u_j`` for every constraint, or ``None``.

    Query tuples are explored depth first; a prefix whose partial system
    already has no solution is not extended.  A NO from the Monte Carlo
    phase is retried ``repeats`` times with fresh randomness.
    """
    metrics = RunMetrics()
    if not constraints:
        return SystemResult(frozenset(), 0, metrics)
    lists = []
    for w, l, u in constraints:
        if len(w) != n:
            raise ValueError("constraint length mismatch")
        qs = [q for q in interval_to_equalities(w, l, u) if q.attainable]
        if not qs:
            return SystemResult(None, 0, metrics)
        lists.append(qs)
    calls = 0
    prefix: list[EqualityQuery] = []

    def extend(depth: int):
        nonlocal calls
        for q in lists[depth]:
            prefix.append(q)
            X, c = _solve_equalities(prefix, derive_subseed(seed, calls), config, repeats, metrics)
            calls += c
            if X is not None:
                if depth + 1 == len(lists):
                    return X
                found = extend(depth + 1)
                if found is not None:
                    return found
            prefix.pop()
        return None

    X = extend(0)
    return SystemResult(X, calls, metrics)


# ---------------------------------------------------------------------------
# Knapsack


@dataclass
class KnapsackInstance:
    w: list[int]
    v: list[int]
    t: int

    def __post_init__(self):
        self.w = [int(a) for a in self.w]
        self.v = [int(a) for a in self.v]
        self.t = int(self.t)
        if len(self.w) != len(self.v):
            raise ValueError("weights and values differ in length")
        if not self.w:
            raise ValueError("need at least one item")

    @property
    def n(self) -> int:
        return len(self.w)

    def weight(self, X) -> int:
        return sum(self.w[i - 1] for i in X)

    def value(self, X) -> int:
        return sum(self.v[i - 1] for i in X)

    def feasible(self, X) -> bool:
        return self.weight(X) <= self.t


@dataclass
class OptResult:
    feasible: bool
    optimum: int | None
    witness: frozenset[int] | None
    n: int = 0
    decisions: int = 0
    calls: int = 0
    metrics: RunMetrics = field(default_factory=RunMetrics)

    @property
    def x(self) -> list[int] | None:
        if self.witness is None:
            return None
        return [int(i in self.witness) for i in range(1, self.n + 1)]


def relaxation_bound(n: int, fixed, objective) -> int | None:
    """Floor of the LP optimum over ``[0, 1]^n``; ``None`` if the solver gives up."""
    if not fixed:
        return sum(a for a in objective if a > 0)
    A = np.array([row for row, _, _ in fixed], dtype=float)
    u = np.array([hi for _, _, hi in fixed], dtype=float)
    lp = linprog(-np.asarray(objective, dtype=float), A_ub=A, b_ub=u, bounds=[(0, 1)] * n, method="highs")
    if lp.status != 0:
        return None
    return math.floor(-lp.fun + 1e-6)


def _maximize(n, fixed, objective, hi, seed, config, repeats) -> OptResult:
    """Best ``objective(X)`` over the ``X`` meeting every ``fixed`` interval."""
    res = OptResult(False, None, None, n=n)

    def decide(extra):
        sub = derive_subseed(seed, res.decisions)
        res.decisions += 1
        out = solve_interval_system(n, fixed + extra, sub, config, repeats)
        res.calls += out.calls
        res.metrics.merge(out.metrics)
        return out.witness

    X = decide([])
    if X is None:
        return res
    best = X
    a = sum(objective[i - 1] for i in X)
    bound = relaxation_bound(n, fixed, objective)
    b = hi if bound is None else min(hi, bound)
    while a < b:
        mid = (a + b + 1) // 2
        # after a NO at some theta nothing feasible reaches theta, so b stays tight
        X = decide([(objective, mid, b)])
        if X is None:
            b = mid - 1
        else:
            best = X
            a = sum(objective[i - 1] for i in X)
    res.feasible, res.optimum, res.witness = True, a, frozenset(best)
    return res


def knapsack_solve(
    inst: KnapsackInstance,
    seed: int | str = 0,
    config: SubsetSumConfig = REDUCTION_CONFIG,
    repeats: int = 2,
) -> OptResult:
    """Maximise ``v(X)`` subject to ``w(X) <= t`` by binary search on the value."""
    seed = normalize_seed(seed)
    w_lo = sum(a for a in inst.w if a < 0)
    v_hi = sum(a for a in inst.v if a > 0)
    with RunMetrics().timed() as clock:
        if inst.t < w_lo:
            res = OptResult(False, None, None, n=inst.n)
        else:
            res = _maximize(inst.n, [(inst.w, w_lo, inst.t)], inst.v, v_hi, seed, config, repeats)
    res.metrics.wall_time = clock.wall_time
    if res.feasible:
        X = res.witness
        if not inst.feasible(X) or inst.value(X) != res.optimum:
            raise AssertionError("knapsack witness failed verification")
    return res


# ---------------------------------------------------------------------------
# Binary Linear Programming


@dataclass
class BipInstance:
    objective: list[int]
    constraints: list[tuple[list[int], int]]

    def __post_init__(self):
        self.objective = [int(a) for a in self.objective]
        self.constraints = [([int(a) for a in row], int(u)) for row, u in self.constraints]
        if any(len(row) != self.n for row, _ in self.constraints):
            raise ValueError("constraint length mismatch")

    @property
    def n(self) -> int:
        return len(self.objective)

    @property
    def m(self) -> int:
        vals = [abs(a) for a in self.objective] + [abs(a) for row, _ in self.constraints for a in row]
        return max(vals, default=0)

    def value(self, X) -> int:
        return sum(self.objective[i - 1] for i in X)

    def feasible(self, X) -> bool:
        return all(sum(row[i - 1] for i in X) <= u for row, u in self.constraints)


def bip_solve(
    inst: BipInstance,
    seed: int | str = 0,
    config: SubsetSumConfig = REDUCTION_CONFIG,
    repeats: int = 2,
) -> OptResult:
    """Minimise ``<v, x>`` over ``x in {0,1}^n`` subject to ``<a_j, x> <= u_j``.

    Reported ``optimum`` is the minimum of the original objective.
    """
    seed = normalize_seed(seed)
    fixed = []
    infeasible = False
    for row, u in inst.constraints:
        lo = sum(a for a in row if a < 0)
        if u < lo:
            infeasible = True
        fixed.append((row, lo, u))
    neg = [-a for a in inst.objective]
    hi = sum(a for a in neg if a > 0)
    with RunMetrics().timed() as clock:
        if infeasible:
            res = OptResult(False, None, None, n=inst.n)
        else:
            res = _maximize(inst.n, fixed, neg, hi, seed, config, repeats)
    res.metrics.wall_time = clock.wall_time
    if res.feasible:
        res.optimum = -res.optimum
        X = res.witness
        if not inst.feasible(X) or inst.value(X) != res.optimum:
            raise AssertionError("BIP witness failed verification")
    return res

