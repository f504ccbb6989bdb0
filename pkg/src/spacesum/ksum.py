"""Random k-Sum through List Disjointness.

For two lists the search is List Disjointness between ``w1`` and
``t - w2``.  When the entries are uniform in ``[m]`` and ``n`` divides
``m`` the hash can simply be ``v mod n``, so no key is needed.  More
lists are handled by fixing one entry from each of the last ``k - 2``
lists at a time (an odometer over their indices).  The even-k
Meet-in-the-Middle variant instead searches two implicit lists of
``n^(k/2)`` half-sums each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .list_disjointness import LDInstance, default_budget, ld_search
from .lists import IntegerList
from .metrics import RunMetrics
from .rand_oracle import HashOracle, derive_subseed, normalize_seed

# restarts are nearly memoryless, so 90% success needs about 2.3x the mean
# work; at n ~ 100 that mean is ~40 n sqrt(p), above the plain LD default
KSUM_C_B = 3.0
_LABEL_HASH = 0x4B53
_LABEL_INNER = 0x4B49


@dataclass
class KSumInstance:
    lists: list[list[int]]
    t: int
    m: int | None = None

    def __post_init__(self):
        self.lists = [[int(v) for v in w] for w in self.lists]
        self.t = int(self.t)
        if len(self.lists) < 2:
            raise ValueError("k must be at least 2")
        n = len(self.lists[0])
        if n == 0 or any(len(w) != n for w in self.lists):
            raise ValueError("all lists must have the same positive length")

    @property
    def k(self) -> int:
        return len(self.lists)

    @property
    def n(self) -> int:
        return len(self.lists[0])

    def check(self, idx: Sequence[int]) -> bool:
        """``idx`` holds 1-based positions, one per list."""
        if len(idx) != self.k or not all(1 <= i <= self.n for i in idx):
            return False
        return sum(w[i - 1] for w, i in zip(self.lists, idx)) == self.t

    def attainable(self) -> bool:
        lo = sum(min(w) for w in self.lists)
        hi = sum(max(w) for w in self.lists)
        return lo <= self.t <= hi


@dataclass
class KSumResult:
    found: bool
    indices: tuple[int, ...] | None
    metrics: RunMetrics = field(default_factory=RunMetrics)
    details: dict = field(default_factory=dict)


def two_sum_p_bound(n: int, m: int | None) -> int:
    """Pseudo-solution bound for two uniform lists over ``m`` values."""
    if not m:
        return 4 * n
    return math.ceil(2 * n + 2 * n * (n - 1) / m)


def random_oracle(inst: KSumInstance, seed: int, metrics: RunMetrics) -> HashOracle:
    n = inst.n
    if inst.m is not None and inst.m % n == 0:
        return HashOracle(seed, n, mode="modular")
    metrics.note("m is not a multiple of n: using the keyed hash instead of v mod n")
    return HashOracle(derive_subseed(seed, _LABEL_HASH), n)


def ksum_random_solve(
    inst: KSumInstance,
    budget: int | None = None,
    seed: int | str = 0,
    c_b: float = KSUM_C_B,
) -> KSumResult:
    """Find one index per list whose entries sum to ``t``.

    ``budget`` caps the work of every inner two-list search; by default it
    is the List Disjointness budget for ``p = Theta(n)``.  A NO answer means
    nothing was found within the budget.
    """
    seed = normalize_seed(seed)
    metrics = RunMetrics()
    n, k = inst.n, inst.k
    if not inst.attainable():
        metrics.note("target outside the range of attainable sums")
        return KSumResult(False, None, metrics)
    oracle = random_oracle(inst, seed, metrics)
    p_bound = two_sum_p_bound(n, inst.m)
    inner = budget if budget is not None else default_budget(n, 1, p_bound, c_b)
    x = IntegerList.explicit(inst.lists[0])
    second = inst.lists[1]
    rest = inst.lists[2:]
    lo2, hi2 = min(inst.lists[0]) + min(second), max(inst.lists[0]) + max(second)
    details = {"p_bound": p_bound, "inner_budget": inner, "hash": oracle.mode, "tuples": 0}

    with metrics.timed():
        # odometer over the last k - 2 lists, one index each
        odo = [0] * len(rest)
        count = 0
        while True:
            t2 = inst.t - sum(w[i] for w, i in zip(rest, odo))
            if lo2 <= t2 <= hi2:
                y = IntegerList([second], sign=-1, offset=t2)
                res = ld_search(
                    LDInstance(x, y, p_bound, 1), oracle, inner, seed=derive_subseed(seed, _LABEL_INNER + count)
                )
                count += 1
                metrics.merge(res.metrics)
                if res.found:
                    idx = (res.i, res.j) + tuple(i + 1 for i in odo)
                    details["tuples"] = count
                    if not inst.check(idx):
                        raise AssertionError("k-Sum witness failed verification")
                    return KSumResult(True, idx, metrics, details)
            c = len(odo) - 1
            while c >= 0:
                odo[c] += 1
                if odo[c] < n:
                    break
                odo[c] = 0
                c -= 1
            if c < 0:
                break
    details["tuples"] = count
    return KSumResult(False, None, metrics, details)


def decode_tuple(i: int, n: int, width: int) -> tuple[int, ...]:
    """1-based mixed-radix index into ``width`` 1-based positions."""
    r = i - 1
    out = []
    for _ in range(width):
        out.append(r % n + 1)
        r //= n
    return tuple(out)


def mitm_p_bound(N: int, m: int | None, half: int, c_p: float = 2.0) -> int:
    """``c * N`` plus the expected cross-collisions of ``N`` half-sums over their range."""
    extra = 0 if not m else 2 * N * (N - 1) / (half * m)
    return math.ceil(c_p * N + extra)


def ksum_mitm_solve(
    inst: KSumInstance,
    s: int = 1,
    oracle: HashOracle | None = None,
    budget: int | None = None,
    seed: int | str = 0,
    c_b: float = KSUM_C_B,
) -> KSumResult:
    """Even-k search over the ``n^(k/2)`` half-sums of each side with space ``s``."""
    k, n = inst.k, inst.n
    if k % 2:
        raise ValueError("the Meet-in-the-Middle variant needs even k")
    seed = normalize_seed(seed)
    metrics = RunMetrics()
    if not inst.attainable():
        metrics.note("target outside the range of attainable sums")
        return KSumResult(False, None, metrics)
    half = k // 2
    N = n**half
    x = IntegerList(inst.lists[:half])
    y = IntegerList(inst.lists[half:], sign=-1, offset=inst.t)
    if oracle is None:
        oracle = HashOracle(derive_subseed(seed, _LABEL_HASH), N)
    p_bound = mitm_p_bound(N, inst.m, half)
    if budget is None:
        budget = default_budget(N, s, p_bound, c_b)
    res = ld_search(LDInstance(x, y, p_bound, s), oracle, budget, seed=derive_subseed(seed, _LABEL_INNER))
    metrics.merge(res.metrics)
    details = {"p_bound": p_bound, "budget": budget, "N": N, "s": res.s, "L": res.L}
    if not res.found:
        return KSumResult(False, None, metrics, details)
    idx = decode_tuple(res.i, n, half) + decode_tuple(res.j, n, half)
    if not inst.check(idx):
        raise AssertionError("k-Sum witness failed verification")
    return KSumResult(True, idx, metrics, details)
