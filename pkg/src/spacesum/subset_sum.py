"""Subset Sum in polynomial space by a two-phase win-win.

Phase one counts solutions modulo a random prime ``mu`` with a
root-of-unity sum over a prime field.  It costs about ``mu * n`` field
operations, so it pays off when the instance has few distinct subset
sums.  Phase two splits the items into halves and searches the two
implicit lists of half-sums for a common value with the List
Disjointness solver.  That works well when there are many distinct sums,
because then the halves have few repeated values.

Only verified witnesses are ever returned; "no" answers are Monte Carlo.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from sympy import isprime, nextprime, primitive_root

from . import _kernels
from .list_disjointness import LDInstance, ld_search
from .lists import decode_subset, implicit_subset_sum_list
from .metrics import RunMetrics
from .rand_oracle import HashOracle, derive_subseed, normalize_seed


@dataclass(frozen=True)
class SubsetSumConfig:
    c_M: float = 1.0
    c_p: float = 1.0
    # mean List Disjointness work on these lists is 40-60 * 2^(0.86 n)
    c_cut: float = 200.0
    small_range_retries: int = 3
    max_items: int = 44


DEFAULT_CONFIG = SubsetSumConfig()

_LABEL_SMALL = 1
_LABEL_SPLIT = 2
_LABEL_HASH = 3


@dataclass
class SubsetSumInstance:
    w: list[int]
    t: int

    def __post_init__(self):
        self.w = [int(v) for v in self.w]
        self.t = int(self.t)

    @property
    def n(self) -> int:
        return len(self.w)

    def padded(self) -> "SubsetSumInstance":
        """Copy with an extra zero weight when ``n`` is odd."""
        return SubsetSumInstance(self.w + [0] * (self.n % 2), self.t)

    def check(self, X) -> bool:
        return all(1 <= i <= self.n for i in X) and sum(self.w[i - 1] for i in X) == self.t


@dataclass
class SubsetSumResult:
    found: bool
    witness: frozenset[int] | None
    phase: str
    metrics: RunMetrics = field(default_factory=RunMetrics)
    details: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# phase one: counting modulo a small prime


@dataclass
class SmallRangeResult:
    count: int | None
    witness: frozenset[int] | None
    mu: int | None
    q: int | None
    attempts: int
    work: int
    exhausted: bool = False

    @property
    def found(self) -> bool:
        return self.witness is not None


def random_prime(lo: int, hi: int, rng: random.Random) -> int:
    """Uniform-ish prime in ``[lo, hi]`` (next prime after a uniform point)."""
    lo = max(lo, 2)
    for _ in range(64):
        p = nextprime(rng.randint(lo, hi) - 1)
        if p <= hi:
            return int(p)
    return int(nextprime(lo - 1))


def field_for(mu: int, n: int, rng: random.Random) -> tuple[int, int]:
    """Prime ``q = 1 (mod mu)`` above ``2**n`` and an element of order ``mu``."""
    k = (1 << n) // mu + 1
    while not isprime(k * mu + 1):
        k += 1
    q = k * mu + 1
    g = int(primitive_root(q))
    # mu is prime, so any non-trivial power of g^((q-1)/mu) has order mu
    omega = pow(g, (q - 1) // mu * rng.randrange(1, mu), q)
    return q, omega


def _count_py(wr: Sequence[int], tr: int, mu: int, q: int, omega: int) -> int:
    gens = [pow(omega, r, q) for r in wr]
    pows = [1] * len(wr)
    tgen = pow(omega, (mu - tr) % mu, q)
    tpow = 1
    total = 0
    for _ in range(mu):
        prod = 1
        for i, g in enumerate(gens):
            prod = prod * (1 + pows[i]) % q
            pows[i] = pows[i] * g % q
        total = (total + prod * tpow) % q
        tpow = tpow * tgen % q
    return total * pow(mu, q - 2, q) % q


def residue_count(wr: Sequence[int], tr: int, mu: int, q: int, omega: int) -> int:
    """Subsets of ``wr`` with sum congruent to ``tr`` modulo ``mu`` (exact if < q)."""
    if q < (1 << 32):
        arr = np.asarray(wr, dtype=np.int64)
        count, _ = _kernels.residue_count(arr, len(arr), tr % mu, mu, q, omega, np.iinfo(np.int64).max)
        return int(count)
    return _count_py(wr, tr % mu, mu, q, omega)


def solve_small_range(
    w: Sequence[int],
    t: int,
    M: int,
    seed: int = 0,
    budget: int | None = None,
    retries: int = 3,
) -> SmallRangeResult:
    """Count solutions modulo a random prime in ``[M, 2M]`` and extract one.

    Extraction fixes the items one at a time from the last, keeping the
    residue count positive, and the resulting set is checked on the
    original integers.  A failed check (two sums colliding modulo the
    prime) triggers a retry with a fresh prime.  ``budget`` caps the total
    number of field multiplications.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    n = len(w)
    rng = random.Random(normalize_seed(seed))
    work = 0
    last_count = None
    mu = q = None
    for attempt in range(1, retries + 1):
        mu = random_prime(M, 2 * M, rng)
        q, omega = field_for(mu, n, rng)
        wr = [v % mu for v in w]
        target = t % mu
        cost = mu * max(n, 1)
        if budget is not None and work + cost > budget:
            return SmallRangeResult(last_count, None, mu, q, attempt - 1, work, exhausted=True)
        work += cost
        count = residue_count(wr, target, mu, q, omega)
        last_count = count
        if count == 0:
            return SmallRangeResult(0, None, mu, q, attempt, work)
        chosen = []
        for i in range(n - 1, -1, -1):
            cost = mu * max(i, 1)
            if budget is not None and work + cost > budget:
                return SmallRangeResult(count, None, mu, q, attempt, work, exhausted=True)
            work += cost
            if residue_count(wr[:i], (target - wr[i]) % mu, mu, q, omega) > 0:
                chosen.append(i + 1)
                target = (target - wr[i]) % mu
        if sum(w[i - 1] for i in chosen) == t:
            return SmallRangeResult(count, frozenset(chosen), mu, q, attempt, work)
    return SmallRangeResult(last_count, None, mu, q, retries, work, exhausted=True)


# ---------------------------------------------------------------------------
# the driver


def small_range_cap(inst: SubsetSumInstance, c_M: float) -> int:
    """Prime range for phase one, capped where the count becomes exact."""
    # residues of w(X) - t are distinct once mu exceeds every |w(X) - t|
    lo = sum(v for v in inst.w if v < 0)
    hi = sum(v for v in inst.w if v > 0)
    exact = max(hi - inst.t, inst.t - lo) + 1
    return max(2, min(math.ceil(c_M * 2 ** (0.86 * inst.n)), exact))


def random_split(n: int, rng: random.Random) -> tuple[list[int], list[int]]:
    items = list(range(1, n + 1))
    rng.shuffle(items)
    half = n // 2
    return sorted(items[:half]), sorted(items[half:])


def sss_solve(
    inst: SubsetSumInstance,
    seed: int | str = 0,
    mode: str = "auto",
    config: SubsetSumConfig = DEFAULT_CONFIG,
) -> SubsetSumResult:
    if mode not in ("auto", "small-range", "mitm"):
        raise ValueError(f"unknown mode {mode!r}")
    if inst.n > config.max_items:
        raise ValueError(f"at most {config.max_items} items supported")
    seed = normalize_seed(seed)
    metrics = RunMetrics()
    with metrics.timed():
        if inst.t == 0:
            return SubsetSumResult(True, frozenset(), "trivial", metrics)
        if inst.n == 0:
            return SubsetSumResult(False, None, "trivial", metrics)
        padded = inst.padded()
        n = padded.n
        details: dict = {"n": n}

        if mode in ("auto", "small-range"):
            M = small_range_cap(padded, config.c_M)
            budget = M * (n + 1) ** 2
            sr = solve_small_range(
                padded.w, padded.t, M, derive_subseed(seed, _LABEL_SMALL), budget, config.small_range_retries
            )
            metrics.step_evals += sr.work
            details.update(M=M, mu=sr.mu, q=sr.q, residue_count=sr.count, attempts=sr.attempts)
            if sr.found:
                X = frozenset(i for i in sr.witness if i <= inst.n)
                return SubsetSumResult(True, X, "small-range", metrics, details)
            if sr.count == 0 and sr.mu is not None:
                # no subset is even congruent to t: a certain NO
                return SubsetSumResult(False, None, "small-range", metrics, details)
            if mode == "small-range":
                return SubsetSumResult(False, None, "small-range", metrics, details)

        res = _mitm(padded, seed, config, metrics, details)
        if res is not None:
            X = frozenset(i for i in res if i <= inst.n)
            return SubsetSumResult(True, X, "mitm", metrics, details)
        return SubsetSumResult(False, None, "mitm", metrics, details)


def _mitm(inst: SubsetSumInstance, seed: int, config: SubsetSumConfig, metrics: RunMetrics, details: dict):
    n = inst.n
    left, right = random_split(n, random.Random(derive_subseed(seed, _LABEL_SPLIT)))
    x = implicit_subset_sum_list(inst.w, left)
    y = implicit_subset_sum_list(inst.w, right, sign=-1, offset=inst.t)
    N = len(x)
    p_bound = max(math.ceil(config.c_p * 2 ** (0.72 * n)), 2 * N)
    budget = math.ceil(config.c_cut * 2 ** (0.86 * n))
    oracle = HashOracle(derive_subseed(seed, _LABEL_HASH), N)
    res = ld_search(LDInstance(x, y, p_bound, 1), oracle, budget)
    metrics.merge(res.metrics)
    details.update(split=[left, right], p_bound=p_bound, ld_budget=budget, L=res.L)
    if not res.found:
        return None
    X = decode_subset(left, res.i) + decode_subset(right, res.j)
    if not inst.check(X):
        raise AssertionError("decoded witness does not verify")
    return X


# ---------------------------------------------------------------------------
# numeric checks of the counting bounds


def distinct_sums_count(w: Sequence[int]) -> int:
    if len(w) > 24:
        raise ValueError("enumeration limited to 24 items")
    sums = np.zeros(1, dtype=np.int64)
    for v in w:
        sums = np.concatenate([sums, sums + v])
    return int(np.unique(sums).size)


def signed_zero_counts(w: Sequence[int]) -> list[int]:
    """``out[d]`` = number of x in {-1,0,1}^n with <w,x> = 0 and support size d."""
    n = len(w)
    if n > 14:
        raise ValueError("enumeration limited to 14 items")
    sums = np.zeros(1, dtype=np.int64)
    supp = np.zeros(1, dtype=np.int64)
    for v in w:
        sums = np.concatenate([sums, sums + v, sums - v])
        supp = np.concatenate([supp, supp + 1, supp + 1])
    return np.bincount(supp[sums == 0], minlength=n + 1).tolist()


def count_signed_zero(w: Sequence[int], d: int) -> int:
    counts = signed_zero_counts(w)
    return counts[d] if 0 <= d < len(counts) else 0


def verify_counting_bound(w: Sequence[int]) -> bool:
    """|w(2^[n])| * |C_d| <= 2^n * C(n, ceil(d/2)) * (n+1)^6 for every d >= 1."""
    n = len(w)
    distinct = distinct_sums_count(w)
    zeros = signed_zero_counts(w)
    poly = (n + 1) ** 6
    return all(distinct * zeros[d] <= (1 << n) * math.comb(n, (d + 1) // 2) * poly for d in range(1, n + 1))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def entropy_objective(delta: float) -> float:
    return (
        -0.36
        + binary_entropy(delta / 2)
        + binary_entropy((0.5 - delta) / (1 - delta)) * (1 - delta)
        - delta
    )


def entropy_exponent(grid: int = 2001) -> tuple[float, float]:
    """Maximum of :func:`entropy_objective` on [0, 1/2] and where it is attained."""
    xs = np.linspace(0.0, 0.5, grid)
    k = int(np.argmax([entropy_objective(x) for x in xs]))
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, grid - 1)]
    opt = minimize_scalar(lambda d: -entropy_objective(d), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return -float(opt.fun), float(opt.x)
