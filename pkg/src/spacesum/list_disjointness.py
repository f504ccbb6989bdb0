"""List Disjointness by collision search on a randomly merged list.

Given lists ``x`` and ``y`` of length ``n``, each restart picks a merge
selector ``r`` and seeds ``K``, builds the functional graph
``f(i) = h(z_i)`` over the merged list ``z`` and runs :func:`collide` on
it.  Any merge point with one predecessor from each side and equal
z-values is a solution.  Total work is about ``n * sqrt(p / s)`` steps,
where ``p`` bounds the number of pseudo-solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import _kernels
from .lists import IntegerList, pseudo_solution_pair
from .metrics import RunMetrics
from .rand_oracle import HashOracle, derive_subseed

DEFAULT_C_B = 1.0
_RESTART_LABEL = 0x4C44


@dataclass
class LDInstance:
    x: IntegerList
    y: IntegerList
    p_bound: int
    s: int = 1
    m: int | None = None

    def __post_init__(self):
        if not isinstance(self.x, IntegerList):
            self.x = IntegerList.explicit(self.x)
        if not isinstance(self.y, IntegerList):
            self.y = IntegerList.explicit(self.y)
        if len(self.x) != len(self.y):
            raise ValueError("lists must have equal length")
        if self.s < 1:
            raise ValueError("space parameter must be positive")
        if self.p_bound < 2 * len(self.x):
            # each list alone contributes at least n pseudo-solutions
            raise ValueError("p_bound must be at least 2n")

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def measured(cls, x, y, s: int = 1) -> "LDInstance":
        """Instance whose ``p_bound`` is the exact pseudo-solution count."""
        x = x if isinstance(x, IntegerList) else IntegerList.explicit(x)
        y = y if isinstance(y, IntegerList) else IntegerList.explicit(y)
        return cls(x, y, pseudo_solution_pair(x, y), s)


@dataclass
class LDResult:
    found: bool
    i: int | None = None
    j: int | None = None
    metrics: RunMetrics = field(default_factory=RunMetrics)
    s: int = 1
    L: int = 1

    @property
    def pair(self) -> tuple[int, int] | None:
        return (self.i, self.j) if self.found else None


def effective_parameters(n: int, s: int, p_bound: int) -> tuple[int, int, list[str]]:
    """Clamp ``s`` to the admissible range and pick the walk budget ``L``."""
    notes = []
    p = max(p_bound, 1)
    s_max = max(1, n * n // p)
    if s > s_max:
        notes.append(f"s clamped from {s} to {s_max}")
        s = s_max
    L = max(1, math.ceil(0.5 * n * math.sqrt(s / p)))
    if L < 2 <= n:
        # a single visited vertex can never show a collision
        notes.append(f"L raised from {L} to 2")
        L = 2
    if L < s:
        notes.append(f"L raised from {L} to {s}")
        L = s
    return s, L, notes


def ld_search(
    inst: LDInstance, oracle: HashOracle, budget_steps: int, seed: int | None = None
) -> LDResult:
    """Search for ``(i, j)`` with ``x[i] == y[j]`` within ``budget_steps`` work.

    Work counts oracle evaluations plus list accesses.  Restart randomness
    comes from ``seed`` (default: a subseed of the oracle's seed).  A
    returned pair has always been checked against the lists.
    """
    n = inst.n
    if oracle.n != n:
        raise ValueError("oracle range must equal the list length")
    if budget_steps <= 0:
        raise ValueError("budget must be positive")
    s, L, notes = effective_parameters(n, inst.s, inst.p_bound)
    master = derive_subseed(oracle.seed, _RESTART_LABEL) if seed is None else seed
    metrics = RunMetrics(notes=notes)
    with metrics.timed():
        found, i, j, steps, accesses, restarts, peak = _kernels.ld_kernel(
            *inst.x.kernel_args(),
            *inst.y.kernel_args(),
            n,
            s,
            L,
            oracle.mode_code,
            _kernels.U64(oracle.seed),
            oracle.shift,
            _kernels.U64(master),
            budget_steps,
        )
    metrics.step_evals = int(steps)
    metrics.list_accesses = int(accesses)
    metrics.restarts = int(restarts)
    metrics.peak_tracked_words = int(peak)
    if found:
        i, j = int(i), int(j)
        if inst.x[i] != inst.y[j]:
            raise AssertionError("kernel returned an unverified pair")
        return LDResult(True, i, j, metrics, s, L)
    return LDResult(False, metrics=metrics, s=s, L=L)


def default_budget(n: int, s: int, p_bound: int, c_b: float = DEFAULT_C_B) -> int:
    log_n = max(math.log2(n), 10.0)  # small lists still get a useful number of restarts
    return max(1, math.ceil(c_b * n * math.sqrt(p_bound / s) * log_n * log_n))


def ld_decide(
    x: IntegerList | Sequence[int],
    y: IntegerList | Sequence[int],
    s: int,
    p_bound: int | None,
    oracle: HashOracle,
    c_b: float = DEFAULT_C_B,
    seed: int | None = None,
) -> LDResult:
    """Monte Carlo decision: a found pair is certain, "disjoint" may be wrong."""
    inst = LDInstance.measured(x, y, s) if p_bound is None else LDInstance(x, y, p_bound, s)
    return ld_search(inst, oracle, default_budget(inst.n, inst.s, inst.p_bound, c_b), seed)
