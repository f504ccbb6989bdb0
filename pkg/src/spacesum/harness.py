"""Instance generation, solver dispatch, reports and benchmark suites.

Instances are plain JSON objects with a ``type`` field (``ld``,
``subset_sum``, ``knapsack``, ``bip`` or ``ksum``).  A report records the
instance digest, the seed, the algorithm parameters, the outcome, the
witness and the run metrics.  Apart from ``wall_time`` a report is a pure
function of (instance, seed, flags).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import random
import statistics
from dataclasses import dataclass

import numpy as np

from . import oracles
from .ksum import KSumInstance, ksum_mitm_solve, ksum_random_solve
from .list_disjointness import DEFAULT_C_B, LDInstance, default_budget, ld_search
from .rand_oracle import HashOracle, derive_subseed, normalize_seed
from .reductions import BipInstance, KnapsackInstance, bip_solve, knapsack_solve
from .subset_sum import SubsetSumInstance, sss_solve

SEED_ENV = "SPACESUM_SEED"
DEFAULT_SEED = 0x5EED

FAMILIES = (
    "random-ld",
    "planted-ld",
    "random-subset-sum",
    "random-knapsack",
    "bip-random",
    "random-ksum",
    "planted-ksum",
)

# outcome -> process exit code
EXIT_CODES = {"YES": 0, "OPTIMAL": 0, "NO": 2, "INFEASIBLE": 2}

REPORT_FIELDS = ("digest", "seed", "type", "algorithm", "params", "outcome", "witness", "value", "metrics", "oracle")
CSV_COLUMNS = (
    "family",
    "n",
    "s",
    "trials",
    "median_step_evals",
    "median_restarts",
    "max_peak_words",
    "success_rate",
    "errors",
)


class InstanceError(ValueError):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return normalize_seed(raw) if raw else DEFAULT_SEED


def instance_digest(inst: dict) -> str:
    canon = json.dumps(inst, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# generators


def _planted_ld(n: int, m: int, rng: random.Random):
    x = [rng.randint(1, m) for _ in range(n)]
    taken = set(x)
    free = [v for v in range(1, m + 1) if v not in taken]
    y = [rng.choice(free) for _ in range(n)]
    i, j = rng.randrange(n), rng.randrange(n)
    y[j] = x[i]
    return x, y, (i + 1, j + 1)


def generate(family: str, params: dict, seed: int) -> tuple[dict, dict | None]:
    """Build an instance (and, for planted families, its truth record)."""
    rng = random.Random(normalize_seed(seed))
    n = int(params.get("n", 16))
    if n < 1:
        raise InstanceError("n must be positive")
    if family == "random-ld":
        m = int(params.get("m", 4 * n))
        x = [rng.randint(1, m) for _ in range(n)]
        y = [rng.randint(1, m) for _ in range(n)]
        return {"type": "ld", "x": x, "y": y, "s": int(params.get("s", 1))}, None
    if family == "planted-ld":
        m = int(params.get("m", 4 * n))
        if m <= n:
            raise InstanceError("planted-ld needs m > n")
        x, y, pair = _planted_ld(n, m, rng)
        inst = {"type": "ld", "x": x, "y": y, "s": int(params.get("s", 1))}
        return inst, {"pair": list(pair)}
    if family == "random-subset-sum":
        N = int(params.get("N", 2**n))
        w = [rng.randint(1, N) for _ in range(n)]
        if params.get("yes", True):
            X = sorted(i + 1 for i in range(n) if rng.random() < 0.5)
            return {"type": "subset_sum", "w": w, "t": sum(w[i - 1] for i in X)}, {"witness": X}
        return {"type": "subset_sum", "w": w, "t": rng.randint(0, sum(w))}, None
    if family == "random-knapsack":
        hi = int(params.get("max_entry", 15))
        w = [rng.randint(1, hi) for _ in range(n)]
        v = [rng.randint(1, hi) for _ in range(n)]
        return {"type": "knapsack", "w": w, "v": v, "t": rng.randint(0, sum(w))}, None
    if family == "bip-random":
        d = int(params.get("d", 2))
        m = int(params.get("m", 5))
        obj = [rng.randint(-m, m) for _ in range(n)]
        cons = [{"a": [rng.randint(-m, m) for _ in range(n)], "u": rng.randint(-m, 2 * m)} for _ in range(d)]
        return {"type": "bip", "objective": obj, "constraints": cons}, None
    if family in ("random-ksum", "planted-ksum"):
        k = int(params.get("k", 2))
        m = int(params.get("m", 4 * n ** (k - 1) if k > 2 else 4 * n))
        if m % n:
            raise InstanceError("m must be a multiple of n for random k-Sum")
        lists = [[rng.randint(1, m) for _ in range(n)] for _ in range(k)]
        if family == "random-ksum":
            return {"type": "ksum", "lists": lists, "t": rng.randint(k, k * m), "m": m}, None
        idx = [rng.randrange(n) for _ in range(k)]
        t = sum(lists[j][idx[j]] for j in range(k - 1)) + rng.randint(1, m)
        lists[-1][idx[-1]] = t - sum(lists[j][idx[j]] for j in range(k - 1))
        return {"type": "ksum", "lists": lists, "t": t, "m": m}, {"indices": [i + 1 for i in idx]}
    raise InstanceError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# solving


@dataclass
class Flags:
    s: int | None = None
    p_bound: int | None = None
    mode: str | None = None
    budget: int | None = None
    oracle: bool = False


def _require(inst: dict, *keys):
    missing = [k for k in keys if k not in inst]
    if missing:
        raise InstanceError(f"instance lacks {', '.join(missing)}")


def _solve_ld(inst, seed, flags):
    _require(inst, "x", "y")
    s = flags.s or int(inst.get("s", 1))
    p = flags.p_bound or inst.get("p_bound")
    ld = LDInstance.measured(inst["x"], inst["y"], s) if p is None else LDInstance(inst["x"], inst["y"], int(p), s)
    budget = flags.budget or default_budget(ld.n, ld.s, ld.p_bound, DEFAULT_C_B)
    res = ld_search(ld, HashOracle(seed, ld.n), budget)
    params = {"s": res.s, "L": res.L, "p_bound": ld.p_bound, "budget": budget}
    witness = list(res.pair) if res.found else None
    return "list-disjointness", params, ("YES" if res.found else "NO"), witness, None, res.metrics


def _solve_subset_sum(inst, seed, flags):
    _require(inst, "w", "t")
    res = sss_solve(SubsetSumInstance(inst["w"], inst["t"]), seed, mode=flags.mode or "auto")
    details = {k: v for k, v in res.details.items() if k != "split"}
    params = {"phase": res.phase, **details}
    witness = sorted(res.witness) if res.found else None
    return "subset-sum", params, ("YES" if res.found else "NO"), witness, None, res.metrics


def _solve_knapsack(inst, seed, flags):
    _require(inst, "w", "v", "t")
    res = knapsack_solve(KnapsackInstance(inst["w"], inst["v"], inst["t"]), seed)
    params = {"decisions": res.decisions, "subset_sum_calls": res.calls}
    if not res.feasible:
        return "knapsack", params, "INFEASIBLE", None, None, res.metrics
    return "knapsack", params, "OPTIMAL", sorted(res.witness), res.optimum, res.metrics


def _solve_bip(inst, seed, flags):
    _require(inst, "objective")
    cons = [(c["a"], c["u"]) for c in inst.get("constraints", [])]
    res = bip_solve(BipInstance(inst["objective"], cons), seed)
    params = {"decisions": res.decisions, "subset_sum_calls": res.calls, "d": len(cons)}
    if not res.feasible:
        return "bip", params, "INFEASIBLE", None, None, res.metrics
    return "bip", params, "OPTIMAL", res.x, res.optimum, res.metrics


def _solve_ksum(inst, seed, flags):
    _require(inst, "lists", "t")
    ks = KSumInstance(inst["lists"], inst["t"], inst.get("m"))
    mode = flags.mode or "random"
    if mode == "mitm":
        res = ksum_mitm_solve(ks, s=flags.s or 1, budget=flags.budget, seed=seed)
    elif mode == "random":
        res = ksum_random_solve(ks, budget=flags.budget, seed=seed)
    else:
        raise InstanceError(f"unknown k-Sum mode {mode!r}")
    params = {"mode": mode, "k": ks.k, **res.details}
    witness = list(res.indices) if res.found else None
    return f"ksum-{mode}", params, ("YES" if res.found else "NO"), witness, None, res.metrics


SOLVERS = {
    "ld": _solve_ld,
    "subset_sum": _solve_subset_sum,
    "knapsack": _solve_knapsack,
    "bip": _solve_bip,
    "ksum": _solve_ksum,
}


def oracle_check(inst: dict, outcome: str, witness, value) -> dict:
    """Compare a solver outcome with the exhaustive reference."""
    kind = inst["type"]
    if kind == "ld":
        pairs = oracles.ld_oracle(inst["x"], inst["y"])
        ok = (tuple(witness) in pairs) if witness else True
        return {"answer": "YES" if pairs else "NO", "agrees": ok and (outcome == "YES") == bool(pairs)}
    if kind == "subset_sum":
        if len(inst["w"]) > 24:
            return {"skipped": "too large"}
        yes = oracles.subset_sum_decide(inst["w"], inst["t"])
        ok = witness is None or sum(inst["w"][i - 1] for i in witness) == inst["t"]
        return {"answer": "YES" if yes else "NO", "agrees": ok and (outcome == "YES") == yes}
    if kind == "knapsack":
        best = oracles.knapsack_oracle(inst["w"], inst["v"], inst["t"])
        ref = None if best is None else best[0]
        return {"optimum": ref, "agrees": ref == value}
    if kind == "bip":
        cons = [(c["a"], c["u"]) for c in inst.get("constraints", [])]
        best = oracles.bip_oracle(inst["objective"], cons)
        ref = None if best is None else best[0]
        return {"optimum": ref, "agrees": ref == value}
    if kind == "ksum":
        if math.prod(len(w) for w in inst["lists"]) > 10**8:
            return {"skipped": "too large"}
        ref = oracles.ksum_oracle(inst["lists"], inst["t"])
        ok = witness is None or sum(w[i - 1] for w, i in zip(inst["lists"], witness)) == inst["t"]
        return {"answer": "NO" if ref is None else "YES", "agrees": ok and (outcome == "YES") == (ref is not None)}
    return {"skipped": "no oracle"}


def solve(inst: dict, seed: int | str | None = None, flags: Flags | None = None) -> dict:
    """Run the solver for ``inst['type']`` and build its report."""
    if not isinstance(inst, dict) or "type" not in inst:
        raise InstanceError("instance must be a JSON object with a 'type' field")
    kind = inst["type"]
    if kind not in SOLVERS:
        raise InstanceError(f"unknown instance type {kind!r}")
    flags = flags or Flags()
    seed = default_seed() if seed is None else normalize_seed(seed)
    algorithm, params, outcome, witness, value, metrics = SOLVERS[kind](inst, seed, flags)
    report = {
        "digest": instance_digest(inst),
        "seed": f"{seed:#x}",
        "type": kind,
        "algorithm": algorithm,
        "params": params,
        "outcome": outcome,
        "witness": witness,
        "value": value,
        "metrics": metrics.to_dict(),
        "oracle": oracle_check(inst, outcome, witness, value) if flags.oracle else None,
    }
    return {k: report[k] for k in REPORT_FIELDS}


def verify(inst: dict, report: dict) -> tuple[bool, str]:
    """Independent check of a report's witness against its instance."""
    if report.get("digest") != instance_digest(inst):
        return False, "digest mismatch"
    kind, outcome, wit = inst.get("type"), report.get("outcome"), report.get("witness")
    if outcome in ("NO", "INFEASIBLE"):
        return True, "no witness to check"
    if wit is None:
        return False, "positive outcome without a witness"
    if kind == "ld":
        i, j = wit
        ok = 1 <= i <= len(inst["x"]) and 1 <= j <= len(inst["y"]) and inst["x"][i - 1] == inst["y"][j - 1]
    elif kind == "subset_sum":
        ok = SubsetSumInstance(inst["w"], inst["t"]).check(wit)
    elif kind == "knapsack":
        ks = KnapsackInstance(inst["w"], inst["v"], inst["t"])
        ok = ks.feasible(wit) and ks.value(wit) == report.get("value")
    elif kind == "bip":
        bp = BipInstance(inst["objective"], [(c["a"], c["u"]) for c in inst.get("constraints", [])])
        X = [i + 1 for i, b in enumerate(wit) if b]
        ok = bp.feasible(X) and bp.value(X) == report.get("value")
    elif kind == "ksum":
        ok = KSumInstance(inst["lists"], inst["t"]).check(wit)
    else:
        return False, f"unknown type {kind!r}"
    return ok, "witness verified" if ok else "witness rejected"


def strip_wall_time(report):
    """Copy of a report (or nested structure) without any ``wall_time`` entries."""
    if isinstance(report, dict):
        return {k: strip_wall_time(v) for k, v in report.items() if k != "wall_time"}
    if isinstance(report, list):
        return [strip_wall_time(v) for v in report]
    return report


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# benchmarks


def fit_exponent(ns, values) -> float | None:
    """Least-squares slope of ``log(value)`` against ``log(n)``."""
    pts = [(n, v) for n, v in zip(ns, values) if n > 0 and v and v > 0]
    if len(pts) < 2 or len({n for n, _ in pts}) < 2:
        return None
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    return float(np.polyfit(x, y, 1)[0])


def bench(suite: dict, seed: int | None = None) -> tuple[list[dict], dict]:
    """Run a suite and return ``(rows, summary)``.

    ``suite = {"runs": [{"family": ..., "sizes": [...], "s": [...],
    "trials": T, "params": {...}, "flags": {...}}, ...]}``.  Trial seeds
    come from the master seed and the grid position, so a rerun gives the
    same rows.  A failing trial is counted in ``errors`` and the run
    continues.
    """
    master = default_seed() if seed is None else normalize_seed(seed)
    rows = []
    fits = {}
    for r_idx, run in enumerate(suite.get("runs", [])):
        family = run["family"]
        flags = Flags(**run.get("flags", {}))
        trials = int(run.get("trials", 5))
        run_rows = []
        for n in run.get("sizes", []):
            for s in run.get("s", [1]):
                stats = {"steps": [], "restarts": [], "peak": 0, "ok": 0, "errors": 0}
                for t in range(trials):
                    cell = derive_subseed(master, ((r_idx * 1_000_003 + n) * 1009 + s) * 10007 + t)
                    try:
                        inst, _ = generate(family, {**run.get("params", {}), "n": n, "s": s}, cell)
                        rep = solve(inst, derive_subseed(cell, 1), Flags(**{**flags.__dict__, "s": s}))
                    except Exception:  # a failed trial is recorded, the grid goes on
                        stats["errors"] += 1
                        continue
                    m = rep["metrics"]
                    stats["steps"].append(m["step_evals"])
                    stats["restarts"].append(m["restarts"])
                    stats["peak"] = max(stats["peak"], m["peak_tracked_words"])
                    stats["ok"] += rep["outcome"] in ("YES", "OPTIMAL")
                done = trials - stats["errors"]
                row = {
                    "family": family,
                    "n": n,
                    "s": s,
                    "trials": trials,
                    "median_step_evals": statistics.median(stats["steps"]) if stats["steps"] else None,
                    "median_restarts": statistics.median(stats["restarts"]) if stats["restarts"] else None,
                    "max_peak_words": stats["peak"],
                    "success_rate": stats["ok"] / done if done else None,
                    "errors": stats["errors"],
                }
                run_rows.append(row)
        rows.extend(run_rows)
        for s in run.get("s", [1]):
            sub = [r for r in run_rows if r["s"] == s]
            fits[f"{family}/s={s}"] = fit_exponent([r["n"] for r in sub], [r["median_step_evals"] for r in sub])
    summary = {"seed": f"{master:#x}", "rows": len(rows), "exponents": fits}
    return rows, summary


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k) for k in CSV_COLUMNS})
    return buf.getvalue()
