import math
import random

import numpy as np
import pytest

from spacesum.collide import FunctionalGraph, collide, floyd_find, walk_trace
from spacesum.oracles import collide_oracle

GOLDEN_Z = (11, 7, 3, 8, 3, 4, 1, 1)


def golden_graph():
    return FunctionalGraph.from_array([z % 8 + 1 for z in GOLDEN_Z])


def test_golden_collide_output():
    rep = collide(golden_graph(), [3, 5, 7], 8)
    assert rep.entries == {4: frozenset({1, 3, 5}), 2: frozenset({7, 8})}


def test_golden_python_path_matches():
    g = golden_graph()
    rep = collide(g, [3, 5, 7], 8, compiled=False)
    assert rep.entries == {4: frozenset({1, 3, 5}), 2: frozenset({7, 8})}
    assert g.eval_counter == rep.steps


def test_golden_walk_trace():
    assert walk_trace(golden_graph(), GOLDEN_Z, [3, 5, 7], 8) == [3, 4, 1, 4, 5, 7, 2, 8]


def test_walk_trace_on_path_is_truncated():
    n = 20
    g = FunctionalGraph.from_array([min(v + 1, n) for v in range(1, n + 1)])
    assert walk_trace(g, list(range(1, n + 1)), [3], 6) == [3, 4, 5, 6, 7, 8]


def test_floyd_golden():
    info = floyd_find(golden_graph(), 3, 100)
    assert (info.tail_len, info.cycle_len, info.entry_vertex) == (1, 2, 4)
    assert info.colliding_pair == (3, 1)


def test_floyd_fixed_point_and_cycle():
    g = FunctionalGraph.from_array([1, 1])
    info = floyd_find(g, 1, 10)
    assert (info.tail_len, info.cycle_len, info.colliding_pair) == (0, 1, None)
    k = 9
    cyc = FunctionalGraph.from_array([v % k + 1 for v in range(1, k + 1)])
    info = floyd_find(cyc, 4, 100)
    assert (info.tail_len, info.cycle_len, info.entry_vertex) == (0, k, 4)


def test_floyd_budget_exhausted():
    k = 50
    cyc = FunctionalGraph.from_array([v % k + 1 for v in range(1, k + 1)])
    assert floyd_find(cyc, 1, 20) is None


def full_memory_rho(succ, start):
    pos = {}
    v, i = start, 0
    while v not in pos:
        pos[v] = i
        v = succ[v - 1]
        i += 1
    return pos[v], i - pos[v], v


def test_floyd_exact_against_simulation():
    rng = np.random.default_rng(1)
    for n in (1, 2, 17, 300, 4096):
        for _ in range(20):
            succ = rng.integers(1, n + 1, n).tolist()
            g = FunctionalGraph.from_array(succ)
            start = int(rng.integers(1, n + 1))
            mu, lam, entry = full_memory_rho(succ, start)
            info = floyd_find(g, start, 10**6)
            assert (info.tail_len, info.cycle_len, info.entry_vertex) == (mu, lam, entry)
            assert info.steps <= 5 * (mu + lam) + 3
            if mu:
                a, b = info.colliding_pair
                assert a != b and succ[a - 1] == succ[b - 1] == entry


def test_permutation_gives_empty_report():
    rng = random.Random(2)
    perm = list(range(1, 101))
    rng.shuffle(perm)
    g = FunctionalGraph.from_array(perm)
    for L in (5, 50, 100):
        assert len(collide(g, [rng.randint(1, 100) for _ in range(5)], L)) == 0


def test_random_graphs_match_oracle():
    rng = np.random.default_rng(3)
    for _ in range(300):
        n = int(rng.integers(1, 300))
        succ = rng.integers(1, n + 1, n)
        g = FunctionalGraph.from_array(succ)
        s = int(rng.integers(1, 9))
        K = rng.integers(1, n + 1, s).tolist()
        L = int(rng.integers(s, max(2 * n + 2, s + 1)))
        rep = collide(g, K, L)
        ref = collide_oracle(g.step, K, L)
        assert rep.as_set() == ref.as_set()
        assert rep.prefix == ref.prefix and rep.visited == ref.visited


def test_report_soundness_and_seed_accounting():
    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.integers(2, 500))
        succ = rng.integers(1, n + 1, n)
        g = FunctionalGraph.from_array(succ)
        s = int(rng.integers(1, 17))
        K = rng.integers(1, n + 1, s).tolist()
        rep = collide(g, K, n)
        for v, preds in rep.entries.items():
            assert len(preds) >= 2
            assert all(succ[u - 1] == v for u in preds)
        assert sum(len(p) - 1 for p in rep.entries.values()) <= s


def test_space_and_work_laws():
    rng = np.random.default_rng(5)
    n = 4096
    for s in (1, 4, 16, 64):
        for L in (n // 8, n // 4, n // 2, n):
            for _ in range(3):
                g = FunctionalGraph.from_array(rng.integers(1, n + 1, n))
                rep = collide(g, rng.integers(1, n + 1, s).tolist(), L)
                assert rep.peak_words <= 40 * s
                assert rep.steps <= 4 * L * math.log2(s + 1) * min(s, math.log2(n))


def test_preconditions():
    g = golden_graph()
    with pytest.raises(ValueError):
        collide(g, [1, 2, 3], 2)
    with pytest.raises(ValueError):
        collide(g, [], 4)
    with pytest.raises(ValueError):
        collide(g, [9], 4)
    with pytest.raises(ValueError):
        FunctionalGraph.from_array([0, 1])


def test_generic_step_function_graph():
    n = 97
    g = FunctionalGraph(n, lambda v: (v * v + 1) % n + 1)
    K = [5, 17, 60]
    rep = collide(g, K, n)
    ref = collide_oracle(lambda v: (v * v + 1) % n + 1, K, n)
    assert rep.as_set() == ref.as_set()
