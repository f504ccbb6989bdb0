import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spacesum.list_disjointness import (
    LDInstance,
    default_budget,
    effective_parameters,
    ld_decide,
    ld_search,
)
from spacesum.lists import IntegerList
from spacesum.oracles import ld_oracle
from spacesum.rand_oracle import HashOracle


def planted(n, rng, m=None):
    m = m or 4 * n
    x = [rng.randint(1, m) for _ in range(n)]
    free = sorted(set(range(1, m + 1)) - set(x))
    y = [rng.choice(free) for _ in range(n)]
    i, j = rng.randrange(n), rng.randrange(n)
    y[j] = x[i]
    return x, y


def test_diagonal_precheck():
    res = ld_search(LDInstance.measured([3, 7], [9, 7]), HashOracle(1, 2), 100)
    assert res.pair == (2, 2)
    assert res.metrics.restarts == 0


def test_disjoint_lists_never_report():
    inst = LDInstance.measured([1, 2, 3, 4], [5, 6, 7, 8])
    for budget in (1, 50, 5000):
        assert not ld_search(inst, HashOracle(2, 4), budget).found


def test_singleton_lists():
    res = ld_decide([7], [7], 1, None, HashOracle(0, 1))
    assert res.pair == (1, 1)


def test_parity_disjoint_lists():
    n = 256
    res = ld_decide(list(range(2, 2 * n + 1, 2)), list(range(1, 2 * n, 2)), 1, None, HashOracle(3, n))
    assert not res.found
    assert res.metrics.step_evals + res.metrics.list_accesses >= default_budget(n, 1, 2 * n)


def test_effective_parameters():
    s, L, notes = effective_parameters(1024, 1, 2048)
    assert (s, L, notes) == (1, math.ceil(0.5 * 1024 / math.sqrt(2048)), [])
    s, L, notes = effective_parameters(16, 100, 64)
    assert s == 4 and L == 4 and any("clamped" in x for x in notes)
    s, L, notes = effective_parameters(4, 1, 16)
    assert L == 2 and notes


def test_instance_validation():
    with pytest.raises(ValueError):
        LDInstance([1, 2], [1], 4)
    with pytest.raises(ValueError):
        LDInstance([1, 2], [3, 4], 3)
    with pytest.raises(ValueError):
        LDInstance([1, 2], [3, 4], 4, s=0)
    with pytest.raises(ValueError):
        ld_search(LDInstance([1, 2], [3, 4], 4), HashOracle(0, 3), 10)


def test_planted_small_instances():
    rng = random.Random(11)
    hits = 0
    for t in range(40):
        x, y = planted(256, rng)
        res = ld_decide(x, y, 1, None, HashOracle(t, 256))
        hits += res.found
        if res.found:
            assert x[res.i - 1] == y[res.j - 1]
    assert hits >= 30


def test_deterministic_given_seed():
    rng = random.Random(12)
    x, y = planted(128, rng)
    inst = LDInstance.measured(x, y)
    a = ld_search(inst, HashOracle(9, 128), 10**6)
    b = ld_search(inst, HashOracle(9, 128), 10**6)
    assert (a.pair, a.metrics.step_evals, a.metrics.restarts) == (b.pair, b.metrics.step_evals, b.metrics.restarts)


def test_larger_space_lowers_work():
    rng = random.Random(13)
    n = 1024
    work = {1: [], 16: []}
    for t in range(30):
        x, y = planted(n, rng)
        for s in work:
            res = ld_search(LDInstance.measured(x, y, s), HashOracle(t, n), 10**9)
            assert res.found
            work[s].append(res.metrics.step_evals)
    assert sum(work[16]) < sum(work[1]) / 2


def test_implicit_lists_supported():
    x = IntegerList([(0, 3), (0, 9), (0, 14)])
    y = IntegerList([(0, 20), (0, 5), (0, 8)], sign=-1, offset=31)
    res = ld_search(LDInstance.measured(x, y), HashOracle(1, 8), 10**6)
    assert res.found and x[res.i] == y[res.j]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-30, 30), min_size=1, max_size=40),
    st.data(),
)
def test_no_false_positives(x, data):
    y = data.draw(st.lists(st.integers(-30, 30), min_size=len(x), max_size=len(x)))
    res = ld_decide(x, y, 1, None, HashOracle(data.draw(st.integers(0, 2**32)), len(x)))
    if res.found:
        assert (res.i, res.j) in ld_oracle(x, y)
