import random
from collections import Counter

import pytest

from spacesum.ksum import (
    KSumInstance,
    decode_tuple,
    ksum_mitm_solve,
    ksum_random_solve,
    mitm_p_bound,
    two_sum_p_bound,
)
from spacesum.oracles import ksum_oracle
from spacesum.rand_oracle import HashOracle


def planted(k, n, m, rng):
    lists = [[rng.randint(1, m) for _ in range(n)] for _ in range(k)]
    idx = [rng.randrange(n) for _ in range(k)]
    t = sum(w[i] for w, i in zip(lists, idx))
    return KSumInstance(lists, t, m)


def test_unattainable_targets():
    inst = KSumInstance([[1, 2, 3], [4, 5, 6]], 100, 8)
    res = ksum_random_solve(inst)
    assert not res.found and res.metrics.step_evals == 0
    low = KSumInstance([[1, 2], [3, 4], [1, 1], [2, 2]], -5)
    assert not ksum_mitm_solve(low).found


def test_instance_validation():
    with pytest.raises(ValueError):
        KSumInstance([[1, 2]], 3)
    with pytest.raises(ValueError):
        KSumInstance([[1, 2], [3]], 3)
    inst = KSumInstance([[1, 2], [3, 4]], 6)
    assert inst.check((2, 2)) and not inst.check((1, 1)) and not inst.check((0, 2))


def test_two_sum_planted():
    rng = random.Random(1)
    hits = 0
    for trial in range(40):
        inst = planted(2, 256, 1024, rng)
        res = ksum_random_solve(inst, seed=trial)
        hits += res.found
        if res.found:
            assert inst.check(res.indices)
        assert res.metrics.peak_tracked_words <= 40
    assert hits >= 36


def test_three_sum_planted():
    rng = random.Random(2)
    hits = 0
    for trial in range(10):
        inst = planted(3, 32, 4 * 32**3, rng)
        res = ksum_random_solve(inst, seed=trial)
        hits += res.found
        if res.found:
            assert inst.check(res.indices)
    assert hits >= 8


def test_no_solution_reports_no():
    inst = KSumInstance([[2, 4, 6, 8], [10, 12, 14, 16], [2, 2, 2, 2]], 21, 16)
    assert ksum_oracle(inst.lists, inst.t) is None
    assert not ksum_random_solve(inst, budget=2000).found


def test_mitm_four_sum_planted():
    rng = random.Random(3)
    hits = 0
    for trial in range(10):
        inst = planted(4, 12, 12**4, rng)
        res = ksum_mitm_solve(inst, seed=trial)
        hits += res.found
        if res.found:
            assert inst.check(res.indices)
    assert hits >= 9


def test_mitm_two_sum_agrees_with_random_solver():
    rng = random.Random(4)
    inst = planted(2, 64, 256, rng)
    a = ksum_random_solve(inst, seed=1)
    b = ksum_mitm_solve(inst, seed=1)
    assert a.found and b.found
    assert inst.check(a.indices) and inst.check(b.indices)


def test_mitm_rejects_odd_k():
    with pytest.raises(ValueError):
        ksum_mitm_solve(KSumInstance([[1], [2], [3]], 6))


def test_modular_hash_exactly_uniform_over_period():
    n, m = 64, 4 * 64
    o = HashOracle(0, n, mode="modular")
    counts = Counter(o(v) for v in range(1, m + 1))
    assert set(counts) == set(range(1, n + 1)) and set(counts.values()) == {m // n}


def test_prf_fallback_when_m_not_multiple():
    rng = random.Random(5)
    inst = planted(2, 60, 250, rng)
    res = ksum_random_solve(inst, seed=2)
    assert any("keyed hash" in note for note in res.metrics.notes)
    assert res.details["hash"] == "prf"


def test_decode_tuple():
    assert decode_tuple(1, 5, 2) == (1, 1)
    assert decode_tuple(7, 5, 2) == (2, 2)
    assert decode_tuple(25, 5, 2) == (5, 5)
    assert sorted({decode_tuple(i, 3, 3) for i in range(1, 28)}) == sorted(
        (a, b, c) for a in range(1, 4) for b in range(1, 4) for c in range(1, 4)
    )


def test_p_bounds():
    assert two_sum_p_bound(10, None) == 40
    assert two_sum_p_bound(1024, 4096) == 2048 + 512 - 1 + 1
    assert mitm_p_bound(100, None, 2) == 200
