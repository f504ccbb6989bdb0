import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spacesum.oracles import (
    bip_oracle,
    collide_oracle,
    knapsack_oracle,
    ksum_oracle,
    ksum_oracle_join,
    ld_oracle,
    ld_oracle_quadratic,
    subset_sum_decide,
    subset_sum_mitm_count,
    subset_sum_oracle,
)

short_lists = st.lists(st.integers(-8, 8), max_size=25)


def test_ld_examples():
    assert ld_oracle([1, 2, 3], [4, 5, 6]) == set()
    x = [5, 7, 5]
    assert ld_oracle(x, x) == {(1, 1), (2, 2), (3, 3), (1, 3), (3, 1)}


def test_ld_planted_pair_found():
    rng = random.Random(0)
    x = [rng.randint(1, 10**6) for _ in range(200)]
    y = [rng.randint(1, 10**6) for _ in range(200)]
    y[17] = x[103]
    assert (104, 18) in ld_oracle(x, y)


@given(short_lists, short_lists)
def test_ld_methods_agree(x, y):
    assert ld_oracle(x, y) == ld_oracle_quadratic(x, y)


def test_subset_sum_examples():
    assert subset_sum_oracle([1, 2, 4], 7) == [frozenset({1, 2, 3})]
    assert subset_sum_oracle([1, 2, 4], 8) == []
    with pytest.raises(ValueError):
        subset_sum_oracle([1] * 25, 3)


@given(st.lists(st.integers(-20, 20), max_size=12), st.integers(-40, 40))
def test_subset_sum_methods_agree(w, t):
    sols = subset_sum_oracle(w, t)
    assert len(sols) == subset_sum_mitm_count(w, t)
    assert bool(sols) == subset_sum_decide(w, t)
    assert all(sum(w[i - 1] for i in X) == t for X in sols)


def test_subset_sum_mitm_cross_check_n24():
    rng = random.Random(1)
    w = [rng.randint(1, 10**5) for _ in range(24)]
    t = sum(rng.sample(w, 12))
    assert len(subset_sum_oracle(w, t)) == subset_sum_mitm_count(w, t) >= 1


def test_ksum_examples():
    rng = random.Random(2)
    lists = [[rng.randint(1, 4096) for _ in range(64)] for _ in range(2)]
    t = lists[0][5] + lists[1][40]
    idx = ksum_oracle(lists, t)
    assert idx is not None and lists[0][idx[0] - 1] + lists[1][idx[1] - 1] == t
    assert ksum_oracle(lists, 10**6) is None
    with pytest.raises(ValueError):
        ksum_oracle([[0] * 1000] * 3, 0)


@given(st.lists(st.lists(st.integers(-5, 5), min_size=1, max_size=5), min_size=2, max_size=3), st.integers(-15, 15))
def test_ksum_methods_agree(lists, t):
    assert (ksum_oracle(lists, t) is not None) == ksum_oracle_join(lists, t)


def test_collide_oracle_examples():
    z = [11, 7, 3, 8, 3, 4, 1, 1]
    step = lambda i: z[i - 1] % 8 + 1
    rep = collide_oracle(step, [3, 5, 7], 8)
    assert rep.as_set() == {(4, frozenset({1, 3, 5})), (2, frozenset({7, 8}))}
    perm = lambda i: i % 10 + 1
    assert collide_oracle(perm, [1, 4], 10).as_set() == set()
    assert collide_oracle(step, [3, 5, 7], 8).as_set() == rep.as_set()


def test_knapsack_and_bip_oracles():
    assert knapsack_oracle([3, 4], [5, 6], 3) == (5, frozenset({1}))
    assert knapsack_oracle([3], [5], 2) == (0, frozenset())
    assert knapsack_oracle([1], [1], -1) is None
    assert bip_oracle([1, -2, 3], []) == (-2, (0, 1, 0))
    assert bip_oracle([1, 1], [([1, 1], -1)]) is None
