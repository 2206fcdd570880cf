from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cliquemul.partition import (PartitionError, avg_partition,
                                 balanced_assignment, chunk_partition,
                                 chunk_sizes, padded_balanced_groups,
                                 weight_balanced_partition)


def test_chunk_examples():
    assert chunk_sizes(10, 3) == [4, 4, 2, 0]
    assert chunk_sizes(5, 5) == [5]
    assert chunk_sizes(7, 1) == [2, 2, 2, 1, 0, 0, 0]


def test_chunk_partition_tiles_consecutively():
    spec = chunk_partition(10, 3)
    assert len(spec.parts) == 4
    assert [i for part in spec.parts for i in part] == list(range(10))
    assert all(len(p) <= 4 for p in spec.parts)
    with pytest.raises(PartitionError):
        chunk_partition(10, 0)
    with pytest.raises(PartitionError):
        chunk_partition(3, 4)


def test_avg_partition_examples():
    uniform = avg_partition([4, 4, 4, 4])
    assert [len(s.sizes()) for s in uniform] == [1, 1, 1, 1]

    skew = avg_partition([8, 0, 0, 0])       # avg = 2
    assert len(skew[0].sizes()) == 4
    assert max(skew[0].sizes()) <= 3
    assert [len(s.sizes()) for s in skew[1:]] == [0, 0, 0]

    pair = avg_partition([1, 1])
    assert sum(len(s.sizes()) for s in pair) == 2

    empty = avg_partition([0, 0, 0])
    assert all(s.sizes() == [] for s in empty)


@given(st.lists(st.integers(min_value=0, max_value=30), min_size=1, max_size=12))
def test_avg_partition_bounds(sizes):
    n = len(sizes)
    specs = avg_partition(sizes)
    total = sum(sizes)
    assert sum(len(s.sizes()) for s in specs) <= 2 * n
    for t, spec in zip(sizes, specs):
        assert sum(spec.sizes()) == t
        if total:
            # exact rational size bound: |part| <= avg + 1
            for size in spec.sizes():
                assert Fraction(size) <= Fraction(total, n) + 1


def test_weight_balanced_examples():
    spec = weight_balanced_partition([1, 2, 3, 4], 2, 4)
    assert spec.parts == [[0, 2], [1, 3]]
    sums = [sum([1, 2, 3, 4][i] for i in p) for p in spec.parts]
    assert sums == [4, 6] and max(sums) <= 10 / 2 + 4

    spec = weight_balanced_partition([0, 0, 0, 5], 4, 5)
    assert [len(p) for p in spec.parts] == [1, 1, 1, 1]

    uniform = weight_balanced_partition([3] * 6, 3, 3)
    assert all(sum(3 for _ in p) == 6 for p in uniform.parts)


def test_weight_balanced_preconditions():
    with pytest.raises(PartitionError):
        weight_balanced_partition([2, 1], 1, 4)        # unsorted
    with pytest.raises(PartitionError):
        weight_balanced_partition([1, 2, 3], 2, 4)     # k does not divide n
    with pytest.raises(PartitionError):
        weight_balanced_partition([1, 9], 2, 4)        # weight above x


@given(st.integers(min_value=1, max_value=4),
       st.lists(st.integers(min_value=0, max_value=9), min_size=1, max_size=24))
def test_balanced_assignment_properties(k, weights):
    n = len(weights)
    if n % k:
        n -= n % k
        weights = weights[:n]
    if n == 0:
        return
    groups = balanced_assignment(weights, k, 9)
    flat = sorted(i for g in groups for i in g)
    assert flat == list(range(n))
    assert all(g == sorted(g) for g in groups)
    bound = Fraction(sum(weights), k) + 9
    for g in groups:
        assert len(g) == n // k
        assert Fraction(sum(weights[i] for i in g)) <= bound


@given(st.integers(min_value=1, max_value=5),
       st.lists(st.integers(min_value=0, max_value=7), min_size=1, max_size=20))
def test_padded_groups_properties(k, weights):
    items = [10 + i for i in range(len(weights))]
    groups = padded_balanced_groups(items, weights, k)
    assert len(groups) == k
    flat = sorted(i for g in groups for i in g)
    assert flat == sorted(items)
    bound = Fraction(sum(weights), k) + max(weights)
    wt = dict(zip(items, weights))
    for g in groups:
        assert Fraction(sum(wt[i] for i in g)) <= bound


def test_determinism():
    ws = [3, 1, 4, 1, 5, 9, 2, 6]
    a = balanced_assignment(ws, 4, 9)
    b = balanced_assignment(list(ws), 4, 9)
    assert a == b
    assert avg_partition([5, 2, 0, 9]) == avg_partition([5, 2, 0, 9])
