from itertools import product

import pytest
from hypothesis import given, strategies as st

from oracles import all_set_partitions, catalan, crosses, nc_by_filter
from qbernstein.errors import ArgumentError, SizeLimitError
from qbernstein.ncpart import (
    NCPartition,
    SetPartition,
    coarsenings,
    enumerate_nc,
    is_noncrossing,
    iter_set_partitions,
    kernel_partition,
    mobius_to_top,
    one,
    refines,
    zero,
)


def test_crossing_examples():
    assert not is_noncrossing(SetPartition.of([[1, 3], [2, 4]]))
    assert is_noncrossing(SetPartition.of([[1, 2, 3]]))
    assert is_noncrossing(SetPartition.of([[1, 4], [2, 3]]))


def test_canonical_order():
    p = SetPartition.of([[4, 2], [3, 1]])
    assert p.blocks == ((1, 3), (2, 4))
    assert p == SetPartition.of([[1, 3], [2, 4]])
    assert len({p, SetPartition.of([[2, 4], [1, 3]])}) == 1


@pytest.mark.parametrize("blocks", [[[1, 2], [2, 3]], [[1], [3]], [[1], []]])
def test_invalid_partitions(blocks):
    with pytest.raises(ArgumentError):
        SetPartition(3, tuple(tuple(b) for b in blocks))


def test_crossing_partition_is_not_nc():
    with pytest.raises(ArgumentError):
        NCPartition(4, ((1, 3), (2, 4)))


@pytest.mark.parametrize("n", range(1, 7))
def test_noncrossing_agrees_with_quadruple_scan(n):
    for p in iter_set_partitions(n):
        assert is_noncrossing(p) == (not crosses([list(b) for b in p.blocks]))


def test_set_partition_count_is_bell():
    assert [sum(1 for _ in iter_set_partitions(n)) for n in range(1, 8)] == [1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("n", range(1, 9))
def test_enumeration_matches_filter_oracle(n):
    got = enumerate_nc(n)
    assert len(got) == len(set(got))
    assert {p.blocks for p in got} == nc_by_filter(n)
    assert got == sorted(got)


def test_catalan_counts_to_ten():
    assert [len(enumerate_nc(n)) for n in range(1, 11)] == [catalan(n) for n in range(1, 11)]
    assert len(enumerate_nc(8)) == 1430


def test_enumeration_limit():
    with pytest.raises(SizeLimitError):
        enumerate_nc(15)
    with pytest.raises(SizeLimitError):
        enumerate_nc(5, limit=4)
    with pytest.raises(ArgumentError):
        enumerate_nc(0)


def test_refines_examples():
    q = SetPartition.of([[1, 2, 3]])
    assert refines(SetPartition.of([[1, 3], [2]]), q)
    assert not refines(q, SetPartition.of([[1, 3], [2]]))
    assert sum(refines(zero(4), q) for q in enumerate_nc(4)) == 14
    with pytest.raises(ArgumentError):
        refines(zero(3), zero(4))


@pytest.mark.parametrize("n", range(1, 7))
def test_refines_is_a_partial_order(n):
    ps = enumerate_nc(n)
    for p in ps:
        assert refines(p, p)
    for p, q in product(ps, repeat=2):
        if p != q and refines(p, q):
            assert not refines(q, p)
    if n <= 5:
        for p, q, r in product(ps, repeat=3):
            if refines(p, q) and refines(q, r):
                assert refines(p, r)


@pytest.mark.parametrize("n", range(1, 7))
def test_coarsenings_match_filter(n):
    ps = enumerate_nc(n)
    for p in ps:
        assert set(coarsenings(p)) == {q for q in ps if refines(p, q)}


def test_mobius_examples():
    assert mobius_to_top(one(5)) == 1
    assert mobius_to_top(zero(3)) == 2
    assert mobius_to_top(zero(4)) == -5


@pytest.mark.parametrize("n", range(1, 9))
def test_mobius_of_bottom_is_signed_catalan(n):
    assert mobius_to_top(zero(n)) == (-1) ** (n - 1) * catalan(n - 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_mobius_defining_relation(n):
    ps = enumerate_nc(n)
    top = one(n)
    for p in ps:
        total = sum(mobius_to_top(q) for q in ps if refines(p, q))
        assert total == (1 if p == top else 0)


def test_mobius_is_multiplicative_over_intervals():
    # [p, 1] for p = {{1,2},{3}} is a two-element chain
    assert mobius_to_top(SetPartition.of([[1, 2], [3]])) == -1


def test_mobius_accepts_plain_set_partition_of_nc_shape():
    assert mobius_to_top(SetPartition.of([[1, 4], [2, 3]])) == mobius_to_top(NCPartition(4, ((1, 4), (2, 3))))


@pytest.mark.parametrize(
    "indices, blocks",
    [((1, 1, 1), ((1, 2, 3),)), ((1, 2, 1, 2), ((1, 3), (2, 4))), ((2, 7, 7), ((1,), (2, 3)))],
)
def test_kernel_partition(indices, blocks):
    assert kernel_partition(indices).blocks == blocks


def test_kernel_partition_empty():
    with pytest.raises(ArgumentError):
        kernel_partition(())


@given(st.lists(st.integers(0, 3), min_size=1, max_size=9))
def test_kernel_partition_groups_equal_values(idx):
    p = kernel_partition(idx)
    lab = p.labels()
    for a in range(len(idx)):
        for b in range(len(idx)):
            assert (lab[a] == lab[b]) == (idx[a] == idx[b])


@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))
def test_random_partition_properties(labels):
    p = kernel_partition(labels)
    assert is_noncrossing(p) == (not crosses([list(b) for b in p.blocks]))
    assert refines(zero(p.n), p) and refines(p, one(p.n))
    if is_noncrossing(p):
        assert p.blocks in {q.blocks for q in enumerate_nc(p.n)}


def test_set_partition_oracle_is_bell():
    assert sum(1 for _ in all_set_partitions(6)) == 203
