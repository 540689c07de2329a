"""
Unit tests for partitions: canonical enumeration, refinement, the r-function.
"""

import pytest
from sympy import npartitions

from app.core.errors import StrataArgumentError
from app.core.partitions import (
    Partition,
    enumerate_partitions,
    non_singleton_partitions,
    parse_partition,
    partitions_with_size,
    r_closed_form,
    r_minimiser_count,
    r_minimizers,
    r_of_degree,
    r_of_partition,
    refinement_covers,
    refines,
)


def _strs(parts):
    return [str(lam) for lam in parts]


def test_non_singleton_partitions_of_four_in_canonical_order():
    assert _strs(enumerate_partitions(4, 2)) == ["3+1", "2+2", "2+1+1", "1+1+1+1"]


def test_enumeration_starts_with_singleton_and_counts_match_partition_numbers():
    for d in range(1, 31):
        found = enumerate_partitions(d)
        assert len(found) == npartitions(d), f"d={d}"
        assert found[0] == Partition.of(d)
        assert all(lam.d == d for lam in found)
    assert len(enumerate_partitions(30)) == 5604


def test_enumeration_order_is_graded_by_number_of_parts():
    sizes = [lam.size for lam in enumerate_partitions(7)]
    assert sizes == sorted(sizes)


def test_enumerate_rejects_nonpositive_degree():
    with pytest.raises(StrataArgumentError):
        enumerate_partitions(0)


def test_columns_by_size():
    assert _strs(partitions_with_size(4, 2)) == ["3+1", "2+2"]
    assert _strs(partitions_with_size(4, 4)) == ["1+1+1+1"]
    assert non_singleton_partitions(1) == []


def test_parse_accepts_any_order_and_commas():
    assert parse_partition("1+1+2") == Partition.of(2, 1, 1)
    assert parse_partition("2,1,1") == Partition.of(2, 1, 1)
    assert str(parse_partition(" 1 + 3 ")) == "3+1"


@pytest.mark.parametrize("text", ["", "a+b", "2+0", "2+-1"])
def test_parse_rejects_bad_input(text):
    with pytest.raises(StrataArgumentError):
        parse_partition(text)


def test_constructor_insists_on_canonical_form():
    with pytest.raises(StrataArgumentError):
        Partition((1, 2))


def test_multiplicities_and_m():
    lam = Partition.of(2, 1, 1)
    assert lam.multiplicities == {2: 1, 1: 2}
    assert lam.m(1) == 2
    assert lam.m(3) == 0
    assert lam.size == 3
    assert not lam.is_singleton


def test_refinement_examples():
    assert refines(Partition.of(1, 1, 2), Partition.of(2, 2))
    assert not refines(Partition.of(1, 3), Partition.of(2, 2))
    assert not refines(Partition.of(2, 2), Partition.of(1, 3))
    assert refines(Partition.of(2, 2), Partition.of(2, 2))


def test_everything_refines_the_singleton_and_all_ones_refines_everything():
    for d in range(1, 8):
        ones = Partition.of(*([1] * d))
        for lam in enumerate_partitions(d):
            assert refines(lam, Partition.of(d))
            assert refines(ones, lam)


def test_refinement_is_antisymmetric():
    parts = enumerate_partitions(6)
    for lam in parts:
        for mu in parts:
            if lam != mu and refines(lam, mu):
                assert not refines(mu, lam)


def test_refinement_is_transitive():
    for d in range(1, 9):
        parts = enumerate_partitions(d)
        above = {lam: [mu for mu in parts if refines(lam, mu)] for lam in parts}
        for lam in parts:
            for mu in above[lam]:
                for nu in above[mu]:
                    assert refines(lam, nu), f"{lam} < {mu} < {nu}"


def test_refinement_rejects_different_totals():
    with pytest.raises(StrataArgumentError):
        refines(Partition.of(1, 1), Partition.of(3))


def test_refinement_covers_of_three():
    covers = [(str(a), str(b)) for a, b in refinement_covers(3)]
    assert covers == [("2+1", "3"), ("1+1+1", "2+1")]


def test_r_equals_two_d_plus_one_with_unique_minimiser():
    assert r_of_degree(1) == 2
    for d in range(2, 51):
        assert r_of_degree(d) == 2 * d + 1
        assert r_minimiser_count(d) == 1


def test_r_minimizer_is_all_ones():
    for d in range(2, 13):
        assert r_minimizers(d) == [Partition.of(*([1] * d))]


def test_r_of_partition_example_and_closed_form():
    lam = Partition.of(1, 1, 2)
    assert r_of_partition(lam) == 9
    assert r_closed_form(lam) == 9
    for d in range(2, 13):
        for mu in non_singleton_partitions(d):
            assert r_of_partition(mu) == r_closed_form(mu)


def test_r_of_singleton_is_rejected():
    with pytest.raises(StrataArgumentError):
        r_of_partition(Partition.of(3))
