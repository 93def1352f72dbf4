from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtcorr.exceptions import DomainError, SingularParameterError
from qtcorr.partitions import (b_hat_stat, b_stat, cell_stats, conjugate, dominance_leq,
                               enumerate_partitions, make_partition, n_stat, partition_count,
                               partitions_up_to, z_factor)

# p(n) for n = 0..12 as produced by the pentagonal recurrence
P_VALUES = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=9).filter(lambda x: x not in (0, 1))


@st.composite
def partitions(draw, max_size=10):
    n = draw(st.integers(0, max_size))
    return draw(st.sampled_from(enumerate_partitions(n)))


def test_enumerate_small():
    assert enumerate_partitions(0) == [()]
    assert enumerate_partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert len(enumerate_partitions(12)) == 77


def test_counts_match_enumeration():
    assert [partition_count(n) for n in range(13)] == P_VALUES
    assert [len(enumerate_partitions(n)) for n in range(13)] == P_VALUES
    assert len(partitions_up_to(12)) == sum(P_VALUES)


def test_partition_count_large_is_iterative():
    assert partition_count(100) == 190569292
    assert partition_count(3000) > 0


def test_make_partition_validates():
    assert make_partition([3, 2, 2, 0]) == (3, 2, 2)
    with pytest.raises(DomainError):
        make_partition([1, 3, 2])
    with pytest.raises(DomainError):
        make_partition([2, -1])
    with pytest.raises(DomainError):
        enumerate_partitions(-1)


def test_conjugate_examples():
    assert conjugate(()) == ()
    assert conjugate((2, 1)) == (2, 1)
    assert conjugate((3, 1)) == (2, 1, 1)


def test_cell_stats_examples():
    (cell,) = cell_stats((1,))
    assert (cell.coarm, cell.coleg, cell.arm, cell.leg) == (0, 0, 0, 0)
    assert sorted((c.coarm, c.coleg) for c in cell_stats((2, 1))) == [(0, 0), (0, 1), (1, 0)]
    assert sorted((c.arm, c.leg) for c in cell_stats((2, 2))) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_b_stat_examples():
    q, t = Fraction(1, 2), Fraction(1, 3)
    assert b_stat((), q, t) == 0
    assert b_stat((2, 1), q, t) == 1 + q + t
    assert b_stat((3, 1), q, t) == Fraction(25, 12)


def test_b_hat_examples():
    q, t = Fraction(1, 2), Fraction(1, 3)
    assert b_hat_stat((), q, t) == 1 / ((1 - q) * (1 - t))
    assert b_hat_stat((1,), q, t) == (q * (1 - t) + t) / ((1 - q) * (1 - t))
    assert b_stat((2, 1), q, t) == b_hat_stat((), q, t) - b_hat_stat((2, 1), q, t)


def test_b_hat_rejects_one():
    with pytest.raises(SingularParameterError):
        b_hat_stat((1,), 1, Fraction(1, 2))
    with pytest.raises(SingularParameterError):
        b_hat_stat((1,), Fraction(1, 2), 1)


def test_n_stat_and_z_factor():
    assert n_stat(()) == 0
    assert n_stat((1, 1)) == 1
    assert n_stat((2, 2, 1)) == 4
    assert z_factor(()) == 1
    assert z_factor((1, 1, 1)) == 6
    assert z_factor((2, 1)) == 2


def test_dominance_examples():
    assert dominance_leq((1, 1, 1), (3,))
    assert not dominance_leq((3,), (1, 1, 1))
    assert dominance_leq((2, 2), (3, 1))
    with pytest.raises(DomainError):
        dominance_leq((1,), (2,))


@given(partitions(12))
def test_conjugate_is_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert sum(conjugate(lam)) == sum(lam)


@settings(max_examples=60)
@given(partitions(12), rationals, rationals)
def test_cell_sum_equals_hat_difference(lam, q, t):
    assert b_stat(lam, q, t) == b_hat_stat((), q, t) - b_hat_stat(lam, q, t)


@settings(max_examples=60)
@given(partitions(12), rationals, rationals)
def test_conjugation_symmetry(lam, q, t):
    assert b_stat(lam, q, t) == b_stat(conjugate(lam), t, q)
    assert b_hat_stat(lam, q, t) == b_hat_stat(conjugate(lam), t, q)


@given(partitions(8))
def test_cell_count_and_n_stat(lam):
    cells = cell_stats(lam)
    assert len(cells) == sum(lam)
    assert n_stat(lam) == sum(c.coleg for c in cells)
    assert sorted((c.arm, c.leg) for c in cells) == sorted((c.leg, c.arm) for c in cell_stats(conjugate(lam)))


@given(partitions(8))
def test_dominance_reflexive_and_reversed_by_conjugation(lam):
    assert dominance_leq(lam, lam)
    for mu in enumerate_partitions(sum(lam)):
        assert dominance_leq(mu, lam) == dominance_leq(conjugate(lam), conjugate(mu))
