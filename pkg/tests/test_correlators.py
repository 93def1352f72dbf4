from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtcorr import correlators as corr
from qtcorr.exceptions import DomainError, SingularParameterError
from qtcorr.hypergeom import num_pochhammer_inf
from qtcorr.partitions import b_hat_stat, partition_count
from qtcorr.qseries import VSeries, inverse, pochhammer_inf

N = 12
rationals = st.fractions(min_value=-2, max_value=2, max_denominator=7).filter(lambda x: x not in (0, 1))


def euler(order=N):
    return pochhammer_inf(1, order, shift=1)


def row(lam, i):
    return lam[i - 1] if i <= len(lam) else 0


# -- expectations and brute force ------------------------------------------------

def test_expectation_of_one():
    assert corr.expectation_v(lambda lam: 1, N) == 1


def test_expectation_of_size():
    s = corr.expectation_v(lambda lam: sum(lam), N)
    direct = euler() * VSeries([d * partition_count(d) for d in range(N + 1)], N)
    assert s == direct


def test_empty_pair_list_gives_partition_generating_function():
    assert corr.trace_brute_hat([], N) == inverse(euler())


def test_brute_constant_terms():
    assert corr.trace_brute_hat([(F(1, 2), F(1, 3))], N)[0] == 3
    assert corr.trace_brute_b([(F(1, 2), F(1, 3))], N)[0] == 0


def test_cell_sum_trace_from_hat_trace():
    q, t = F(1, 2), F(-2, 3)
    empty = b_hat_stat((), q, t)
    assert corr.trace_brute_b([(q, t)], N) == empty * inverse(euler()) - corr.trace_brute_hat([(q, t)], N)


def test_two_pair_inclusion_exclusion():
    p1, p2 = (F(1, 2), F(1, 3)), (F(-1, 3), F(3, 2))
    e1, e2 = b_hat_stat((), *p1), b_hat_stat((), *p2)
    one = inverse(euler(8))
    expected = (e1 * e2 * one - e1 * corr.trace_brute_hat([p2], 8) - e2 * corr.trace_brute_hat([p1], 8)
                + corr.trace_brute_hat([p1, p2], 8))
    assert corr.trace_brute_b([p1, p2], 8) == expected


# -- one point ----------------------------------------------------------------------

def test_one_point_examples():
    q, t = F(1, 2), F(1, 3)
    closed = corr.one_point_closed(q, t, N)
    assert closed[0] == 1 / ((1 - q) * (1 - t))
    assert closed == corr.trace_brute_hat([(q, t)], N)
    assert corr.one_point_closed(q, F(2), N) == corr.trace_brute_hat([(q, F(2))], N)


def test_one_point_rejects_one():
    with pytest.raises(SingularParameterError):
        corr.one_point_closed(1, F(1, 3))


@settings(max_examples=15, deadline=None)
@given(rationals, rationals)
def test_one_point_property(q, t):
    assert corr.one_point_closed(q, t, 8) == corr.trace_brute_hat([(q, t)], 8)


def test_inverse_pair_reduction():
    q = F(1, 2)
    assert corr.one_point_closed(q, 1 / q, N) == corr.inverse_pair_one_point(q, N)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_single_row_power(i):
    q = F(1, 2)
    assert corr.row_power_closed(q, i, N) == corr.expectation_v(lambda lam: q ** row(lam, i), N)


def test_single_row_degenerate_values():
    assert corr.row_power_closed(1, 2, N) == 1
    # q = 0 turns q^{lam_i} into the indicator of lam_i = 0
    assert corr.row_power_closed(0, 2, N) == corr.expectation_v(lambda lam: int(row(lam, 2) == 0), N)
    with pytest.raises(DomainError):
        corr.row_power_closed(F(1, 2), 0)


@pytest.mark.parametrize("i,j", [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
def test_row_pair_power(i, j):
    q1, q2 = F(1, 2), F(1, 3)
    brute = corr.expectation_v(lambda lam: q1 ** row(lam, i) * q2 ** row(lam, j), N)
    assert corr.row_pair_power_closed(q1, q2, i, j, N) == brute


def test_row_pair_reductions():
    assert corr.row_pair_power_closed(1, 1, 1, 3, N) == 1
    q = F(-2, 5)
    assert corr.row_pair_power_closed(q, 1, 2, 4, N) == corr.row_power_closed(q, 2, N)
    with pytest.raises(DomainError):
        corr.row_pair_power_closed(q, q, 2, 2)


# -- two point ------------------------------------------------------------------------

SPECIAL = [(F(1, 2), F(1, 4), F(4), F(2)), (F(1, 3), F(1, 4), F(2), F(6)), (F(2, 3), F(3, 5), F(5, 4), F(2))]


@pytest.mark.parametrize("params", SPECIAL)
def test_two_point_special(params):
    q1, t1, q2, t2 = params
    closed = corr.two_point_closed_special(q1, t1, q2, t2, 10)
    assert closed == corr.trace_brute_hat([(q1, t1), (q2, t2)], 10)
    assert closed[0] == b_hat_stat((), q1, t1) * b_hat_stat((), q2, t2)


def test_two_point_special_guards():
    with pytest.raises(DomainError):
        corr.two_point_closed_special(F(1, 2), F(1, 3), F(2), F(2))
    # product is 1 but t1 t2 = 1 puts a zero in a denominator
    with pytest.raises(SingularParameterError):
        corr.two_point_closed_special(F(1, 3), F(1, 2), F(3), F(2))


def test_three_term_split_exact():
    q1, t1, q2, t2 = F(1, 2), F(1, 3), F(-2, 3), F(2, 5)
    terms = corr.t_terms_exact(q1, t1, q2, t2, 8)
    assert terms.T3 == terms.routes["T3_closed"]
    brute = euler(8) * corr.trace_brute_hat([(q1, t1), (q2, t2)], 8)
    assert terms.total() * (1 / ((1 - q1) * (1 - q2))) == brute


def test_three_term_split_trivial_cases():
    q1, q2 = F(1, 2), F(1, 3)
    terms = corr.t_terms_exact(q1, F(1, 5), q2, 0, 8)
    assert terms.T1.is_zero()
    diag = corr.t_terms_exact(q1, 0, q2, 0, 8).T3
    assert diag == euler(8) / pochhammer_inf(q1 * q2, 8, shift=1)


def test_two_point_general_spec_point():
    q1, t1, q2, t2, v = 0.3, 0.2, 0.25, 0.15, 0.1
    closed = corr.two_point_closed_general(q1, t1, q2, t2, v)
    brute, bound = corr.trace_brute_hat_numeric([(q1, t1), (q2, t2)], v)
    assert bound < 1e-15
    assert abs(closed - brute) < 1e-8 + bound
    swapped = corr.two_point_closed_general(q2, t2, q1, t1, v)
    assert abs(closed - swapped) < 1e-10


def test_two_point_general_with_zero_t():
    q1, q2, v = 0.4, -0.3, 0.15
    closed = corr.two_point_closed_general(q1, 0, q2, 0, v)
    brute, bound = corr.trace_brute_hat_numeric([(q1, 0), (q2, 0)], v)
    assert abs(closed - brute) < 1e-8 + bound


def test_numeric_terms_against_routes():
    terms = corr.t_terms_numeric(0.3, 0.2, 0.25, 0.15, 0.1)
    assert abs(terms.T1 - terms.routes["T1_hyper"]) < 1e-8
    assert abs(terms.T2 - terms.routes["T2_hyper"]) < 1e-8
    assert abs(terms.T3 - terms.routes["T3_closed"]) < 1e-8
    total = terms.total() / ((1 - 0.3) * (1 - 0.25))
    closed = corr.two_point_closed_general(0.3, 0.2, 0.25, 0.15, 0.1)
    assert abs(total - num_pochhammer_inf(0.1, 0.1) * closed) < 1e-10


def test_two_point_general_domain():
    with pytest.raises(DomainError):
        corr.two_point_closed_general(0.3, 1.2, 0.25, 0.15, 0.1)
    with pytest.raises(DomainError):
        corr.trace_brute_hat_numeric([(0.5, 1 / 3), (0.5, 1 / 3)], 0.9999)


def test_t_terms_backend_dispatch():
    assert corr.t_terms(F(1, 2), F(1, 3), F(1, 4), F(1, 5), order=4).T3[0] == 1 / (1 - F(1, 15))
    with pytest.raises(DomainError):
        corr.t_terms(0.5, 0.3, 0.2, 0.1, backend="numeric")
    with pytest.raises(DomainError):
        corr.t_terms(0.5, 0.3, 0.2, 0.1, backend="bogus")


# -- symmetry -------------------------------------------------------------------------

def test_pair_permutation_and_global_swap():
    p1, p2 = (F(1, 2), F(1, 3)), (F(-1, 3), F(3, 2))
    base = corr.trace_brute_hat([p1, p2], 8)
    assert corr.trace_brute_hat([p2, p1], 8) == base
    assert corr.trace_brute_hat([p1[::-1], p2[::-1]], 8) == base
    assert corr.trace_brute_hat([p1[::-1]], 8) == corr.trace_brute_hat([p1], 8)


def test_single_pair_swap_is_not_a_symmetry():
    # the v^2 coefficients differ by (q1 - t1)(q2 - t2) times a nonzero factor
    p1, p2 = (F(1, 2), F(1, 3)), (F(-1, 3), F(3, 2))
    base = corr.trace_brute_hat([p1, p2], 2)
    flipped = corr.trace_brute_hat([p1[::-1], p2], 2)
    assert base[:2] == flipped[:2]
    assert base[2] != flipped[2]


def test_symmetry_report_counts():
    rep = corr.symmetry_report([(F(1, 2), F(1, 3)), (F(2, 3), F(-1, 4))], 6)
    assert rep["images"] == 8 and rep["diagonal_images"] == 4
    assert rep["diagonal_max_deviation"] == 0
    assert rep["max_deviation"] > 0
    with pytest.raises(DomainError):
        corr.symmetry_report([(F(1, 2), F(1, 3))] * 4, 2)


@settings(max_examples=10, deadline=None)
@given(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=3))
def test_diagonal_symmetry_property(pairs):
    assert corr.symmetry_report(pairs, 5)["diagonal_max_deviation"] == 0
