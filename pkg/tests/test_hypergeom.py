import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qtcorr import hypergeom as hg
from qtcorr.exceptions import ConvergenceError, DomainError, SingularParameterError
from qtcorr.qseries import pochhammer_inf


def test_finite_pochhammer():
    assert hg.num_pochhammer_fin(0.7, 0, 0.3) == 1
    assert hg.num_pochhammer_fin(2, 1, 0.3) == -1
    assert hg.num_pochhammer_fin(0.5, 3, 0.1) == pytest.approx(0.5 * 0.95 * 0.995, abs=1e-15)
    with pytest.raises(DomainError):
        hg.num_pochhammer_fin(0.5, -1, 0.1)


def test_infinite_pochhammer():
    assert hg.num_pochhammer_inf(0, 0.4) == 1
    direct = math.prod(1 - 0.1 ** k for k in range(1, 40))
    assert abs(hg.num_pochhammer_inf(0.1, 0.1) - direct) < 1e-15
    with pytest.raises(ConvergenceError):
        hg.num_pochhammer_inf(0.5, 1.0)


def test_infinite_pochhammer_matches_exact_series():
    exact = pochhammer_inf(Fraction(1, 3), 40).evaluate(Fraction(1, 10))
    assert abs(hg.num_pochhammer_inf(1 / 3, 0.1) - float(exact)) < 1e-15


def test_basic_phi_trivial_cases():
    assert hg.phi([0.3, 0.4], [0.2], 0.5, 0) == 1
    assert hg.phi([1, 0.4, 0.7], [0.2, 0.3], 0.5, 0.6) == 1


def test_basic_phi_reports_term_count():
    value, terms = hg.basic_phi(hg.PhiSpec([0.3], [], 0.2, 0.5), return_terms=True)
    assert value == pytest.approx(hg.num_pochhammer_inf(0.15, 0.2) / hg.num_pochhammer_inf(0.5, 0.2))
    assert 3 <= terms < 200


def test_basic_phi_rejects_bad_input():
    with pytest.raises(DomainError):
        hg.phi([0.3], [], 0.5, 1.0)
    with pytest.raises(DomainError):
        hg.phi([0.3], [], 1.0, 0.5)
    with pytest.raises(DomainError):
        hg.PhiSpec([0.3], [0.2])
    # b v^2 = 1 makes the third denominator factor vanish
    with pytest.raises(SingularParameterError, match=r"\(b\)_3"):
        hg.phi([0.3, 0.4], [4.0], 0.5, 0.5)


def test_q_binomial_examples():
    assert hg.q_binomial_residual(0, 0.2, 0.1) < 1e-10
    assert hg.q_binomial_residual(0.7, 0, 0.1) == 0
    assert hg.q_binomial_residual(0.3, 0.2, 0.1) < 1e-10
    with pytest.raises(DomainError):
        hg.q_binomial_residual(0.3, 1.2, 0.1)


def test_heine_examples():
    assert hg.heine_residual(2, 0.3, 0.5 * 2 * 0.3, 0.1) < 1e-9
    assert hg.heine_residual(2, 0.3, 1e-6, 0.1) < 1e-9
    with pytest.raises(DomainError):
        hg.heine_residual(2, 0, 0.5, 0.1)
    with pytest.raises(DomainError):
        hg.heine_residual(0.1, 0.3, 0.5, 0.1)  # argument c/ab > 1


def test_hall_with_unit_numerator():
    # a = 1 makes the left side 1; the right side collapses through q-Gauss
    assert hg.hall_residual(1, 0.3, 0.8, 0.2, 0.5, 0.25) < 1e-12


def test_hall_rejects_inadmissible_argument():
    # de/abc = 8 here, outside the convergence region
    with pytest.raises(DomainError, match="de/abc"):
        hg.hall_residual(0.3, 0.2, 0.5, 0.4, 0.6, 0.15)


def test_hall_admissible_points():
    assert hg.hall_residual(0.9, 0.5, 1.4, 0.3, 0.4, 0.15) < 1e-9
    assert hg.hall_residual(1.5, -0.4, 0.7, -0.2, 0.6, 0.3) < 1e-9


def test_hall_at_first_term_instantiation():
    q1, t1, q2, t2, v = 0.3, 0.2, 0.25, 0.15, 0.1
    a, b, c, d, e = t1 * t2, t2, 1 / q2, v * t2, v * q1 * t1 * t2
    assert d * e / (a * b * c) == pytest.approx(v * v * q1 * q2)
    assert hg.hall_residual(a, b, c, d, e, v) < 1e-9


@settings(max_examples=100)
@given(st.floats(-2, 2), st.floats(-0.9, 0.9), st.floats(-0.8, 0.8))
def test_q_binomial_property(a, t, v):
    assert hg.q_binomial_residual(a, t, v) < 1e-8


@settings(max_examples=100)
@given(st.floats(0.5, 2), st.floats(0.1, 0.9), st.floats(-0.8, 0.8), st.floats(-0.7, 0.7),
       st.sampled_from([-1, 1]))
def test_heine_property(a, b, z, v, sign):
    assert hg.heine_residual(a * sign, b, z * a * b * sign, v) < 1e-8


@settings(max_examples=100)
@given(st.floats(0.5, 2), st.floats(0.1, 0.8), st.floats(0.5, 2), st.floats(0.05, 0.6),
       st.floats(-0.6, 0.6), st.floats(-0.5, 0.5))
def test_hall_property(a, b, c, d, z, v):
    try:
        residual = hg.hall_residual(a, b, c, d, z * a * b * c / d, v)
    except SingularParameterError:
        assume(False)  # a denominator parameter hits a pole
    assert residual < 1e-8
