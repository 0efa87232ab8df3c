import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercs import fockstate, stats
from hypercs.errors import DomainError
from hypercs.momentproblem import rho, rho_ratio

# exact rational expansion of Q about x = 0 (first three coefficients),
# from power-series division of the term-wise derivative series
MANDEL_SERIES = {
    1: (Fraction(-1), Fraction(1, 2), Fraction(-7, 12)),
    2: (Fraction(-1), Fraction(1, 24), Fraction(-13, 1728)),
    3: (Fraction(-1), Fraction(1, 432), Fraction(-1, 29160)),
}

# d/dx [x N'/N] by 40-digit numerical differentiation
OMEGA_ORACLE = {(1, 1.0): 0.29431875377003188616, (2, 3.0): 0.057618813156636107891}


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("x", [1e-4, 1e-3])
def test_mandel_small_x_expansion(r, x):
    c0, c1, c2 = MANDEL_SERIES[r]
    approx = float(c0) + float(c1) * x + float(c2) * x * x
    assert stats.mandel_Q(r, x) == pytest.approx(approx, abs=10 * x**3)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_mandel_limit_at_zero(r):
    assert stats.mandel_Q(r, 0.0) == -1.0


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("x", [0.5, 2.0, 8.0, 15.0])
def test_mandel_two_routes(r, x):
    assert abs(stats.mandel_Q(r, x) - stats.mandel_Q_moments(r, x)) < 1e-10


def test_mandel_sub_poissonian_and_ordered():
    xs = np.linspace(0.05, 20.0, 400)
    q = stats.grid_values(stats.mandel_Q, (1, 2, 3), xs)
    assert (q < 0).all()
    assert (np.diff(np.abs(q), axis=1) > 0).all()


@pytest.mark.parametrize("key", list(OMEGA_ORACLE))
def test_metric_omega_oracle(key):
    r, x = key
    assert stats.metric_omega(r, x) == pytest.approx(OMEGA_ORACLE[key], rel=1e-13)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_metric_omega_at_origin(r):
    # omega(0) = N'(0) / N(0)
    assert stats.metric_omega(r, 0.0) == pytest.approx(1.0 / rho_ratio(r, 0), rel=1e-15)
    if r == 2:
        assert stats.metric_omega(r, 0.0) == pytest.approx(1 / 12)


@pytest.mark.parametrize("x", [0.0, 0.3, 5.0, 40.0])
def test_metric_omega_standard_baseline(x):
    # N = e^x gives a flat metric
    assert stats.metric_omega_series((), x) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("x", [0.5, 2.0, 8.0, 15.0])
@pytest.mark.parametrize("p", [1, 2, 3])
def test_expectation_pp_against_fock_sum(r, x, p):
    direct = math.fsum(
        math.perm(k, p) * stats.probability_P(r, k, x) for k in range(r, r + 80)
    )
    assert stats.expectation_pp(r, x, p) == pytest.approx(direct, rel=1e-10)


def _dense_expectation(r, z, p, s):
    state = fockstate.build_state(r, z, 1e-14)
    dim = len(state) + r + 4
    psi = np.zeros(dim, dtype=complex)
    psi[r : r + len(state)] = state.coefficients
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    op = np.linalg.matrix_power(a.T, p) @ np.linalg.matrix_power(a, s)
    return np.vdot(psi, op @ psi)


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("p, s", [(0, 1), (1, 0), (0, 2), (2, 0), (1, 1), (2, 1), (1, 3)])
def test_expectation_ps_against_dense_inner_product(r, p, s):
    z = 1.1 - 0.7j
    got = stats.expectation_ps(r, z, p, s)
    ref = _dense_expectation(r, z, p, s)
    assert abs(got - ref) < 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_expectation_ps_diagonal_matches_pp(r):
    z = 0.9 + 1.2j
    x = abs(z) ** 2
    for p in (1, 2):
        assert stats.expectation_ps(r, z, p, p).real == pytest.approx(
            stats.expectation_pp(r, x, p), rel=1e-12
        )


@pytest.mark.parametrize("r", [1, 2, 3])
def test_fock_state_variances_at_origin(r):
    vx, vp = stats.quadrature_variances(r, 0.0)
    assert vx == pytest.approx((2 * r + 1) / 2)
    assert vp == pytest.approx((2 * r + 1) / 2)


def test_squeezing_r1():
    vx = [stats.quadrature_variances(1, math.sqrt(x))[0] for x in np.linspace(0, 20, 401)]
    assert min(vx) < 0.5


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_uncertainty_relation(r, re, im):
    vx, vp = stats.quadrature_variances(r, complex(re, im))
    assert vx * vp >= 0.25 - 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.floats(0, 30))
def test_probabilities_sum_to_one(r, x):
    total = math.fsum(stats.probability_P(r, k, x) for k in range(r, r + 100))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_probability_closed_form():
    r, k, x = 2, 4, 3.0
    expect = x ** (k - r) / rho(r, k - r) / fockstate.normalization_N(r, x)
    assert stats.probability_P(r, k, x) == pytest.approx(expect, rel=1e-14)
    assert stats.probability_P(2, 2, 0.0) == 1.0
    assert stats.probability_P(2, 3, 0.0) == 0.0


def test_standard_cs_probability_is_poisson():
    assert stats.standard_cs_probability(3, 2.0) == pytest.approx(math.exp(-2) * 8 / 6)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_mean_photon_number_at_origin_and_growth(r):
    assert stats.mean_photon_number(r, 0.0) == pytest.approx(r)
    means = [stats.mean_photon_number(r, x) for x in (1.0, 5.0, 20.0)]
    assert means == sorted(means)


def test_statistics_report_is_consistent():
    rep = stats.statistics_report(2, 1.0 + 1.0j)
    assert rep.x == pytest.approx(2.0)
    q = (rep.mean_n2 - rep.mean_n**2) / rep.mean_n - 1
    assert rep.mandel_q == pytest.approx(q, abs=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        stats.probability_P(2, 1, 1.0)
    with pytest.raises(DomainError):
        stats.mandel_Q(1, -1.0)
    with pytest.raises(DomainError):
        stats.expectation_ps(0, 1.0, 1, 1)
