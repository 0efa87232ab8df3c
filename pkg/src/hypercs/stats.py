"""Photon statistics, Mandel parameter, metric factor and quadrature variances of |z>_r.

Two families of routes are kept apart on purpose:

* derivative routes work on the series of x^r N_r(x) (or N_r) differentiated
  term by term, see :func:`_scaled_derivative`;
* Fock-sum routes add up P_r(k, x)-weighted powers of k directly.

Variances use the convention where the vacuum value is 1/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from hypercs.errors import ConvergenceError, DomainError
from hypercs.fockstate import normalization_N, normalization_lower_params
from hypercs.momentproblem import rho, rho_ratio
from hypercs.specfun import MAX_TERMS, REL_TOL, CompensatedSum, hyper0f_derivative

FOCK_TAIL_TOL = 1e-13


def _check_r(r):
    if int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    return int(r)


def _check_x(x):
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"x must be finite and >= 0, got {x}")
    return x


@dataclass(frozen=True)
class StatisticsReport:
    r: int
    x: float
    mean_n: float
    mean_n2: float
    mandel_q: float
    metric_omega: float
    var_x: float
    var_p: float


def probability_P(r: int, k: int, x: float) -> float:
    """Probability of |k> in |z>_r at |z|^2 = x (requires k >= r)."""
    r = _check_r(r)
    x = _check_x(x)
    if k < r:
        raise DomainError(f"|{k}> lies below the support |{r}>, |{r + 1}>, ...")
    m = k - r
    if x == 0.0:
        return 1.0 if m == 0 else 0.0
    log_p = m * math.log(x) - math.log(rho(r, m))
    return math.exp(log_p) / normalization_N(r, x)


def standard_cs_probability(k: int, x: float) -> float:
    """Poisson weight e^{-x} x^k / k! of the standard coherent state."""
    x = _check_x(x)
    if k < 0:
        raise DomainError("k must be >= 0")
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(x) - x - math.lgamma(k + 1))


def _fock_power_sum(r, x, p, tail_tol=FOCK_TAIL_TOL):
    # sum_n (n+r)^p x^n / rho_r(n), truncated by a geometric tail bound
    w = 1.0 / rho(r, 0)
    acc = CompensatedSum()
    n = 0
    while True:
        term = (n + r) ** p * w
        acc.add(term)
        ratio_next = x / rho_ratio(r, n + 1) * ((n + r + 2) / (n + r + 1)) ** p
        nxt = x / rho_ratio(r, n) * ((n + r + 1) / (n + r)) ** p * term
        if ratio_next < 1.0 and nxt / (1.0 - ratio_next) <= tail_tol * acc.value:
            return acc.value
        w *= x / rho_ratio(r, n)
        n += 1
        if n >= MAX_TERMS:
            raise ConvergenceError("Fock sum did not converge", n)


def moments_np(r: int, x: float, p: int) -> float:
    """<n^p> as a direct sum over the photon-number distribution."""
    r = _check_r(r)
    x = _check_x(x)
    if p < 0:
        raise DomainError("p must be >= 0")
    return _fock_power_sum(r, x, p) / _fock_power_sum(r, x, 0)


def mean_photon_number(r: int, x: float) -> float:
    return moments_np(r, x, 1)


def _scaled_derivative(r, x, p):
    # x^{p-r} d^p/dx^p [x^r N_r(x)], summed term-wise
    lower = normalization_lower_params(r)
    return hyper0f_derivative(lower, x, order=p, shift=r, power=p - r) / rho(r, 0)


def expectation_pp(r: int, x: float, p: int) -> float:
    """<(a^dag)^p a^p> = x^{p-r} / N_r(x) * d^p/dx^p [x^r N_r(x)]."""
    r = _check_r(r)
    x = _check_x(x)
    if p < 0:
        raise DomainError("p must be >= 0")
    return _scaled_derivative(r, x, p) / normalization_N(r, x)


def _sqrt_ratio(num: int, den: int) -> float:
    return math.sqrt(Fraction(num, den))


def expectation_ps(r: int, z: complex, p: int, s: int) -> complex:
    """<(a^dag)^p a^s> in |z>_r.

    Sums conj(z)^{n+p-s} z^n sqrt((n+r)!(n+r+p-s)! / (rho(n) rho(n+p-s)))
    / (n+r-s)! over the admissible n, then divides by N_r(|z|^2).
    """
    r = _check_r(r)
    if p < 0 or s < 0:
        raise DomainError("p and s must be >= 0")
    z = complex(z)
    x = abs(z) ** 2
    d = p - s
    n0 = max(0, -d, s - r)
    f = math.factorial
    amp = _sqrt_ratio(f(n0 + r) * f(n0 + r + d), rho(r, n0) * rho(r, n0 + d))
    term = amp / f(n0 + r - s) * abs(z) ** (2 * n0 + d)
    acc = CompensatedSum()
    acc.add(term)
    small = 0
    n = n0
    while True:
        grow = math.sqrt(
            (n + r + 1) * (n + r + d + 1) / (rho_ratio(r, n) * rho_ratio(r, n + d))
        )
        term *= grow * x / (n + r - s + 1)
        n += 1
        acc.add(term)
        if term <= REL_TOL * acc.value:
            small += 1
            if small == 2:
                break
        else:
            small = 0
        if n - n0 >= MAX_TERMS:
            raise ConvergenceError("expectation series did not converge", n - n0)
    theta = cmath.phase(z) if z != 0 else 0.0
    return cmath.exp(1j * (s - p) * theta) * acc.value / normalization_N(r, x)


def mandel_Q(r: int, x: float) -> float:
    """Mandel parameter from term-wise derivatives of F = x^r N_r(x).

    x F''/F' - x F'/F is evaluated as G2/G1 - G1/G0 with
    G_p = x^{p-r} F^{(p)}, which stays finite at x = 0 (limit -1).
    """
    r = _check_r(r)
    x = _check_x(x)
    g0, g1, g2 = (_scaled_derivative(r, x, p) for p in range(3))
    return g2 / g1 - g1 / g0


def mandel_Q_moments(r: int, x: float) -> float:
    """(<n^2> - <n>^2) / <n> - 1 from direct Fock sums."""
    r = _check_r(r)
    x = _check_x(x)
    s0, s1, s2 = (_fock_power_sum(r, x, p) for p in range(3))
    mean = s1 / s0
    var = s2 / s0 - mean * mean
    return var / mean - 1.0


def metric_omega_series(lower, x: float, scale: float = 1.0) -> float:
    """d/dx [x N'/N] for N = scale * 0F_q([], lower, x), term-wise."""
    h0, h1, h2 = (hyper0f_derivative(lower, x, order=p) * scale for p in range(3))
    u = h1 / h0
    return u + x * (h2 / h0 - u * u)


def metric_omega(r: int, x: float) -> float:
    r = _check_r(r)
    x = _check_x(x)
    return metric_omega_series(normalization_lower_params(r), x, 1.0 / rho(r, 0))


def _quadrature_moments(r, z):
    a = expectation_ps(r, z, 0, 1)
    ad = expectation_ps(r, z, 1, 0)
    a2 = expectation_ps(r, z, 0, 2)
    ad2 = expectation_ps(r, z, 2, 0)
    n = expectation_ps(r, z, 1, 1)
    return a, ad, a2, ad2, n


def quadrature_variances(r: int, z: complex) -> tuple[float, float]:
    """((Delta X)^2, (Delta P)^2) for X = (a + a^dag)/sqrt2, P = -i(a - a^dag)/sqrt2."""
    a, ad, a2, ad2, n = _quadrature_moments(_check_r(r), complex(z))
    var_x = 0.5 * (1 + 2 * n + a2 + ad2 - a * a - ad * ad - 2 * a * ad)
    var_p = 0.5 * (1 + 2 * n - a2 - ad2 + a * a + ad * ad - 2 * a * ad)
    return var_x.real, var_p.real


def statistics_report(r: int, z: complex) -> StatisticsReport:
    z = complex(z)
    x = abs(z) ** 2
    mean = mean_photon_number(r, x)
    var_x, var_p = quadrature_variances(r, z)
    return StatisticsReport(
        r=r,
        x=x,
        mean_n=mean,
        mean_n2=moments_np(r, x, 2),
        mandel_q=mandel_Q(r, x),
        metric_omega=metric_omega(r, x),
        var_x=var_x,
        var_p=var_p,
    )


def grid_values(fn, r_values, xs):
    """Evaluate fn(r, x) on every (r, x) pair; rows follow xs."""
    return np.array([[fn(r, x) for r in r_values] for x in xs])
