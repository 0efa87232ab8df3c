import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercs.errors import ConvergenceError, DomainError, PoleError
from hypercs.specfun import (
    CompensatedSum,
    HypergeometricSpec,
    bessel_I1,
    eval_0Fq,
    hyper0f_derivative,
    log_gamma,
)


def _exact_0fq(lower, x, terms=60):
    x = Fraction(x)
    total, term = Fraction(0), Fraction(1)
    for n in range(terms):
        total += term
        den = n + 1
        for b in lower:
            den *= b + n
        term = term * x / den
    return total


@pytest.mark.parametrize(
    "lower, x",
    [((2, 3), 1), ((2, 3), 7), ((1,), Fraction(1, 3)), ((1, 2, 2, 3), 40), ((2,), -5)],
)
def test_0fq_against_exact_rationals(lower, x):
    exact = float(_exact_0fq(lower, x))
    got = eval_0Fq(HypergeometricSpec(lower, float(x)))
    assert got == pytest.approx(exact, rel=1e-15)


def test_0f2_frozen_value():
    # 0F2([], [2, 3], 1) from a 60-term rational sum
    assert eval_0Fq(HypergeometricSpec((2, 3), 1.0)) == pytest.approx(1.1737278209646076, rel=1e-15)


@pytest.mark.parametrize("x", [1e-3, 1.0, 30.0, 1e3, 1e4])
def test_0f1_matches_mpmath(x):
    with mpmath.workdps(40):
        ref = float(mpmath.hyp0f1(2, x))
    assert hyper0f_derivative((2,), x) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("x", [-1.0, -50.0, -400.0])
def test_cancelling_argument_falls_back_to_extended_precision(x):
    # 0F1(;1;-x) = J_0(2 sqrt x): heavy cancellation for large x
    with mpmath.workdps(60):
        ref = float(mpmath.hyp0f1(1, x))
    got = hyper0f_derivative((1,), x)
    assert abs(got - ref) <= 1e-14 * max(1.0, abs(ref))


def test_complex_argument():
    z = 3.0 - 4.0j
    with mpmath.workdps(40):
        ref = complex(mpmath.hyper([], [2, 2, 3], z))
    got = hyper0f_derivative((2, 2, 3), z)
    assert abs(got - ref) < 1e-15 * abs(ref)


@pytest.mark.parametrize("order, shift, power", [(1, 0, 0), (2, 1, 0), (3, 2, 1), (2, 2, 0)])
def test_termwise_derivative_matches_mpmath_diff(order, shift, power):
    lower, x = (2, 3), 1.7
    with mpmath.workdps(50):
        f = lambda t: t**shift * mpmath.hyper([], list(lower), t)
        ref = float(x**power * mpmath.diff(f, x, order))
    got = hyper0f_derivative(lower, x, order=order, shift=shift, power=power)
    assert got == pytest.approx(ref, rel=1e-13)


def test_derivative_at_origin_is_finite_with_compensating_power():
    # x^{-1} d/dx [x^2 0F1(;2;x)] -> 2 at x = 0
    assert hyper0f_derivative((2,), 0.0, order=1, shift=2, power=-1) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        hyper0f_derivative((2,), 0.0, order=0, shift=0, power=-1)


def test_bad_inputs():
    with pytest.raises(DomainError):
        HypergeometricSpec((0, 2), 1.0)
    with pytest.raises(DomainError):
        hyper0f_derivative((2,), math.nan)
    with pytest.raises(DomainError):
        hyper0f_derivative((2,), 1.0, order=-1)
    with pytest.raises(ConvergenceError) as info:
        hyper0f_derivative((1,), 1e4, max_terms=20)
    assert info.value.terms_used == 20


# --- compensated summation ---------------------------------------------------


def test_compensated_sum_recovers_lost_bits():
    acc = CompensatedSum()
    acc.extend([1.0, 1e100, 1.0, -1e100])
    assert acc.value == 2.0


def test_compensated_sum_keeps_complex_type():
    acc = CompensatedSum()
    acc.extend([1 + 0j, 2.0])
    assert isinstance(acc.value, complex)
    assert acc.value == 3 + 0j


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-1e12, 1e12, allow_nan=False), min_size=1, max_size=80),
    st.integers(1, 10),
)
def test_compensated_sum_independent_of_chunking(values, chunk):
    one = CompensatedSum()
    for v in values:
        one.add(v)
    many = CompensatedSum()
    for i in range(0, len(values), chunk):
        many.extend(values[i : i + chunk])
    assert one.value == many.value
    assert one.value == pytest.approx(math.fsum(values), abs=1e-3)


# --- log gamma and I_1 ------------------------------------------------------


@pytest.mark.parametrize("s", [0.5 + 10j, 3.0, 0.25 - 40j, -2.5 + 0.1j, 120.0 + 3j])
def test_log_gamma_principal_branch(s):
    with mpmath.workdps(30):
        ref = complex(mpmath.loggamma(s))
    assert abs(log_gamma(s) - ref) < 1e-12 * max(1.0, abs(ref))


def test_log_gamma_frozen_value():
    # Stirling series at 30 digits
    ref = complex(-14.789024734744293, 13.030020034911090)
    assert abs(log_gamma(0.5 + 10j) - ref) < 1e-12


def test_log_gamma_vectorised_and_poles():
    s = np.array([1.0, 2.0, 0.5 + 3j])
    out = log_gamma(s)
    assert out.shape == (3,)
    assert abs(out[1]) < 1e-15
    for pole in (0.0, -3.0, np.array([1.0, -1.0])):
        with pytest.raises(PoleError):
            log_gamma(pole)


def test_bessel_i1_frozen_values():
    # exact 40-term rational sum of the ascending series at y = 2
    exact = sum(Fraction(1, math.factorial(k) * math.factorial(k + 1)) for k in range(40))
    assert bessel_I1(2.0) == pytest.approx(float(exact), rel=1e-15)
    assert bessel_I1(0.0) == 0.0


@pytest.mark.parametrize("y", [1e-6, 0.3, 5.0, 14.1, 60.0])
def test_bessel_i1_matches_mpmath(y):
    with mpmath.workdps(40):
        ref = float(mpmath.besseli(1, y))
    assert bessel_I1(y) == pytest.approx(ref, rel=1e-14)


def test_bessel_i1_domain():
    with pytest.raises(DomainError):
        bessel_I1(-1.0)
