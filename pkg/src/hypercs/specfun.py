"""Special-function kernels: 0F_q series, log-Gamma and the modified Bessel I_1.

Every power series here is summed in a fixed sequential order with
Neumaier-compensated accumulation, so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np
from scipy import special

from hypercs.errors import ConvergenceError, DomainError, PoleError

MAX_TERMS = 10_000
REL_TOL = 1e-17
# max|term| / |sum| above which the double-precision result is recomputed
# in extended precision
CANCELLATION_LIMIT = 1e3


class CompensatedSum:
    """Running Neumaier sum for real or complex addends.

    The result depends only on the order of the addends, never on how they
    are grouped into calls to :meth:`add` / :meth:`extend`.
    """

    __slots__ = ("_re", "_re_c", "_im", "_im_c", "_complex")

    def __init__(self):
        self._re = 0.0
        self._re_c = 0.0
        self._im = 0.0
        self._im_c = 0.0
        self._complex = False

    @staticmethod
    def _two_sum(s, c, v):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        return t, c

    def add(self, value):
        if isinstance(value, complex):
            self._complex = True
            self._re, self._re_c = self._two_sum(self._re, self._re_c, value.real)
            self._im, self._im_c = self._two_sum(self._im, self._im_c, value.imag)
        else:
            self._re, self._re_c = self._two_sum(self._re, self._re_c, float(value))

    def extend(self, values):
        for v in values:
            self.add(v)

    @property
    def value(self):
        re = self._re + self._re_c
        if not self._complex:
            return re
        return complex(re, self._im + self._im_c)


@dataclass(frozen=True)
class HypergeometricSpec:
    """Lower parameters and argument of 0F_q([], lower_params, argument)."""

    lower_params: tuple[int, ...]
    argument: complex | float

    def __post_init__(self):
        params = tuple(int(b) for b in self.lower_params)
        if any(b < 1 for b in params):
            raise DomainError(f"lower parameters must be >= 1, got {params}")
        object.__setattr__(self, "lower_params", params)


def _check_finite(x):
    if isinstance(x, complex):
        ok = math.isfinite(x.real) and math.isfinite(x.imag)
    else:
        ok = math.isfinite(x)
    if not ok:
        raise DomainError(f"non-finite argument {x!r}")


def _start_term(lower, x, order, shift, power, n0):
    # coefficient a_{n0} of x^{n0} in 0F_q, times the falling factorial
    a = 1.0
    for m in range(n0):
        den = float(m + 1)
        for b in lower:
            den *= b + m
        a /= den
    e = n0 + shift - order + power
    if x == 0 and e < 0:
        raise DomainError("negative power of x at x = 0")
    return a * math.perm(n0 + shift, order) * x**e


def _sum_double(lower, x, order, shift, power, rel_tol, max_terms):
    n0 = max(0, order - shift)
    u = _start_term(lower, x, order, shift, power, n0)
    acc = CompensatedSum()
    acc.add(u)
    biggest = abs(u)
    small = 0
    n = n0
    while True:
        den = float(n + 1)
        for b in lower:
            den *= b + n
        u = u * x / den * ((n + 1 + shift) / (n + 1 + shift - order))
        n += 1
        acc.add(u)
        biggest = max(biggest, abs(u))
        if abs(u) <= rel_tol * abs(acc.value):
            small += 1
            if small == 2:
                break
        else:
            small = 0
        if n - n0 >= max_terms:
            raise ConvergenceError("0F_q series did not converge", n - n0)
    return acc.value, biggest


def _sum_extended(lower, x, order, shift, power, max_terms, bits):
    with mpmath.workprec(bits):
        xm = mpmath.mpmathify(x)
        n0 = max(0, order - shift)
        a = mpmath.mpf(1)
        for m in range(n0):
            den = mpmath.mpf(m + 1)
            for b in lower:
                den *= b + m
            a /= den
        u = a * math.perm(n0 + shift, order) * xm ** (n0 + shift - order + power)
        total = u
        eps = mpmath.mpf(2) ** (-bits)
        small = 0
        n = n0
        while True:
            den = mpmath.mpf(n + 1)
            for b in lower:
                den *= b + n
            u = u * xm / den * mpmath.mpf(n + 1 + shift) / (n + 1 + shift - order)
            n += 1
            total += u
            if abs(u) <= eps * abs(total):
                small += 1
                if small == 2:
                    break
            else:
                small = 0
            if n - n0 >= max_terms:
                raise ConvergenceError("0F_q series did not converge", n - n0)
        if isinstance(x, complex):
            return complex(total)
        return float(total)


def hyper0f_derivative(
    lower: Sequence[int],
    x,
    order: int = 0,
    shift: int = 0,
    power: int = 0,
    rel_tol: float = REL_TOL,
    max_terms: int = MAX_TERMS,
):
    """Return x^power * d^order/dx^order [x^shift * 0F_q([], lower, x)].

    The derivative is taken term by term on the power series, so the result
    carries no finite-difference error. `power` lets callers fold a
    prefactor x^power into the terms, which keeps expressions such as
    x^{p-r} d^p[x^r f] finite at x = 0.

    Stops once two consecutive terms fall below ``rel_tol`` times the running
    sum. When alternating terms cancel by more than three decades the series
    is redone in extended precision.
    """
    lower = tuple(lower)
    if not isinstance(x, complex):
        x = float(x)
    _check_finite(x)
    if order < 0 or shift < 0:
        raise DomainError("order and shift must be non-negative")

    value, biggest = _sum_double(lower, x, order, shift, power, rel_tol, max_terms)
    positive = not isinstance(x, complex) and x >= 0
    if not positive and biggest > CANCELLATION_LIMIT * abs(value):
        if value == 0:
            lost = 1100
        else:
            lost = math.log2(biggest / abs(value))
        bits = min(4000, 53 + int(math.ceil(lost)) + 40)
        value = _sum_extended(lower, x, order, shift, power, max_terms, bits)
    return value


def eval_0Fq(spec: HypergeometricSpec, rel_tol: float = REL_TOL):
    """Sum 0F_q([], spec.lower_params, spec.argument)."""
    return hyper0f_derivative(spec.lower_params, spec.argument, rel_tol=rel_tol)


def _pole_check(s):
    s = np.atleast_1d(np.asarray(s))
    re = np.real(s)
    im = np.imag(s)
    bad = (im == 0) & (re <= 0) & (re == np.round(re))
    if np.any(bad):
        raise PoleError(f"log_gamma has a pole at {s[bad][0]!r}")


def log_gamma(s):
    """Principal-branch log Gamma for complex scalars or arrays.

    Analytic on the plane cut along the negative real axis, so that
    exp(log_gamma(s)) == Gamma(s) and the imaginary part varies
    continuously along any vertical contour in Re s > 0.
    """
    _pole_check(s)
    out = special.loggamma(np.asarray(s, dtype=complex))
    if np.ndim(out) == 0:
        return complex(out)
    return out


def bessel_I1(y: float) -> float:
    """Modified Bessel function I_1 by its ascending series (y >= 0)."""
    y = float(y)
    if not math.isfinite(y) or y < 0:
        raise DomainError(f"bessel_I1 needs a finite y >= 0, got {y}")
    if y == 0.0:
        return 0.0
    h = 0.5 * y
    q = h * h
    term = h
    acc = CompensatedSum()
    acc.add(term)
    small = 0
    for k in range(1, MAX_TERMS):
        term *= q / (k * (k + 1))
        acc.add(term)
        if term <= REL_TOL * acc.value:
            small += 1
            if small == 2:
                return acc.value
        else:
            small = 0
    raise ConvergenceError("I_1 series did not converge", MAX_TERMS)
