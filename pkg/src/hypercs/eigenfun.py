"""Regular eigenfunctions E(r, x) of x^r d^{r+1} with eigenvalue one.

E(r, x) = x^r 0F_r([], [2, 3, ..., r+1], x). Derivatives are always taken
term by term on this series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from hypercs.errors import DomainError
from hypercs.specfun import REL_TOL, hyper0f_derivative


@dataclass(frozen=True)
class EigenFunctionSpec:
    r: int

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise DomainError(f"r must be a positive integer, got {self.r!r}")

    @property
    def lower_params(self) -> tuple[int, ...]:
        return tuple(range(2, self.r + 2))


def _spec(spec) -> EigenFunctionSpec:
    return spec if isinstance(spec, EigenFunctionSpec) else EigenFunctionSpec(spec)


def _check_x(x, strict=False):
    x = float(x)
    if not math.isfinite(x) or x < 0 or (strict and x == 0):
        bound = "> 0" if strict else ">= 0"
        raise DomainError(f"x must be finite and {bound}, got {x}")
    return x


def eval_E(spec, x: float, rel_tol: float = REL_TOL) -> float:
    """E(r, x) for real x >= 0."""
    spec = _spec(spec)
    x = _check_x(x)
    return hyper0f_derivative(spec.lower_params, x, shift=spec.r, rel_tol=rel_tol)


def eval_E_derivative(spec, x: float, order: int, rel_tol: float = REL_TOL) -> float:
    """d^order E(r, x) / dx^order by term-wise differentiation."""
    spec = _spec(spec)
    x = _check_x(x)
    return hyper0f_derivative(
        spec.lower_params, x, order=order, shift=spec.r, rel_tol=rel_tol
    )


def series_coefficient(spec, m: int) -> Fraction:
    """Exact Taylor coefficient of x^m in E(r, x)."""
    spec = _spec(spec)
    n = m - spec.r
    if n < 0:
        return Fraction(0)
    den = math.factorial(n)
    for b in spec.lower_params:
        den *= math.factorial(b + n - 1) // math.factorial(b - 1)
    return Fraction(1, den)


def derivatives_at_zero(spec) -> list[int]:
    """[E(r,0), E'(r,0), ..., E^{(r)}(r,0)] from the Taylor coefficients."""
    spec = _spec(spec)
    out = []
    for p in range(spec.r + 1):
        value = series_coefficient(spec, p) * math.factorial(p)
        assert value.denominator == 1
        out.append(int(value))
    return out


def ode_residual(spec, x: float, rel_tol: float = REL_TOL) -> float:
    """x^r E^{(r+1)}(r, x) - E(r, x); zero up to rounding for an exact E."""
    spec = _spec(spec)
    x = _check_x(x, strict=True)
    r = spec.r
    lhs = hyper0f_derivative(
        spec.lower_params, x, order=r + 1, shift=r, power=r, rel_tol=rel_tol
    )
    return lhs - eval_E(spec, x, rel_tol=rel_tol)
