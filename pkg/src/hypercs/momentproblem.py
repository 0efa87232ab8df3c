"""Exact moments rho_r(n) and the inverse-Mellin weight that reproduces them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from hypercs.errors import AccuracyError, ConfigurationError, DomainError
from hypercs.specfun import log_gamma


def _check_r(r):
    if int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    return int(r)


@lru_cache(maxsize=None)
def rho(r: int, n: int) -> int:
    """rho_r(n) = [prod_{k<r} (n+k)!]^2 (n+r)!, exact."""
    r = _check_r(r)
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    p = 1
    for k in range(r):
        p *= math.factorial(n + k)
    return p * p * math.factorial(n + r)


def rho_ratio(r: int, n: int) -> int:
    """rho_r(n+1) / rho_r(n), an integer."""
    p = 1
    for k in range(r):
        p *= n + 1 + k
    return p * p * (n + r + 1)


def log_rho(r: int, n: int) -> float:
    return math.log(rho(r, n))


@dataclass(frozen=True)
class MomentSequence:
    r: int
    values: dict[int, int] = field(default_factory=dict)

    @classmethod
    def build(cls, r: int, n_max: int) -> "MomentSequence":
        return cls(r, {n: rho(r, n) for n in range(n_max + 1)})

    def is_log_convex(self) -> bool:
        ns = sorted(self.values)
        return all(
            self.values[n + 1] * self.values[n - 1] >= self.values[n] ** 2
            for n in ns[1:-1]
            if n - 1 in self.values and n + 1 in self.values
        )


# ---------------------------------------------------------------------------
# inverse Mellin transform on a vertical contour


@dataclass(frozen=True)
class MellinBarnesSpec:
    """prod_j Gamma(s + shift_j)^mult_j, inverted along Re s = contour_re.

    ``im_cutoff=None`` picks the truncation height T automatically, so that
    the integrand at +-iT is below 1e-18 of its value on the real axis.
    """

    gamma_shifts: tuple[tuple[int, int], ...]
    contour_re: float = 0.5
    im_cutoff: float | None = None
    step: float = 0.05
    tail_tol: float = 1e-12

    def __post_init__(self):
        shifts = tuple((int(a), int(m)) for a, m in self.gamma_shifts)
        if not shifts:
            raise ConfigurationError("need at least one Gamma factor")
        if any(a < 0 or m < 1 for a, m in shifts):
            raise ConfigurationError(f"bad Gamma factors {shifts}")
        object.__setattr__(self, "gamma_shifts", shifts)
        if not self.contour_re > self.rightmost_pole:
            raise ConfigurationError(
                f"contour Re s = {self.contour_re} must lie right of the pole "
                f"at {self.rightmost_pole}"
            )
        if not self.step > 0:
            raise ConfigurationError("quadrature step must be positive")
        if self.im_cutoff is not None and not self.im_cutoff > 0:
            raise ConfigurationError("im_cutoff must be positive")

    @classmethod
    def for_r(cls, r: int, **kwargs) -> "MellinBarnesSpec":
        """Gamma(s)^2 Gamma(s+1)^2 ... Gamma(s+r-1)^2 Gamma(s+r) = rho_r(s-1)."""
        r = _check_r(r)
        shifts = tuple((k, 2) for k in range(r)) + ((r, 1),)
        return cls(shifts, **kwargs)

    @property
    def rightmost_pole(self) -> float:
        return -min(a for a, _ in self.gamma_shifts)

    @property
    def n_factors(self) -> int:
        return sum(m for _, m in self.gamma_shifts)

    def log_mellin(self, s):
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for a, m in self.gamma_shifts:
            out = out + m * log_gamma(s + a)
        return out

    def mellin_real(self, c: float) -> float:
        return math.exp(sum(m * math.lgamma(c + a) for a, m in self.gamma_shifts))


def saddle_contour(spec: MellinBarnesSpec, x: float) -> float:
    """Re s minimizing M(c) x^{-c}; never left of ``spec.contour_re``."""
    target = math.log(x)

    def slope(c):
        return sum(m * special.digamma(c + a) for a, m in spec.gamma_shifts) - target

    lo = spec.contour_re
    if slope(lo) >= 0:
        return lo
    hi = max(2 * lo, 1.0)
    while slope(hi) < 0:
        hi *= 2
    return optimize.brentq(slope, lo, hi, xtol=1e-12)


_LOG_CUTOFF = math.log(1e-18)


def _cutoff(spec, c):
    if spec.im_cutoff is not None:
        return spec.im_cutoff
    ref = spec.log_mellin(c).real
    t = 1.0
    while spec.log_mellin(complex(c, t)).real - ref > _LOG_CUTOFF:
        t += 1.0
    return t


def _contour_integrals(spec, x, c, with_slope):
    # trapezoid over t in [0, T] of the conjugate-symmetric integrand
    T = _cutoff(spec, c)
    h = spec.step
    k = int(math.ceil(T / h))
    t = h * np.arange(k + 1)
    s = c + 1j * t
    lx = math.log(x)
    vals = np.exp(spec.log_mellin(s) - s * lx)
    w = np.full(k + 1, h)
    w[0] = w[-1] = 0.5 * h
    f = vals.real
    weight = math.fsum(w * f) / math.pi
    # |integrand| at T bounds the neglected tail up to the exponential decay
    # rate n_factors * pi / 2 of the Gamma product, halved for safety
    tail = abs(vals[-1]) / (spec.n_factors * math.pi / 4) / math.pi
    slope = None
    if with_slope:
        # x dW/dx = -(1/2 pi) int s M(s) x^{-s} dt
        slope = -math.fsum(w * (s * vals).real) / math.pi
    return weight, slope, tail


def weight_W(spec: MellinBarnesSpec, x: float, *, adaptive: bool = False) -> float:
    """Inverse Mellin transform of the Gamma product at x > 0.

    With ``adaptive=True`` the contour is moved right to the saddle point of
    M(c) x^{-c} whenever that lies beyond ``spec.contour_re``; this avoids
    the cancellation a fixed contour suffers where the weight is tiny.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"weight needs finite x > 0, got {x}")
    c = saddle_contour(spec, x) if adaptive else spec.contour_re
    value, _, tail = _contour_integrals(spec, x, c, False)
    if tail > spec.tail_tol * abs(value):
        raise AccuracyError("contour truncated too early", tail / abs(value))
    return value


def weight_log_slope(spec: MellinBarnesSpec, x: float, *, adaptive: bool = True) -> float:
    """-d ln W / d ln x at x, from the same contour quadrature."""
    c = saddle_contour(spec, x) if adaptive else spec.contour_re
    value, slope, _ = _contour_integrals(spec, float(x), c, True)
    return -slope / value


# ---------------------------------------------------------------------------
# moment reproduction


@dataclass(frozen=True)
class QuadConfig:
    """Knobs for integrating x^n W(x) over (0, infinity).

    [0, 1] is mapped by x = exp(-u) onto u in [0, u_max]; [1, x_max] is cut
    into panels whose endpoints grow geometrically by exp(panel_log_width)
    and integrated in x by Gauss-Legendre. ``x_max=None`` extends the panels
    until the large-x tail bound drops below ``tail_target`` (relative).
    """

    contour_re: float = 0.5
    im_cutoff: float | None = None
    step: float = 0.05
    x_max: float | None = None
    u_max: float = 40.0
    u_panel: float = 1.0
    panel_log_width: float = 0.25
    gauss_order: int = 20
    tail_target: float = 1e-10
    tolerance: float = 1e-6
    max_panels: int = 600

    def spec(self, r: int) -> MellinBarnesSpec:
        return MellinBarnesSpec.for_r(
            r, contour_re=self.contour_re, im_cutoff=self.im_cutoff, step=self.step
        )


@dataclass(frozen=True)
class MomentCheck:
    r: int
    n: int
    integral: float
    exact: int
    rel_error: float
    tail_bound: float
    x_max: float


@lru_cache(maxsize=None)
def _gauss(order):
    return np.polynomial.legendre.leggauss(order)


@lru_cache(maxsize=4096)
def _panel(spec, a, b, order):
    nodes, weights = _gauss(order)
    xs = 0.5 * (b - a) * nodes + 0.5 * (b + a)
    ws = 0.5 * (b - a) * weights
    vals = np.array([weight_W(spec, x, adaptive=True) for x in xs])
    return xs, ws, vals


@lru_cache(maxsize=4096)
def _u_panel(spec, a, b, order):
    nodes, weights = _gauss(order)
    us = 0.5 * (b - a) * nodes + 0.5 * (b + a)
    ws = 0.5 * (b - a) * weights
    vals = np.array([weight_W(spec, math.exp(-u), adaptive=True) for u in us])
    return us, ws, vals


def _origin_tail(spec, n, u_max):
    # W(x) ~ G(0) (ln(1/x) - 2 gamma) + G'(0) as x -> 0, where M = Gamma(s)^2 G(s);
    # bounded here by 2 G(0) (u + C) for u = ln(1/x) >= u_max
    rest = [(a, m) for a, m in spec.gamma_shifts if a > 0]
    g0 = math.exp(sum(m * math.lgamma(a) for a, m in rest))
    dlog = sum(m * special.digamma(a) for a, m in rest)
    const = 2 * np.euler_gamma + abs(dlog) + 1.0
    k = n + 1
    return 2 * g0 * math.exp(-k * u_max) * ((u_max + const) / k + 1 / k**2)


def _far_tail(spec, n, x):
    # psi(u) = -ln W(e^u) convex => W(e^u) <= W(X) e^{-kappa (u - ln X)} beyond X
    w = weight_W(spec, x, adaptive=True)
    kappa = weight_log_slope(spec, x)
    if kappa <= n + 1:
        return math.inf
    return x ** (n + 1) * w / (kappa - n - 1)


def verify_moment(r: int, n: int, cfg: QuadConfig | None = None) -> MomentCheck:
    """Integrate x^n W_r(x) numerically and compare with the exact rho_r(n)."""
    cfg = cfg or QuadConfig()
    r = _check_r(r)
    if n < 0:
        raise DomainError("n must be >= 0")
    spec = cfg.spec(r)
    exact = rho(r, n)
    order = cfg.gauss_order

    near = []
    n_u = int(math.ceil(cfg.u_max / cfg.u_panel))
    for j in range(n_u):
        us, ws, vals = _u_panel(spec, j * cfg.u_panel, (j + 1) * cfg.u_panel, order)
        near.append(ws * np.exp(-(n + 1) * us) * vals)
    tail = _origin_tail(spec, n, n_u * cfg.u_panel)

    far = []
    width = cfg.panel_log_width
    k = 0
    while True:
        a = math.exp(k * width)
        b = math.exp((k + 1) * width)
        if cfg.x_max is not None:
            if a >= cfg.x_max:
                break
            b = min(b, cfg.x_max)
        xs, ws, vals = _panel(spec, a, b, order)
        far.append(ws * xs**n * vals)
        k += 1
        if cfg.x_max is None:
            bound = _far_tail(spec, n, b)
            if bound <= cfg.tail_target * exact:
                x_max = b
                break
        if k >= cfg.max_panels:
            raise AccuracyError("no panel count reaches the tail target", math.inf)
    if cfg.x_max is not None:
        x_max = cfg.x_max
        bound = _far_tail(spec, n, x_max)

    integral = math.fsum(np.concatenate(near + far))
    rel_tail = (tail + bound) / exact
    if rel_tail > cfg.tolerance:
        raise AccuracyError("moment tail bound above tolerance", rel_tail)
    rel = abs(integral - exact) / exact
    return MomentCheck(r, n, integral, exact, rel, rel_tail, x_max)


# ---------------------------------------------------------------------------
# non-uniqueness diagnostics


@dataclass(frozen=True)
class CarlemanResult:
    r: int
    n_max: int
    partial_sum: float
    tail_bound: float
    exponent: float
    converges: bool


def carleman_sum(r: int, n_max: int = 1000, margin: float = 0.1) -> CarlemanResult:
    """Partial sum of rho_r(n)^{-1/(2n)}, n = 1..n_max, and its tail behaviour.

    The decay exponent is the least-squares slope of ln(term) against ln n
    over the last decade n_max/10..n_max. The tail bound uses
    rho_r(n) >= (n!)^{2r+1} >= (n/e)^{(2r+1) n}.
    """
    r = _check_r(r)
    if n_max < 10:
        raise ConfigurationError("n_max must be >= 10")
    logs = [math.log(rho(r, 0))]
    for m in range(n_max):
        logs.append(logs[-1] + math.log(rho_ratio(r, m)))
    ns = np.arange(1, n_max + 1)
    terms = np.exp(-np.array(logs[1:]) / (2 * ns))
    partial = math.fsum(terms)
    lo = n_max // 10
    slope = np.polyfit(np.log(ns[lo - 1 :]), np.log(terms[lo - 1 :]), 1)[0]
    alpha = (2 * r + 1) / 2
    tail = math.e**alpha * n_max ** (1 - alpha) / (alpha - 1)
    exponent = float(-slope)
    return CarlemanResult(r, n_max, partial, tail, exponent, exponent > 1 + margin)


def default_log_grid(u_min: float = -4.0, u_max: float = 4.0, step: float = 0.1):
    n = int(round((u_max - u_min) / step))
    return np.exp(u_min + step * np.arange(n + 1))


def log_convexity_check(r: int, x_grid=None, spec: MellinBarnesSpec | None = None) -> float:
    """Smallest finite-difference second derivative of psi(u) = -ln W_r(e^u)."""
    r = _check_r(r)
    xs = default_log_grid() if x_grid is None else np.asarray(x_grid, dtype=float)
    if xs.ndim != 1 or len(xs) < 3:
        raise ConfigurationError("need at least three grid points")
    if np.any(xs <= 0):
        raise ConfigurationError("grid points must be positive")
    u = np.log(np.sort(xs))
    if np.any(np.diff(u) <= 0):
        raise ConfigurationError("grid points must be distinct")
    spec = spec or MellinBarnesSpec.for_r(r)
    psi = np.array([-math.log(weight_W(spec, math.exp(v), adaptive=True)) for v in u])
    h0 = u[1:-1] - u[:-2]
    h1 = u[2:] - u[1:-1]
    second = 2 * (h0 * psi[2:] - (h0 + h1) * psi[1:-1] + h1 * psi[:-2]) / (h0 * h1 * (h0 + h1))
    return float(second.min())


@dataclass(frozen=True)
class NonUniquenessReport:
    r: int
    carleman: CarlemanResult
    min_psi_second: float
    convex: bool

    @property
    def verdict(self) -> str:
        return "non-unique" if self.carleman.converges and self.convex else "undecided"


def nonuniqueness_report(r: int, n_max: int = 1000, slack: float = 1e-6) -> NonUniquenessReport:
    carl = carleman_sum(r, n_max)
    psi2 = log_convexity_check(r)
    return NonUniquenessReport(r, carl, psi2, psi2 >= -slack)
