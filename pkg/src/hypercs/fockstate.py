"""Truncated Fock-space form of |z>_r and the boson-operator actions on it.

Coefficient ``c[n]`` of a :class:`FockExpansion` multiplies the basis state
|n + r>. Operators act coefficient-wise; no dense matrices are built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hypercs.errors import DomainError
from hypercs.momentproblem import rho, rho_ratio
from hypercs.specfun import REL_TOL, hyper0f_derivative

MIN_COEFFICIENTS = 16


def _check_r(r):
    if int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    return int(r)


@dataclass(frozen=True)
class FockExpansion:
    r: int
    coefficients: np.ndarray
    truncation_tail: float = 0.0

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __len__(self):
        return len(self.coefficients)

    def norm(self) -> float:
        return math.sqrt(math.fsum(np.abs(self.coefficients) ** 2))

    def inner(self, other: "FockExpansion") -> complex:
        """<self|other> over the shared truncated basis."""
        if other.r != self.r:
            raise DomainError("states live on different offset bases")
        m = min(len(self), len(other))
        prod = np.conj(self.coefficients[:m]) * other.coefficients[:m]
        return complex(math.fsum(prod.real), math.fsum(prod.imag))


@dataclass(frozen=True)
class NormalizationContext:
    r: int
    b_r: int
    rho0: int

    @classmethod
    def build(cls, r: int) -> "NormalizationContext":
        r = _check_r(r)
        return cls(r, math.prod(math.factorial(k) for k in range(r + 1)), rho(r, 0))


@dataclass(frozen=True)
class StirlingTable:
    """Signed Stirling numbers of the first kind sigma(r, k), k = 1..r."""

    r: int
    sigma: tuple[int, ...]

    @classmethod
    def build(cls, r: int) -> "StirlingTable":
        r = _check_r(r)
        # row[k] = s(n, k); s(n+1, k) = s(n, k-1) - n s(n, k)
        row = [1]
        for n in range(r):
            nxt = [0] * (n + 2)
            for k in range(n + 2):
                left = row[k - 1] if k >= 1 else 0
                here = row[k] if k <= n else 0
                nxt[k] = left - n * here
            row = nxt
        return cls(r, tuple(row[1:]))

    def __getitem__(self, k: int) -> int:
        return self.sigma[k - 1]


def normalization_lower_params(r: int) -> tuple[int, ...]:
    """Lower parameters [1, 2, 2, ..., r, r, r+1] of the 0F_{2r} in N_r."""
    r = _check_r(r)
    params = [1]
    for k in range(2, r + 1):
        params += [k, k]
    params.append(r + 1)
    return tuple(params)


def normalization_kernel(r: int, y, rel_tol: float = REL_TOL):
    """N_r(y) for any real or complex y (the unnormalized overlap kernel)."""
    r = _check_r(r)
    return hyper0f_derivative(normalization_lower_params(r), y, rel_tol=rel_tol) / rho(r, 0)


def normalization_N(r: int, x: float, rel_tol: float = REL_TOL) -> float:
    """N_r(x) = rho_r(0)^{-1} 0F_{2r}([], [1, 2,2, ..., r,r, r+1], x), x >= 0."""
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"x must be finite and >= 0, got {x}")
    return normalization_kernel(r, x, rel_tol=rel_tol)


def _tail_bound(r, x, n, weight):
    # squared-modulus tail sum_{m > n} |c_m|^2 given weight = |c_n|^2;
    # consecutive ratios x / rho_ratio(r, m) decrease in m
    nxt = weight * x / rho_ratio(r, n)
    ratio = x / rho_ratio(r, n + 1)
    if ratio >= 1.0:
        return math.inf
    return nxt / (1.0 - ratio)


def build_state(r: int, z: complex, tail_tol: float = 1e-12) -> FockExpansion:
    """Normalized, truncated expansion of |z>_r."""
    r = _check_r(r)
    if not 0 < tail_tol <= 1e-6:
        raise DomainError(f"tail_tol must lie in (0, 1e-6], got {tail_tol}")
    return _build_state(r, complex(z), tail_tol)


def _build_state(r, z, tail_tol):
    x = abs(z) ** 2
    norm = normalization_N(r, x)
    coeffs = [1.0 / math.sqrt(rho(r, 0)) + 0j]
    n = 0
    while True:
        weight = abs(coeffs[-1]) ** 2
        tail = _tail_bound(r, x, n, weight) / norm
        if len(coeffs) >= MIN_COEFFICIENTS and tail < tail_tol:
            break
        coeffs.append(coeffs[-1] * z / math.sqrt(rho_ratio(r, n)))
        n += 1
    c = np.array(coeffs) / math.sqrt(norm)
    return FockExpansion(r, c, tail)


def state_from_displacement(r: int, z: complex, n_terms: int) -> FockExpansion:
    """First ``n_terms`` coefficients via (a^dag)^r 0F_r(z a^dag)|0> / b(r).

    Independent of :func:`build_state`: uses the 0F_r coefficients and the
    creation-operator norms sqrt((n+r)!) instead of rho_r.
    """
    r = _check_r(r)
    ctx = NormalizationContext.build(r)
    x = abs(z) ** 2
    out = []
    for n in range(n_terms):
        den = math.factorial(n)
        for b in range(2, r + 2):
            den *= math.factorial(b + n - 1) // math.factorial(b - 1)
        amp = math.sqrt(math.factorial(n + r)) / (den * ctx.b_r)
        out.append(complex(z) ** n * amp)
    c = np.array(out) / math.sqrt(normalization_N(r, x))
    return FockExpansion(r, c)


def overlap_kernel(r: int, z: complex, z_prime: complex):
    """Raw kernel N_r(conj(z) z')."""
    return normalization_kernel(r, complex(z).conjugate() * complex(z_prime))


def overlap(r: int, z: complex, z_prime: complex) -> complex:
    """Normalized <z|z'>_r = N_r(z* z') / sqrt(N_r(|z|^2) N_r(|z'|^2))."""
    r = _check_r(r)
    kern = complex(overlap_kernel(r, z, z_prime))
    return kern / math.sqrt(
        normalization_N(r, abs(z) ** 2) * normalization_N(r, abs(z_prime) ** 2)
    )


def lowering_factor(r: int, n: int) -> float:
    """(n-1+r)!/(n-1)! * sqrt(n+r): amplitude of |n+r> -> |n+r-1>."""
    if n < 1:
        return 0.0
    return math.perm(n - 1 + r, r) * math.sqrt(n + r)


def apply_generalized_lowering(state: FockExpansion) -> FockExpansion:
    """(a^dag)^r a^{r+1} acting on a state of the same offset r.

    Result index n-1 receives c[n] times :func:`lowering_factor`; the |r>
    component is annihilated. Not normalized.
    """
    r = state.r
    c = state.coefficients
    factors = np.array([lowering_factor(r, n) for n in range(1, len(c))])
    return FockExpansion(r, c[1:] * factors, state.truncation_tail)


def apply_annihilation(state: FockExpansion) -> tuple[int, np.ndarray]:
    """a acting on the state: returns (new offset r-1, coefficients)."""
    r = state.r
    c = state.coefficients
    return r - 1, c * np.sqrt(np.arange(r, r + len(c), dtype=float))


def apply_nonlinear_form(state: FockExpansion) -> FockExpansion:
    """a f_r(n) acting on the state, with f_r evaluated on |n+r>'s occupation."""
    r = state.r
    table = StirlingTable.build(r)
    f = np.array(
        [float(stirling_f(r, n + r, table)) for n in range(len(state))], dtype=float
    )
    f_state = FockExpansion(r, state.coefficients * f)
    _, coeffs = apply_annihilation(f_state)
    # back onto the offset-r basis: index n of offset r-1 is |n + r - 1>
    return FockExpansion(r, coeffs[1:], state.truncation_tail)


def eigen_residual(r: int, z: complex, tail_tol: float = 1e-12) -> float:
    """|| (a^dag)^r a^{r+1}|z>_r - z|z>_r || outside the top truncation band."""
    r = _check_r(r)
    if not 0 < tail_tol <= 1e-10:
        raise DomainError(f"tail_tol must lie in (0, 1e-10], got {tail_tol}")
    z = complex(z)
    state = _build_state(r, z, tail_tol)
    lowered = apply_generalized_lowering(state).coefficients
    band = max(2, r)
    keep = len(state) - band
    diff = lowered[:keep] - z * state.coefficients[:keep]
    return math.sqrt(math.fsum(np.abs(diff) ** 2))


def stirling_f(r: int, m: int, table: StirlingTable | None = None) -> int:
    """f_r(m) = sum_k sigma(r, k) (m-1)^k, exact."""
    table = table or StirlingTable.build(r)
    return sum(table[k] * (m - 1) ** k for k in range(1, r + 1))


def stirling_f_unsigned(r: int, m: int) -> int:
    """sum_{k=1}^{r+1} |sigma(r+1, k)| (m-r-1)^{k-1}, exact."""
    table = StirlingTable.build(r + 1)
    return sum(abs(table[k]) * (m - r - 1) ** (k - 1) for k in range(1, r + 2))


def time_evolve(state: FockExpansion, t: float) -> FockExpansion:
    """Evolve under H = a^dag a + 1/2."""
    n = np.arange(len(state), dtype=float) + state.r + 0.5
    phases = np.exp(-1j * n * t)
    return FockExpansion(state.r, state.coefficients * phases, state.truncation_tail)
