"""Coherent states of photon-added type built from eigenfunctions of x^r d^{r+1}.

Submodules
----------
specfun        0F_q series, log-Gamma, I_1
eigenfun       regular eigenfunctions E(r, x)
fockstate      truncated Fock expansions of |z>_r and boson-operator actions
stats          photon statistics, Mandel Q, metric factor, quadrature variances
momentproblem  exact moments, inverse-Mellin weight, non-uniqueness diagnostics
cli            figure data and verification suites
"""

from hypercs.errors import (
    AccuracyError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    HyperCSError,
    PoleError,
)

__all__ = [
    "AccuracyError",
    "ConfigurationError",
    "ConvergenceError",
    "DomainError",
    "HyperCSError",
    "PoleError",
]

__version__ = "0.1.0"
