"""Exception hierarchy shared by all submodules."""


class HyperCSError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HyperCSError, ValueError):
    """Argument outside the domain of the operation."""


class PoleError(DomainError):
    """Argument sits on a pole of the function."""


class ConfigurationError(HyperCSError, ValueError):
    """Inconsistent numerical or run configuration."""


class ConvergenceError(HyperCSError, ArithmeticError):
    """A series did not settle within its term cap."""

    def __init__(self, message, terms_used):
        super().__init__(f"{message} (terms used: {terms_used})")
        self.terms_used = terms_used


class AccuracyError(HyperCSError, ArithmeticError):
    """A quadrature error estimate exceeds the requested tolerance."""

    def __init__(self, message, estimate):
        super().__init__(f"{message} (estimate: {estimate:.3e})")
        self.estimate = estimate
