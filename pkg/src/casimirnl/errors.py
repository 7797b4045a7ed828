"""Exception hierarchy shared across the package."""


class CasimirError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(CasimirError):
    """Malformed or inconsistent run configuration."""


class NegativeSpectrum(CasimirError):
    """Im chi < 0 beyond tolerance: the medium model is not passive."""


class GridTooCoarse(CasimirError):
    """Principal-value quadrature error estimate exceeds the requested tolerance."""


class DivisionBySpectrum(CasimirError):
    """Coupling inversion requested inside a transparent window (Im chi ~ 0)."""


class QuadratureFailure(CasimirError):
    """Integration tolerance unreachable within the evaluation budget."""


class OrderUnsupported(CasimirError):
    """Deterministic evaluation requested for a nonlinearity order above 3."""


class NegativeDelta(CasimirError):
    """A supplied nonlinear-correction table violates positivity."""


class PoleProximity(CasimirError):
    """Green-function evaluation requested too close to the pole manifold."""


class SumNotConverged(CasimirError):
    """Matsubara sum truncated before the tail estimate met the tolerance."""

    def __init__(self, message, terms_used=None, tail_estimate=None):
        super().__init__(message)
        self.terms_used = terms_used
        self.tail_estimate = tail_estimate


class DimensionTooHigh(CasimirError):
    """Deterministic nested quadrature limited to five axes."""
