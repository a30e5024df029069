"""Exception hierarchy shared by all qroulette modules."""


class QRouletteError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(QRouletteError, ValueError):
    """Inputs violate a documented contract (range, shape, invariant)."""


class NumericalError(QRouletteError, RuntimeError):
    """A numerical procedure failed (non-convergence, truncation, overflow)."""


class IntegrationError(NumericalError):
    """Quadrature did not reach the requested tolerance.

    Carries the best available estimate so callers can inspect it.
    """

    def __init__(self, message: str, best_estimate: float | None = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class TruncationError(NumericalError):
    """A truncated basis or distribution cannot hold the requested mass."""
