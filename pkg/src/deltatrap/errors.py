"""Exception and warning classes shared across the package."""


class DeltaTrapError(Exception):
    """Base class for all package errors."""


class ValidationError(DeltaTrapError, ValueError):
    """Invalid user-supplied parameter. ``field`` names the offending input."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalError(DeltaTrapError):
    """A numerical procedure failed (bracketing, convergence, truncation)."""


class PoleError(NumericalError, ValueError):
    """Function evaluated at one of its poles."""


class SeriesConvergenceError(NumericalError):
    pass


class BracketError(NumericalError):
    def __init__(self, message, k=None):
        self.k = k
        super().__init__(message)


class TruncationError(NumericalError):
    def __init__(self, message, defect=None):
        self.defect = defect
        super().__init__(message)


class ConvergenceError(NumericalError):
    pass


class AccuracyWarning(RuntimeWarning):
    """Two evaluation routes disagree by more than the requested tolerance."""


class SupportWarning(RuntimeWarning):
    """A wavefunction is not negligible at the edge of its grid."""
