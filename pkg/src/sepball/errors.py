"""Exception hierarchy shared by every sepball module."""


class SepballError(Exception):
    """Base class for all sepball errors."""


class NotHermitianError(SepballError, ValueError):
    pass


class DimensionError(SepballError, ValueError):
    """Shape mismatch, bad subsystem structure, or dense-dimension cap exceeded."""


class TraceError(SepballError, ValueError):
    """Trace is nonpositive, or not 1 where unit trace is required."""


class NumericalFailure(SepballError, ArithmeticError):
    """The Hermitian eigensolver did not converge."""


class ScanCapExceeded(SepballError, RuntimeError):
    pass
