"""Exception hierarchy shared by all modules."""


class RTCError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(RTCError, ValueError):
    """Malformed input: bad family/rank, wrong weight length, non-dominant weight."""


class InadmissibleParameterError(ParameterError):
    """The (algebra, ell, p) point does not define a category."""


class ResonanceError(InadmissibleParameterError):
    """A denominator of the quantum dimension product vanishes."""

    def __init__(self, message, root=None):
        super().__init__(message)
        self.root = root


class DegenerateObjectError(RTCError):
    """A simple object has (numerically) vanishing quantum dimension."""

    def __init__(self, message, weight=None):
        super().__init__(message)
        self.weight = weight


class NumericalInstabilityError(RTCError):
    """A numerical decision could not be made at the available precision."""


class OracleFailureError(RTCError):
    """An independent cross-check (Verlinde formula) did not produce integers."""


class CapabilityError(RTCError):
    """The requested computation is too large for the oracle route."""


class CoverageError(RTCError):
    """No closed-form table row covers the requested parameters."""


class CacheError(RTCError):
    """A cache file is unreadable, corrupt or of the wrong version."""


class FoldingError(RTCError):
    """Affine folding failed to terminate (internal invariant violation)."""
