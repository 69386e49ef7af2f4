"""Exceptions raised by the library."""


class ExpectileError(Exception):
    """Base class of every error raised by this package."""


class InvalidDistributionError(ExpectileError, ValueError):
    """A law or probability space violates its construction invariants."""


class LengthMismatchError(InvalidDistributionError):
    """Outcomes and probabilities (or values and atoms) differ in length."""


class NonPositiveProbabilityError(InvalidDistributionError):
    """An atom carries zero or negative probability."""


class BadNormalizationError(InvalidDistributionError):
    """Probabilities do not sum to one within tolerance."""


class EmptySampleError(InvalidDistributionError):
    """An empirical law was requested from no samples."""


class NegativeScaleError(ExpectileError, ValueError):
    """A law was scaled by a negative factor."""


class NotMonotoneError(ExpectileError, ValueError):
    """A sequence expected to be nondecreasing is not."""


class OutOfRangeError(ExpectileError, ValueError):
    """A numeric argument lies outside its admissible interval."""


class InvalidRiskLevelError(OutOfRangeError):
    """The risk level tau is outside (0, 1/2]."""


class SpaceMismatchError(ExpectileError, ValueError):
    """Two objects that must share a probability space do not."""


class EmptyOrFullSubsetError(ExpectileError, ValueError):
    """A subset of atoms is empty or has full probability."""


class TooManyAtomsError(ExpectileError, ValueError):
    """The subset enumeration would be too large."""


class InvalidDistortionError(ExpectileError, ValueError):
    """A distortion function fails its endpoint or convexity checks."""


class InvalidMeasureError(ExpectileError, ValueError):
    """A Kusuoka mixing measure is malformed."""


class InputFormatError(ExpectileError, ValueError):
    """An input file could not be parsed."""


class GridSpecError(ExpectileError, ValueError):
    """A tau grid specification is malformed."""


class MaxIterExceededError(ExpectileError, RuntimeError):
    """A solver failed to shrink its bracket below tolerance."""


class BoundViolatedError(ExpectileError, RuntimeError):
    """A proven inequality failed, which signals an implementation bug."""


class TransportSolverError(ExpectileError, RuntimeError):
    """The transport linear program did not reach an optimal vertex."""
