"""Exception types raised by the phase toolkit.

Every error is a ``ValueError`` so callers that only care about "bad input"
can catch a single type, while the CLI maps specific subclasses to exit codes.
"""


class PhaseToolkitError(ValueError):
    """Base class for all toolkit errors."""


class NotHermitian(PhaseToolkitError):
    pass


class NotPSD(PhaseToolkitError):
    pass


class TraceNotOne(PhaseToolkitError):
    pass


class NotUnitary(PhaseToolkitError):
    pass


class DimensionMismatch(PhaseToolkitError):
    pass


class NonFiniteEntries(PhaseToolkitError):
    pass


class NotConnected(PhaseToolkitError):
    """rhoB is not U rhoA U^dagger."""


class TooFewSamples(PhaseToolkitError):
    pass


class NotProjector(PhaseToolkitError):
    pass


class LengthZero(PhaseToolkitError):
    pass


class NotUnitModulus(PhaseToolkitError):
    pass


class NotDiagonalInBasis(PhaseToolkitError):
    pass


class NotPermuting(PhaseToolkitError):
    pass


class InvalidSequence(PhaseToolkitError):
    """Index sequence is out of range or repeats an index."""


class OutOfRange(PhaseToolkitError):
    pass


class ConfigInvalid(PhaseToolkitError):
    """Scenario configuration failed validation.

    Attributes:
        field: Dotted path of the offending field
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"Invalid configuration at '{field}': {message}")


class IoError(PhaseToolkitError):
    pass
