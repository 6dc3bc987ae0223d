"""Exception types shared across the package."""


class DiracBCError(Exception):
    """Base class for all errors raised by diracbc."""


class InputError(DiracBCError, ValueError):
    """Invalid user input (bad shapes, out-of-domain parameters, malformed frames)."""


class UnsupportedPair(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NoChirality(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotSkew(InputError):
    pass


class AmbientMismatch(InputError):
    pass


class InvalidFrame(InputError):
    pass


class NotTangent(InputError):
    pass


class NotUnitary(InputError):
    """Raised when a map that must be unitary is not.

    The offending matrix is kept on the exception so callers can inspect it.
    """

    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class NotAGraph(InputError):
    pass


class DegenerateMobius(InputError):
    pass


class FamilyRepMismatch(InputError):
    pass


class ParamOutOfDomain(InputError):
    pass


class SingularTransmission(InputError):
    pass


class NoWitness(InputError):
    pass


class QuadratureNotConverged(DiracBCError):
    pass


class InconsistentCheck(DiracBCError):
    """Two independent routes to the same answer disagree (internal bug guard)."""
