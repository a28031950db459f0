"""Exception hierarchy shared by all modules."""


class SmaleHomError(Exception):
    """Base class for library errors."""


class InputError(SmaleHomError):
    """Malformed or inconsistent input data."""


class EmptyShift(InputError):
    pass


class InvalidCode(InputError):
    pass


class InvalidPairSpec(InputError):
    pass


class NotNonwandering(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotAChainMap(InputError):
    pass


class NotABicomplex(InputError):
    pass


class NotStationary(InputError):
    pass


class NotARefinement(InputError):
    pass


class NotSeparated(InputError):
    pass


class IrreducibilityRequired(InputError):
    pass


class CapExceeded(SmaleHomError):
    """A search or depth bound was exhausted before a decision."""


class DepthCapExceeded(CapExceeded):
    pass


class BoundNotFound(CapExceeded):
    pass


class VerificationFailure(SmaleHomError):
    """A checked identity failed; ``witness`` carries the offending data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SignConventionFailure(VerificationFailure):
    pass


class AcyclicityFailure(VerificationFailure):
    pass


class QuasiIsoFailure(VerificationFailure):
    pass


class IndexOutOfRange(InputError, ValueError):
    pass


class AbutmentFailure(VerificationFailure):
    pass


NotAComplex = NotAChainMap
