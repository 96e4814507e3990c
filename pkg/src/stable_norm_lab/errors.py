"""Exception hierarchy shared by every module of the lab."""


class LabError(Exception):
    """Base class for all errors raised by stable_norm_lab."""


class InvalidInputError(LabError, ValueError):
    """Malformed or out-of-range input (dimension mismatch, bad index, ...)."""


class PreconditionError(LabError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class DomainError(PreconditionError):
    """Argument lies outside the domain of a map (e.g. not in the ambient lattice)."""


class NonHyperbolicError(LabError, ArithmeticError):
    """A group element with |trace| <= 2 was met where a hyperbolic one is required."""


class ConstructionError(LabError, ValueError):
    """Surface parameters admit no real solution."""


class NotFoundError(LabError, LookupError):
    """Requested class or value is absent."""


class HorizonError(NotFoundError):
    """A value needed lies beyond the horizon a table was built for."""


class ResourceError(LabError, MemoryError):
    """An enumeration exceeded its size budget; partial results are withheld."""


class GiraffeCheckFailed(PreconditionError):
    """A designated neck fails the long-thin-neck criterion."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
