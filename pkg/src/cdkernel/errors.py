"""Exception hierarchy shared by all cdkernel modules."""


class CDKernelError(Exception):
    """Base class for every error raised by this package."""


class SymmetryError(CDKernelError, ValueError):
    """A matrix that must be Hermitian is not."""


class DomainError(CDKernelError, ValueError):
    """A point, matrix or parameter lies outside the admissible set."""


class SingularityError(CDKernelError, ValueError):
    """A block that must be invertible is (numerically) singular."""


class BranchError(CDKernelError, ValueError):
    """The principal-branch continuation of a kernel power is not valid here."""


class StepError(CDKernelError, ValueError):
    """A finite-difference step does not fit inside the domain."""


class UnsupportedOrderError(CDKernelError, ValueError):
    """Requested derivative order exceeds what the routine supports."""


class ParseError(CDKernelError, ValueError):
    """Malformed textual input (kernel selector, point literal, range)."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position
