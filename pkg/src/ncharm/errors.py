"""Exception types shared across the package."""


class NcharmError(Exception):
    """Base class for all errors raised by ncharm."""


class NonOrthogonalInput(NcharmError, ValueError):
    pass


class DomainError(NcharmError, ValueError):
    pass


class BandwidthMismatch(NcharmError, ValueError):
    pass


class DegreeOutOfRange(NcharmError, ValueError):
    pass


class LengthMismatch(NcharmError, ValueError):
    pass


class UnsupportedSize(NcharmError, ValueError):
    pass


class NotASubgroup(NcharmError, ValueError):
    pass


class DomainMismatch(NcharmError, ValueError):
    pass


class SizeLimitExceeded(NcharmError, ValueError):
    pass


class KernelNotEquivariant(NcharmError, ValueError):
    """Kernel violates the left-equivariance condition.

    ``h`` and ``x`` hold the subgroup element and coset index of the first
    violation found.
    """

    def __init__(self, message, h=None, x=None, residual=None):
        super().__init__(message)
        self.h = h
        self.x = x
        self.residual = residual
