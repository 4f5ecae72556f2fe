"""Shared exception types."""


class MeridianError(Exception):
    """Base class for all library errors."""


class FieldMismatch(MeridianError):
    """Operands belong to different ambient fields."""


class DivisionByZero(MeridianError):
    """Exact division by the zero scalar."""


class ParseError(MeridianError):
    """Malformed point/scalar literal.  Carries the offset of the bad char."""

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class SingularMatrix(MeridianError):
    """Coefficient quadruple with zero determinant."""


class DegenerateVol(MeridianError):
    """The two-pair constraints admit no invertible involution."""


class PreconditionViolated(MeridianError):
    """Caller broke a documented operation precondition."""


class NotFound(MeridianError):
    """No family member satisfies the requested constraints."""


class NotUnique(MeridianError):
    """More than one family member satisfies the requested constraints."""


class BoundExceeded(MeridianError):
    """Requested enumeration is above the configured exhaustive bound."""


class NotAbelian(MeridianError):
    """Ternary table is not symmetric in its outer arguments."""


class NotInvolution(MeridianError):
    """Operation requires a self-inverse non-identity map."""


class NotTranslation(MeridianError):
    """Operation requires a map with exactly one fixed point."""


class NotRotation(MeridianError):
    """Operation requires a fixed-point-free non-involution."""


class IrrationalSqrt(MeridianError):
    """A required square root does not exist in the rationals."""


class InvalidQuadriad(MeridianError):
    """Axis valuation whose range has fewer than three values."""
