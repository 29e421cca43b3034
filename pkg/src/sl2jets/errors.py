"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad arguments: mismatched orders, degrees out of range, malformed input."""


class SingularityError(ArithmeticError):
    """A base point sits on a pole, or a series has no reciprocal."""


class ChartEscapeError(SingularityError):
    """A Moebius image leaves the affine chart (c*z + d == 0)."""


class NoIntertwinerError(RuntimeError):
    """The intertwiner search found nothing up to the requested degree bound."""


class VerificationError(RuntimeError):
    """An identity that should hold exactly failed; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}
