"""Exception types shared across the package."""


class VerificationError(ArithmeticError):
    """Base class for numerical failures raised by this package."""


class PoleError(VerificationError):
    """Evaluation point lies on (or within the guard radius of) a pole."""


class NonConvergence(VerificationError):
    """A series, quadrature or acceleration failed to reach its tolerance."""


class DivisionHazard(VerificationError):
    """A prefactor being divided out is numerically zero at this point."""


class BoundExceeded(VerificationError):
    """An empirical bound that should hold was exceeded (implementation bug)."""
