"""Exception hierarchy shared by all modules."""


class SpectralError(Exception):
    """Base class for numerical failures raised by this package."""


class IntegrationError(SpectralError):
    """Non-finite values appeared while integrating the equation."""


class BracketError(SpectralError):
    """A root could not be certified by a sign-change bracket."""


class PositivityError(SpectralError):
    """A spectrum or a measure violates the required positivity."""


class NearSingularError(SpectralError):
    """Evaluation requested too close to a pole or a singular system."""


class InterlacingError(SpectralError):
    """Two spectral sequences fail to interlace."""


class PreconditionError(SpectralError, ValueError):
    """Input violates an operation's stated precondition."""
