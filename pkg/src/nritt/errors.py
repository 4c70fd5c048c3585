"""Exception hierarchy shared by all modules."""


class NrittError(Exception):
    """Base class for every domain error raised by the library."""

    #: machine-readable name used in CLI error objects
    code = "Error"


class InvalidAngle(NrittError, ValueError):
    code = "InvalidAngle"


class InvalidTruncation(NrittError, ValueError):
    code = "InvalidTruncation"


class NoConvergence(NrittError, RuntimeError):
    """Quadrature node budget exhausted.

    Usually a pole sits too close to the contour or the integrand does not
    decay fast enough along a ray.
    """

    code = "NoConvergence"

    def __init__(self, msg, nodes=None, error=None):
        super().__init__(msg)
        self.nodes = nodes
        self.error = error


class SingularResolvent(NrittError, ArithmeticError):
    """``lambda*I - T`` is numerically singular: lambda is (close to) an eigenvalue."""

    code = "SingularResolvent"


class NotClassifiable(NrittError):
    code = "NotClassifiable"


class PoleHit(NrittError, ZeroDivisionError):
    code = "PoleHit"


class Unbounded(NrittError):
    """A function has a pole in (or grows on) the closed region."""

    code = "Unbounded"


class CertificateError(NrittError, ValueError):
    """A decay certificate failed validation or cannot be constructed."""

    code = "CertificateError"


class DomainError(NrittError, ValueError):
    code = "DomainError"
