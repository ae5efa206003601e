"""Exception hierarchy shared by all squeezedyn modules."""


class SqueezeDynError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SqueezeDynError, ValueError):
    """Invalid parameters, configuration or construction arguments."""


class DomainError(ValidationError):
    """A parameter lies outside its mathematical domain (e.g. omega <= 0)."""


class RangeError(SqueezeDynError, ValueError):
    """A time lies outside the domain on which a basis is defined."""

    def __init__(self, tau, domain):
        self.tau = tau
        self.domain = domain
        super().__init__(f"tau={float(tau):.17g} outside time domain [{domain[0]}, {domain[1]}]")


class NumericalError(SqueezeDynError, RuntimeError):
    """Base class for failures of a numerical procedure."""


class IntegrationError(NumericalError):
    """The ODE integrator could not advance (step-size underflow, singular g2)."""

    def __init__(self, tau, message=""):
        self.tau = tau
        super().__init__(f"integration failed at tau={float(tau):.17g}: {message}".rstrip(": "))


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge on a subinterval."""

    def __init__(self, interval, message=""):
        self.interval = tuple(interval)
        a, b = self.interval
        super().__init__(f"quadrature did not converge on [{float(a):.17g}, {float(b):.17g}]: {message}".rstrip(": "))


class ConstantsNotDefinedError(SqueezeDynError, LookupError):
    """Integration constants C1_0, C2_0 are only prescribed for catalog systems."""


class DomainEscapeError(NumericalError):
    """A propagated wave packet reached the edge of the spatial or momentum grid."""

    def __init__(self, tau, where="position"):
        self.tau = tau
        self.where = where
        super().__init__(f"wave packet reached the {where} grid boundary at tau={float(tau):.6g}")


class ResolutionError(ValidationError):
    """The grid cannot resolve the requested wave packet."""


class ParseError(ValidationError):
    """Malformed coefficient expression; ``offset`` is the byte offset of the fault."""

    def __init__(self, message, offset, source=""):
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")


class EvaluationError(SqueezeDynError, ArithmeticError):
    """A coefficient expression could not be evaluated (division by zero)."""

    def __init__(self, message, t):
        self.t = t
        super().__init__(f"{message} at t={t!r}")
