"""Exception hierarchy shared by all lwqm modules."""


class LwqmError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(LwqmError, ArithmeticError):
    """A numerical routine could not deliver a trustworthy value."""


class NoConvergence(NumericalError):
    pass


class InvalidBracket(LwqmError, ValueError):
    pass


class DivergentTail(NumericalError):
    pass


class PrecisionLoss(NumericalError):
    """Cancellation left fewer significant digits than the caller requires."""


class StepUnderflow(NumericalError):
    pass


class DomainError(LwqmError, ValueError):
    pass


class PoleError(NumericalError):
    """Evaluation hit a pole (of Gamma, or of a ratio of functions)."""

    def __init__(self, msg, location=None):
        super().__init__(msg)
        self.location = location


class ParameterPole(PoleError):
    pass


class ConnectionPole(PoleError):
    pass


class NearSingularity(NumericalError):
    pass


class DegenerateMap(LwqmError, ValueError):
    pass


class VanishingTransform(LwqmError, ValueError):
    pass


class PoleInDomain(PoleError):
    pass


class SingularData(NumericalError):
    pass


class NodeInInterval(LwqmError, ValueError):
    pass


class DegenerateK0(LwqmError, ValueError):
    pass


class ZeroKy(LwqmError, ValueError):
    pass


class ZeroV22(LwqmError, ValueError):
    pass


class EnergyMismatch(LwqmError, ValueError):
    pass
