"""Exception hierarchy."""


class HolobrackError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(HolobrackError, ValueError):
    pass


class UnknownVariableError(HolobrackError, KeyError):
    pass


class DomainError(HolobrackError, ValueError):
    pass


class NonPhysicalKineticError(HolobrackError, ValueError):
    pass


class IterationLimitError(HolobrackError, RuntimeError):
    pass


class InconsistentDynamicsError(HolobrackError, RuntimeError):
    pass


class DegenerateConstraintError(HolobrackError, ArithmeticError):
    pass


class IncompleteSystemError(HolobrackError, RuntimeError):
    pass


class PreconditionError(HolobrackError, ValueError):
    pass


class UnsupportedQuantisationError(HolobrackError, NotImplementedError):
    pass


class UnsupportedOrderError(HolobrackError, NotImplementedError):
    pass


class ZeroForceError(HolobrackError, ValueError):
    pass


class ConsistencyError(HolobrackError, ValueError):
    pass
