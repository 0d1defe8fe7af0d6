"""Exception hierarchy shared by all pdmqi modules."""


class PdmqiError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PdmqiError, ValueError):
    """Argument lies outside the mathematical domain of the operation."""


class SingularAtOrigin(DomainError):
    """Evaluation requested exactly at a singular point of the expression."""


class NonTerminating(PdmqiError, ValueError):
    """Neither upper hypergeometric parameter is a non-positive integer."""


class PoleInC(PdmqiError, ValueError):
    """The lower hypergeometric parameter hits a pole before the series ends."""


class InvalidRadicand(PdmqiError, ValueError):
    """A quantization square root received a negative argument."""


class UnsupportedLevel(PdmqiError, ValueError):
    """No closed form is available for the requested level index."""


class NotConverged(PdmqiError, RuntimeError):
    """A numerical routine exhausted its budget before reaching tolerance.

    The partial result, when available, is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class SingularPotentialOnGrid(PdmqiError, ValueError):
    """The effective potential is not finite on every interior grid node."""


class ConvergenceFailure(PdmqiError, RuntimeError):
    """The eigenvalue routine failed to converge."""


class MomentMismatch(PdmqiError, RuntimeError):
    """Two independent routes to the same moment disagree beyond tolerance."""
