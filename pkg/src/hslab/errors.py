"""Exception hierarchy shared by all hslab modules."""


class HSError(Exception):
    """Base class for every error raised by hslab."""


class ParameterDomainError(HSError, ValueError):
    """An argument lies outside the admissible range of a formula."""


class NoClosedFormError(HSError):
    """A sharp constant was requested for a beta with no closed form."""


class MembershipError(HSError, ValueError):
    """A point does not belong to the (closed) domain it was evaluated on."""


class SingularityError(HSError, ValueError):
    """Evaluation at a singular point (inversion centre, puncture)."""


class IntegrabilityError(HSError):
    """A weighted integral is not integrable, or looks divergent on the grid."""


class EvaluationError(HSError):
    """Non-finite value produced while evaluating an integrand."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DegenerateFunctionError(HSError):
    """Rayleigh quotient requested for a function whose weighted norm vanishes."""


class NonconvergenceError(HSError):
    """An iterative solver (shooting, root finding) failed to converge."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []
