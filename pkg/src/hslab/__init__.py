"""Numerical laboratory for sharp weighted Hardy-Sobolev inequalities.

Modules: ``special`` (closed-form constants), ``domains``, ``quadrature``,
``functionals`` (Rayleigh quotient and inequality checks), ``extremals``,
``ode`` (profile shooting), ``varmin`` (upper bounds by minimization) and
``cli`` (the ``hs`` command).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateFunctionError,
    EvaluationError,
    HSError,
    IntegrabilityError,
    MembershipError,
    NoClosedFormError,
    NonconvergenceError,
    ParameterDomainError,
    SingularityError,
)
from .special import (  # noqa: E402
    Params,
    bliss_constant,
    hardy_constant,
    mu_punctured_space,
    sharp_constant_halfspace,
    sharp_mu_star,
)

__all__ = [
    "__version__",
    "Params",
    "sharp_mu_star",
    "sharp_constant_halfspace",
    "mu_punctured_space",
    "bliss_constant",
    "hardy_constant",
    "HSError",
    "ParameterDomainError",
    "NoClosedFormError",
    "MembershipError",
    "SingularityError",
    "IntegrabilityError",
    "EvaluationError",
    "DegenerateFunctionError",
    "NonconvergenceError",
]
