"""Closed-form constants for weighted Hardy-Sobolev inequalities.

Everything here is a pure function of its arguments, evaluated in double
precision.  The ambient space is R^{n+1}; the half-space is
{(y, t) : y in R^n, t > 0}.
"""

import math
from dataclasses import dataclass

from .errors import NoClosedFormError, ParameterDomainError

__all__ = [
    "Params",
    "gamma",
    "sphere_area",
    "sharp_mu_star",
    "sharp_constant_halfspace",
    "mu_punctured_space",
    "bliss_constant",
    "hardy_constant",
    "compare_star",
    "beta_upper",
]


def beta_upper(n, p=2.0):
    """Largest admissible beta for exponent p (``inf`` when p = n + 1)."""
    if p >= n + 1:
        return math.inf
    return p * (n + 1) / (n + 1 - p)


@dataclass(frozen=True)
class Params:
    """Exponent triple (n, p, beta) with the derived exponents.

    ``weight_exp`` is the power of the distance function, ``power`` the power
    of |u| and ``outer`` the exponent applied to the weighted integral.  The
    one-dimensional Bliss case is admitted as ``n = 0, p = 2, beta > 0``.
    """

    n: int
    beta: float
    p: float = 2.0

    def __post_init__(self):
        n, p, beta = self.n, self.p, self.beta
        if int(n) != n or n < 0:
            raise ParameterDomainError(f"n must be a non-negative integer, got {n}")
        if n == 0:
            if p != 2 or not beta > 0:
                raise ParameterDomainError("n = 0 is only defined for p = 2, beta > 0")
            return
        if not 1 < p <= n + 1:
            raise ParameterDomainError(f"p must lie in (1, n+1] = (1, {n + 1}], got {p}")
        if not 0 <= beta <= beta_upper(n, p) * (1 + 1e-15):
            raise ParameterDomainError(
                f"beta={beta} outside [0, {beta_upper(n, p)}] for n={n}, p={p}"
            )

    @property
    def dim(self):
        return self.n + 1

    @property
    def weight_exp(self):
        n, p = self.n, self.p
        return -p + (n + 1 - p) / (n + 1) * self.beta

    @property
    def power(self):
        return self.p + self.p * self.beta / (self.n + 1)

    @property
    def outer(self):
        return (self.n + 1) / (self.n + self.beta + 1)

    # short aliases matching the usual notation
    a = weight_exp
    q = power
    theta = outer

    def strict(self):
        """True when beta lies strictly inside the range where mu* is attained (p = 2)."""
        if self.n <= 1:
            return self.beta > 0
        return 0 < self.beta < 2 * (self.n + 1) / (self.n - 1)

    def as_dict(self):
        return {"n": self.n, "p": self.p, "beta": self.beta}


def gamma(x):
    """Euler Gamma function for x > 0."""
    if not x > 0:
        raise ParameterDomainError(f"gamma is only defined here for x > 0, got {x}")
    return math.gamma(x)


def sphere_area(k):
    """Surface area of the unit sphere S^k in R^{k+1}; ``sphere_area(0) == 2``."""
    return 2.0 * math.pi ** ((k + 1) / 2) / gamma((k + 1) / 2)


def _check_closed_form(n, beta):
    if int(n) != n or n < 1:
        raise ParameterDomainError(f"n must be an integer >= 1, got {n}")
    if beta not in (1, 2):
        raise NoClosedFormError(
            f"no closed form for beta={beta}; only beta in {{1, 2}} (use hslab.ode)"
        )


def sharp_mu_star(n, beta):
    """Half-space sharp constant mu*_{n+1,beta} = S_{n+1,2,beta} for beta in {1, 2}."""
    _check_closed_form(n, beta)
    if beta == 1:
        inner = math.pi ** (n / 2) * gamma(n / 2 + 2) / gamma(n + 4)
        return 2 * (n + 1) * inner ** (1 / (n + 2))
    inner = math.pi ** ((n + 1) / 2) / 4 * gamma((n + 3) / 2) / gamma(n + 3)
    return (n + 1) * (n + 3) * inner ** (2 / (n + 3))


def sharp_constant_halfspace(n, beta):
    """Best constant C*_{n+1,2,beta} in front of the Dirichlet energy (beta in {1, 2})."""
    _check_closed_form(n, beta)
    if beta == 1:
        inner = gamma(n + 4) / (math.pi ** (n / 2) * gamma(n / 2 + 2))
        return inner ** (1 / (n + 2)) / (2 * (n + 1))
    inner = 4 * gamma(n + 3) / (math.pi ** ((n + 1) / 2) * gamma((n + 3) / 2))
    return inner ** (2 / (n + 3)) / ((n + 1) * (n + 3))


def mu_punctured_space(n, beta):
    """Sharp constant of the Hardy-Sobolev quotient on R^{n+1} minus the origin.

    Weight |x|^{-2+(n-1)beta/(n+1)}.  Zero in the plane (n = 1), the Hardy
    constant ((n-1)/2)^2 at beta = 0, and otherwise the Gamma product attained
    by (A + |x|^{beta(n-1)/(n+1)})^{-(n+1)/beta}.
    """
    if int(n) != n or n < 1:
        raise ParameterDomainError(f"n must be an integer >= 1, got {n}")
    if beta < 0:
        raise ParameterDomainError(f"beta must be >= 0, got {beta}")
    if n == 1:
        return 0.0
    top = 2 * (n + 1) / (n - 1)
    if beta > top * (1 + 1e-15):
        raise ParameterDomainError(f"beta={beta} exceeds 2(n+1)/(n-1)={top}")
    if beta == 0:
        return ((n - 1) / 2) ** 2
    k = (n + beta + 1) / beta
    # log-space keeps Gamma(2k) finite for small beta
    log_inner = (
        math.log(2.0)
        + (n + 1) / 2 * math.log(math.pi)
        + 2 * math.lgamma(k)
        - math.log(beta)
        - math.lgamma((n + 1) / 2)
        - math.lgamma(2 * k)
    )
    prefac = (n + beta + 1) * (n - 1) * ((n - 1) / (n + 1)) ** ((n + 1) / (n + beta + 1))
    return prefac * math.exp(log_inner * beta / (n + beta + 1))


def bliss_constant(beta):
    """Sharp constant of the one-dimensional (Bliss) inequality on (0, inf)."""
    if not beta > 0:
        raise ParameterDomainError(f"beta must be > 0, got {beta}")
    log_bracket = (
        math.log(beta)
        + math.lgamma((2 + 2 * beta) / beta)
        - math.lgamma(1 / beta)
        - math.lgamma((1 + 2 * beta) / beta)
    )
    return (1 / (1 + beta)) ** (1 / (1 + beta)) * math.exp(log_bracket * beta / (1 + beta))


def hardy_constant(n, p, variant="whole-space"):
    """Hardy constant: (p/(n+1-p))^p on R^{n+1}, (p/(p-1))^p on the half-space."""
    if variant == "whole-space":
        if not 1 < p < n + 1:
            raise ParameterDomainError(f"whole-space Hardy needs 1 < p < n+1, got p={p}")
        return (p / (n + 1 - p)) ** p
    if variant == "half-space":
        if not p > 1:
            raise ParameterDomainError(f"half-space Hardy needs p > 1, got p={p}")
        return (p / (p - 1)) ** p
    raise ParameterDomainError(f"unknown Hardy variant {variant!r}")


def compare_star(beta, n):
    """'below' if mu(R^{n+1}_*) < mu*_{n+1,beta}, else 'above'."""
    if n < 2:
        raise ParameterDomainError("compare_star needs n >= 2")
    return "below" if mu_punctured_space(n, beta) < sharp_mu_star(n, beta) else "above"
