"""Closed-form extremal families with analytic gradients and Laplacians.

Families (x = (y, t), xi measured from (y0, -A) or (y0, 0)):

* ``beta1-u``: C t / ((A + t)^2 + |y - y0|^2)^{(n+1)/2}
* ``beta2-u``: C t / (A^2 + t^2 + |y - y0|^2)^{(n+1)/2}
* ``beta1-v``: (A / ((A + t)^2 + |y - y0|^2))^{(n+1)/2}
* ``beta2-v``: (A / (A^2 + t^2 + |y - y0|^2))^{(n+1)/2}
* ``punctured``: C / (A + |x|^gamma)^{(n+1)/beta}, gamma = beta (n-1)/(n+1)
* ``bliss``: C t / (1 + A t^beta)^{1/beta} on (0, inf), n = 0

The u-families solve the Euler-Lagrange equation -Delta u = t^a u^{q-1} only for
one value of C; :func:`normalize_for_el` finds it.  Outputs are labelled with
the normalization they carry: ``"raw"``, ``"el"`` or ``"inequality"``.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterDomainError, SingularityError
from .special import Params
from .testfunctions import ClosedForm, RadialFunction, TestFunction

__all__ = [
    "FAMILIES",
    "ExtremalParams",
    "Extremal",
    "make",
    "eval_family",
    "laplacian",
    "el_residual",
    "normalize_for_el",
    "el_constant_closed_form",
    "normalize_for_inequality",
    "from_description",
]

FAMILIES = ("beta1-u", "beta2-u", "beta1-v", "beta2-v", "punctured", "bliss")


@dataclass(frozen=True)
class ExtremalParams:
    family: str
    n: int
    A: float = 1.0
    C: float = 1.0
    y0: tuple = None
    beta: float = None
    normalization: str = "raw"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterDomainError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if not self.A > 0:
            raise ParameterDomainError("A must be positive")
        if self.C == 0:
            raise ParameterDomainError("C must be non-zero")
        beta = self.beta
        if self.family.startswith("beta1"):
            beta = 1.0
        elif self.family.startswith("beta2"):
            beta = 2.0
        object.__setattr__(self, "beta", beta)
        if self.family == "punctured":
            top = 2 * (self.n + 1) / (self.n - 1) if self.n >= 2 else 0
            if self.n < 2 or beta is None or not 0 < beta <= top:
                raise ParameterDomainError("punctured family needs n >= 2 and beta in (0, 2(n+1)/(n-1)]")
        if self.family == "bliss":
            if self.n != 0 or beta is None or not beta > 0:
                raise ParameterDomainError("bliss family needs n = 0 and beta > 0")
        elif self.n < 1 and self.family != "bliss":
            raise ParameterDomainError("half-space families need n >= 1")
        y0 = self.y0
        if y0 is None:
            y0 = (0.0,) * self.n
        y0 = tuple(float(v) for v in np.atleast_1d(y0)) if self.n else ()
        if len(y0) != self.n and self.family not in ("punctured", "bliss"):
            raise ParameterDomainError(f"y0 must have {self.n} coordinates")
        object.__setattr__(self, "y0", y0)

    @property
    def params(self):
        return Params(self.n, self.beta)

    def as_dict(self):
        return {"family": self.family, "n": self.n, "A": self.A, "C": self.C,
                "y0": list(self.y0), "beta": self.beta, "normalization": self.normalization}


def _xi(ep, x):
    """Shifted point and the quadratic form P for the half-space families."""
    xi = np.array(x, dtype=float, copy=True)
    xi[..., :-1] -= np.asarray(ep.y0)
    if ep.family.startswith("beta1"):
        xi[..., -1] += ep.A
        b = 0.0
    else:
        b = ep.A**2
    P = b + np.sum(xi * xi, axis=-1)
    return xi, P


def eval_family(ep, x):
    """Value and gradient of the family member ``ep`` at points x."""
    x = np.asarray(x, dtype=float)
    n, A, C = ep.n, ep.A, ep.C
    fam = ep.family
    if fam == "bliss":
        t = x[..., 0]
        b = ep.beta
        base = 1 + A * t**b
        val = C * t * base ** (-1 / b)
        der = C * base ** (-1 / b - 1)
        return val, der[..., None]
    if fam == "punctured":
        r = np.linalg.norm(x, axis=-1)
        if np.any(r == 0):
            raise SingularityError("punctured extremal evaluated at the origin")
        b = ep.beta
        g = b * (n - 1) / (n + 1)
        e = (n + 1) / b
        base = A + r**g
        val = C * base**-e
        dval = -C * e * base ** (-e - 1) * g * r ** (g - 1)
        return val, (dval / r)[..., None] * x
    k = (n + 1) / 2
    xi, P = _xi(ep, x)
    Pk = P**-k
    if fam.endswith("-v"):
        val = (A / P) ** k
        grad = (-2 * k * val / P)[..., None] * xi
        return val, grad
    t = x[..., -1]
    val = C * t * Pk
    grad = (-2 * k * C * t * Pk / P)[..., None] * xi
    grad[..., -1] += C * Pk
    return val, grad


def laplacian(ep, x):
    """Analytic Laplacian of a u-family member (beta1-u or beta2-u)."""
    if ep.family not in ("beta1-u", "beta2-u"):
        raise ParameterDomainError("analytic Laplacian is provided for the u-families only")
    x = np.asarray(x, dtype=float)
    N = ep.n + 1
    k = (ep.n + 1) / 2
    xi, P = _xi(ep, x)
    t = x[..., -1]
    rho2 = np.sum(xi * xi, axis=-1)
    # Delta(t P^-k) = t Delta P^-k + 2 d_t P^-k,  P = b + |xi|^2
    lap_pk = P ** (-k - 2) * (-2 * k * N * P + 4 * k * (k + 1) * rho2)
    dt_pk = -2 * k * P ** (-k - 1) * xi[..., -1]
    return ep.C * (t * lap_pk + 2 * dt_pk)


class Extremal(ClosedForm):
    def __init__(self, ep):
        self.ep = ep
        super().__init__(ep.n + 1, lambda x: eval_family(ep, x)[0],
                         lambda x: eval_family(ep, x)[1], ep.family, ep.as_dict())

    def evaluate(self, x):
        return eval_family(self.ep, x)

    def laplacian(self, x):
        return laplacian(self.ep, x)

    def describe(self):
        return {"kind": "ClosedForm", "name": self.ep.family, "params": self.ep.as_dict()}


def make(family, n, A=1.0, C=1.0, y0=None, beta=None, normalization="raw"):
    return Extremal(ExtremalParams(family, n, A, C, y0, beta, normalization))


def _el_sides(ep, x):
    """(-Delta u, t^a u^{q-1}) at points x."""
    par = ep.params
    u = eval_family(ep, x)[0]
    t = np.asarray(x)[..., -1]
    rhs = t**par.weight_exp * u ** (par.power - 1)
    return -laplacian(ep, x), rhs


def el_residual(family, params, n, sample_points, t_floor=1e-8):
    """Max relative residual of -Delta u = t^a u^{q-1} over interior sample points.

    ``params`` is an ExtremalParams (its family and n must match).  Points with
    t below ``t_floor`` are rejected.
    """
    if params.family != family or params.n != n:
        raise ParameterDomainError("family/n disagree with the supplied parameters")
    x = np.asarray(sample_points, dtype=float)
    if np.any(x[..., -1] < t_floor):
        raise ParameterDomainError(f"sample points must satisfy t >= {t_floor}")
    lhs, rhs = _el_sides(params, x)
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    return float(np.max(np.abs(lhs - rhs) / scale))


def normalize_for_el(family, n, A=1.0, y0=None, probe=None):
    """ExtremalParams with the C > 0 that makes the Euler-Lagrange residual vanish.

    -Delta(C u1) = C^{q-1} t^a u1^{q-1}, so C^{q-2} = -Delta u1 / (t^a u1^{q-1})
    evaluated at a single interior probe point.
    """
    if family not in ("beta1-u", "beta2-u"):
        raise ParameterDomainError("EL normalization is defined for beta1-u and beta2-u")
    base = ExtremalParams(family, n, A, 1.0, y0)
    if probe is None:
        probe = np.array(list(base.y0) + [A])
    lhs, rhs = _el_sides(base, np.asarray(probe, dtype=float)[None, :])
    expo = base.params.power - 2  # = 2 beta/(n+1)
    C = float((lhs[0] / rhs[0]) ** (1 / expo))
    return replace(base, C=C, normalization="el")


def el_constant_closed_form(family, n, A=1.0):
    """Hand-derived EL constant: (2(n+1)A)^{(n+1)/2} or ((n+1)(n+3)A^2)^{(n+1)/4}."""
    if family == "beta1-u":
        return (2 * (n + 1) * A) ** ((n + 1) / 2)
    if family == "beta2-u":
        return ((n + 1) * (n + 3) * A * A) ** ((n + 1) / 4)
    raise ParameterDomainError("closed-form EL constant only for beta1-u and beta2-u")


def normalize_for_inequality(family, n, grid, A=1.0, y0=None, beta=None):
    """ExtremalParams whose weighted norm int t^a |u|^q equals 1 on ``grid``."""
    from .domains import HalfSpace, PuncturedSpace
    from .functionals import weighted_norm

    ep = ExtremalParams(family, n, A, 1.0, y0, beta)
    par = ep.params
    if family == "punctured":
        dom = PuncturedSpace(n + 1)
    else:
        dom = HalfSpace(n + 1)
    if family.endswith("-v"):
        raise ParameterDomainError("inequality normalization is for u-type families")
    D = weighted_norm(Extremal(ep), grid, par.weight_exp, par.power, dom)
    return replace(ep, C=D ** (-1 / par.power), normalization="inequality")


def from_description(desc):
    """Rebuild an extremal (or registered radial field) from its description."""
    p = desc.get("params", {})
    if desc.get("kind") == "ClosedForm" and desc.get("name") in FAMILIES:
        return Extremal(ExtremalParams(p["family"], p["n"], p["A"], p["C"], tuple(p["y0"]) or None,
                                       p["beta"], p.get("normalization", "raw")))
    if desc.get("kind") == "RadialFunction" and desc.get("name") == "ode-psi":
        from .ode import profile_from_description

        return profile_from_description(desc)
    if desc.get("kind") == "RadialFunction" and desc.get("name") == "log-plateau":
        from .varmin import log_plateau

        return log_plateau(len(desc["center"]), p["r_lo"], p["r1"], p["r2"], p["r_hi"],
                           desc["center"])
    raise ParameterDomainError(f"cannot rebuild closed form {desc.get('name')!r}")
