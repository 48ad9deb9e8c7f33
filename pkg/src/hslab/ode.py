"""Shooting solver for the singular profile equation of the v-extremals.

On 0 < r < R = 1/(2A), with w = R^2 - r^2 and p = 1 + 2 beta/(n+1),

    psi'' + (n/r - 4r/w) psi' - 2(n+1) psi / w = -K A^{beta-2} w^{beta-2} psi^p,
    psi'(0) = 0,  psi(R) = A^{(n+1)/2},  w^2 psi'(r) -> 0 as r -> R.

Both ends are regular singular points.  Near r = 0 the bounded solution is
psi = c0 + c2 r^2 + ...; near r = R, with sigma = R - r, it is
psi = psi0 + psi1 sigma + c sigma^beta + ... once the sigma^{-1} mode is
excluded by the weighted-derivative condition.  The solver integrates from
each end in a logarithmic variable and matches psi and psi' at r = R/2, with
(c0, K) as the unknowns.

The profile reconstructs the half-space extremal

    v(y, t) = rho^{-(n+1)} psi(|xi / rho^2 - R e|),  xi = (y - y0, t + A),  rho = |xi|.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root

from .errors import NonconvergenceError, ParameterDomainError
from .testfunctions import TestFunction

__all__ = [
    "OdeSolution",
    "solve_psi",
    "ode_residual",
    "reconstruct_v",
    "from_closed_form",
    "check_beta",
    "profile_from_description",
]

EPS0 = 1e-6
EPS1 = 1e-8


def check_beta(n, beta):
    if int(n) != n or n < 1:
        raise ParameterDomainError(f"n must be an integer >= 1, got {n}")
    if not beta > 0:
        raise ParameterDomainError(f"beta must be positive, got {beta}")
    if n >= 2 and not beta < 2 * (n + 1) / (n - 1):
        raise ParameterDomainError(f"beta={beta} outside (0, {2 * (n + 1) / (n - 1)}) for n={n}")


@dataclass
class OdeSolution:
    n: int
    beta: float
    A: float
    K: float
    c0: float
    r: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    residual_norm: float = math.nan
    profile: object = field(default=None, repr=False)  # r -> (psi, psi', psi'/r)
    meta: dict = field(default_factory=dict)

    @property
    def R(self):
        return 1 / (2 * self.A)

    def __call__(self, r):
        return self.profile(np.asarray(r, dtype=float))

    def scaled(self, factor):
        """Same profile multiplied by ``factor`` (used as a residual detector check)."""
        base = self.profile

        def prof(r):
            a, b, c = base(r)
            return factor * a, factor * b, factor * c

        return OdeSolution(self.n, self.beta, self.A, self.K, factor * self.c0, self.r,
                           factor * self.psi, factor * self.dpsi, math.nan, prof,
                           dict(self.meta, scaled=factor))

    def header(self):
        return {"n": self.n, "beta": self.beta, "A": self.A, "K": self.K, "c0": self.c0,
                "residual_norm": self.residual_norm, **{k: v for k, v in self.meta.items()
                                                        if np.isscalar(v)}}


class _Problem:
    def __init__(self, n, beta, A):
        self.n, self.beta, self.A = n, beta, A
        self.R = 1 / (2 * A)
        self.p = 1 + 2 * beta / (n + 1)
        self.psi0 = A ** ((n + 1) / 2)
        self.kA = A ** (beta - 2)

    def c2(self, c0, K):
        n, R = self.n, self.R
        return (2 * (n + 1) * c0 / R**2 - K * self.kA * R ** (2 * (self.beta - 2)) * c0**self.p) / (
            2 * (n + 1)
        )

    # left: s = ln r, state (psi, H = psi'/r)
    def left_rhs(self, K):
        n, R, p, kA, beta = self.n, self.R, self.p, self.kA, self.beta

        def f(s, y):
            r = math.exp(s)
            psi, H = y
            w = R * R - r * r
            src = K * kA * w ** (beta - 2) * abs(psi) ** p * np.sign(psi)
            dH = -(n + 1) * H + 4 * r * r * H / w + 2 * (n + 1) * psi / w - src
            return [r * r * H, dH]

        return f

    # right: s = ln sigma, state (psi, h = sigma dpsi/dsigma)
    def right_rhs(self, K):
        n, R, p, kA, beta = self.n, self.R, self.p, self.kA, self.beta

        def f(s, y):
            sg = math.exp(s)
            psi, h = y
            r = R - sg
            m = 2 * R - sg  # w = sigma * m
            src = K * kA * sg**beta * m ** (beta - 2) * abs(psi) ** p * np.sign(psi)
            d2 = (sg * n / r - 4 * r / m) * h + 2 * (n + 1) * sg * psi / m - src
            return [h, h + d2]

        return f

    def right_start(self, K):
        beta, R, psi0 = self.beta, self.R, self.psi0
        psi1 = (self.n + 1) * psi0 / (2 * R)
        c = -K * self.kA * (2 * R) ** (beta - 2) * psi0**self.p / (beta * (beta + 1))
        s = EPS1
        return [psi0 + psi1 * s + c * s**beta, psi1 * s + c * beta * s**beta]

    def shoot(self, c0, K, rtol, dense=False):
        rm = self.R / 2
        c2 = self.c2(c0, K)
        y0 = [c0 + c2 * (EPS0 * self.R) ** 2, 2 * c2]
        opts = dict(method="DOP853", rtol=rtol, atol=rtol * 1e-3 * max(1.0, abs(c0)),
                    dense_output=dense)
        left = solve_ivp(self.left_rhs(K), (math.log(EPS0 * self.R), math.log(rm)), y0, **opts)
        right = solve_ivp(self.right_rhs(K), (math.log(EPS1), math.log(self.R - rm)),
                          self.right_start(K), **opts)
        if not (left.success and right.success):
            raise NonconvergenceError("integration failed: " + (left.message or right.message))
        psiL, HL = left.y[:, -1]
        psiR, hR = right.y[:, -1]
        dL = rm * HL
        dR = -hR / (self.R - rm)
        scale = self.psi0
        return np.array([(psiL - psiR) / scale, (dL - dR) * self.R / scale]), left, right


def _anchor(n, beta, A):
    """Closed-form (c0, K) at beta = 1 and 2, interpolated in log-space elsewhere."""
    m = (n + 1) / 2
    c1, k1 = A**m, 2 * (n + 1)
    c2, k2 = (2 * A) ** m, (n + 1) * (n + 3)
    lam = beta - 1
    return (math.exp((1 - lam) * math.log(c1) + lam * math.log(c2)),
            math.exp((1 - lam) * math.log(k1) + lam * math.log(k2)))


def _solve_from(prob, guess, rtol, trace):
    def F(z):
        c0, K = math.exp(z[0]), math.exp(z[1])
        try:
            return prob.shoot(c0, K, rtol)[0]
        except (NonconvergenceError, ValueError, OverflowError, FloatingPointError):
            return np.array([1e3, 1e3])

    sol = root(F, np.log(guess), method="hybr", options={"xtol": 1e-14})
    z = np.exp(sol.x)
    trace.append({"guess": list(map(float, guess)), "result": z.tolist(),
                  "fnorm": float(np.max(np.abs(sol.fun))), "success": bool(sol.success)})
    return z, float(np.max(np.abs(sol.fun)))


def solve_psi(n, beta, A=0.5, rtol=1e-12, tol=1e-8, guess=None, samples=401):
    """Solve for the positive profile psi and the constant K by two-sided shooting."""
    check_beta(n, beta)
    if not A > 0:
        raise ParameterDomainError("A must be positive")
    prob = _Problem(n, beta, A)
    trace = []
    guesses = [guess] if guess is not None else [_anchor(n, beta, A)]
    z, fn = _solve_from(prob, guesses[0], rtol, trace)
    if fn > tol and guess is None:
        # continuation in beta from the nearest closed-form anchor
        start = 1.0 if abs(beta - 1) <= abs(beta - 2) else 2.0
        steps = np.linspace(start, beta, 2 + int(abs(beta - start) / 0.1))
        z = np.array(_anchor(n, start, A))
        for b in steps[1:]:
            z, fn = _solve_from(_Problem(n, b, A), z, rtol, trace)
        prob = _Problem(n, beta, A)
    if not fn <= tol or not np.all(np.isfinite(z)):
        raise NonconvergenceError(f"shooting did not converge (residual {fn:.3g})", trace)
    c0, K = map(float, z)
    res, left, right = prob.shoot(c0, K, rtol, dense=True)
    profile = _make_profile(prob, c0, K, left.sol, right.sol)
    r = np.linspace(0, prob.R, samples)
    psi, dpsi, _ = profile(r)
    if np.any(psi <= 0):
        raise NonconvergenceError("shooting converged to a profile that is not positive", trace)
    out = OdeSolution(n, beta, A, K, c0, r, psi, dpsi, float(np.max(np.abs(res))), profile,
                      {"eps0": EPS0, "eps1": EPS1, "rtol": rtol, "iterations": len(trace)})
    out.meta["trace"] = trace
    return out


def _make_profile(prob, c0, K, left, right):
    R = prob.R
    c2 = prob.c2(c0, K)
    rm = R / 2
    psi0 = prob.psi0
    psi1 = (prob.n + 1) * psi0 / (2 * R)
    cb = -K * prob.kA * (2 * R) ** (prob.beta - 2) * psi0**prob.p / (prob.beta * (prob.beta + 1))
    lo, hi = EPS0 * R, R - EPS1

    def profile(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r < -1e-12 * R) or np.any(r > R * (1 + 1e-12)):
            raise ParameterDomainError("profile argument outside [0, 1/(2A)]")
        r = np.clip(r, 0.0, R)
        psi = np.empty_like(r)
        dpsi = np.empty_like(r)
        ratio = np.empty_like(r)
        a = r < lo
        psi[a] = c0 + c2 * r[a] ** 2
        dpsi[a] = 2 * c2 * r[a]
        ratio[a] = 2 * c2
        b = (r >= lo) & (r <= rm)
        if np.any(b):
            yl = left(np.log(r[b]))
            psi[b] = yl[0]
            ratio[b] = yl[1]
            dpsi[b] = yl[1] * r[b]
        c = (r > rm) & (r <= hi)
        if np.any(c):
            sg = R - r[c]
            yr = right(np.log(sg))
            psi[c] = yr[0]
            dpsi[c] = -yr[1] / sg
        d = r > hi
        if np.any(d):
            sg = R - r[d]
            psi[d] = psi0 + psi1 * sg + cb * sg**prob.beta
            with np.errstate(divide="ignore"):
                dpsi[d] = -(psi1 + cb * prob.beta * sg ** (prob.beta - 1))
        e = ~a & ~b
        ratio[e] = dpsi[e] / r[e]
        return psi, dpsi, ratio

    return profile


def from_closed_form(n, beta, A=0.5):
    """Profile extracted from the explicit beta = 1, 2 extremals, with the matching K."""
    R = 1 / (2 * A)
    m = (n + 1) / 2
    if beta == 1:
        c = A**m

        def profile(r):
            r = np.atleast_1d(np.asarray(r, dtype=float))
            z = np.zeros_like(r)
            return np.full_like(r, c), z, z

        K, c0 = 2.0 * (n + 1), c
    elif beta == 2:

        def profile(r):
            r = np.atleast_1d(np.asarray(r, dtype=float))
            base = 2 * A / (1 + 4 * A * A * r * r)
            psi = base**m
            ratio = -m * psi * 8 * A * A / (1 + 4 * A * A * r * r)
            return psi, ratio * r, ratio

        K, c0 = float((n + 1) * (n + 3)), (2 * A) ** m
    else:
        raise ParameterDomainError("closed-form profiles exist only for beta in {1, 2}")
    r = np.linspace(0, R, 401)
    psi, dpsi, _ = profile(r)
    return OdeSolution(n, float(beta), A, K, c0, r, psi, dpsi, 0.0, profile,
                       {"source": "closed-form"})


def ode_residual(sol, r_samples, h=None):
    """Max relative residual of the profile equation at interior sample points.

    psi'' is taken from a fourth-order central difference of psi', so the check
    does not reuse the right-hand side that produced the solution.
    """
    r = np.asarray(r_samples, dtype=float)
    R = sol.R
    if np.any(r <= 0) or np.any(r >= R):
        raise ParameterDomainError("samples must lie strictly inside (0, 1/(2A))")
    n, beta, A, K = sol.n, sol.beta, sol.A, sol.K
    p = 1 + 2 * beta / (n + 1)
    if h is None:
        h = 1e-3 * np.minimum(r, R - r)
    d = lambda x: sol(x)[1]
    d2 = (-d(r + 2 * h) + 8 * d(r + h) - 8 * d(r - h) + d(r - 2 * h)) / (12 * h)
    psi, dpsi, _ = sol(r)
    w = R * R - r * r
    terms = np.stack([d2, (n / r - 4 * r / w) * dpsi, -2 * (n + 1) * psi / w,
                      K * A ** (beta - 2) * w ** (beta - 2) * psi**p])
    scale = np.max(np.abs(terms), axis=0)
    return float(np.max(np.abs(terms.sum(axis=0)) / scale))


class ReconstructedV(TestFunction):
    """The half-space function v built from a profile psi through the inversion."""

    def __init__(self, sol, y0=None):
        self.sol = sol
        self.n = sol.n
        self.dim = sol.n + 1
        self.y0 = np.zeros(self.n) if y0 is None else np.asarray(y0, dtype=float)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        A, R, n = self.sol.A, self.sol.R, self.n
        t = x[..., -1]
        xi = np.array(x, copy=True)
        xi[..., :-1] -= self.y0
        xi[..., -1] += A
        rho2 = np.sum(xi * xi, axis=-1)
        if np.any(t < -1e-12 * np.sqrt(rho2)):
            raise ParameterDomainError("reconstructed v is defined on the closed half-space")
        Z = xi / rho2[..., None]
        Z[..., -1] -= R
        r = np.sqrt(np.sum(Z * Z, axis=-1))
        # R - r = (t / (A rho^2)) / (R + r) avoids cancellation near the boundary
        sg = np.maximum(t, 0.0) / (A * rho2) / (R + r)
        r = np.where(sg < 1e-3 * R, R - sg, r)
        if np.any(r > R * (1 + 1e-12)):
            raise ParameterDomainError("profile argument beyond 1/(2A)")
        if np.any(r > R):
            warnings.warn("clamping profile argument to 1/(2A)", RuntimeWarning)
        psi, dpsi, ratio = self.sol(np.minimum(r, R))
        amp = rho2 ** (-(n + 1) / 2)
        val = amp * psi
        xz = np.sum(xi * Z, axis=-1)
        grad_r_times_r = (Z - (2 * xz / rho2)[..., None] * xi) / rho2[..., None]
        grad = (-(n + 1) * val / rho2)[..., None] * xi + (amp * ratio)[..., None] * grad_r_times_r
        return val, grad

    def describe(self):
        return {"kind": "RadialFunction", "name": "ode-psi", "params": self.sol.header(),
                "y0": self.y0.tolist(), "center": []}


def reconstruct_v(sol, y0=None):
    return ReconstructedV(sol, y0)


def profile_from_description(desc):
    p = desc["params"]
    if p.get("source") == "closed-form":
        sol = from_closed_form(p["n"], p["beta"], p["A"])
    else:
        sol = solve_psi(p["n"], p["beta"], p["A"])
    return ReconstructedV(sol, desc.get("y0"))
