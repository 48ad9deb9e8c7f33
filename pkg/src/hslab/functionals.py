"""Dirichlet energies, weighted norms, Rayleigh quotients and inequality checkers.

All integrals are grid sums ``sum(w_i f(x_i))``.  Each result carries an
``est_error`` equal to the change when the same quantity is evaluated on the
grid's half-resolution companion, plus the grid's relative tail bound and a
rounding floor.  This is a self-convergence estimate, not a rigorous bound.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import HalfSpace, Inversion, KelvinMap, image_ball
from .errors import (
    DegenerateFunctionError,
    EvaluationError,
    IntegrabilityError,
    ParameterDomainError,
)
from .quadrature import check_tail, map_grid, polar_grid, pushforward
from .special import Params
from .testfunctions import DivideByT, Dilated, KelvinPullback, TimesTPower

__all__ = [
    "RayleighReport",
    "CheckResult",
    "GnSpec",
    "dirichlet_energy",
    "weighted_norm",
    "rayleigh",
    "dilation_check",
    "check_lemma21",
    "check_lemma22",
    "ggn_constant",
    "check_ggn",
    "gn_from_alpha",
    "check_ggn_gamma",
    "kelvin_identity_check",
    "uv_isometry",
    "support_grid",
    "gamma_substitution",
    "sharp2_quotient",
    "ROUNDING",
]

ROUNDING = 100 * np.finfo(float).eps
_DEGENERATE = 1e-300


def _finite(values, grid, what):
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EvaluationError(f"non-finite {what} at node {grid.points[i].tolist()}",
                              node=grid.points[i])
    return values


def _t_power(grid, exponent):
    if exponent == 0:
        return 1.0
    return grid.points[:, -1] ** exponent


def _energy_density(u, grid, p, weight_exp):
    g = _finite(u.evaluate(grid.points)[1], grid, "gradient")
    mag = np.sqrt(np.sum(g * g, axis=-1))
    return _t_power(grid, weight_exp) * mag**p


def dirichlet_energy(u, grid, p=2.0, weight_exp=0.0):
    """sum w t^weight_exp |grad u|^p over the grid."""
    return grid.integrate(_energy_density(u, grid, p, weight_exp))


def _weight(domain, grid, a, weight):
    if weight is not None:
        d = weight(grid.points)
    elif "distance" in grid.meta:
        d = grid.meta["distance"]
    else:
        d = domain.distance(grid.points, check=False)
    if a == 0:
        return np.ones_like(d)
    with np.errstate(divide="ignore"):
        return d**a


def _norm_density(u, grid, a, q, domain, weight):
    val = _finite(u.evaluate(grid.points)[0], grid, "value")
    dens = _weight(domain, grid, a, weight) * np.abs(val) ** q
    dens = np.where(val == 0, 0.0, dens)
    return _finite(dens, grid, "weighted density")


def weighted_norm(u, grid, a, q, domain, weight=None):
    """sum w delta^a |u|^q; ``weight`` overrides the domain's distance function."""
    if not q > 0:
        raise ParameterDomainError("q must be positive")
    dens = _norm_density(u, grid, a, q, domain, weight)
    check_tail(grid, grid.weights * dens)
    return grid.integrate(dens)


def _est(fine, coarse, grid):
    return abs(fine - coarse) + (grid.tail_bound + ROUNDING) * abs(fine)


@dataclass
class RayleighReport:
    numerator: float
    denominator_inner: float
    J: float
    est_error: float
    theta: float
    coarse_J: float = math.nan
    grid: dict = field(default_factory=dict)

    def as_dict(self):
        return {"numerator": self.numerator, "denominator_inner": self.denominator_inner,
                "J": self.J, "est_error": self.est_error, "grid": self.grid}


def _quotient(u, domain, params, grid, weight):
    num = dirichlet_energy(u, grid, params.p)
    den = weighted_norm(u, grid, params.weight_exp, params.power, domain, weight)
    if den < _DEGENERATE:
        raise DegenerateFunctionError("weighted norm vanishes; the quotient is undefined")
    return num, den, num / den**params.outer


def rayleigh(u, domain, params, grid, weight=None):
    """J = int |grad u|^p / (int delta^a |u|^q)^theta with a self-convergence error."""
    num, den, J = _quotient(u, domain, params, grid, weight)
    Jc = math.nan
    est = (grid.tail_bound + ROUNDING) * J
    if grid.coarse is not None:
        try:
            Jc = _quotient(u, domain, params, grid.coarse, weight)[2]
            est = _est(J, Jc, grid)
        except (DegenerateFunctionError, IntegrabilityError):
            est = math.inf
    return RayleighReport(num, den, J, est, params.outer, Jc, grid.describe())


def dilation_check(u, domain, params, R, x0, grid):
    """J of (Omega, u) and of (R Omega + x0, u((. - x0)/R)) on the pushed-forward grid."""
    J = _quotient(u, domain, params, grid, None)[2]
    scaled = domain.scaled(R, x0)
    J2 = _quotient(Dilated(u, R, x0), scaled, params, pushforward(grid, R, x0), None)[2]
    return J, J2


@dataclass
class CheckResult:
    """margin = (allowed side) - (bounded side); an inequality holds when margin >= -est_error."""

    margin: float
    est_error: float
    lhs: float
    rhs: float
    constant: float = math.nan

    @property
    def ratio(self):
        return self.lhs / self.rhs if self.rhs > 0 else (0.0 if self.lhs == 0 else math.inf)

    @property
    def ok(self):
        return self.margin >= -self.est_error

    def __float__(self):
        return float(self.margin)


def _two_level(func, grid):
    fine = func(grid)
    if grid.coarse is None:
        return fine, [ROUNDING * abs(v) for v in fine]
    coarse = func(grid.coarse)
    return fine, [abs(f - c) + ROUNDING * abs(f) for f, c in zip(fine, coarse)]


def _int_grad(u, grid, k, p=1.0):
    return grid.integrate(_energy_density(u, grid, p, k))


def _int_val(u, grid, l, q):
    val = _finite(u.evaluate(grid.points)[0], grid, "value")
    return grid.integrate(_t_power(grid, l) * np.abs(val) ** q)


def _margin(rhs, lhs, rhs_err, lhs_err, constant=math.nan):
    return CheckResult(rhs - lhs, rhs_err + lhs_err, lhs, rhs, constant)


def check_lemma21(u, k, grid):
    """(1/|k|) int t^k |grad u| - int t^{k-1} |u|."""
    if k == 0:
        raise ParameterDomainError("the first-order Hardy lemma needs k != 0")
    (g, v), (eg, ev) = _two_level(lambda gr: (_int_grad(u, gr, k), _int_val(u, gr, k - 1, 1.0)),
                                  grid)
    return _margin(g / abs(k), v, eg / abs(k), ev, 1 / abs(k))


def check_lemma22(u, k, grid):
    """2^{1/n} int t^k |grad u| - (int t^{(n+1)k/n} |u|^{(n+1)/n})^{n/(n+1)}."""
    n = grid.dim - 1
    if n < 1:
        raise ParameterDomainError("the trace lemma needs n >= 1")
    e = (n + 1) / n
    (g, v), (eg, ev) = _two_level(lambda gr: (_int_grad(u, gr, k), _int_val(u, gr, e * k, e)), grid)
    c = 2 ** (1 / n)
    lhs = v ** (1 / e)
    lerr = (v + ev) ** (1 / e) - lhs if v > 0 else ev ** (1 / e)
    return _margin(c * g, lhs, c * eg, lerr, c)


@dataclass(frozen=True)
class GnSpec:
    """Exponents of the Gagliardo-Nirenberg type inequality.

    With ``k != -n`` the bounded side is (int t^l |u|^r)^{D/(n+l+1)} with
    r = p(n+l+1)/D and D = pk - (p-1)l + n + 1 - p, against int t^{pk-(p-1)l}
    |grad u|^p.  With ``k = -n, l = -n-1`` the bounded side is
    (int t^{-n-1} |u|^s)^{p/s} against int t^{p-n-1} |grad u|^p.
    """

    n: int
    k: float
    l: float
    p: float = 1.0
    s: float = None
    gamma: float = None

    def validate(self):
        n, k, l, p = self.n, self.k, self.l, self.p
        if n < 1 or not 1 <= p <= n + 1:
            raise ParameterDomainError(f"need n >= 1 and p in [1, n+1], got n={n}, p={p}")
        if k == -n:
            if l != -n - 1:
                raise ParameterDomainError("k = -n requires l = -n-1")
            s = self.s if self.s is not None else p
            hi = (n + 1) * p / (n + 1 - p) if p < n + 1 else math.inf
            if not p <= s <= hi:
                raise ParameterDomainError(f"s={s} outside [{p}, {hi}]")
            if p == n + 1 and s == hi:
                raise ParameterDomainError("s must be finite when p = n+1")
            return
        if k == 0:
            if not -1 < l <= 0 or p <= 1 or (p == n + 1 and l == 0):
                raise ParameterDomainError("k = 0 needs l in (-1, 0], p > 1 (l != 0 if p = n+1)")
            return
        lo, hi = (k - 1, (n + 1) * k / n) if k > -n else ((n + 1) * k / n, k - 1)
        if not lo <= l <= hi:
            raise ParameterDomainError(f"l={l} outside [{lo}, {hi}] for k={k}")
        if p == n + 1 and l == (n + 1) * k / n:
            raise ParameterDomainError("l = (n+1)k/n is excluded when p = n+1")

    @property
    def D(self):
        return self.p * self.k - (self.p - 1) * self.l + self.n + 1 - self.p


def _first_order_constant(n, k, r):
    """Constant of (int t^l |w|^r)^{1/r} <= C int t^k |grad w| from the two lemmas."""
    theta = n * (r - 1)  # share of the trace lemma in the Hoelder split
    return abs(k) ** (-(1 - theta) / r) * 2 ** (theta * (n + 1) / (n * n * r))


def ggn_constant(spec):
    """Explicit constant obtained by chaining the two first-order lemmas through Hoelder.

    Returns None for k = 0, where the inequality rests on an external result
    and no constant is derived here.
    """
    spec.validate()
    n, k, l, p = spec.n, spec.k, spec.l, spec.p
    if k == 0:
        return None
    if k == -n:
        s = spec.s if spec.s is not None else p
        q = s * p / (p - s + p * s) if p > 1 else s
        m = p / (p + q - p * q)
        return (_first_order_constant(n, n, q) * m) ** p
    r = (n + l + 1) / (n + k)
    m = p * (n + k) / spec.D
    if m <= 0:
        raise ParameterDomainError("exponent bookkeeping gives a non-positive power of u")
    return (_first_order_constant(n, k, r) * m) ** p


def check_ggn(u, spec, grid, constant="explicit"):
    """Margin C * RHS - LHS for the Gagliardo-Nirenberg type inequality.

    ``constant`` is a number, ``"explicit"`` (the chained-lemma constant) or
    ``None`` (report the ratio only; the margin is then +inf).
    """
    spec.validate()
    n, k, l, p = spec.n, spec.k, spec.l, spec.p
    if k == -n:
        s = spec.s if spec.s is not None else p
        w_grad, w_val, power, outer = p - n - 1, -n - 1, s, p / s
    else:
        D = spec.D
        w_grad, w_val = p * k - (p - 1) * l, l
        power, outer = p * (n + l + 1) / D, D / (n + l + 1)

    def sides(gr):
        return _int_grad(u, gr, w_grad, p), _int_val(u, gr, w_val, power)

    (g, v), (eg, ev) = _two_level(sides, grid)
    lhs = v**outer
    lerr = abs((v + ev) ** outer - lhs)
    if constant == "explicit":
        constant = ggn_constant(spec)
    if constant is None:
        return CheckResult(math.inf, eg + lerr, lhs, g, math.nan)
    return _margin(constant * g, lhs, constant * eg, lerr, constant)


def gn_from_alpha(n, alpha1, beta1, s=None):
    """GnSpec with p = 2 for the weights t^{alpha1} |grad u|^2 and t^{beta1} |u|^r."""
    if alpha1 == 1 - n:
        return GnSpec(n, -n, -n - 1, 2.0, s=s)
    return GnSpec(n, (alpha1 + beta1) / 2, beta1, 2.0)


def check_ggn_gamma(u, n, beta, gamma, grid, mu_star=None):
    """Margin of the gamma-family inequality at alpha = 2.

    S^{-1} int (t^{2-gamma} |grad u|^2 - gamma(gamma-2)/4 t^{-gamma} u^2)
    minus (int t^{beta - gamma(n+beta+1)/(n+1)} |u|^{2(n+beta+1)/(n+1)})^{(n+1)/(n+beta+1)}.
    """
    from .special import sharp_mu_star

    S = sharp_mu_star(n, beta) if mu_star is None else mu_star
    q = 2 * (n + beta + 1) / (n + 1)
    lw = beta - gamma * (n + beta + 1) / (n + 1)
    c = gamma * (gamma - 2) / 4

    def sides(gr):
        e = _int_grad(u, gr, 2 - gamma, 2.0) - c * _int_val(u, gr, -gamma, 2.0)
        return e, _int_val(u, gr, lw, q)

    (e, v), (ee, ev) = _two_level(sides, grid)
    if not (np.isfinite(e) and np.isfinite(v)):
        raise IntegrabilityError(f"gamma={gamma} makes the integrals diverge")
    outer = (n + 1) / (n + beta + 1)
    lhs = v**outer
    lerr = abs((v + ev) ** outer - lhs)
    return _margin(e / S, lhs, ee / S, lerr, 1 / S)


def support_grid(u, resolution=128):
    """Polar meridian grid covering the half-space part of a bump's or profile's support.

    Supports inside the open half-space get a full polar grid; a support
    centred on the boundary t = 0 gets the upper half-ball.
    """
    n = u.dim - 1
    breaks = getattr(u, "knots", ())
    t_c = float(u.center[-1])
    if t_c >= u.support_radius:
        return polar_grid(n, u.center, u.support_radius, resolution, breaks)
    if t_c == 0 and n >= 1:
        return polar_grid(n, u.center, u.support_radius, resolution, breaks, phi_max=math.pi / 2)
    raise ParameterDomainError("support must lie in the open half-space or be centred on t = 0")


def _image_ball(center, radius, inversion):
    """Centre and radius of the image of a ball that avoids the inversion centre."""
    d = center - inversion.center
    dd = float(np.dot(d, d))
    denom = dd - radius**2
    if denom <= 0:
        raise ParameterDomainError("support ball contains the inversion centre")
    k = inversion.radius**2 / denom
    return inversion.center + k * d, k * radius


def kelvin_identity_check(u, params, resolution=128, ball_grid="auto"):
    """Gaps between half-space and ball integrals under the Kelvin transform.

    ``u`` must be compactly supported in the open half-space and expose
    ``center`` and ``support_radius`` (bumps, profiles).  Returns a dict with
    the energy gap, the weighted-norm gap (ball weight 1/4 - |x + e/2|^2) and
    the combined error estimates.

    ``ball_grid`` is ``"polar"`` (an independent polar grid on the image of the
    support ball), ``"mapped"`` (the half-space grid pushed through the
    inversion) or ``"auto"``: polar for smooth fields, mapped for piecewise
    linear profiles, whose kinks lie on spheres that are not concentric after
    inversion.
    """
    n = u.dim - 1
    km = KelvinMap(u.dim)
    inv = km.inversion
    psi = KelvinPullback(u, inv)
    half = HalfSpace(u.dim)
    ball = image_ball(u.dim)
    a, q = params.weight_exp, params.power
    gh = support_grid(u, resolution)
    if ball_grid == "auto":
        ball_grid = "mapped" if hasattr(u, "knots") else "polar"
    if ball_grid == "polar":
        c, rad = _image_ball(u.center, u.support_radius, inv)
        gb = polar_grid(n, c, rad, resolution)
    elif ball_grid == "mapped":
        gb = map_grid(gh, inv)
    else:
        raise ParameterDomainError(f"unknown ball grid {ball_grid!r}")

    def w_ball(x):
        z = x - ball.center
        return 0.25 - np.sum(z * z, axis=-1)

    def sides(gr_h, gr_b):
        return (dirichlet_energy(u, gr_h), dirichlet_energy(psi, gr_b),
                weighted_norm(u, gr_h, a, q, half), weighted_norm(psi, gr_b, a, q, ball, w_ball))

    eh, eb, nh, nb = sides(gh, gb)
    ceh, ceb, cnh, cnb = sides(gh.coarse, gb.coarse)
    err = lambda f, c_: abs(f - c_) + ROUNDING * abs(f)
    return {
        "energy_halfspace": eh,
        "energy_ball": eb,
        "energy_gap": abs(eh - eb),
        "energy_est": err(eh, ceh) + err(eb, ceb),
        "norm_halfspace": nh,
        "norm_ball": nb,
        "norm_gap": abs(nh - nb),
        "norm_est": err(nh, cnh) + err(nb, cnb),
    }


def uv_isometry(u, params, grid):
    """Energies and norms of u and v = u/t, which agree for u vanishing on t = 0."""
    v = DivideByT(u)
    half = HalfSpace(u.dim)
    beta = params.beta
    q = params.power

    def sides(gr):
        return (dirichlet_energy(u, gr), dirichlet_energy(v, gr, 2.0, 2.0),
                weighted_norm(u, gr, params.weight_exp, q, half),
                weighted_norm(v, gr, beta, q, half))

    fine = sides(grid)
    coarse = sides(grid.coarse) if grid.coarse is not None else fine
    est = [abs(f - c) + ROUNDING * abs(f) for f, c in zip(fine, coarse)]
    return {"energy_u": fine[0], "energy_v": fine[1], "energy_gap": abs(fine[0] - fine[1]),
            "energy_est": est[0] + est[1], "norm_u": fine[2], "norm_v": fine[3],
            "norm_gap": abs(fine[2] - fine[3]), "norm_est": est[2] + est[3]}


def gamma_substitution(v, gamma):
    """u = t^{gamma/2} v, the change of unknown behind the gamma family."""
    return TimesTPower(v, gamma / 2)


def sharp2_quotient(v, params, grid):
    """int t^2 |grad v|^2 / (int t^beta |v|^q)^theta, the quotient for v = u/t."""
    half = HalfSpace(v.dim)

    def q_(gr):
        num = dirichlet_energy(v, gr, 2.0, 2.0)
        den = weighted_norm(v, gr, params.beta, params.power, half)
        return num / den**params.outer

    J = q_(grid)
    Jc = q_(grid.coarse) if grid.coarse is not None else J
    return J, _est(J, Jc, grid)
