"""Upper bounds on mu(Omega) by minimizing the Rayleigh quotient over trial spaces.

Every bound returned here is one-sided: it is the quotient of an explicit
witness, which can be rebuilt from its description and re-evaluated.  Trial
spaces are radial about the domain centre (or Kelvin images of half-space
extremals on balls), so nothing is claimed about non-radial minimizers.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as nelder_mead

from .domains import (
    Annulus,
    Ball,
    ExteriorBall,
    HalfSpace,
    Inversion,
    PuncturedBall,
    PuncturedSpace,
    image_ball,
    punctured_bounds,
    unit_vector,
)
from .errors import (
    DegenerateFunctionError,
    EvaluationError,
    IntegrabilityError,
    NonconvergenceError,
    ParameterDomainError,
)
from .extremals import make
from .functionals import rayleigh
from .quadrature import _auto_span, build_grid, halfspace_grid, map_grid, pushforward
from .special import Params, mu_punctured_space, sharp_mu_star
from .testfunctions import (
    Dilated,
    KelvinPullback,
    Product,
    RadialCutoff,
    RadialFunction,
    RadialProfile,
    from_description,
)

__all__ = [
    "MuEstimate",
    "Certificate",
    "minimize",
    "evaluate_witness",
    "certify_below_star",
    "concentration_sequence",
    "degenerate_sequence_2d",
    "sandwich_check",
    "reference_mu_star",
    "punctured_profile",
    "log_plateau",
    "kelvin_ball_witness",
    "DEFAULTS",
]

DEFAULTS = {"step": 0.1, "knots": 50, "budget": 10_000, "resolution": 128, "truncation": 64.0}
_BAD = 1e300
_RADIAL_NOTE = "trial space is radial about the domain centre; the value is an upper bound only"


@dataclass
class MuEstimate:
    domain: str
    params: dict
    upper_bound: float
    J: float
    est_error: float
    witness: dict
    seed: int
    iterations: int
    converged: bool
    trial: str
    history: list = field(default_factory=list)
    truncation: float = None
    note: str = _RADIAL_NOTE

    def as_dict(self):
        return {"domain": self.domain, "params": self.params, "upper_bound": self.upper_bound,
                "J": self.J, "est_error": self.est_error, "witness": self.witness,
                "seed": self.seed, "iterations": self.iterations, "converged": self.converged,
                "trial": self.trial, "truncation": self.truncation, "note": self.note}


# ----------------------------------------------------------------------------
# witnesses and their grids


def _grid_for(domain, params, spec):
    kind = spec["kind"]
    res = spec["resolution"]
    if kind == "radial":
        trunc = spec.get("truncation", "auto")
        return build_grid(domain, params, res, trunc, scale=spec.get("scale", 1.0),
                          kind="radial", breaks=spec.get("breaks", ()))
    if kind == "halfspace":
        return build_grid(domain, params, res, spec.get("truncation", "auto"),
                          scale=spec["scale"], y0=spec.get("y0"))
    if kind == "kelvin-ball":
        n = domain.dim - 1
        g = _kelvin_ball_grid(n, res, spec["scale"])
        # image ball B_{1/2}(-e/2) -> the requested ball
        R = domain.radius / 0.5
        shift = domain.center - R * image_ball(domain.dim).center
        return pushforward(g, R, shift)
    raise ParameterDomainError(f"unknown witness grid kind {kind!r}")


def _kelvin_ball_grid(n, resolution, scale):
    """Half-space grid mapped onto the image ball, carrying exact boundary distances.

    Near the sphere 1/2 - |x + e/2| cancels catastrophically; the identity
    1/4 - |x + e/2|^2 = t |x + e|^2 (t the half-space height of the preimage)
    gives the distance without cancellation.
    """
    # the half-space grid must reach |z| ~ 1, where the sphere bends away, for any scale
    S = _auto_span(n)
    lo, hi = scale * math.exp(-S), max(scale, 1.0) * math.exp(S)
    src = halfspace_grid(n, resolution, math.sqrt(lo * hi), None, math.log(hi / lo) / 2)
    inv = Inversion(-unit_vector(n + 1), 1.0)

    def attach(g_src, g_img):
        x = g_img.points
        e = unit_vector(n + 1)
        w = g_src.points[:, -1] * np.sum((x + e) ** 2, axis=-1)
        g_img.meta = dict(g_img.meta, distance=w / (0.5 + np.linalg.norm(x + e / 2, axis=-1)))
        if g_src.coarse is not None:
            attach(g_src.coarse, g_img.coarse)
        return g_img

    return attach(src, map_grid(src, inv))


def evaluate_witness(witness, domain, params):
    """Rebuild a witness from its description and return its RayleighReport."""
    u = from_description(witness["function"])
    grid = _grid_for(domain, params, witness["grid"])
    return rayleigh(u, domain, params, grid)


def punctured_profile(n, beta, scale=1.0, center=None):
    """Radial profile (1 + (r/scale)^gamma)^{-(n+1)/beta} of the punctured-space extremal."""
    u = make("punctured", n, A=1.0, beta=beta)
    if center is None:
        center = np.zeros(n + 1)
    return Dilated(u, scale, center)


def log_plateau(dim, r_lo, r1, r2, r_hi, center=None):
    """eta(ln r) with smoothstep ramps on [ln r_lo, ln r1] and [ln r2, ln r_hi]."""
    l0, l1, l2, l3 = (math.log(v) for v in (r_lo, r1, r2, r_hi))

    def ramp(z):
        z = np.clip(z, 0.0, 1.0)
        return z * z * (3 - 2 * z), 6 * z * (1 - z)

    def f(r):
        lr = np.log(r)
        up, _ = ramp((lr - l0) / (l1 - l0))
        down, _ = ramp((lr - l2) / (l3 - l2))
        return up * (1 - down)

    def df(r):
        lr = np.log(r)
        up, dup = ramp((lr - l0) / (l1 - l0))
        down, ddown = ramp((lr - l2) / (l3 - l2))
        return (dup / (l1 - l0) * (1 - down) - up * ddown / (l3 - l2)) / r

    return RadialFunction(dim, f, df, center, "log-plateau",
                          {"r_lo": r_lo, "r1": r1, "r2": r2, "r_hi": r_hi})


def kelvin_ball_witness(domain, beta, A, resolution=256):
    """Kelvin image on a ball of the half-space extremal with parameter A."""
    n = domain.dim - 1
    fam = "beta1-u" if beta == 1 else "beta2-u"
    u = make(fam, n, A=A)
    psi = KelvinPullback(u, Inversion(-unit_vector(domain.dim), 1.0))
    R = domain.radius / 0.5
    shift = domain.center - R * image_ball(domain.dim).center
    f = Dilated(psi, R, shift)
    return {"function": f.describe(),
            "grid": {"kind": "kelvin-ball", "resolution": resolution, "scale": A}}, f


def _radial_bounds(domain, truncation):
    if isinstance(domain, Ball):
        return 0.0, domain.radius, (False, True)
    if isinstance(domain, Annulus):
        return domain.r_in, domain.r_out, (True, True)
    if isinstance(domain, PuncturedBall):
        return 0.0, domain.radius, (True, True)
    if isinstance(domain, ExteriorBall):
        return domain.radius, float(truncation), (True, True)
    raise ParameterDomainError(f"radial profiles are not available on {domain.describe()}")


def _knots(lo, hi, count, pinned):
    """Half the knots spread over [lo, hi], the rest graded geometrically toward pinned ends.

    The spread part is uniform in r for balls and uniform in log r when lo > 0
    (annuli, exteriors), where the natural scale is multiplicative.
    """
    span = hi - lo
    if lo > 0:
        uniform = np.geomspace(lo, hi, count // 2 + 1)
    else:
        uniform = np.linspace(lo, hi, count // 2 + 1)
    ends = [e for e, p in zip((lo, hi), pinned) if p]
    per_end = (count - uniform.size) // max(len(ends), 1)
    graded = []
    for e in ends:
        off = np.geomspace(1e-4, 0.5 / (count // 2), per_end + 2)[:-1] * span
        graded.append(e + off if e == lo else e - off)
    return np.unique(np.concatenate([uniform] + graded))


def _profile_grid_spec(knots, resolution, truncation=None, scale=1.0):
    spec = {"kind": "radial", "resolution": resolution, "breaks": list(map(float, knots)),
            "scale": scale}
    if truncation is not None:
        spec["truncation"] = truncation
    return spec


# ----------------------------------------------------------------------------
# optimizers


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.used = 0
        self.best = math.inf
        self.best_x = None
        self.history = []

    def exhausted(self):
        return self.used >= self.budget

    def record(self, J, x):
        self.used += 1
        if J < self.best:
            self.best, self.best_x = J, x
        self.history.append(self.best)


def _safe_J(u, domain, params, grid):
    try:
        J = rayleigh(u, domain, params, grid).J
    except (DegenerateFunctionError, EvaluationError, IntegrabilityError, FloatingPointError):
        return _BAD
    return J if np.isfinite(J) else _BAD


def _radial_pgd(domain, params, budget, seed, knots_count, step, resolution, truncation,
                init=None):
    lo, hi, pinned = _radial_bounds(domain, truncation)
    knots = _knots(lo, hi, knots_count, pinned)
    free = np.ones(knots.size, dtype=bool)
    free[-1] = False
    if pinned[0]:
        free[0] = False
    gspec = _profile_grid_spec(knots, resolution, truncation if isinstance(domain, ExteriorBall)
                               else None)
    grid = _grid_for(domain, params, gspec)
    rng = np.random.default_rng(seed)
    mid = (lo + hi) / 2
    values = np.where(free, 1 - ((knots - mid) / (hi - lo) * 2) ** 2, 0.0)
    values = np.where(free, values * (1 + 0.1 * rng.random(knots.size)), 0.0)
    values = np.maximum(values, 0.0)
    if init is not None:
        # warm start from a radial field sampled on the knots
        values = np.where(free, init(domain.center + knots[:, None] * unit_vector(domain.dim)),
                          0.0)
        values = values / np.max(values)
    center = domain.center
    dim = domain.dim
    counter = _Counter(budget)

    def J_of(v):
        J = _safe_J(RadialProfile(dim, knots, v, center), domain, params, grid)
        counter.record(J, v.copy())
        return J

    gaps = np.diff(knots)
    mass = (np.concatenate([[0.0], gaps]) + np.concatenate([gaps, [0.0]])) / 2
    mass = mass * np.maximum(knots, 1e-3 * hi) ** (dim - 1)
    idx = np.flatnonzero(free)

    def grad(v, Jv):
        g = np.zeros_like(v)
        h = 1e-6 * np.max(v)
        for i in idx:
            vp = v.copy()
            vp[i] += h
            g[i] = (J_of(vp) - Jv) / h
        return g

    J = J_of(values)
    g = grad(values, J)
    # metric: the radial volume carried by each hat function (an L2-type preconditioner)
    alpha = step / max(np.max(np.abs(g / mass)), 1e-300)
    iters = 0
    converged = False
    while counter.used + idx.size + 1 <= budget:
        iters += 1
        improved = False
        for _ in range(40):
            trial = np.maximum(values - alpha * g / mass, 0.0)
            trial[~free] = 0.0
            if np.max(trial) > 0:
                Jt = J_of(trial)
                if Jt < J:
                    improved = True
                    break
            alpha /= 2
            if counter.exhausted():
                break
        if not improved:
            converged = not counter.exhausted()
            break
        rel = (J - Jt) / J
        gt = grad(trial, Jt)
        s, y = trial - values, gt - g
        sy = np.sum(s * y)
        # Barzilai-Borwein step in the preconditioned metric, halved on failure above
        alpha = np.sum(mass * s * s) / sy if sy > 0 else 2 * alpha
        values, J, g = trial, Jt, gt
        if rel < 1e-12:
            converged = True
            break
    best = counter.best_x
    u = RadialProfile(dim, knots, best, center)
    return counter, u, gspec, iters, converged


def _nelder_mead(fun, x0, budget):
    counter = _Counter(budget)

    def wrapped(x):
        if counter.exhausted():
            return _BAD
        J = fun(x)
        counter.record(J, np.array(x))
        return J

    res = nelder_mead(wrapped, x0, method="Nelder-Mead",
                      options={"maxfev": budget, "xatol": 1e-8, "fatol": 1e-12})
    return counter, bool(res.success)


def _sigmoid(z, lo, hi):
    return lo + (hi - lo) / (1 + math.exp(-z))


def _parametric(domain, params, budget, resolution, truncation):
    """Returns (counter, build(x) -> (witness, u), x0, converged)."""
    n, beta = params.n, params.beta
    dim = domain.dim
    if isinstance(domain, Ball):
        if beta not in (1, 2):
            raise ParameterDomainError("ball family needs beta in {1, 2}")

        # the mapped grid needs more nodes than radial ones to resolve the sphere's curvature
        res_ball = max(resolution, 256)

        def build(x):
            A = math.exp(_sigmoid(x[0], math.log(1e-4), math.log(10.0)))
            return kelvin_ball_witness(domain, beta, A, res_ball)

        x0 = [0.0]
    elif isinstance(domain, HalfSpace):
        if beta not in (1, 2):
            raise ParameterDomainError("half-space family needs beta in {1, 2}")
        fam = "beta1-u" if beta == 1 else "beta2-u"
        L = float(truncation)

        def build(x):
            A = math.exp(_sigmoid(x[0], math.log(1e-3 * L), math.log(0.2 * L)))
            u = make(fam, n, A=A)
            cut = RadialCutoff(dim, 0.0, 0.0, 0.5 * L, L)
            f = Product(u, cut)
            return {"function": f.describe(),
                    "grid": {"kind": "halfspace", "resolution": resolution, "scale": A,
                             "truncation": L}}, f

        x0 = [0.0]
    else:
        lo, hi, pinned = _radial_bounds(domain, truncation) if not isinstance(
            domain, PuncturedSpace) else (0.0, math.inf, (True, False))
        if n < 2:
            return _log_family(domain, params, budget, resolution, truncation)
        span = hi - lo

        def build(x):
            if isinstance(domain, PuncturedSpace):
                s = math.exp(x[0])
                f = punctured_profile(n, beta, s)
                return {"function": f.describe(),
                        "grid": {"kind": "radial", "resolution": resolution, "scale": s}}, f
            s = math.exp(x[0])
            w1 = span * _sigmoid(x[1], 1e-4, 0.45) if pinned[0] and lo > 0 else 0.0
            w2 = span * _sigmoid(x[2], 1e-4, 0.45)
            r0, r1 = (lo, lo + w1) if w1 > 0 else (0.0, 0.0)
            cut = RadialCutoff(dim, r0, r1, hi - w2, hi, domain.center)
            f = Product(punctured_profile(n, beta, s, domain.center), cut)
            breaks = [b for b in (r1, hi - w2, (lo + hi) / 2) if lo < b < hi]
            spec = _profile_grid_spec(breaks, resolution,
                                      truncation if isinstance(domain, ExteriorBall) else None,
                                      scale=s)
            return {"function": f.describe(), "grid": spec}, f

        if isinstance(domain, PuncturedSpace):
            x0 = [0.0]  # the quotient is dilation invariant there
        else:
            x0 = [math.log(math.sqrt(max(lo, 1e-3 * hi) * hi)), -1.0, -1.0]

    def fun(x):
        try:
            w, f = build(x)
            return _safe_J(f, domain, params, _grid_for(domain, params, w["grid"]))
        except (ParameterDomainError, OverflowError, ValueError):
            return _BAD

    counter, ok = _nelder_mead(fun, np.asarray(x0, dtype=float), budget)
    return counter, build, ok


def _log_family(domain, params, budget, resolution, truncation):
    """Log-plateau trials, used where the punctured extremal does not exist (n = 1)."""
    lo, hi, _ = _radial_bounds(domain, truncation)
    dim = domain.dim
    base = max(lo, 1e-12 * hi)

    def build(x):
        ll, lh = math.log(base), math.log(hi)
        span = lh - ll
        a1 = _sigmoid(x[0], 1e-3, 0.49) * span
        a2 = _sigmoid(x[1], 1e-3, 0.49) * span
        f = log_plateau(dim, base, math.exp(ll + a1), math.exp(lh - a2), hi, domain.center)
        spec = _profile_grid_spec([math.exp(ll + a1), math.exp(lh - a2)], resolution,
                                  truncation if isinstance(domain, ExteriorBall) else None,
                                  scale=base)
        return {"function": f.describe(), "grid": spec}, f

    def fun(x):
        w, f = build(x)
        return _safe_J(f, domain, params, _grid_for(domain, params, w["grid"]))

    counter, ok = _nelder_mead(fun, np.zeros(2), budget)
    return counter, build, ok


def minimize(domain, params, trial="both", budget=None, seed=0, resolution=None,
             truncation=None, knots=None, step=None):
    """Best Rayleigh quotient found over the chosen trial space.

    ``trial`` is ``"radial-profile"``, ``"parametric-families"`` or ``"both"``.
    The budget counts quotient evaluations and is split evenly for ``both``;
    there the parametric optimum (when it is radial) seeds the profile descent.
    """
    budget = DEFAULTS["budget"] if budget is None else int(budget)
    resolution = DEFAULTS["resolution"] if resolution is None else resolution
    truncation = DEFAULTS["truncation"] if truncation is None else truncation
    knots = DEFAULTS["knots"] if knots is None else knots
    step = DEFAULTS["step"] if step is None else step
    if trial not in ("radial-profile", "parametric-families", "both"):
        raise ParameterDomainError(f"unknown trial space {trial!r}")
    results = []
    radial_ok = not isinstance(domain, (HalfSpace, PuncturedSpace))
    share = budget // 2 if trial == "both" and radial_ok else budget
    init = None
    if trial in ("parametric-families", "both"):
        counter, build, conv = _parametric(domain, params, share, resolution, truncation)
        if counter.best < _BAD:
            w, f = build(counter.best_x)
            results.append(("parametric-families", w, counter, counter.used, conv))
            if not isinstance(domain, Ball):
                init = f
    if trial in ("radial-profile", "both") and radial_ok:
        counter, u, gspec, iters, conv = _radial_pgd(domain, params, budget - share
                                                     if trial == "both" else budget, seed,
                                                     knots, step, resolution, truncation, init)
        if counter.best < _BAD:
            results.append(("radial-profile", {"function": u.describe(), "grid": gspec},
                            counter, iters, conv))
    if not results:
        raise NonconvergenceError("no trial function produced a finite quotient")
    name, witness, counter, iters, conv = min(results, key=lambda r: r[2].best)
    report = evaluate_witness(witness, domain, params)
    history = []
    for r in results:
        history.extend(r[2].history)
    history = list(np.minimum.accumulate(history)) if history else []
    trunc = truncation if isinstance(domain, (ExteriorBall, HalfSpace)) else None
    return MuEstimate(domain.describe(), params.as_dict(), report.J + report.est_error, report.J,
                      report.est_error, witness, seed, int(sum(r[3] for r in results)), conv,
                      name, history, trunc)


# ----------------------------------------------------------------------------
# certificates and sequences


def reference_mu_star(n, beta, resolution=256):
    """mu* from the closed form (beta in {1, 2}) or from the ODE profile otherwise."""
    if beta in (1, 2):
        return sharp_mu_star(n, beta), "closed-form"
    from .functionals import sharp2_quotient
    from .ode import reconstruct_v, solve_psi

    sol = solve_psi(n, beta)
    J, _ = sharp2_quotient(reconstruct_v(sol), Params(n, beta),
                           halfspace_grid(n, resolution, sol.A))
    return J, "ode"


@dataclass
class Certificate:
    status: str  # "success" or "inconclusive"
    witness: dict
    J: float
    est_error: float
    mu_star: float
    margin: float
    mu_star_source: str
    domain: str
    estimate: MuEstimate = None

    def as_dict(self):
        return {"status": self.status, "witness": self.witness, "J": self.J,
                "est_error": self.est_error, "mu_star": self.mu_star, "margin": self.margin,
                "mu_star_source": self.mu_star_source, "domain": self.domain}


def certify_below_star(domain, n, beta, budget=None, seed=0, trial="both", **kw):
    """Search for a witness with J + est_error < mu*; never reports 'false'."""
    from .ode import check_beta

    check_beta(n, beta)
    params = Params(n, beta)
    mu, source = reference_mu_star(n, beta)
    est = minimize(domain, params, trial, budget, seed, **kw)
    margin = mu - (est.J + est.est_error)
    status = "success" if margin > 0 else "inconclusive"
    return Certificate(status, est.witness, est.J, est.est_error, mu, margin, source,
                       domain.describe(), est)


def concentration_sequence(ball, n, beta, lambda_list, resolution=256, A=1.0):
    """J on the ball of Kelvin images of the half-space extremal concentrated by lambda."""
    if beta not in (1, 2):
        raise ParameterDomainError("concentration sequence uses the beta in {1, 2} extremals")
    if np.any(np.diff(lambda_list) <= 0):
        raise ParameterDomainError("lambda values must increase")
    params = Params(n, beta)
    out = []
    for lam in lambda_list:
        w, f = kelvin_ball_witness(ball, beta, A / lam, resolution)
        try:
            rep = rayleigh(f, ball, params, _grid_for(ball, params, w["grid"]))
        except (EvaluationError, DegenerateFunctionError, FloatingPointError):
            break
        out.append({"lambda": float(lam), "J": rep.J, "est_error": rep.est_error})
    return out


def _smoothstep_integrals(q, order=64):
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1)
    w = 0.5 * w
    S = x * x * (3 - 2 * x)
    return float(np.sum(w * (6 * x * (1 - x)) ** 2)), float(np.sum(w * (1 - S) ** q))


def degenerate_sequence_2d(beta, R_list):
    """Log-cutoff functions eta_R(ln|x|) on the punctured plane.

    eta_R = 1 on (-R, R), smoothstep ramps on R <= |tau| <= 2R, so the slope
    constant is A = 3/2.  In tau = ln r both integrals are one-dimensional:
    energy 2 pi int eta'^2, weighted norm 2 pi int eta^q (the weight |x|^{-2}
    cancels the area element r^2).
    """
    if not beta >= 0:
        raise ParameterDomainError("beta must be non-negative")
    params = Params(1, beta)
    q, theta = params.power, params.outer
    slope_sq, tail = _smoothstep_integrals(q)
    A = 1.5
    out = []
    for R in R_list:
        energy = 2 * math.pi * 2 * slope_sq / R
        norm = 2 * math.pi * (2 * R + 2 * R * tail)
        J = energy / norm**theta
        bound = (4 * math.pi) ** (beta / (2 + beta)) * A**2 / R ** ((4 + beta) / (2 + beta))
        out.append({"R": float(R), "J": J, "bound": bound})
    return out


def sandwich_check(omega, n, beta, scales=None, resolution=256, budget=2000, seed=0):
    """Compare punctured-domain witnesses with the bounds from mu(Omega) and mu(R^{n+1}_*).

    ``omega`` is a PuncturedBall.  mu of the unpunctured ball is taken to be
    mu* (balls attain the half-space constant).  Witnesses are punctured-space
    extremals concentrated at the puncture plus the optimizer's best.
    """
    if not isinstance(omega, PuncturedBall):
        raise ParameterDomainError("sandwich check is implemented for punctured balls")
    params = Params(n, beta)
    witnesses = []
    if n == 1:
        lower, upper = punctured_bounds(sharp_mu_star(1, beta) if beta in (1, 2) else 1.0, 0.0)
        R = omega.radius
        for k in (2, 4, 8, 16, 32):
            f = log_plateau(2, R * math.exp(-4 * k), R * math.exp(-3 * k), R * math.exp(-k),
                            R / 2, omega.center)
            spec = _profile_grid_spec([R * math.exp(-3 * k), R * math.exp(-k)], resolution,
                                      scale=R * math.exp(-4 * k))
            rep = rayleigh(f, omega, params, _grid_for(omega, params, spec))
            witnesses.append({"label": f"log-plateau k={k}", "J": rep.J,
                              "est_error": rep.est_error,
                              "witness": {"function": f.describe(), "grid": spec}})
        Js = [w["J"] for w in witnesses]
        return {"n": n, "beta": beta, "lower": lower, "upper": upper, "witnesses": witnesses,
                "best": min(Js), "decreasing": bool(np.all(np.diff(Js) < 0)),
                "below_upper": False, "above_lower": all(J >= lower for J in Js),
                "ok": bool(np.all(np.diff(Js) < 0))}
    mu_ball = sharp_mu_star(n, beta)
    mu_star_p = mu_punctured_space(n, beta)
    lower, upper = punctured_bounds(mu_ball, mu_star_p)
    R = omega.radius
    if scales is None:
        scales = [R * 10.0 ** (-k) for k in (2, 4, 6, 9, 12, 15)]
    for s in scales:
        cut = RadialCutoff(n + 1, 0.0, 0.0, 0.25 * R, 0.5 * R, omega.center)
        f = Product(punctured_profile(n, beta, s, omega.center), cut)
        spec = _profile_grid_spec([0.25 * R], resolution, scale=s)
        rep = rayleigh(f, omega, params, _grid_for(omega, params, spec))
        witnesses.append({"label": f"punctured extremal, scale {s:.3g}", "J": rep.J,
                          "est_error": rep.est_error,
                          "witness": {"function": f.describe(), "grid": spec}})
    est = minimize(omega, params, "radial-profile", budget, seed, resolution=resolution)
    witnesses.append({"label": "radial profile optimum", "J": est.J, "est_error": est.est_error,
                      "witness": est.witness})
    best = min(witnesses, key=lambda w: w["J"])
    below = best["J"] <= upper + best["est_error"]
    above = all(w["J"] >= lower - w["est_error"] for w in witnesses)
    return {"n": n, "beta": beta, "lower": lower, "upper": upper, "mu_ball": mu_ball,
            "mu_punctured_space": mu_star_p, "witnesses": witnesses, "best": best["J"],
            "best_est_error": best["est_error"], "below_upper": bool(below),
            "above_lower": bool(above), "ok": bool(below and above)}
