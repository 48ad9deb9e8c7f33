"""Verification suite shared by ``hs verify`` and the test-suite.

Each check returns rows ``{check, n, beta, gap, tol, passed, detail}`` where
``gap`` is the measured deviation (or worst inequality violation beyond the
error estimate) and ``tol`` the threshold it is compared against.
"""

import math

import numpy as np

from .corpus import halfspace_corpus
from .domains import HalfSpace
from .extremals import el_residual, make, normalize_for_el
from .functionals import (
    GnSpec,
    check_ggn,
    check_lemma21,
    check_lemma22,
    dilation_check,
    kelvin_identity_check,
    rayleigh,
    support_grid,
    uv_isometry,
)
from .quadrature import build_grid
from .special import Params, compare_star, sharp_constant_halfspace, sharp_mu_star

__all__ = ["CHECKS", "TOLERANCES", "run_suite", "sample_interior_points"]

TOLERANCES = {
    "constants": 1e-12,
    "equality": 1e-3,
    "el": 1e-6,
    "ode-gap": 1e-6,
    "ode-residual": 1e-7,
    "ode-A": 1e-6,
    "kelvin": 1e-4,
    "dilation": 1e-12,
    "isometry": 1e-8,
}

CHECKS = ("constants", "equality", "el", "ode", "kelvin", "lemmas", "ggn", "dilation",
          "isometry", "threshold")

GGN_SPECS = {
    1: [GnSpec(1, 1, 0.5, 1.0), GnSpec(1, 1, 1.5, 2.0), GnSpec(1, -1, -2, 1.5, s=2.0)],
    2: [GnSpec(2, 1, 1.2, 2.0), GnSpec(2, -1, -1.7, 2.0), GnSpec(2, -2, -3, 2.0, s=3.0),
        GnSpec(2, 0.5, 0.2, 1.5)],
}


def _row(check, n, beta, gap, tol, detail=None, strict=False):
    passed = bool(gap < tol) if strict else bool(gap <= tol)
    return {"check": check, "n": n, "beta": beta, "gap": float(gap), "tol": float(tol),
            "passed": passed, "detail": detail or {}}


def sample_interior_points(n, count=1000, seed=0):
    """Points (y, t) with |y| <= 3 and t log-uniform in [1e-3, 10]."""
    rng = np.random.default_rng(seed)
    y = rng.uniform(-3, 3, (count, n))
    t = np.exp(rng.uniform(math.log(1e-3), math.log(10.0), count))
    return np.column_stack([y, t])


def _family(beta, kind="u"):
    return f"beta{int(beta)}-{kind}"


def check_constants(n, beta):
    C, S = sharp_constant_halfspace(n, beta), sharp_mu_star(n, beta)
    return [_row("constants", n, beta, abs(C * S - 1), TOLERANCES["constants"],
                 {"C_star": C, "mu_star": S})]


def check_equality(n, beta, resolution=256, weight_scale=1.0, A_values=(0.5, 1.0, 2.0)):
    params = Params(n, beta)
    mu = sharp_mu_star(n, beta)
    rows = []
    for A in A_values:
        u = make(_family(beta), n, A=A)
        grid = build_grid(HalfSpace(n + 1), params, resolution, scale=A)
        weight = None
        if weight_scale != 1.0:
            weight = lambda x, s=weight_scale: s * x[..., -1]
        rep = rayleigh(u, HalfSpace(n + 1), params, grid, weight)
        rows.append(_row("equality", n, beta, abs(rep.J - mu) / mu, TOLERANCES["equality"],
                         {"A": A, "J": rep.J, "mu_star": mu, "est_error": rep.est_error,
                          "witness": u.describe()}))
    return rows


def check_el(n, beta, count=1000):
    ep = normalize_for_el(_family(beta), n, A=1.0)
    res = el_residual(ep.family, ep, n, sample_interior_points(n, count))
    return [_row("el", n, beta, res, TOLERANCES["el"], {"C": ep.C})]


def check_ode(n, beta, A_values=(0.5, 1.0)):
    from .functionals import sharp2_quotient
    from .ode import from_closed_form, ode_residual, reconstruct_v, solve_psi
    from .quadrature import halfspace_grid

    rows = []
    Js = []
    for A in A_values:
        sol = solve_psi(n, beta, A)
        ref = from_closed_form(n, beta, A)
        r = np.linspace(0, sol.R, 201)[:-1]
        gap = float(np.max(np.abs(sol(r)[0] - ref(r)[0])) / np.max(np.abs(ref(r)[0])))
        rs = np.linspace(0, sol.R, 102)[1:-1]
        res = ode_residual(sol, rs)
        J, _ = sharp2_quotient(reconstruct_v(sol), Params(n, beta),
                               halfspace_grid(n, 256, sol.A))
        Js.append(J)
        detail = {"A": A, "K": sol.K, "c0": sol.c0}
        rows.append(_row("ode-gap", n, beta, gap, TOLERANCES["ode-gap"], detail))
        rows.append(_row("ode-residual", n, beta, res, TOLERANCES["ode-residual"], detail))
    spread = (max(Js) - min(Js)) / min(Js)
    rows.append(_row("ode-A", n, beta, spread, TOLERANCES["ode-A"], {"J": Js}))
    return rows


def check_kelvin(n, beta, count=20, seed=0):
    params = Params(n, beta)
    worst, worst_u = 0.0, None
    for u in halfspace_corpus(n, count, seed, on_axis=True):
        r = kelvin_identity_check(u, params, 128)
        g = max(r["energy_gap"] / r["energy_halfspace"], r["norm_gap"] / r["norm_halfspace"])
        if g >= worst:
            worst, worst_u = g, u
    return [_row("kelvin", n, beta, worst, TOLERANCES["kelvin"],
                 {"count": count, "seed": seed, "worst": worst_u.describe()})]


def _corpus_rows(name, n, beta, pairs):
    """pairs: (label, function, CheckResult) over a corpus."""
    worst, worst_u, worst_label = 0.0, None, None
    for label, u, res in pairs:
        scale = max(abs(res.rhs), abs(res.lhs), 1e-300)
        violation = max(0.0, -(res.margin + res.est_error)) / scale
        if violation >= worst:
            worst, worst_u, worst_label = violation, u, label
    return _row(name, n, beta, worst, 0.0, {"config": worst_label,
                                            "worst": worst_u.describe() if worst_u else None})


def check_lemmas(n, beta, count=100, seed=0):
    rows = []
    for kind, ks in (("interior", (-2.0, -0.5, 0.5, 1.0, 2.0)), ("boundary", (0.5, 1.0, 2.0))):
        corpus = halfspace_corpus(n, count, seed, kind)
        grids = [support_grid(u, 128) for u in corpus]
        for k in ks:
            for lemma, fn in (("lemma21", check_lemma21), ("lemma22", check_lemma22)):
                pairs = [(f"{kind} k={k:g}", u, fn(u, k, g)) for u, g in zip(corpus, grids)]
                row = _corpus_rows(lemma, n, beta, pairs)
                row["detail"].update(kind=kind, k=k, count=count)
                rows.append(row)
    return rows


def check_ggn_corpus(n, beta, count=100, seed=0):
    rows = []
    for spec in GGN_SPECS.get(n, []):
        kind = "interior" if spec.k <= 0 else "mixed"
        corpus = halfspace_corpus(n, count, seed, kind)
        pairs = [(repr(spec), u, check_ggn(u, spec, support_grid(u, 128))) for u in corpus]
        row = _corpus_rows("ggn", n, beta, pairs)
        row["detail"].update(k=spec.k, l=spec.l, p=spec.p, s=spec.s, count=count)
        rows.append(row)
    return rows


def check_dilation(n, beta, R=3.7, seed=0):
    params = Params(n, beta)
    u = make(_family(beta), n, A=1.0)
    x0 = np.zeros(n + 1)
    x0[:-1] = np.random.default_rng(seed).normal(size=n)
    grid = build_grid(HalfSpace(n + 1), params, 128)
    J, J2 = dilation_check(u, HalfSpace(n + 1), params, R, x0, grid)
    return [_row("dilation", n, beta, abs(J - J2) / J, TOLERANCES["dilation"], {"R": R})]


def check_isometry(n, beta):
    params = Params(n, beta)
    u = make(_family(beta), n, A=1.0)
    r = uv_isometry(u, params, build_grid(HalfSpace(n + 1), params, 256))
    gap = max(r["energy_gap"] / r["energy_u"], r["norm_gap"] / r["norm_u"])
    return [_row("isometry", n, beta, gap, TOLERANCES["isometry"], r)]


def check_threshold(beta):
    """n at which mu(R*) stops being below mu*; expected 3 -> 4 (beta 1), 6 -> 7 (beta 2)."""
    expected = {1: 3, 2: 6}[int(beta)]
    order = [compare_star(beta, n) for n in range(2, 21)]
    last_below = max(n for n, o in zip(range(2, 21), order) if o == "below")
    monotone = all(o == "below" for o in order[: last_below - 1]) and all(
        o == "above" for o in order[last_below - 1:])
    gap = 0.0 if (last_below == expected and monotone) else 1.0
    return [_row("threshold", None, beta, gap, 0.0, {"last_below": last_below})]


def run_suite(only=None, ns=(1, 2), betas=(1, 2), corpus_size=100, weight_scale=1.0,
              resolution=256):
    """Rows for every requested check over the (n, beta) grid."""
    only = set(CHECKS if not only else only)
    unknown = only - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks {sorted(unknown)}; choose from {CHECKS}")
    rows = []
    for beta in betas:
        for n in ns:
            if "constants" in only:
                rows += check_constants(n, beta)
            if "equality" in only:
                rows += check_equality(n, beta, resolution, weight_scale)
            if "el" in only:
                rows += check_el(n, beta)
            if "ode" in only:
                rows += check_ode(n, beta)
            if "kelvin" in only:
                rows += check_kelvin(n, beta)
            if "lemmas" in only and beta == betas[0]:
                rows += check_lemmas(n, beta, corpus_size)
            if "ggn" in only and beta == betas[0]:
                rows += check_ggn_corpus(n, beta, corpus_size)
            if "dilation" in only:
                rows += check_dilation(n, beta)
            if "isometry" in only:
                rows += check_isometry(n, beta)
        if "threshold" in only:
            rows += check_threshold(beta)
    return rows
