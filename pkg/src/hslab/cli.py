"""``hs``: command-line front end.

Exit codes: 0 success, 1 check failure (or inconclusive certificate),
2 usage error, 3 numerical nonconvergence.
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import plotting, reports
from .config import RunConfig, merge, parse_domain, parse_range, read_config_file
from .errors import HSError, NonconvergenceError, ParameterDomainError
from .special import (
    Params,
    bliss_constant,
    hardy_constant,
    mu_punctured_space,
    sharp_constant_halfspace,
    sharp_mu_star,
)

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONV = 0, 1, 2, 3

DEFAULTS = {
    "constants": {"n": "1..5", "beta": "1,2"},
    "verify": {"only": "", "n": "1,2", "beta": "1,2", "corpus_size": "100", "resolution": "256"},
    "ode": {"n": "2", "beta": "1.5", "A": "0.5", "samples": "401", "tol": "1e-8"},
    "minimize": {"domain": "annulus(rin=1, rout=8)", "n": "2", "beta": "1", "trial": "both",
                 "budget": "10000", "seed": "0", "resolution": "128", "truncation": "64"},
    "certify": {"domain": "annulus(rin=1, rout=8)", "n": "2", "beta": "1", "trial": "both",
                "budget": "4000", "seed": "0", "resolution": "128", "truncation": "64",
                "target": "below-star"},
    "sweep": {"domain": "annulus", "n": "2", "beta": "1", "trial": "both", "budget": "2000",
              "seed": "0", "resolution": "128", "truncation": "64", "rin": None,
              "rout": None, "radius": None},
    "kelvin-check": {"n": "1", "beta": "1", "count": "20", "seed": "0", "resolution": "128"},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", help="key = value file; flags override its entries")
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--figure", help="also render a matplotlib figure to this file")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp so identical runs give identical bytes")


def _domain_opts(p):
    p.add_argument("--domain")
    p.add_argument("--n")
    p.add_argument("--beta")
    p.add_argument("--trial", choices=("radial-profile", "parametric-families", "both"))
    p.add_argument("--budget")
    p.add_argument("--seed")
    p.add_argument("--resolution")
    p.add_argument("--truncation")


def build_parser():
    parser = _Parser(prog="hs", description="Numerical checks of sharp weighted "
                                            "Hardy-Sobolev inequalities.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="table of sharp constants")
    p.add_argument("--n", help="range such as 1..5 or 1,3")
    p.add_argument("--beta", help="list such as 1,2")
    _common(p)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--only", help="comma-separated subset of checks")
    p.add_argument("--n")
    p.add_argument("--beta")
    p.add_argument("--corpus-size", dest="corpus_size")
    p.add_argument("--resolution")
    p.add_argument("--inject-bug", action="store_true",
                   help="test hook: scale the half-space weight t by 1.01 in the equality checks")
    _common(p)

    p = sub.add_parser("ode", help="solve the profile ODE by shooting")
    p.add_argument("--n")
    p.add_argument("--beta")
    p.add_argument("--A")
    p.add_argument("--samples")
    p.add_argument("--tol", help="matching residual accepted by the shooting solver")
    _common(p)

    p = sub.add_parser("minimize", help="upper bound on mu(Omega) by minimization")
    _domain_opts(p)
    _common(p)

    p = sub.add_parser("certify", help="search for a witness below mu*")
    _domain_opts(p)
    p.add_argument("--target", choices=("below-star",))
    _common(p)

    p = sub.add_parser("sweep", help="certify over a range of one domain parameter")
    _domain_opts(p)
    p.add_argument("--rin", help="range of inner radii")
    p.add_argument("--rout", help="range of outer radii")
    p.add_argument("--radius", help="range of radii")
    _common(p)

    p = sub.add_parser("kelvin-check", help="Kelvin identities over a seeded corpus")
    p.add_argument("--n")
    p.add_argument("--beta")
    p.add_argument("--count")
    p.add_argument("--seed")
    p.add_argument("--resolution")
    _common(p)
    return parser


def _config(args):
    name = args.subcommand
    flags = {k: v for k, v in vars(args).items()
             if k not in ("subcommand", "config", "format", "out", "figure", "no_timestamp")}
    file_entries = read_config_file(args.config) if args.config else {}
    fmt = args.format or file_entries.pop("format", None)
    file_entries.pop("format", None)
    params = merge(DEFAULTS[name], file_entries, flags)
    default_fmt = {"constants": "csv", "sweep": "csv", "kelvin-check": "text"}.get(name, "json")
    return RunConfig(name, params, args.out, fmt or default_fmt)


def _emit(cfg, args, body, rows, columns, **extra):
    head = reports.header(cfg.echo(), timestamp=not args.no_timestamp, **extra)
    reports.emit(head, body, rows, columns, cfg.format, cfg.out, sys.stdout)


def _int(v):
    try:
        return int(v)
    except (TypeError, ValueError) as exc:
        raise ParameterDomainError(f"expected an integer, got {v!r}") from exc


def _float(v):
    try:
        return float(v)
    except (TypeError, ValueError) as exc:
        raise ParameterDomainError(f"expected a number, got {v!r}") from exc


def cmd_constants(cfg, args):
    ns = parse_range(cfg.params["n"], int)
    betas = parse_range(cfg.params["beta"], float)
    if not ns or not betas or min(ns) < 1:
        raise ParameterDomainError("--n needs integers >= 1 and --beta a non-empty list")
    rows = []
    for beta in betas:
        for n in ns:
            par = Params(n, beta)
            row = {"n": n, "beta": beta, "a": par.weight_exp, "q": par.power,
                   "theta": par.outer}
            if beta in (1, 2):
                row["C_star"] = sharp_constant_halfspace(n, beta)
                row["mu_star"] = sharp_mu_star(n, beta)
            row["mu_punctured"] = mu_punctured_space(n, beta) if n >= 1 else None
            row["bliss_C"] = bliss_constant(beta) if beta > 0 else None
            row["hardy_halfspace"] = hardy_constant(n, 2.0, "half-space")
            row["hardy_wholespace"] = hardy_constant(n, 2.0) if n >= 2 else None
            rows.append(row)
    cols = ["n", "beta", "a", "q", "theta", "C_star", "mu_star", "mu_punctured", "bliss_C",
            "hardy_halfspace", "hardy_wholespace"]
    _emit(cfg, args, rows, rows, cols)
    if args.figure:
        plotting.plot_constants([r for r in rows if "mu_star" in r], args.figure)
    return EXIT_OK


def cmd_verify(cfg, args):
    from .suite import CHECKS, run_suite

    only = [s for s in cfg.params["only"].split(",") if s.strip()]
    bad = set(only) - set(CHECKS)
    if bad:
        raise ParameterDomainError(f"unknown checks {sorted(bad)}; choose from {CHECKS}")
    rows = run_suite(only or None, parse_range(cfg.params["n"], int),
                     parse_range(cfg.params["beta"], float), _int(cfg.params["corpus_size"]),
                     1.01 if args.inject_bug else 1.0, _int(cfg.params["resolution"]))
    ok = all(r["passed"] for r in rows)
    failures = [r for r in rows if not r["passed"]]
    body = {"passed": ok, "checks": rows, "failures": failures,
            "inject_bug": bool(args.inject_bug)}
    _emit(cfg, args, body, rows, ["check", "n", "beta", "gap", "tol", "passed"])
    if args.figure:
        plotting.plot_checks(rows, args.figure)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ode(cfg, args):
    import numpy as np

    from .ode import ode_residual, solve_psi

    n, beta = _int(cfg.params["n"]), _float(cfg.params["beta"])
    sol = solve_psi(n, beta, _float(cfg.params["A"]), tol=_float(cfg.params["tol"]),
                    samples=_int(cfg.params["samples"]))
    rs = np.linspace(0, sol.R, 102)[1:-1]
    head_extra = {"solution": dict(sol.header(), ode_residual=ode_residual(sol, rs))}
    rows = [{"r": r, "psi": p, "dpsi": d} for r, p, d in zip(sol.r, sol.psi, sol.dpsi)]
    fmt = cfg.format
    if fmt == "json" and cfg.out and cfg.out.endswith(".csv"):
        cfg.format = "csv"
    _emit(cfg, args, {"solution": head_extra["solution"], "profile": rows}, rows,
          ["r", "psi", "dpsi"], **head_extra)
    if cfg.out and cfg.format == "csv":
        # header JSON next to the CSV profile
        head = reports.header(cfg.echo(), timestamp=not args.no_timestamp, **head_extra)
        reports.emit(head, head_extra["solution"], [], [], "json",
                     os.path.splitext(cfg.out)[0] + ".json")
    if args.figure:
        plotting.plot_profile(sol, args.figure)
    return EXIT_OK


def _domain_and_params(p, overrides=None):
    n, beta = _int(p["n"]), _float(p["beta"])
    return parse_domain(p["domain"], n + 1, overrides), n, beta


def _min_kwargs(p):
    return {"budget": _int(p["budget"]), "seed": _int(p["seed"]),
            "resolution": _int(p["resolution"]), "truncation": _float(p["truncation"])}


def cmd_minimize(cfg, args):
    from .varmin import minimize

    p = cfg.params
    dom, n, beta = _domain_and_params(p)
    est = minimize(dom, Params(n, beta), p["trial"], **_min_kwargs(p))
    body = est.as_dict()
    row = {k: body[k] for k in ("domain", "upper_bound", "J", "est_error", "trial", "seed")}
    _emit(cfg, args, body, [row], list(row))
    if args.figure:
        ref = sharp_mu_star(n, beta) if beta in (1, 2) else None
        plotting.plot_history(est.history, args.figure, ref)
    return EXIT_OK


def cmd_certify(cfg, args):
    from .varmin import certify_below_star

    p = cfg.params
    dom, n, beta = _domain_and_params(p)
    cert = certify_below_star(dom, n, beta, trial=p["trial"], **_min_kwargs(p))
    body = cert.as_dict()
    row = {k: body[k] for k in ("domain", "status", "J", "est_error", "mu_star", "margin")}
    _emit(cfg, args, body, [row], list(row))
    if args.figure:
        plotting.plot_history(cert.estimate.history, args.figure, cert.mu_star)
    return EXIT_OK if cert.status == "success" else EXIT_FAIL


def _sweep_one(job):
    from .varmin import certify_below_star

    p, key, value = job
    dom, n, beta = _domain_and_params(p, {key: value})
    cert = certify_below_star(dom, n, beta, trial=p["trial"], **_min_kwargs(p))
    return {key: value, "domain": cert.domain, "J": cert.J, "est_error": cert.est_error,
            "mu_star": cert.mu_star, "margin": cert.margin, "status": cert.status}


def _workers():
    raw = os.environ.get("HS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ParameterDomainError(f"HS_THREADS must be an integer, got {raw!r}") from exc


def cmd_sweep(cfg, args):
    p = cfg.params
    swept = [k for k in ("rin", "rout", "radius") if p.get(k) is not None]
    if len(swept) != 1:
        raise ParameterDomainError("sweep needs exactly one of --rin, --rout, --radius")
    key = swept[0]
    values = parse_range(p[key], float)
    jobs = [(p, key, v) for v in values]
    workers = _workers()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(j) for j in jobs]
    _emit(cfg, args, rows, rows, [key, "J", "est_error", "mu_star", "margin", "status"])
    if args.figure:
        plotting.plot_sweep(rows, args.figure, key)
    return EXIT_OK


def cmd_kelvin(cfg, args):
    from .corpus import halfspace_corpus
    from .functionals import kelvin_identity_check
    from .suite import TOLERANCES

    p = cfg.params
    n, beta = _int(p["n"]), _float(p["beta"])
    params = Params(n, beta)
    rows = []
    for i, u in enumerate(halfspace_corpus(n, _int(p["count"]), _int(p["seed"]), on_axis=True)):
        r = kelvin_identity_check(u, params, _int(p["resolution"]))
        rows.append({"index": i, "kind": u.describe()["kind"],
                     "energy_gap": r["energy_gap"] / r["energy_halfspace"],
                     "norm_gap": r["norm_gap"] / r["norm_halfspace"],
                     "energy_est": r["energy_est"] / r["energy_halfspace"],
                     "norm_est": r["norm_est"] / r["norm_halfspace"],
                     "function": u.describe()})
    tol = TOLERANCES["kelvin"]
    ok = all(max(r["energy_gap"], r["norm_gap"]) <= tol for r in rows)
    _emit(cfg, args, {"passed": ok, "tol": tol, "rows": rows}, rows,
          ["index", "kind", "energy_gap", "norm_gap", "energy_est", "norm_est"])
    if args.figure:
        plotting.plot_checks([{"check": f"#{r['index']} {r['kind']}",
                               "gap": max(r["energy_gap"], r["norm_gap"]), "tol": tol,
                               "passed": max(r["energy_gap"], r["norm_gap"]) <= tol}
                              for r in rows], args.figure)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"constants": cmd_constants, "verify": cmd_verify, "ode": cmd_ode,
            "minimize": cmd_minimize, "certify": cmd_certify, "sweep": cmd_sweep,
            "kelvin-check": cmd_kelvin}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.subcommand](cfg, args)
    except NonconvergenceError as exc:
        print(f"hs: nonconvergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except (ParameterDomainError, OSError) as exc:
        print(f"hs: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HSError as exc:
        print(f"hs: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
