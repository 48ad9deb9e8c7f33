"""Figures for CLI reports, drawn with the non-interactive Agg backend."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_constants", "plot_profile", "plot_sweep", "plot_history", "plot_checks"]


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_constants(rows, path):
    """mu* and mu of the punctured space against n, one colour per beta."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for beta in sorted({r["beta"] for r in rows}):
        sub = [r for r in rows if r["beta"] == beta]
        n = [r["n"] for r in sub]
        line, = ax.plot(n, [r["mu_star"] for r in sub], "o-", label=f"mu*  beta={beta:g}")
        ax.plot(n, [r["mu_punctured"] for r in sub], "s--", color=line.get_color(),
                label=f"mu(R*)  beta={beta:g}")
    ax.set_xlabel("n")
    ax.set_ylabel("sharp constant")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_profile(sol, path):
    """psi(r) and psi'(r) of an ODE solution."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.plot(sol.r, sol.psi, label="psi")
    ax.plot(sol.r, sol.dpsi, label="psi'")
    ax.axhline(0.0, color="0.6", lw=0.5)
    ax.set_xlabel("r")
    ax.set_title(f"n={sol.n}, beta={sol.beta:g}, K={sol.K:.6g}")
    ax.legend()
    return _save(fig, path)


def plot_sweep(rows, path, key):
    """Upper bound J + est against the swept parameter, with mu* for reference."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    x = np.array([r[key] for r in rows], dtype=float)
    ub = np.array([r["J"] + r["est_error"] for r in rows], dtype=float)
    ax.plot(x, ub, "o-", label="upper bound")
    ax.axhline(rows[0]["mu_star"], color="k", ls="--", label="mu*")
    ax.set_xscale("log")
    ax.set_xlabel(key)
    ax.set_ylabel("J + est_error")
    ax.legend()
    return _save(fig, path)


def plot_history(history, path, mu_star=None):
    """Best-so-far quotient against evaluation count."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.plot(np.arange(1, len(history) + 1), history)
    if mu_star is not None:
        ax.axhline(mu_star, color="k", ls="--", label="mu*")
        ax.legend()
    ax.set_xlabel("evaluations")
    ax.set_ylabel("best J")
    return _save(fig, path)


def plot_checks(rows, path):
    """Relative gap of each verification check against its tolerance (log scale)."""
    fig, ax = plt.subplots(figsize=(6.5, 0.25 * len(rows) + 1.5))
    y = np.arange(len(rows))
    gap = np.array([max(abs(r["gap"]), 1e-17) for r in rows])
    tol = np.array([r["tol"] for r in rows])
    colors = ["tab:green" if r["passed"] else "tab:red" for r in rows]
    ax.scatter(gap, y, c=colors, s=12, label="gap")
    has_tol = tol > 0  # inequality checks have tolerance 0 (no violation allowed)
    ax.scatter(tol[has_tol], y[has_tol], marker="|", c="k", s=40, label="tolerance")
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels([r["check"] for r in rows], fontsize=6)
    ax.invert_yaxis()
    ax.legend(fontsize=7)
    return _save(fig, path)
