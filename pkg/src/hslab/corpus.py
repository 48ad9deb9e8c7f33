"""Seeded corpora of compactly supported test functions on the half-space.

Each corpus member is a bump or a piecewise-linear radial profile about a
random centre.  ``interior`` members have support inside the open half-space
(so they vanish near t = 0); ``boundary`` members are centred on t = 0 and do
not vanish there.  Corpora are reproducible from (n, count, seed, kind).
"""

import numpy as np

from .errors import ParameterDomainError
from .testfunctions import RadialProfile, SmoothBump

__all__ = ["halfspace_corpus", "ball_corpus", "interior_member", "boundary_member"]


def interior_member(n, rng, on_axis=False):
    """One bump or profile whose support ball stays inside t > 0."""
    dim = n + 1
    t_c = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0))))
    rho = t_c * rng.uniform(0.2, 0.95)
    y_c = np.zeros(n) if on_axis else rng.normal(0.0, 1.0, n)
    center = np.concatenate([y_c, [t_c]])
    if rng.random() < 0.5:
        power = int(rng.integers(2, 7))
        return SmoothBump(dim, center, rho, power, float(rng.uniform(0.3, 3.0)))
    m = int(rng.integers(4, 12))
    knots = np.sort(rng.uniform(0, rho, m - 2))
    knots = np.unique(np.concatenate([[0.0], knots, [rho]]))
    values = rng.uniform(-0.5, 2.0, knots.size)
    values[-1] = 0.0
    return RadialProfile(dim, knots, values, center)


def boundary_member(n, rng):
    """A bump centred on the boundary point (y, 0), non-zero on t = 0."""
    dim = n + 1
    center = np.concatenate([rng.normal(0.0, 1.0, n), [0.0]])
    rho = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0))))
    power = int(rng.integers(2, 7))
    return SmoothBump(dim, center, rho, power, float(rng.uniform(0.3, 3.0)))


def halfspace_corpus(n, count=100, seed=0, kind="interior", on_axis=False):
    """``count`` test functions; ``kind`` is ``"interior"``, ``"boundary"`` or ``"mixed"``.

    ``on_axis`` puts interior centres on the t-axis, as the Kelvin checks need
    (their ball-side grids assume symmetry about that axis).
    """
    if n < 1:
        raise ParameterDomainError("corpora are built for n >= 1")
    if kind not in ("interior", "boundary", "mixed"):
        raise ParameterDomainError(f"unknown corpus kind {kind!r}")
    rng = np.random.default_rng([seed, n, count])
    out = []
    for i in range(count):
        if kind == "boundary" or (kind == "mixed" and i % 2):
            out.append(boundary_member(n, rng))
        else:
            out.append(interior_member(n, rng, on_axis))
    return out


def ball_corpus(ball, count=50, seed=0):
    """Bumps and radial profiles with supports inside ``ball``, centred on its vertical axis."""
    rng = np.random.default_rng([seed, ball.dim, count, 1])
    out = []
    R = ball.radius
    for i in range(count):
        # centre on the axis at distance up to 0.9 R, support reaching toward the sphere
        direction = np.zeros(ball.dim)
        direction[-1] = 1.0 if rng.random() < 0.5 else -1.0
        off = R * rng.uniform(0.0, 0.9)
        center = ball.center + off * direction
        rho = (R - off) * rng.uniform(0.3, 0.999)
        if i % 2:
            out.append(SmoothBump(ball.dim, center, rho, int(rng.integers(2, 7))))
        else:
            knots = np.unique(np.concatenate([[0.0], np.sort(rng.uniform(0, rho, 6)), [rho]]))
            values = rng.uniform(0.0, 1.0, knots.size)
            values[-1] = 0.0
            out.append(RadialProfile(ball.dim, knots, values, center))
    return out
