"""Tensor Gauss-Legendre grids for singular-weight integrals.

Every grid stores full points in R^{n+1} together with positive weights that
already include the angular factor of the dimension reduction, so that
``sum(w * f(x))`` approximates the integral of f over the domain for any f
that shares the grid's symmetry:

* ``radial-1D``: f depends on |x - c| only; nodes lie on the ray c + r e_t.
* ``meridian-2D``: f depends on (|y - y0|, t) only; nodes lie in the
  half-plane spanned by e_1 and e_t through (y0, 0).

Each grid carries a companion built at half the resolution.  The difference
between the two results is the reported ``est_error``.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .domains import (
    Annulus,
    Ball,
    ExteriorBall,
    HalfSpace,
    PuncturedBall,
    PuncturedSpace,
)
from .errors import IntegrabilityError, ParameterDomainError
from .special import sphere_area

__all__ = [
    "QuadratureGrid",
    "build_grid",
    "halfspace_grid",
    "radial_grid",
    "polar_grid",
    "line_grid",
    "map_grid",
    "pushforward",
    "gauss_panels",
    "graded_breaks",
    "log_breaks",
    "DEFAULT_LEVELS",
    "check_tail",
]

DEFAULT_LEVELS = 40
_TAIL_TARGET = 1e-10


@dataclass
class QuadratureGrid:
    tag: str
    points: np.ndarray
    weights: np.ndarray
    truncation: float = math.inf
    tail_bound: float = 0.0
    level: np.ndarray = None  # grading level (0 = closest to the boundary), or None
    coarse: "QuadratureGrid" = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.points.shape[0] < 2 or self.points.shape[0] != self.weights.shape[0]:
            raise ParameterDomainError("a grid needs at least two nodes and one weight per node")
        if not np.all(self.weights > 0):
            raise ParameterDomainError("quadrature weights must be positive")

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def size(self):
        return self.weights.shape[0]

    def integrate(self, values):
        # numpy's pairwise summation has a fixed reduction order, so the result
        # is bitwise reproducible for a given grid
        return float(np.sum(self.weights * values))

    def describe(self):
        out = {"tag": self.tag, "nodes": int(self.size), "truncation": self.truncation,
               "tail_bound": self.tail_bound}
        out.update({k: v for k, v in self.meta.items() if np.isscalar(v) or isinstance(v, str)})
        return out


def gauss_panels(breaks, m):
    """Gauss-Legendre nodes and weights with m points on each [breaks[i], breaks[i+1]]."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = np.polynomial.legendre.leggauss(m)
    a, b = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) / 2 + half * x
    weights = half * w
    panel = np.repeat(np.arange(breaks.size - 1), m)
    return nodes.ravel(), weights.ravel(), panel


def graded_breaks(a, b, toward="a", levels=DEFAULT_LEVELS, ratio=0.5):
    """Breakpoints on [a, b] refined geometrically toward one end (or both)."""
    if toward == "both":
        mid = 0.5 * (a + b)
        left = graded_breaks(a, mid, "a", levels, ratio)
        right = graded_breaks(mid, b, "b", levels, ratio)
        return np.concatenate([left, right[1:]])
    k = np.arange(levels + 1)
    frac = np.concatenate([[0.0], ratio ** k[::-1]])  # 0, r^L, ..., r, 1
    if toward == "a":
        return a + (b - a) * frac
    if toward == "b":
        return b - (b - a) * frac[::-1]
    raise ParameterDomainError(f"unknown grading side {toward!r}")


def log_breaks(lo, hi, width=1.0):
    """Breakpoints equally spaced in log r between lo and hi (both > 0)."""
    count = max(1, math.ceil(math.log(hi / lo) / width))
    return np.exp(np.linspace(math.log(lo), math.log(hi), count + 1))


def _per_panel(resolution, panels):
    return max(2, math.ceil(resolution / panels))


def _merge_breaks(base, extra):
    extra = [e for e in extra if base[0] < e < base[-1]]
    out = np.unique(np.concatenate([base, extra]))
    return out


def _points_meridian(s, t, dim, y0):
    pts = np.zeros(s.shape + (dim,))
    if dim > 1:
        pts[..., :-1] = y0
        pts[..., 0] += s
    pts[..., -1] = t
    return pts


def _auto_span(n, target=_TAIL_TARGET):
    # integrands of the built-in families decay like (r/L)^{-(n+1)} in the
    # energy at both ends of the log variable; 4 extra e-folds of margin
    return (math.log(2 / target) + 4) / (n + 1)


def halfspace_grid(n, resolution=256, scale=1.0, y0=None, span="auto", levels=DEFAULT_LEVELS,
                   _coarse=True):
    """Log-polar grid about the boundary point (y0, 0) of the half-space.

    rho = scale * e^sigma with sigma in [-S, S] (unit Gauss panels) and the polar
    angle phi in (0, pi/2] measured from the boundary, graded toward phi = 0.
    Rescaling ``scale`` maps nodes and weights exactly, so quotients computed
    on it are dilation invariant to rounding.
    """
    dim = n + 1
    y0 = np.zeros(n) if y0 is None else np.asarray(y0, dtype=float)
    S = _auto_span(n) if span == "auto" else float(span)
    sb = np.linspace(-S, S, max(1, math.ceil(2 * S)) + 1)
    sig, wsig, _ = gauss_panels(sb, _per_panel(resolution, sb.size - 1))
    rho = scale * np.exp(sig)
    if n == 0:
        pts = rho[:, None]
        w = rho * wsig
        level = None
    else:
        pb = graded_breaks(0.0, math.pi / 2, "a", levels)
        phi, wphi, pidx = gauss_panels(pb, _per_panel(resolution, pb.size - 1))
        R, P = np.meshgrid(rho, phi, indexing="ij")
        s = R * np.cos(P)
        t = R * np.sin(P)
        pts = _points_meridian(s.ravel(), t.ravel(), dim, y0)
        w = (sphere_area(n - 1) * s ** (n - 1) * R**2 * np.outer(wsig, wphi)).ravel()
        level = np.broadcast_to(pidx[None, :], R.shape).ravel().copy()
    grid = QuadratureGrid(
        tag="meridian-2D" if n > 0 else "radial-1D",
        points=pts,
        weights=w,
        truncation=scale * math.exp(S),
        tail_bound=2 * math.exp(-(n + 1) * S),
        level=level,
        meta={"kind": "halfspace", "resolution": resolution, "scale": scale, "span": S,
              "y0": y0.tolist()},
    )
    if _coarse:
        grid.coarse = halfspace_grid(n, max(2, resolution // 2), scale, y0, S, levels, False)
    return grid


def radial_grid(n, segments, resolution=256, center=None, _coarse=True, meta=None, _m=None):
    """Radial grid for functions of r = |x - c|.

    ``segments`` is a list of breakpoint arrays (as from :func:`graded_breaks`
    or :func:`log_breaks`); they are concatenated and each panel gets the same
    number of Gauss points, resolution/16 but at least 4.  The coarse companion
    uses half as many points per panel.  The weight is |S^n| r^n dr.
    """
    dim = n + 1
    center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    breaks = np.unique(np.concatenate([np.asarray(s, dtype=float) for s in segments]))
    m = _m if _m is not None else max(4, math.ceil(resolution / 16))
    r, wr, pidx = gauss_panels(breaks, m)
    pts = center + r[:, None] * np.eye(dim)[-1]
    w = sphere_area(n) * r**n * wr
    grid = QuadratureGrid("radial-1D", pts, w, truncation=float(breaks[-1]), level=None,
                          meta=dict(meta or {}, kind="radial", resolution=resolution))
    grid.meta["breaks"] = breaks
    if _coarse:
        grid.coarse = radial_grid(n, segments, resolution // 2, center, False, meta, m // 2)
    return grid


def polar_grid(n, center, radius, resolution=128, breaks=(), grade_outer=False,
               levels=DEFAULT_LEVELS, angle_panels=8, _coarse=True, phi_max=math.pi):
    """Meridian grid in polar coordinates about a point on the symmetry axis.

    Covers the ball of the given radius about ``center``.  Radial breakpoints in
    ``breaks`` (for instance the knots of a profile) become panel edges; with
    ``grade_outer`` the radial panels are refined toward the sphere.  The polar
    angle is measured from the +t axis; ``phi_max = pi/2`` keeps the upper
    half-ball only (for a centre on the boundary t = 0).
    """
    dim = n + 1
    center = np.asarray(center, dtype=float)
    if grade_outer:
        rb = graded_breaks(0.0, radius, "b", levels)
    else:
        rb = np.linspace(0.0, radius, 9)
    rb = _merge_breaks(rb, breaks)
    r, wr, ridx = gauss_panels(rb, _per_panel(resolution, min(rb.size - 1, 32)))
    if n == 0:
        pts = np.concatenate([center - r[:, None], center + r[:, None]])
        w = np.concatenate([wr, wr])
        level = None
    else:
        half = phi_max < math.pi
        if half:
            # the flat face t = 0 is a boundary: grade the angle toward it
            pb = _merge_breaks(graded_breaks(0.0, phi_max, "b", levels),
                               np.linspace(0.0, phi_max, angle_panels + 1))
            m_phi = max(4, _per_panel(resolution, 2 * angle_panels))
        else:
            pb = np.linspace(0.0, phi_max, angle_panels + 1)
            m_phi = _per_panel(resolution, angle_panels)
        phi, wphi, pidx = gauss_panels(pb, m_phi)
        R, P = np.meshgrid(r, phi, indexing="ij")
        s = R * np.sin(P)
        t = center[-1] + R * np.cos(P)
        pts = _points_meridian(s.ravel(), t.ravel(), dim, center[:-1])
        w = (sphere_area(n - 1) * s ** (n - 1) * R * np.outer(wr, wphi)).ravel()
        level = None
        if half:
            lv = (pb.size - 2) - pidx
            level = np.broadcast_to(lv[None, :], R.shape).ravel().copy()
        elif grade_outer:
            # distance-to-sphere level of each node, 0 = innermost graded panel
            lv = (rb.size - 2) - ridx
            level = np.broadcast_to(lv[:, None], R.shape).ravel().copy()
    keep = w > 0
    grid = QuadratureGrid("meridian-2D" if n > 0 else "radial-1D", pts[keep], w[keep],
                          truncation=radius,
                          level=None if level is None else level[keep],
                          meta={"kind": "polar", "resolution": resolution, "radius": radius,
                                "center": center.tolist()})
    if _coarse:
        grid.coarse = polar_grid(n, center, radius, max(2, resolution // 2), breaks, grade_outer,
                                 levels, angle_panels, False, phi_max)
    return grid


def line_grid(breaks, resolution=256, _coarse=True):
    """One-dimensional grid on (breaks[0], breaks[-1]) for the n = 0 problem."""
    breaks = np.asarray(breaks, dtype=float)
    t, w, _ = gauss_panels(breaks, _per_panel(resolution, min(breaks.size - 1, 64)))
    grid = QuadratureGrid("radial-1D", t[:, None], w, truncation=float(breaks[-1]),
                          meta={"kind": "line", "resolution": resolution})
    if _coarse:
        grid.coarse = line_grid(breaks, max(2, resolution // 2), False)
    return grid


def map_grid(grid, inversion):
    """Image of a grid under an inversion; weights pick up the volume factor."""
    pts = inversion(grid.points)
    w = grid.weights * inversion.volume_factor(grid.points)
    mapped = QuadratureGrid(grid.tag + "+inversion", pts, w, truncation=grid.truncation,
                            tail_bound=grid.tail_bound, level=grid.level,
                            meta=dict(grid.meta, mapped="inversion"))
    if grid.coarse is not None:
        mapped.coarse = map_grid(grid.coarse, inversion)
    return mapped


def pushforward(grid, R, x0):
    """Grid for the domain R * Omega + x0: nodes x0 + R z, weights times R^{dim}."""
    x0 = np.asarray(x0, dtype=float)
    meta = dict(grid.meta, pushed=(R, x0.tolist()))
    if "distance" in meta:
        meta["distance"] = R * meta["distance"]
    pushed = replace(
        grid,
        points=x0 + R * grid.points,
        weights=grid.weights * R ** grid.dim,
        truncation=grid.truncation * R,
        coarse=None if grid.coarse is None else pushforward(grid.coarse, R, x0),
        meta=meta,
    )
    return pushed


def _radial_segments(domain, levels, scale, breaks, params=None):
    """Breakpoint segments for a radial domain, refined toward every boundary."""
    if isinstance(domain, Ball):
        segs = [graded_breaks(0.0, domain.radius, "b", levels)]
        tail = 0.0
    elif isinstance(domain, Annulus):
        segs = [graded_breaks(domain.r_in, domain.r_out, "both", levels)]
        tail = 0.0
    elif isinstance(domain, PuncturedBall):
        R = domain.radius
        lo = min(scale, R / 2) * 1e-14
        segs = [log_breaks(lo, R / 2), graded_breaks(R / 2, R, "b", levels)]
        tail = 0.0
    elif isinstance(domain, ExteriorBall):
        raise ParameterDomainError("exterior grids need a truncation radius")
    elif isinstance(domain, PuncturedSpace):
        # finite-energy functions on the punctured space decay no faster than
        # the fundamental solution r^{1-n}, whose energy tail is r^{1-n}; at the
        # origin the weighted norm density behaves like r^{n-1+gamma}, gamma > 0
        # the extremal (A + r^gamma)^{-(n+1)/beta} reaches that regime only for
        # gamma log r >> log(2(n+1)/beta), so small beta widens the span
        n = domain.dim - 1
        S = (math.log(2 / _TAIL_TARGET) + 4) / max(n - 1, 1)
        if params is not None and n >= 2 and params.beta > 0:
            gam = params.beta * (n - 1) / (n + 1)
            S += math.log(2 * (n + 1) / params.beta + 2) / gam
        segs = [log_breaks(scale * math.exp(-S), scale * math.exp(S))]
        tail = 2 * math.exp(-max(n - 1, 1) * S)
    else:
        raise ParameterDomainError(f"no radial grid for {domain.describe()}")
    if breaks is not None and len(breaks):
        lo, hi = segs[0][0], segs[-1][-1]
        segs.append(np.asarray([b for b in breaks if lo < b < hi]))
    return segs, tail


def build_grid(domain, params, resolution=256, truncation="auto", *, scale=1.0, y0=None,
               kind=None, breaks=None, boundary_order=1.0, levels=DEFAULT_LEVELS):
    """Quadrature grid adapted to a domain.

    ``kind`` selects the reduction: ``"radial"`` for radial domains (default
    except for balls), ``"meridian"`` for the half-space and balls.  ``scale``
    is the length scale of the integrand (the A of an extremal, say).
    ``boundary_order`` is the vanishing order m of the integrand u near the
    boundary: configurations with a + q m <= -1 are rejected as
    non-integrable.
    """
    if resolution < 16:
        raise ParameterDomainError("resolution must be at least 16")
    a, q = params.weight_exp, params.power
    if a + q * boundary_order <= -1:
        raise IntegrabilityError(
            f"delta^{a:g}|u|^{q:g} with u ~ delta^{boundary_order:g} is not integrable at the boundary"
        )
    n = domain.dim - 1
    if isinstance(domain, HalfSpace):
        if truncation == "auto":
            return halfspace_grid(n, resolution, scale, y0, "auto", levels)
        S = math.log(float(truncation) / scale)
        return halfspace_grid(n, resolution, scale, y0, S, levels)
    if isinstance(domain, Ball) and kind in (None, "meridian"):
        return polar_grid(n, domain.center, domain.radius, resolution, breaks or (),
                          grade_outer=True, levels=levels)
    if isinstance(domain, ExteriorBall):
        if truncation == "auto":
            raise ParameterDomainError("exterior domains need an explicit truncation radius")
        R0, R1 = domain.radius, float(truncation)
        if not R1 > R0:
            raise ParameterDomainError("truncation radius must exceed the ball radius")
        segs = [graded_breaks(R0, 2 * R0, "a", levels), log_breaks(2 * R0, R1)] if R1 > 2 * R0 \
            else [graded_breaks(R0, R1, "a", levels)]
        if breaks is not None:
            segs.append(np.asarray([b for b in breaks if R0 < b < R1]))
        grid = radial_grid(n, segs, resolution, domain.center, meta={"domain": domain.describe()})
        grid.truncation = R1
        return grid
    segs, tail = _radial_segments(domain, levels, scale, breaks, params)
    grid = radial_grid(n, segs, resolution, domain.center, meta={"domain": domain.describe()})
    grid.tail_bound = tail
    if grid.coarse is not None:
        grid.coarse.tail_bound = tail
    return grid


def check_tail(grid, contributions, levels=10, threshold=1e-6):
    """Raise IntegrabilityError when the innermost graded panels carry too much mass.

    ``contributions`` are the per-node summands w_i f(x_i).  For an integrable
    singularity the innermost ``levels`` grading levels hold a geometrically
    small share; a divergent one spreads its mass evenly over the levels.
    """
    if grid.level is None:
        return
    total = np.sum(np.abs(contributions))
    if total == 0:
        return
    inner = np.sum(np.abs(contributions[grid.level < levels]))
    if inner > threshold * total:
        raise IntegrabilityError(
            f"innermost {levels} boundary levels hold {inner / total:.3g} of the integral"
        )
