"""Evaluable scalar fields with gradients.

Every field works on arrays of points of shape ``(..., dim)`` and returns a
value array of shape ``(...)`` and a gradient of shape ``(..., dim)``.  The
``describe`` method returns a JSON-friendly dict that is enough to rebuild
the field (see :func:`from_description`), which is how witnesses are replayed.
"""

import numpy as np

from .errors import ParameterDomainError, SingularityError

__all__ = [
    "TestFunction",
    "ClosedForm",
    "RadialProfile",
    "RadialFunction",
    "SmoothBump",
    "RadialCutoff",
    "Product",
    "Scaled",
    "Dilated",
    "KelvinPullback",
    "DivideByT",
    "TimesTPower",
    "Zero",
    "smoothstep",
    "from_description",
]


def smoothstep(x):
    """C^1 ramp 3x^2 - 2x^3 on [0, 1], clamped outside; returns (value, derivative)."""
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3 - 2 * x), 6 * x * (1 - x)


class TestFunction:
    """Base class.  Subclasses implement ``evaluate(x) -> (value, gradient)``."""

    __test__ = False  # keep pytest from collecting this as a test class

    dim = None

    def evaluate(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.evaluate(x)[0]

    def grad(self, x):
        return self.evaluate(x)[1]

    def describe(self):
        return {"kind": type(self).__name__}

    def __mul__(self, other):
        if isinstance(other, TestFunction):
            return Product(self, other)
        return Scaled(self, float(other))

    __rmul__ = __mul__


def _pts(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise ParameterDomainError("points need at least one axis")
    return x


class Zero(TestFunction):
    def __init__(self, dim):
        self.dim = dim

    def evaluate(self, x):
        x = _pts(x)
        return np.zeros(x.shape[:-1]), np.zeros(x.shape)

    def describe(self):
        return {"kind": "Zero", "dim": self.dim}


class ClosedForm(TestFunction):
    """Wraps a pair of callables; ``params`` is stored for provenance only."""

    def __init__(self, dim, value, gradient, name="closed-form", params=None):
        self.dim = dim
        self._value = value
        self._gradient = gradient
        self.name = name
        self.params = dict(params or {})

    def evaluate(self, x):
        x = _pts(x)
        return self._value(x), self._gradient(x)

    def describe(self):
        return {"kind": "ClosedForm", "name": self.name, "params": self.params}


def _radial_parts(x, center):
    d = x - center
    r = np.linalg.norm(d, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(r[..., None] > 0, d / r[..., None], 0.0)
    return r, unit


class RadialFunction(TestFunction):
    """f(|x - c|) from callables f and f'."""

    def __init__(self, dim, f, df, center=None, name="radial", params=None):
        self.dim = dim
        self.center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        self.f, self.df = f, df
        self.name = name
        self.params = dict(params or {})

    def evaluate(self, x):
        r, unit = _radial_parts(_pts(x), self.center)
        return self.f(r), self.df(r)[..., None] * unit

    def describe(self):
        return {"kind": "RadialFunction", "name": self.name, "center": self.center.tolist(),
                "params": self.params}


class RadialProfile(TestFunction):
    """Piecewise-linear profile in r = |x - c|, zero at and beyond the last knot."""

    def __init__(self, dim, knots, values, center=None):
        knots = np.asarray(knots, dtype=float)
        values = np.asarray(values, dtype=float)
        if knots.ndim != 1 or knots.shape != values.shape or knots.size < 2:
            raise ParameterDomainError("knots and values must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(knots) <= 0) or knots[0] < 0:
            raise ParameterDomainError("knots must be non-negative and strictly increasing")
        if values[-1] != 0:
            raise ParameterDomainError("profile must vanish at its last knot")
        self.dim = dim
        self.knots = knots
        self.values = values
        self.center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        self.slopes = np.diff(values) / np.diff(knots)

    @property
    def support_radius(self):
        return float(self.knots[-1])

    def evaluate(self, x):
        r, unit = _radial_parts(_pts(x), self.center)
        k = self.knots
        val = np.interp(r, k, self.values, left=self.values[0], right=0.0)
        seg = np.clip(np.searchsorted(k, r, side="right") - 1, 0, k.size - 2)
        slope = np.where((r >= k[0]) & (r < k[-1]), self.slopes[seg], 0.0)
        return val, slope[..., None] * unit

    def with_values(self, values):
        return RadialProfile(self.dim, self.knots, values, self.center)

    def describe(self):
        return {"kind": "RadialProfile", "dim": self.dim, "knots": self.knots.tolist(),
                "values": self.values.tolist(), "center": self.center.tolist()}


class SmoothBump(TestFunction):
    """amplitude * (1 - |x - c|^2 / rho^2)_+^power, a C^{power-1} bump."""

    def __init__(self, dim, center, radius, power=4, amplitude=1.0):
        if not radius > 0 or power < 2:
            raise ParameterDomainError("bump needs radius > 0 and power >= 2")
        self.dim = dim
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.power = power
        self.amplitude = float(amplitude)

    @property
    def support_radius(self):
        return self.radius

    def evaluate(self, x):
        d = _pts(x) - self.center
        w = np.maximum(1 - np.sum(d * d, axis=-1) / self.radius**2, 0.0)
        val = self.amplitude * w**self.power
        g = (-2 * self.power * self.amplitude / self.radius**2) * w ** (self.power - 1)
        return val, g[..., None] * d

    def describe(self):
        return {"kind": "SmoothBump", "dim": self.dim, "center": self.center.tolist(),
                "radius": self.radius, "power": self.power, "amplitude": self.amplitude}


class RadialCutoff(TestFunction):
    """Radial plateau: 0 below r0, smoothstep up to 1 on [r0, r1], 1 on [r1, r2],
    smoothstep down on [r2, r3], 0 beyond.  ``r0 = r1`` drops the inner ramp and
    ``r3 = inf`` drops the outer one."""

    def __init__(self, dim, r0, r1, r2, r3, center=None):
        if not 0 <= r0 <= r1 <= r2 <= r3:
            raise ParameterDomainError("cutoff radii must satisfy 0 <= r0 <= r1 <= r2 <= r3")
        self.dim = dim
        self.radii = (float(r0), float(r1), float(r2), float(r3))
        self.center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)

    def profile(self, r):
        r0, r1, r2, r3 = self.radii
        up = np.ones_like(r)
        dup = np.zeros_like(r)
        if r1 > r0:
            up, dup = smoothstep((r - r0) / (r1 - r0))
            dup = dup / (r1 - r0)
        else:
            up = np.where(r >= r0, 1.0, 0.0)
        down = np.ones_like(r)
        ddown = np.zeros_like(r)
        if np.isfinite(r3):
            if r3 > r2:
                s, ds = smoothstep((r - r2) / (r3 - r2))
                down, ddown = 1 - s, -ds / (r3 - r2)
            else:
                down = np.where(r < r3, 1.0, 0.0)
        return up * down, dup * down + up * ddown

    def evaluate(self, x):
        r, unit = _radial_parts(_pts(x), self.center)
        val, dval = self.profile(r)
        return val, dval[..., None] * unit

    def describe(self):
        return {"kind": "RadialCutoff", "dim": self.dim, "radii": list(self.radii),
                "center": self.center.tolist()}


class Product(TestFunction):
    def __init__(self, f, g):
        self.f, self.g = f, g
        self.dim = f.dim

    def evaluate(self, x):
        fv, fg = self.f.evaluate(x)
        gv, gg = self.g.evaluate(x)
        return fv * gv, fv[..., None] * gg + gv[..., None] * fg

    def describe(self):
        return {"kind": "Product", "factors": [self.f.describe(), self.g.describe()]}


class Scaled(TestFunction):
    def __init__(self, f, factor):
        self.f = f
        self.factor = float(factor)
        self.dim = f.dim

    def evaluate(self, x):
        v, g = self.f.evaluate(x)
        return self.factor * v, self.factor * g

    def describe(self):
        return {"kind": "Scaled", "factor": self.factor, "f": self.f.describe()}


class Dilated(TestFunction):
    """x -> f((x - x0) / R), the push-forward of f under z -> x0 + R z."""

    def __init__(self, f, R, x0=None):
        if not R > 0:
            raise ParameterDomainError("dilation factor must be positive")
        self.f = f
        self.R = float(R)
        self.dim = f.dim
        self.x0 = np.zeros(self.dim) if x0 is None else np.asarray(x0, dtype=float)

    def evaluate(self, x):
        v, g = self.f.evaluate((_pts(x) - self.x0) / self.R)
        return v, g / self.R

    def describe(self):
        return {"kind": "Dilated", "R": self.R, "x0": self.x0.tolist(), "f": self.f.describe()}


class KelvinPullback(TestFunction):
    """psi(x) = (rho/|x-c|)^{dim-2} u(I(x)) for the inversion I about (c, rho).

    With c = -e_{n+1} and rho = 1 this is the half-space to ball transform.
    """

    def __init__(self, u, inversion):
        self.u = u
        self.inversion = inversion
        self.dim = u.dim

    def evaluate(self, x):
        x = _pts(x)
        inv = self.inversion
        d = x - inv.center
        d2 = np.sum(d * d, axis=-1)
        if np.any(d2 == 0):
            raise SingularityError("Kelvin transform evaluated at the inversion centre")
        k = self.dim - 2
        m = (inv.radius**2 / d2) ** (k / 2)
        dm = (-k * m / d2)[..., None] * d
        uv, ug = self.u.evaluate(inv(x))
        # DI is symmetric, so DI^T grad u = DI grad u
        dug = inv.radius**2 * (ug - 2 * (np.sum(d * ug, axis=-1) / d2)[..., None] * d) / d2[..., None]
        return m * uv, dm * uv[..., None] + m[..., None] * dug

    def describe(self):
        return {"kind": "KelvinPullback", "center": np.asarray(self.inversion.center).tolist(),
                "radius": self.inversion.radius, "u": self.u.describe()}


class DivideByT(TestFunction):
    """v = u / t on the half-space."""

    def __init__(self, u):
        self.u = u
        self.dim = u.dim

    def evaluate(self, x):
        x = _pts(x)
        t = x[..., -1]
        if np.any(t <= 0):
            raise SingularityError("u/t evaluated at t <= 0")
        uv, ug = self.u.evaluate(x)
        g = ug / t[..., None]
        g[..., -1] -= uv / t**2
        return uv / t, g

    def describe(self):
        return {"kind": "DivideByT", "u": self.u.describe()}


class TimesTPower(TestFunction):
    """u = t^s v on the half-space."""

    def __init__(self, v, s):
        self.v = v
        self.s = float(s)
        self.dim = v.dim

    def evaluate(self, x):
        x = _pts(x)
        t = x[..., -1]
        vv, vg = self.v.evaluate(x)
        ts = t**self.s
        g = ts[..., None] * vg
        if self.s != 0:
            g[..., -1] += self.s * t ** (self.s - 1) * vv
        return ts * vv, g

    def describe(self):
        return {"kind": "TimesTPower", "s": self.s, "v": self.v.describe()}


def from_description(desc):
    """Rebuild a field from ``describe()`` output (closed forms need the extremals registry)."""
    from . import extremals
    from .domains import Inversion

    kind = desc["kind"]
    if kind == "Zero":
        return Zero(desc["dim"])
    if kind == "RadialProfile":
        return RadialProfile(desc["dim"], desc["knots"], desc["values"], desc["center"])
    if kind == "SmoothBump":
        return SmoothBump(desc["dim"], desc["center"], desc["radius"], desc["power"],
                          desc["amplitude"])
    if kind == "RadialCutoff":
        return RadialCutoff(desc["dim"], *desc["radii"], center=desc["center"])
    if kind == "Product":
        f, g = desc["factors"]
        return Product(from_description(f), from_description(g))
    if kind == "Scaled":
        return Scaled(from_description(desc["f"]), desc["factor"])
    if kind == "Dilated":
        return Dilated(from_description(desc["f"]), desc["R"], desc["x0"])
    if kind == "KelvinPullback":
        inv = Inversion(np.asarray(desc["center"], dtype=float), desc["radius"])
        return KelvinPullback(from_description(desc["u"]), inv)
    if kind == "DivideByT":
        return DivideByT(from_description(desc["u"]))
    if kind == "TimesTPower":
        return TimesTPower(from_description(desc["v"]), desc["s"])
    if kind in ("ClosedForm", "RadialFunction"):
        return extremals.from_description(desc)
    raise ParameterDomainError(f"cannot rebuild field of kind {kind!r}")
