"""Model domains in R^{n+1} with exact distance-to-boundary functions.

Points are numpy arrays whose last axis has length ``dim = n + 1``; the last
coordinate is the distinguished direction t (the half-space is t > 0).  All
domains are immutable and vectorised over leading axes.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MembershipError, ParameterDomainError, SingularityError

__all__ = [
    "HalfSpace",
    "Ball",
    "Annulus",
    "PuncturedBall",
    "ExteriorBall",
    "Cone",
    "PuncturedSpace",
    "Inversion",
    "KelvinMap",
    "image_ball",
    "unit_vector",
    "punctured_bounds",
]

_TOL = 1e-12


def unit_vector(dim, axis=-1):
    e = np.zeros(dim)
    e[axis] = 1.0
    return e


def _as_center(center, dim):
    if center is None or np.isscalar(center):
        c = np.full(dim, 0.0 if center is None else float(center))
    else:
        c = np.asarray(center, dtype=float)
    if c.shape != (dim,):
        raise ParameterDomainError(f"centre must have {dim} coordinates, got {c.shape}")
    return c


def _fmt(c):
    c = np.asarray(c)
    if not np.any(c):
        return "0"
    return ":".join(f"{v:g}" for v in c)


class _Domain:
    bounded = True
    radial = False

    def _points(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ParameterDomainError(f"expected points in R^{self.dim}, got shape {x.shape}")
        return x

    def distance(self, x, check=True):
        """Distance to the boundary; raises MembershipError outside the closed domain."""
        x = self._points(x)
        d = self._distance(x)
        if check and np.any(~self._closed_contains(x)):
            bad = np.argwhere(~np.atleast_1d(self._closed_contains(x)))[0]
            raise MembershipError(f"point {np.atleast_2d(x)[tuple(bad)]} outside {self.describe()}")
        return d

    def contains(self, x):
        """Open-domain membership."""
        x = self._points(x)
        return self._open_contains(x)

    def _closed_contains(self, x):
        return self._open_contains(x) | (np.abs(self._signed(x)) <= _TOL * self._scale())

    def _open_contains(self, x):
        return self._signed(x) > 0

    def _scale(self):
        return 1.0


def _radius(x, c):
    return np.linalg.norm(x - c, axis=-1)


@dataclass(frozen=True)
class HalfSpace(_Domain):
    """{(y, t) : t > 0}; distance is t."""

    dim: int
    bounded = False

    def _signed(self, x):
        return x[..., -1]

    def _distance(self, x):
        return x[..., -1].copy()

    def scaled(self, R, x0):
        x0 = _as_center(x0, self.dim)
        if abs(x0[-1]) > 0:
            raise ParameterDomainError("half-space translations must keep t fixed")
        return self

    def describe(self):
        return "halfspace"


@dataclass(frozen=True)
class Ball(_Domain):
    dim: int
    radius: float = 1.0
    center: np.ndarray = field(default=None)
    radial = True

    def __post_init__(self):
        object.__setattr__(self, "center", _as_center(self.center, self.dim))
        if not self.radius > 0:
            raise ParameterDomainError("radius must be positive")

    def _signed(self, x):
        return self.radius - _radius(x, self.center)

    def _distance(self, x):
        return np.maximum(self.radius - _radius(x, self.center), 0.0)

    def _scale(self):
        return self.radius

    def scaled(self, R, x0):
        return Ball(self.dim, self.radius * R, self.center * R + _as_center(x0, self.dim))

    def radial_interval(self):
        return 0.0, self.radius

    def describe(self):
        return f"ball(center={_fmt(self.center)},radius={self.radius:g})"


@dataclass(frozen=True)
class Annulus(_Domain):
    dim: int
    r_in: float = 1.0
    r_out: float = 2.0
    center: np.ndarray = field(default=None)
    radial = True

    def __post_init__(self):
        object.__setattr__(self, "center", _as_center(self.center, self.dim))
        if not 0 < self.r_in < self.r_out:
            raise ParameterDomainError("annulus needs 0 < r_in < r_out")

    def _signed(self, x):
        r = _radius(x, self.center)
        return np.minimum(r - self.r_in, self.r_out - r)

    def _distance(self, x):
        return np.maximum(self._signed(x), 0.0)

    def _scale(self):
        return self.r_out

    def scaled(self, R, x0):
        return Annulus(self.dim, self.r_in * R, self.r_out * R,
                       self.center * R + _as_center(x0, self.dim))

    def radial_interval(self):
        return self.r_in, self.r_out

    def describe(self):
        return f"annulus(center={_fmt(self.center)},rin={self.r_in:g},rout={self.r_out:g})"


@dataclass(frozen=True)
class PuncturedBall(_Domain):
    """Ball with its centre removed; distance is min(|x - c|, R - |x - c|)."""

    dim: int
    radius: float = 1.0
    center: np.ndarray = field(default=None)
    radial = True

    def __post_init__(self):
        object.__setattr__(self, "center", _as_center(self.center, self.dim))
        if not self.radius > 0:
            raise ParameterDomainError("radius must be positive")

    def _signed(self, x):
        r = _radius(x, self.center)
        return np.minimum(r, self.radius - r)

    def _distance(self, x):
        return np.maximum(self._signed(x), 0.0)

    def _scale(self):
        return self.radius

    def scaled(self, R, x0):
        return PuncturedBall(self.dim, self.radius * R, self.center * R + _as_center(x0, self.dim))

    def radial_interval(self):
        return 0.0, self.radius

    def unpunctured(self):
        return Ball(self.dim, self.radius, self.center)

    def describe(self):
        return f"punctured-ball(center={_fmt(self.center)},radius={self.radius:g})"


@dataclass(frozen=True)
class ExteriorBall(_Domain):
    """Complement of a closed ball.  Truncation belongs to grids, not here."""

    dim: int
    radius: float = 1.0
    center: np.ndarray = field(default=None)
    bounded = False
    radial = True

    def __post_init__(self):
        object.__setattr__(self, "center", _as_center(self.center, self.dim))
        if not self.radius > 0:
            raise ParameterDomainError("radius must be positive")

    def _signed(self, x):
        return _radius(x, self.center) - self.radius

    def _distance(self, x):
        return np.maximum(self._signed(x), 0.0)

    def _scale(self):
        return self.radius

    def scaled(self, R, x0):
        return ExteriorBall(self.dim, self.radius * R, self.center * R + _as_center(x0, self.dim))

    def radial_interval(self):
        return self.radius, math.inf

    def describe(self):
        return f"exterior-ball(center={_fmt(self.center)},radius={self.radius:g})"


@dataclass(frozen=True)
class Cone(_Domain):
    """K_{A,h} = {(y, t) : 0 < t < h, |y| < A t} with apex at the origin."""

    dim: int
    aperture: float = 1.0
    height: float = 1.0

    def __post_init__(self):
        if not (self.aperture > 0 and self.height > 0):
            raise ParameterDomainError("cone needs A > 0 and h > 0")

    def _signed(self, x):
        # convex: the distance is the smaller of the distances to the lateral
        # generator through the meridian of x and to the top plane
        s = np.linalg.norm(x[..., :-1], axis=-1)
        t = x[..., -1]
        lateral = (self.aperture * t - s) / math.hypot(1.0, self.aperture)
        return np.minimum(lateral, self.height - t)

    def _distance(self, x):
        return np.maximum(self._signed(x), 0.0)

    def _scale(self):
        return self.height

    def scaled(self, R, x0):
        if np.any(_as_center(x0, self.dim)):
            raise ParameterDomainError("cone is anchored at the origin")
        return Cone(self.dim, self.aperture, self.height * R)

    def describe(self):
        return f"cone(A={self.aperture:g},h={self.height:g})"


@dataclass(frozen=True)
class PuncturedSpace(_Domain):
    """R^{n+1} minus the origin; distance is |x|."""

    dim: int
    bounded = False
    radial = True

    @property
    def center(self):
        return np.zeros(self.dim)

    def _signed(self, x):
        return np.linalg.norm(x, axis=-1)

    def _distance(self, x):
        return self._signed(x)

    def scaled(self, R, x0):
        if np.any(_as_center(x0, self.dim)):
            raise ParameterDomainError("punctured space is anchored at the origin")
        return self

    def radial_interval(self):
        return 0.0, math.inf

    def describe(self):
        return "punctured-space"


def image_ball(dim):
    """B_{1/2}(-e/2), the image of the half-space under the unit inversion about -e."""
    return Ball(dim, 0.5, -0.5 * unit_vector(dim))


@dataclass(frozen=True)
class Inversion:
    """Inversion x -> c + r^2 (x - c)/|x - c|^2 in the sphere of radius r about c."""

    center: np.ndarray
    radius: float

    def __call__(self, x):
        d = np.asarray(x, dtype=float) - self.center
        d2 = np.sum(d * d, axis=-1, keepdims=True)
        if np.any(d2 == 0):
            raise SingularityError("inversion evaluated at its centre")
        return self.center + self.radius**2 * d / d2

    def jacobian(self, x):
        """Matrix DI(x), shape (..., dim, dim); it is symmetric."""
        d = np.asarray(x, dtype=float) - self.center
        d2 = np.sum(d * d, axis=-1)[..., None, None]
        eye = np.eye(d.shape[-1])
        outer = d[..., :, None] * d[..., None, :]
        return self.radius**2 * (eye - 2 * outer / d2) / d2

    def volume_factor(self, x):
        """|det DI(x)| = (r/|x-c|)^{2 dim}."""
        d = np.asarray(x, dtype=float) - self.center
        d2 = np.sum(d * d, axis=-1)
        return (self.radius**2 / d2) ** d.shape[-1]


@dataclass(frozen=True)
class KelvinMap:
    """The two inversions used to move between half-space, ball and exterior.

    ``halfspace->ball`` inverts in the unit sphere about -e_{n+1}: the half-space
    maps onto B_{1/2}(-e/2).  ``ball->exterior`` inverts in the boundary sphere of
    that ball.  Both are involutions, so ``inverse`` is the same point map.
    """

    dim: int
    direction: str = "halfspace->ball"

    def __post_init__(self):
        if self.direction not in ("halfspace->ball", "ball->exterior"):
            raise ParameterDomainError(f"unknown Kelvin direction {self.direction!r}")

    @property
    def inversion(self):
        e = unit_vector(self.dim)
        if self.direction == "halfspace->ball":
            return Inversion(-e, 1.0)
        return Inversion(-0.5 * e, 0.5)

    @property
    def source(self):
        if self.direction == "halfspace->ball":
            return HalfSpace(self.dim)
        return image_ball(self.dim)

    @property
    def target(self):
        if self.direction == "halfspace->ball":
            return image_ball(self.dim)
        return ExteriorBall(self.dim, 0.5, -0.5 * unit_vector(self.dim))

    def point(self, x):
        return self.inversion(x)

    def inverse(self, x):
        return self.inversion(x)


def punctured_bounds(mu_omega, mu_star_punctured):
    """Bounds on mu(Omega minus a point) from mu(Omega) and mu(R^{n+1}_*).

    Returns ``(lower, upper)`` with lower = product/sum and upper = min.
    """
    if mu_omega < 0 or mu_star_punctured < 0:
        raise ParameterDomainError("both constants must be non-negative")
    total = mu_omega + mu_star_punctured
    if total == 0:
        return 0.0, 0.0
    return mu_omega * mu_star_punctured / total, min(mu_omega, mu_star_punctured)
