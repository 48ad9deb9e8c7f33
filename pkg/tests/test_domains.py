import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hslab.domains import (
    Annulus,
    Ball,
    Cone,
    ExteriorBall,
    HalfSpace,
    Inversion,
    KelvinMap,
    PuncturedBall,
    PuncturedSpace,
    image_ball,
    punctured_bounds,
    unit_vector,
)
from hslab.errors import MembershipError, ParameterDomainError, SingularityError


def test_halfspace_distance():
    h = HalfSpace(3)
    x = np.array([[0.3, -1.0, 2.5], [1.0, 1.0, 0.0]])
    assert np.allclose(h.distance(x), [2.5, 0.0])
    with pytest.raises(MembershipError):
        h.distance([0.0, 0.0, -0.1])


def test_ball_and_annulus_distances():
    b = Ball(2, 2.0, [1.0, 0.0])
    assert b.distance([1.0, 0.5]) == pytest.approx(1.5)
    a = Annulus(3, 1.0, 4.0)
    assert a.distance([0, 0, 1.5]) == pytest.approx(0.5)
    assert a.distance([0, 0, 3.5]) == pytest.approx(0.5)
    assert not a.contains([0, 0, 0.5])
    with pytest.raises(MembershipError):
        a.distance([0, 0, 0.5])


def test_punctured_and_exterior():
    pb = PuncturedBall(3, 1.0)
    assert pb.distance([0, 0, 0.2]) == pytest.approx(0.2)
    assert pb.distance([0, 0, 0.8]) == pytest.approx(0.2)
    ex = ExteriorBall(3, 1.0)
    assert ex.distance([0, 0, 3.0]) == pytest.approx(2.0)
    ps = PuncturedSpace(2)
    assert ps.distance([3.0, 4.0]) == pytest.approx(5.0)


def test_cone_distance_is_one_lipschitz(rng):
    c = Cone(3, aperture=1.0, height=2.0)
    pts = rng.uniform(-1, 2, (400, 3))
    pts = pts[c.contains(pts)]
    d = c.distance(pts)
    assert np.all(d > 0)
    gaps = np.abs(d[:, None] - d[None, :])
    dist = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
    assert np.all(gaps <= dist + 1e-12)


def test_scaled_domains():
    b = Ball(3, 1.0).scaled(2.0, [0, 0, 1.0])
    assert b.radius == pytest.approx(2.0)
    assert np.allclose(b.center, [0, 0, 1.0])
    with pytest.raises(ParameterDomainError):
        HalfSpace(3).scaled(2.0, [0, 0, 1.0])


def test_inversion_is_involution(rng):
    inv = Inversion(-unit_vector(3), 1.0)
    x = rng.normal(size=(50, 3))
    assert np.allclose(inv(inv(x)), x, atol=1e-12)
    with pytest.raises(SingularityError):
        inv(-unit_vector(3))


def test_inversion_jacobian_by_finite_differences(rng):
    inv = Inversion(np.array([0.2, -1.0]), 1.3)
    x = rng.normal(size=2) + 2
    h = 1e-6
    fd = np.stack([(inv(x + h * e) - inv(x - h * e)) / (2 * h) for e in np.eye(2)], axis=-1)
    assert np.allclose(inv.jacobian(x), fd, atol=1e-8)
    assert inv.volume_factor(x) == pytest.approx(abs(np.linalg.det(fd)), rel=1e-7)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=2, max_size=2), st.floats(1e-6, 50))
def test_kelvin_maps_halfspace_into_image_ball(y, t):
    km = KelvinMap(3)
    x = np.array(y + [t])
    z = km.point(x)
    ball = image_ball(3)
    assert np.linalg.norm(z - ball.center) < 0.5
    # the pointwise distance identity 1/4 - |z + e/2|^2 = t |z + e|^2
    e = unit_vector(3)
    lhs = 0.25 - np.sum((z + e / 2) ** 2)
    assert lhs == pytest.approx(t * np.sum((z + e) ** 2), rel=1e-6, abs=1e-14)


def test_kelvin_ball_to_exterior():
    km = KelvinMap(2, "ball->exterior")
    z = km.point(np.array([0.0, -0.3]))
    assert km.target.contains(z)
    with pytest.raises(ParameterDomainError):
        KelvinMap(2, "up")


def test_punctured_bounds():
    lo, hi = punctured_bounds(2.870125623692092, 0.9604826126891564)
    assert lo == pytest.approx(0.7196522295357767)
    assert hi == pytest.approx(0.9604826126891564)
    assert punctured_bounds(0.0, 0.0) == (0.0, 0.0)
    with pytest.raises(ParameterDomainError):
        punctured_bounds(-1.0, 1.0)
