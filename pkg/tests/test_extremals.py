import numpy as np
import pytest
import sympy as sp

from hslab.domains import HalfSpace, PuncturedSpace
from hslab.errors import ParameterDomainError, SingularityError
from hslab.extremals import (
    ExtremalParams,
    el_constant_closed_form,
    el_residual,
    eval_family,
    from_description,
    laplacian,
    make,
    normalize_for_el,
    normalize_for_inequality,
)
from hslab.functionals import rayleigh, weighted_norm
from hslab.quadrature import build_grid
from hslab.special import Params, mu_punctured_space, sharp_mu_star
from hslab.suite import sample_interior_points
from hslab.testfunctions import Product, Scaled, SmoothBump


def sympy_u(family, n, A):
    ys = sp.symbols(f"y0:{n}", real=True)
    t = sp.Symbol("t", positive=True)
    rho2 = sum(y**2 for y in ys)
    P = (A + t) ** 2 + rho2 if family == "beta1-u" else A**2 + t**2 + rho2
    u = t / P ** sp.Rational(n + 1, 2)
    return (*ys, t), u


@pytest.mark.parametrize("family", ["beta1-u", "beta2-u"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_laplacian_against_sympy(family, n, rng):
    A = sp.Rational(3, 4)
    syms, u = sympy_u(family, n, A)
    lap = sp.lambdify(syms, sum(sp.diff(u, s, 2) for s in syms), "numpy")
    val = sp.lambdify(syms, u, "numpy")
    ep = ExtremalParams(family, n, 0.75)
    x = sample_interior_points(n, 30, seed=int(rng.integers(1000)))
    assert np.allclose(laplacian(ep, x), lap(*x.T), rtol=1e-11, atol=0)
    assert np.allclose(eval_family(ep, x)[0], val(*x.T), rtol=1e-13, atol=0)


@pytest.mark.parametrize("family", ["beta1-u", "beta2-u", "beta1-v", "beta2-v", "punctured"])
def test_gradients_against_finite_differences(family, rng):
    n = 2
    ep = ExtremalParams(family, n, 1.3, beta=1.0 if family == "punctured" else None)
    x = sample_interior_points(n, 10, seed=int(rng.integers(1000)))
    _, g = eval_family(ep, x)
    h = 1e-6
    for i in range(n + 1):
        e = np.zeros(n + 1)
        e[i] = h
        fd = (eval_family(ep, x + e)[0] - eval_family(ep, x - e)[0]) / (2 * h)
        assert np.allclose(g[:, i], fd, rtol=1e-6, atol=1e-9)


@pytest.mark.parametrize("family", ["beta1-u", "beta2-u"])
@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("A", [0.4, 1.0, 2.5])
def test_el_constant_matches_closed_form(family, n, A):
    ep = normalize_for_el(family, n, A)
    assert ep.C == pytest.approx(el_constant_closed_form(family, n, A), rel=1e-12)
    assert el_residual(family, ep, n, sample_interior_points(n, 500)) < 1e-10


def test_el_residual_rejects_boundary_points_and_mismatch():
    ep = normalize_for_el("beta1-u", 1)
    with pytest.raises(ParameterDomainError):
        el_residual("beta1-u", ep, 1, np.array([[0.0, 0.0]]))
    with pytest.raises(ParameterDomainError):
        el_residual("beta2-u", ep, 1, np.array([[0.0, 1.0]]))


def test_unnormalized_member_fails_el():
    ep = ExtremalParams("beta1-u", 2, 1.0, C=1.0)
    assert el_residual("beta1-u", ep, 2, sample_interior_points(2, 100)) > 1e-2


@pytest.mark.parametrize("n,beta", [(1, 1), (2, 2)])
def test_extremal_is_a_local_minimum(n, beta):
    par = Params(n, beta)
    u = make(f"beta{beta}-u", n)
    grid = build_grid(HalfSpace(n + 1), par, 256)
    J0 = rayleigh(u, HalfSpace(n + 1), par, grid).J
    phi = SmoothBump(n + 1, np.r_[np.full(n, 0.3), 1.0], 0.6)
    d = []
    for eps in (1e-1, 5e-2):
        J = rayleigh(_Sum(u, Scaled(phi, eps)), HalfSpace(n + 1), par, grid).J
        assert J > J0
        d.append(J - J0)
    # first variation vanishes: the increase is quadratic in eps
    assert d[0] / d[1] == pytest.approx(4.0, rel=0.1)


class _Sum:
    def __init__(self, f, g):
        self.f, self.g, self.dim = f, g, f.dim

    def evaluate(self, x):
        a, ga = self.f.evaluate(x)
        b, gb = self.g.evaluate(x)
        return a + b, ga + gb


def test_normalize_for_inequality_has_unit_norm():
    par = Params(2, 1)
    grid = build_grid(HalfSpace(3), par, 256)
    ep = normalize_for_inequality("beta1-u", 2, grid)
    N = weighted_norm(make("beta1-u", 2, C=ep.C), grid, par.weight_exp, par.power, HalfSpace(3))
    assert N == pytest.approx(1.0, rel=1e-12)
    assert ep.normalization == "inequality"


@pytest.mark.parametrize("n,beta", [(2, 1.0), (3, 1.0), (2, 2.0), (2, 0.2)])
def test_punctured_family_attains_its_constant(n, beta):
    par = Params(n, beta)
    u = make("punctured", n, A=1.0, beta=beta)
    grid = build_grid(PuncturedSpace(n + 1), par, 256)
    rep = rayleigh(u, PuncturedSpace(n + 1), par, grid)
    assert rep.J == pytest.approx(mu_punctured_space(n, beta), rel=1e-9)


def test_punctured_family_origin_and_domain():
    u = make("punctured", 2, beta=1.0)
    with pytest.raises(SingularityError):
        u.evaluate(np.zeros((1, 3)))
    with pytest.raises(ParameterDomainError):
        make("punctured", 1, beta=1.0)
    with pytest.raises(ParameterDomainError):
        make("punctured", 2, beta=7.0)


def test_bad_parameters():
    for kw in ({"A": 0.0}, {"C": 0.0}):
        with pytest.raises(ParameterDomainError):
            make("beta1-u", 1, **kw)
    with pytest.raises(ParameterDomainError):
        make("nope", 1)
    with pytest.raises(ParameterDomainError):
        make("bliss", 1, beta=1.0)
    with pytest.raises(ParameterDomainError):
        laplacian(ExtremalParams("beta1-v", 1), np.ones((1, 2)))


def test_description_round_trip():
    u = make("beta2-u", 2, A=0.6, C=1.7, y0=(0.1, -0.4))
    w = from_description(u.describe())
    x = sample_interior_points(2, 20)
    assert np.array_equal(u.evaluate(x)[0], w.evaluate(x)[0])


def test_mu_star_from_every_dilate():
    par = Params(1, 2)
    mu = sharp_mu_star(1, 2)
    for A in (0.01, 1.0, 100.0):
        grid = build_grid(HalfSpace(2), par, 256, scale=A)
        assert rayleigh(make("beta2-u", 1, A=A), HalfSpace(2), par, grid).J == pytest.approx(
            mu, rel=1e-7)
