import numpy as np
import pytest

from hslab.domains import HalfSpace
from hslab.errors import ParameterDomainError
from hslab.extremals import make
from hslab.functionals import sharp2_quotient
from hslab.ode import (
    check_beta,
    from_closed_form,
    ode_residual,
    profile_from_description,
    reconstruct_v,
    solve_psi,
)
from hslab.quadrature import halfspace_grid
from hslab.special import Params, sharp_mu_star
from hslab.suite import sample_interior_points


@pytest.mark.parametrize("beta", [1.0, 2.0])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("A", [0.5, 1.0])
def test_shooting_recovers_closed_form(n, beta, A):
    sol = solve_psi(n, beta, A)
    ref = from_closed_form(n, beta, A)
    assert sol.K == pytest.approx(ref.K, rel=1e-8)
    assert sol.c0 == pytest.approx(ref.c0, rel=1e-8)
    r = np.linspace(0, sol.R, 301)
    assert np.max(np.abs(sol(r)[0] - ref(r)[0])) <= 1e-6 * np.max(ref(r)[0])


@pytest.mark.parametrize("n,beta", [(1, 1.5), (2, 1.5), (2, 0.5), (1, 3.0)])
def test_non_closed_form_profiles(n, beta):
    sol = solve_psi(n, beta, 0.5)
    assert sol.residual_norm < 1e-8
    rs = np.linspace(0, sol.R, 102)[1:-1]
    assert ode_residual(sol, rs) < 1e-7
    psi, dpsi, _ = sol(np.array([0.0, sol.R]))
    assert dpsi[0] == 0.0
    assert psi[1] == pytest.approx(0.5 ** ((n + 1) / 2), rel=1e-10)
    assert np.all(sol.psi > 0)


def test_residual_detects_a_wrong_profile():
    sol = solve_psi(2, 1.5, 0.5)
    rs = np.linspace(0, sol.R, 52)[1:-1]
    assert ode_residual(sol.scaled(1.01), rs) > 1e-3


def test_quotient_is_independent_of_A():
    Js = []
    for A in (0.5, 1.0, 2.0):
        sol = solve_psi(2, 1.5, A)
        J, est = sharp2_quotient(reconstruct_v(sol), Params(2, 1.5), halfspace_grid(2, 256, A))
        assert est < 1e-6 * J
        Js.append(J)
    assert max(Js) - min(Js) <= 1e-6 * min(Js)


@pytest.mark.parametrize("n,beta", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_reconstructed_v_matches_the_v_family(n, beta):
    A = 0.8
    v = reconstruct_v(solve_psi(n, beta, A))
    w = make(f"beta{beta}-v", n, A=A)
    x = sample_interior_points(n, 200)
    (a, ga), (b, gb) = v.evaluate(x), w.evaluate(x)
    assert np.allclose(a, b, rtol=1e-6, atol=0)
    assert np.allclose(ga, gb, rtol=1e-5, atol=1e-12 * np.max(np.abs(gb)))


@pytest.mark.parametrize("n,beta", [(1, 1), (2, 2)])
def test_reconstructed_quotient_is_mu_star(n, beta):
    sol = solve_psi(n, beta, 0.5)
    J, _ = sharp2_quotient(reconstruct_v(sol), Params(n, beta), halfspace_grid(n, 256, 0.5))
    assert J == pytest.approx(sharp_mu_star(n, beta), rel=1e-7)


def test_reconstructed_v_is_defined_up_to_the_boundary():
    v = reconstruct_v(solve_psi(1, 1.5, 0.5))
    x = np.array([[0.3, 0.0], [0.3, 1e-14], [-2.0, 1e-9]])
    val, grad = v.evaluate(x)
    assert np.all(np.isfinite(val)) and np.all(np.isfinite(grad))
    with pytest.raises(ParameterDomainError):
        v.evaluate(np.array([[0.0, -0.5]]))


def test_description_round_trip():
    v = reconstruct_v(solve_psi(2, 1.5, 0.5), y0=[0.2, -0.1])
    w = profile_from_description(v.describe())
    x = sample_interior_points(2, 20)
    assert np.allclose(v.evaluate(x)[0], w.evaluate(x)[0], rtol=1e-12)


def test_parameter_checks():
    for n, beta in ((0, 1.0), (1, 0.0), (2, 6.0), (3, 4.0)):
        with pytest.raises(ParameterDomainError):
            check_beta(n, beta)
    with pytest.raises(ParameterDomainError):
        solve_psi(1, 1.0, A=0.0)
    with pytest.raises(ParameterDomainError):
        from_closed_form(1, 1.5)
    sol = solve_psi(1, 2.0, 0.5)
    with pytest.raises(ParameterDomainError):
        sol(np.array([2.0]))
    with pytest.raises(ParameterDomainError):
        ode_residual(sol, [0.0])


def test_halfspace_domain_of_the_quotient():
    # v = u/t: the sharp2 quotient on the extremal u/t reproduces mu* for beta = 2
    sol = from_closed_form(2, 2.0, 1.0)
    J, _ = sharp2_quotient(reconstruct_v(sol), Params(2, 2), halfspace_grid(2, 256, 1.0))
    assert J == pytest.approx(sharp_mu_star(2, 2), rel=1e-8)
    assert HalfSpace(3).dim == 3
