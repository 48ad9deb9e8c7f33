import math

import numpy as np
import pytest

from hslab.domains import Annulus, Ball, ExteriorBall, HalfSpace, PuncturedBall, PuncturedSpace
from hslab.errors import ParameterDomainError
from hslab.special import Params, mu_punctured_space, sharp_mu_star
from hslab.varmin import (
    certify_below_star,
    concentration_sequence,
    degenerate_sequence_2d,
    evaluate_witness,
    log_plateau,
    minimize,
    reference_mu_star,
    sandwich_check,
)


@pytest.fixture(scope="module")
def annulus_estimate():
    return minimize(Annulus(2, 1.0, 32.0), Params(1, 1), "both", budget=600, seed=1)


def test_history_is_best_so_far(annulus_estimate):
    h = np.asarray(annulus_estimate.history)
    assert h.size > 10
    assert np.all(np.diff(h) <= 0)
    assert h[-1] == pytest.approx(annulus_estimate.J, rel=1e-9)


def test_witness_replays(annulus_estimate):
    est = annulus_estimate
    rep = evaluate_witness(est.witness, Annulus(2, 1.0, 32.0), Params(1, 1))
    assert rep.J == pytest.approx(est.J, rel=1e-10)
    assert est.upper_bound == pytest.approx(est.J + est.est_error, rel=1e-15)


def test_both_is_no_worse_than_radial_alone(annulus_estimate):
    radial = minimize(Annulus(2, 1.0, 32.0), Params(1, 1), "radial-profile", budget=300, seed=1)
    assert annulus_estimate.J <= radial.J + 1e-12
    assert annulus_estimate.J < sharp_mu_star(1, 1)


def test_minimize_is_reproducible():
    a = minimize(Annulus(2, 1.0, 4.0), Params(1, 1), "radial-profile", budget=80, seed=5)
    b = minimize(Annulus(2, 1.0, 4.0), Params(1, 1), "radial-profile", budget=80, seed=5)
    assert a.J == b.J and a.history == b.history


def test_truncated_halfspace_approaches_mu_star():
    est = minimize(HalfSpace(2), Params(1, 2), "parametric-families", budget=200,
                   truncation=64.0)
    mu = sharp_mu_star(1, 2)
    assert abs(est.J - mu) <= 1e-2 * mu
    assert est.truncation == 64.0


def test_ball_search_never_beats_mu_star():
    est = minimize(Ball(2, 1.0), Params(1, 1), "parametric-families", budget=120)
    assert est.J + est.est_error >= sharp_mu_star(1, 1)
    assert est.J <= 1.05 * sharp_mu_star(1, 1)


def test_punctured_space_parametric_recovers_its_constant():
    est = minimize(PuncturedSpace(3), Params(2, 1), "parametric-families", budget=100)
    assert est.J == pytest.approx(mu_punctured_space(2, 1), rel=1e-6)


def test_unknown_trial_space():
    with pytest.raises(ParameterDomainError):
        minimize(Ball(2, 1.0), Params(1, 1), "random")


def test_certificate_on_a_long_annulus():
    cert = certify_below_star(Annulus(2, 1.0, 32.0), 1, 1.0, budget=300,
                              trial="parametric-families")
    assert cert.status == "success"
    assert cert.margin == pytest.approx(cert.mu_star - cert.J - cert.est_error)
    assert cert.mu_star_source == "closed-form"


def test_certificate_on_an_exterior_domain():
    cert = certify_below_star(ExteriorBall(2, 1.0), 1, 2.0, budget=300,
                              trial="parametric-families", truncation=1e4)
    assert cert.status == "success"


def test_inconclusive_certificate_is_not_false():
    # the ball attains mu*, so no witness can certify strictly below it
    cert = certify_below_star(Ball(2, 1.0), 1, 1.0, budget=60, trial="parametric-families")
    assert cert.status == "inconclusive" and cert.margin <= 0


def test_reference_mu_star_from_the_ode():
    mu, src = reference_mu_star(1, 2)
    assert src == "closed-form"
    mu15, src = reference_mu_star(1, 1.5)
    assert src == "ode"
    assert sharp_mu_star(1, 1) < mu15 < sharp_mu_star(1, 2)


def test_concentration_sequence_decreases_to_mu_star():
    seq = concentration_sequence(Ball(2, 1.0), 1, 1.0, [1, 4, 16, 64, 256])
    J = [s["J"] for s in seq]
    mu = sharp_mu_star(1, 1)
    assert len(J) == 5
    assert all(j >= mu for j in J)
    assert np.all(np.diff(J) < 0)
    assert J[-1] <= 1.01 * mu
    with pytest.raises(ParameterDomainError):
        concentration_sequence(Ball(2, 1.0), 1, 1.0, [4, 1])


@pytest.mark.parametrize("beta", [0.0, 1.0, 2.0])
def test_degenerate_sequence_obeys_its_bound(beta):
    seq = degenerate_sequence_2d(beta, [10.0, 100.0, 1e3, 1e4])
    assert all(s["J"] <= s["bound"] for s in seq)
    J = [s["J"] for s in seq]
    assert np.all(np.diff(J) < 0) and J[-1] < 1e-5


def test_degenerate_sequence_against_direct_quadrature():
    from scipy.integrate import quad

    beta, R = 1.0, 7.0
    par = Params(1, beta)
    S = lambda x: x * x * (3 - 2 * x)
    eta = lambda s: 1.0 if abs(s) < R else (1 - S(abs(s) / R - 1) if abs(s) < 2 * R else 0.0)
    deta = lambda s: (6 * (abs(s) / R - 1) * (2 - abs(s) / R) / R) if R < abs(s) < 2 * R else 0.0
    E = 2 * math.pi * quad(lambda s: deta(s) ** 2, -2 * R, 2 * R, points=[-R, R])[0]
    N = 2 * math.pi * quad(lambda s: eta(s) ** par.power, -2 * R, 2 * R, points=[-R, R])[0]
    J = degenerate_sequence_2d(beta, [R])[0]["J"]
    assert J == pytest.approx(E / N**par.outer, rel=1e-10)


def test_sandwich_for_a_punctured_ball():
    res = sandwich_check(PuncturedBall(3, 1.0), 2, 1.0, budget=60)
    assert res["ok"]
    assert res["lower"] < res["best"] <= res["upper"] + res["best_est_error"]
    assert res["upper"] == pytest.approx(mu_punctured_space(2, 1), rel=1e-14)


def test_sandwich_in_the_plane_decreases():
    res = sandwich_check(PuncturedBall(2, 1.0), 1, 1.0)
    assert res["decreasing"] and res["ok"]
    assert res["best"] < 0.01


def test_log_plateau_gradient():
    f = log_plateau(2, 1e-3, 1e-2, 0.1, 0.5)
    x = np.array([[0.003, 0.001], [0.2, 0.1], [0.05, 0.0]])
    _, g = f.evaluate(x)
    h = 1e-8
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        fd = (f.evaluate(x + e)[0] - f.evaluate(x - e)[0]) / (2 * h)
        assert np.allclose(g[:, i], fd, rtol=1e-5, atol=1e-6)
