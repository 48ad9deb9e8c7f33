import pytest

from hslab.suite import CHECKS, TOLERANCES, run_suite, sample_interior_points


def test_quick_checks_pass():
    rows = run_suite(["constants", "dilation", "isometry", "threshold"], ns=(1,), betas=(1, 2))
    assert rows and all(r["passed"] for r in rows)
    assert {r["check"] for r in rows} == {"constants", "dilation", "isometry", "threshold"}


def test_scaled_weight_is_caught():
    rows = run_suite(["equality"], ns=(1,), betas=(1,), weight_scale=1.01)
    assert not any(r["passed"] for r in rows)
    assert all(r["gap"] > 10 * TOLERANCES["equality"] for r in rows)


def test_unknown_check():
    with pytest.raises(ValueError):
        run_suite(["nope"])
    assert "kelvin" in CHECKS


def test_interior_samples():
    x = sample_interior_points(2, 50, seed=1)
    assert x.shape == (50, 3)
    assert x[:, -1].min() >= 1e-3 and x[:, -1].max() <= 10
