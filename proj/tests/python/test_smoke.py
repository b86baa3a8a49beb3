import json
import math

import numpy as np
import pytest

import privreg


def test_schedule_pinned_values():
    c = privreg.corollary_schedule(256, 0.4, 1.0, 1.0, 5.0)
    assert c.n == 256
    assert c.d == 1
    assert c.gamma == pytest.approx(84.44850628946526, abs=1e-12)
    assert c.epsilon == pytest.approx(0.03589682359365735, abs=1e-15)
    assert c.a == pytest.approx(0.010056051474603582, abs=1e-15)
    assert c.b == pytest.approx(0.000244140625, abs=0)
    assert c.tau == pytest.approx(1.7411011265922478, abs=1e-12)
    assert c.sigma2 == pytest.approx(1.0 / 3.0, abs=1e-15)
    c.validate()


def test_schedule_rejects_bad_delta():
    with pytest.raises(Exception):
        privreg.corollary_schedule(256, 0.9, 1.0, 1.0, 2.0)


def test_bounds_pinned_values():
    c = privreg.corollary_schedule(256, 0.4, 1.0, 1.0, 5.0)
    assert privreg.min_a_for_ir(c) == pytest.approx(0.00515635049047109, abs=1e-15)
    assert privreg.eta_bound(c) > 0.0
    assert privreg.budget_bound(c) > 0.0
    assert privreg.accuracy_bound(c) > 0.0
    assert privreg.tau_threshold(0.01, 1.0, 2.0) == pytest.approx(10.0, abs=1e-12)
    assert privreg.privacy_cost(2.0, 0.5) == pytest.approx(0.5, abs=0)


def test_brier_proper_at_truth():
    for p in np.linspace(-2.0, 2.0, 21):
        qs = np.linspace(-2.0, 2.0, 401)
        scores = [privreg.brier(p, q, a=0.0, b=1.0) for q in qs]
        assert abs(qs[int(np.argmax(scores))] - p) < 1e-9


def test_ridge_matches_normal_equations():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(40, 3))
    y = rng.normal(size=40)
    gamma = 2.5
    theta = privreg.ridge(X, y, gamma)
    direct = np.linalg.solve(gamma * np.eye(3) + X.T @ X, X.T @ y)
    assert np.allclose(theta, direct, atol=1e-12)
    assert privreg.loss(theta, X, y, gamma) <= privreg.loss(direct * 1.01 + 0.01, X, y, gamma)


def test_sample_unit_ball_inside_ball():
    X = privreg.sample_unit_ball(500, 3, 11)
    assert X.shape == (500, 3)
    assert (np.linalg.norm(X, axis=1) <= 1.0 + 1e-12).all()


def test_release_noise_shape_and_scale():
    V = privreg.sample_release_noise(1, 0.5, 20000, 13)
    assert V.shape == (20000, 1)
    assert abs(np.abs(V).mean() - 0.5) < 0.02


def test_audits_clean():
    s = privreg.sensitivity_audit(200, 2, 10.0, trials=500, seed=21)
    assert s["violations"] == 0
    assert s["max_observed"] <= s["bound"]
    r = privreg.density_ratio_audit(2, 1.0, 1.0, 10.0, 0.25, pairs=500, seed=22)
    assert r["violations"] == 0
    assert r["extremal_log_ratio"] == pytest.approx(0.25, abs=1e-9)


EXPERIMENT_CONFIG = {
    "n_grid": [64, 128],
    "delta": 0.25,
    "trials": 10,
    "seed": 99,
    "prior_kind": "discrete",
    "prior_atoms": [[-1.0], [1.0]],
    "noise_kind": "uniform",
    "noise_m": 1.0,
    "cost_p": 2.0,
}


def test_experiment_json_report():
    report = json.loads(privreg.run_experiment_json(json.dumps(EXPERIMENT_CONFIG)))
    assert report["failed_trials"] == 0
    assert [row["n"] for row in report["rows"]] == [64, 128]
    for row in report["rows"]:
        assert row["mse"] > 0.0
        assert row["budget_mean"] > 0.0
        assert row["ir_violation_fraction"] == 0.0
        assert row["mse"] <= row["accuracy_bound"]
        assert row["epsilon_total"] == pytest.approx(2.0 * row["n"] ** -0.75, rel=1e-12)
    assert len(report["trials"]) == 2
    assert len(report["trials"][0]["budget"]) == 10


def test_experiment_csv_report():
    csv_text = privreg.run_experiment_csv(json.dumps(EXPERIMENT_CONFIG))
    lines = csv_text.strip().split("\n")
    assert lines[0].startswith("n,mse,mse_stderr,budget_mean")
    assert len(lines) == 3


def test_experiment_deterministic():
    cfg = json.dumps(EXPERIMENT_CONFIG)
    assert privreg.run_experiment_json(cfg) == privreg.run_experiment_json(cfg)


def test_experiment_rejects_unknown_key():
    bad = dict(EXPERIMENT_CONFIG, gamma=10.0)
    with pytest.raises(Exception, match="gamma"):
        privreg.run_experiment_json(json.dumps(bad))
