import json
import math

import numpy as np
import pytest

from equitest.exceptions import InfeasibleCorrelationError, InfeasibleDesignError, InputError
from equitest.linear_model import fit_ols
from equitest.simulation import (
    BALANCED,
    CORRELATED,
    DEFAULT_CORRELATED,
    STUDY1_DELTAS,
    CorrelatedBinaryDesign,
    ScenarioSpec,
    balanced_design,
    compare_decisions,
    frechet_bounds,
    generate_dataset,
    joint_cells_2x2,
    latent_correlation,
    run_study1,
    run_study2,
    sample_correlated_binary,
    specs_from_document,
    study1_scenarios,
    study2_scenarios,
)


def spec(**kw):
    base = dict(name="t", n=180, k=2, beta_true=(-0.2, 0.1, 0.2), sigma2=0.05, seed=1)
    base.update(kw)
    return ScenarioSpec(**base)


def test_delta_grid():
    assert len(STUDY1_DELTAS) == 49
    assert STUDY1_DELTAS[0] == 0.01 and STUDY1_DELTAS[-1] == 0.25
    assert 0.125 in STUDY1_DELTAS and 0.2 in STUDY1_DELTAS


def test_population_labels():
    labels = {round(s.b1_true, 3) for s in study1_scenarios(replicates=1)}
    assert labels == {0.0, 0.07, 0.124, 0.2}
    labels = {round(s.b1_true, 3) for s in study1_scenarios(CORRELATED, replicates=1)}
    assert labels == {0.0, 0.07, 0.124, 0.2}
    assert {round(s.b1_true, 2) for s in study2_scenarios(replicates=1)} == {0.0, 0.05, 0.07}
    assert len(study1_scenarios(replicates=1)) == 32 and len(study2_scenarios(replicates=1)) == 36


def test_stored_label_must_match():
    spec(b1_true=0.2)
    with pytest.raises(InputError):
        spec(b1_true=0.21)


def test_replicates_are_reproducible():
    s = spec()
    a, b = generate_dataset(s, 7), generate_dataset(s, 7)
    assert a.y.tobytes() == b.y.tobytes() and a.X.tobytes() == b.X.tobytes()
    assert generate_dataset(s, 8).y.tobytes() != a.y.tobytes()
    c = spec(design=CORRELATED, beta_true=(-0.2, 0.1, 0.19))
    assert generate_dataset(c, 3).X.tobytes() == generate_dataset(c, 3).X.tobytes()


def test_balanced_design_is_orthogonal():
    for n, k in [(180, 2), (3500, 4), (32, 4)]:
        X = balanced_design(n, k)
        if n % 2 ** k == 0:
            centred = X - X.mean(axis=0)
            off = centred.T @ centred - np.diag(np.diag(centred.T @ centred))
            assert np.all(off == 0.0)
    assert spec(n=1000, k=4, beta_true=(0.2, 0.1, 0.14, -0.1, -0.1)).imbalance == 1000 % 16
    with pytest.raises(InfeasibleDesignError):
        balanced_design(10, 4)
    with pytest.raises(InfeasibleDesignError):
        spec(n=10, k=4, beta_true=(0.2, 0.1, 0.14, -0.1, -0.1))


def test_mean_standardized_estimate_tracks_label():
    s = spec()
    est = [fit_ols(generate_dataset(s, r)).b_std_hat[0] for r in range(10_000)]
    assert abs(np.mean(est) - 0.200) <= 0.005


def test_exact_two_by_two_cells():
    cells = joint_cells_2x2(0.5, 0.25, 0.4)
    p11 = 0.125 + 0.4 * math.sqrt(0.25 * 0.1875)
    np.testing.assert_allclose(cells, [0.5 - 0.25 + p11, 0.25 - p11, 0.5 - p11, p11], atol=1e-15)
    X = sample_correlated_binary(CorrelatedBinaryDesign((0.5, 0.25), ((1, 0.4), (0.4, 1))), 100_000,
                                 np.random.default_rng(0))
    assert abs(np.corrcoef(X.T)[0, 1] - 0.4) <= 0.01
    np.testing.assert_allclose(X.mean(axis=0), [0.5, 0.25], atol=0.01)


def test_independent_columns():
    X = sample_correlated_binary(CorrelatedBinaryDesign((0.3, 0.6), ((1, 0), (0, 1))), 100_000,
                                 np.random.default_rng(1))
    counts = np.array([np.mean((X[:, 0] == a) & (X[:, 1] == b)) for a in (0, 1) for b in (0, 1)])
    np.testing.assert_allclose(counts, [0.7 * 0.4, 0.7 * 0.6, 0.3 * 0.4, 0.3 * 0.6], atol=0.006)


def test_four_column_copula():
    probs, corr = DEFAULT_CORRELATED[4]
    X = sample_correlated_binary(CorrelatedBinaryDesign(probs, corr), 100_000, np.random.default_rng(2))
    emp = np.corrcoef(X.T)
    for i in range(4):
        for j in range(i + 1, 4):
            assert abs(emp[i, j] - corr[i][j]) <= 0.02
    np.testing.assert_allclose(X.mean(axis=0), probs, atol=0.01)


def test_correlated_scenario_at_n3500():
    s = spec(n=3500, k=4, design=CORRELATED, beta_true=(0.2, 0.1, 0.14, -0.12, -0.14), sigma2=0.5)
    X = generate_dataset(s, 0).X
    assert abs(np.corrcoef(X[:, 1], X[:, 2])[0, 1] - 0.40) <= 0.03


def test_latent_calibration_hits_target():
    from scipy.stats import multivariate_normal, norm

    r = latent_correlation(0.25, 0.5, 0.3)
    a, b = norm.ppf(0.75), norm.ppf(0.5)
    p11 = multivariate_normal(cov=[[1, r], [r, 1]]).cdf([-a, -b])
    achieved = (p11 - 0.125) / math.sqrt(0.1875 * 0.25)
    assert abs(achieved - 0.3) <= 1e-4


def test_infeasible_correlations():
    lo, hi = frechet_bounds(0.5, 0.25)
    assert hi == pytest.approx(math.sqrt(1 / 3))
    with pytest.raises(InfeasibleCorrelationError):
        CorrelatedBinaryDesign((0.5, 0.25), ((1, 0.8), (0.8, 1)))
    with pytest.raises(InfeasibleCorrelationError):
        CorrelatedBinaryDesign((0.5, 0.5, 0.5), ((1, 0.9, -0.9), (0.9, 1, 0.9), (-0.9, 0.9, 1)))
    with pytest.raises(InfeasibleCorrelationError):
        CorrelatedBinaryDesign((0.5, 1.0), ((1, 0), (0, 1)))


def test_spec_validation():
    for bad in (dict(sigma2=0.0), dict(replicates=0), dict(beta_true=(0.1, 0.2)),
                dict(delta_grid=(0.1, 1.2)), dict(design="random")):
        with pytest.raises(InputError):
            spec(**bad)
    with pytest.raises(InputError):
        spec(k=3, beta_true=(0, 0.1, 0.1, 0.1), design=CORRELATED)


def test_worker_count_does_not_change_results():
    specs = [spec(name="a", replicates=40, delta_grid=(0.1, 0.2, 0.25)),
             spec(name="b", n=200, replicates=30, sigma2=0.5, delta_grid=(0.1, 0.2, 0.25))]
    serial = run_study1(specs, workers=1)
    parallel = run_study1(specs, workers=3)
    assert serial.to_csv() == parallel.to_csv()
    assert serial.to_json() == parallel.to_json()
    s2 = [spec(name="c", n=60, k=4, beta_true=(0.2, 0.1, 0.14, -0.1, -0.1), sigma2=0.5, replicates=20)]
    assert run_study2(s2, workers=1).to_json() == run_study2(s2, workers=2).to_json()


def test_rejection_rate_monotone_in_margin():
    summary = run_study1([spec(n=540, sigma2=0.15, replicates=200, seed=3)])
    rates = [row["rejection_rate"] for row in summary.rows]
    assert all(b >= a for a, b in zip(rates, rates[1:]))
    assert rates[-1] > 0.5
    row = summary.rows[0]
    assert row["mc_se"] == math.sqrt(row["rejection_rate"] * (1 - row["rejection_rate"]) / 200)


def test_mc_se_scale():
    assert math.sqrt(0.05 * 0.95 / 10_000) == pytest.approx(0.002, abs=2.5e-4)


def test_study2_summary_is_consistent():
    s = study2_scenarios(replicates=15, seed=5, sizes=(55, 671))
    summary = run_study2(s)
    assert len(summary.rows) == len(s) * 9
    for row in summary.rows:
        assert row["cet_positive"] + row["cet_negative"] + row["cet_inconclusive"] == pytest.approx(1.0)
        assert row["bf_positive"] + row["bf_negative"] + row["bf_inconclusive"] == pytest.approx(1.0)
        assert 0 <= row["strong_disagreement_rate"] <= 1 - row["agreement_rate"] + 1e-12
    means = summary.mean_over_scenarios("agreement_rate")
    assert set(means) == {(d, t) for d in (0.05, 0.1, 0.25) for t in (3.0, 6.0, 10.0)}


def test_decision_comparison():
    assert compare_decisions("positive", "positive") == (True, False)
    assert compare_decisions("positive", "negative") == (False, True)
    assert compare_decisions("inconclusive", "negative") == (False, False)


def test_scenario_documents():
    doc = {"defaults": {"replicates": 5, "k": 2, "sigma2": 0.05}, "scenarios": [
        {"name": "x", "n": 100, "beta_true": [0, 0.1, 0.2]}]}
    (s,) = specs_from_document(doc, seed=9)
    assert s.replicates == 5 and s.seed == 9
    assert specs_from_document(doc, replicates=2, seed=1)[0].replicates == 2
    with pytest.raises(InputError):
        specs_from_document(doc)
    with pytest.raises(InputError):
        specs_from_document({"scenarios": [{"name": "x", "colour": 1}]}, seed=1)
    with pytest.raises(InputError):
        specs_from_document([], seed=1)
    with pytest.raises(InputError):
        run_study1([s, s])


def test_summaries_serialise():
    summary = run_study1([spec(replicates=3, delta_grid=(0.2,))])
    text = summary.to_csv().splitlines()
    assert text[0].startswith("scenario,design,n,k") and len(text) == 2
    payload = json.loads(summary.to_json())
    assert payload["study"] == 1 and payload["rows"][0]["replicates"] == 3
    assert summary.rate("t", 0.2) == payload["rows"][0]["rejection_rate"]


@pytest.mark.slow
def test_full_study2_grid_agreement():
    summary = run_study2(study2_scenarios(replicates=150, seed=20240501))
    means = summary.mean_over_scenarios("agreement_rate")
    assert abs(means[(0.1, 3.0)] - 0.85) <= 0.05
    assert max(r["strong_disagreement_rate"] for r in summary.rows) == 0.0


@pytest.mark.slow
def test_full_study1_grid(tmp_path):
    summary = run_study1(study1_scenarios(replicates=10_000, seed=20240501))
    (tmp_path / "study1.csv").write_text(summary.to_csv())
    for row in summary.rows:
        if math.isclose(row["b1_true"], row["delta"], abs_tol=1e-9):
            assert abs(row["rejection_rate"] - 0.05) <= 3 * math.sqrt(0.05 * 0.95 / 10_000)
