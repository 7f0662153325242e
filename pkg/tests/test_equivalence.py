import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from equitest import (
    Dataset,
    Decision,
    Margin,
    RegressionFit,
    Scale,
    cet,
    cet_decision,
    equiv_std_beta,
    fit_ols,
    max_feasible_std_margin,
    nhst_f,
    nhst_t,
    noninf_diffP2,
    noninf_P2,
    tost_beta,
)
from equitest.exceptions import IndexOutOfRangeError, InfeasibleMarginError, InvalidMarginError

from test_linear_model import datasets, random_dataset


def test_simple_model_p_values(fit_simple):
    assert abs(nhst_t(fit_simple, 1).p_value - 0.006) <= 5e-4
    assert abs(tost_beta(fit_simple, 1, 5000).p_value - 0.963) <= 5e-4
    for p in (noninf_P2(fit_simple, 0.01).p_value,
              noninf_diffP2(fit_simple, 1, 0.01).p_value,
              equiv_std_beta(fit_simple, 1, 0.10).p_value):
        assert abs(p - 0.780) <= 5e-4


def test_full_model_p_values(fit_full):
    k = fit_full.index_of("sex")
    assert abs(nhst_t(fit_full, k).p_value - 0.216) <= 5e-4
    assert abs(tost_beta(fit_full, k, 5000).p_value - 0.478) <= 5e-4
    assert abs(noninf_diffP2(fit_full, k, 0.01).p_value - 0.232) <= 5e-4
    assert abs(equiv_std_beta(fit_full, k, 0.10).p_value - 0.076) <= 5e-4


def test_standardized_components_on_simple_model(fit_simple):
    res = equiv_std_beta(fit_simple, 1, 0.10)
    assert round(res.statistic, 2) == 2.78
    assert round(res.ncp_lower, 2) == -2.00 and round(res.ncp_upper, 2) == -2.00
    assert res.p_lower < 0.001
    assert res.p_value == res.p_upper


def test_tost_against_central_t(fit_full):
    df = fit_full.df_resid
    b, se = fit_full.beta_hat[1], fit_full.se_beta_hat[1]
    res = tost_beta(fit_full, 1, Margin.interval(-3000, 8000, Scale.RAW))
    assert abs(res.p_lower - stats.t.sf((b + 3000) / se, df)) <= 1e-12
    assert abs(res.p_upper - stats.t.sf((8000 - b) / se, df)) <= 1e-12
    assert res.p_value == max(res.p_lower, res.p_upper)


def test_standardized_test_against_scipy_noncentral_t(fit_full):
    k = 4
    d1, d2 = -0.15, 0.3
    res = equiv_std_beta(fit_full, k, Margin.interval(d1, d2))
    n, df = fit_full.n, fit_full.df_resid
    r2k, r2y = fit_full.r2_k_minus_k[k - 1], fit_full.r2_y_minus_k[k - 1]
    stat = fit_full.b_std_hat[k - 1] / fit_full.se_b_std_hat[k - 1]

    def ncp(d):
        return d * math.sqrt(n * (1 - r2k)) / math.sqrt(1 - ((1 - r2k) * d * d + r2y))

    assert abs(res.p_lower - stats.nct.sf(stat, df, ncp(d1))) <= 1e-10
    # the upper bound uses its own margin in the noncentrality
    assert abs(res.p_upper - stats.nct.sf(-stat, df, -ncp(d2))) <= 1e-10


def test_increment_test_with_zero_increment():
    fit = fit_ols(random_dataset(5, 397, 1)).to_dict()
    fit.update(diff_r2=[0.0], r2_yx=0.0, r2_k_minus_k=[0.0])
    fit = RegressionFit.from_dict(fit)
    p = noninf_diffP2(fit, 1, 0.01).p_value
    ncp = math.sqrt(397 * 0.01) / math.sqrt(0.99)
    assert abs(p - stats.norm.cdf(-ncp)) <= 5e-4
    assert abs(p - 0.0226) <= 1e-4


@settings(max_examples=80, deadline=None)
@given(datasets)
def test_t_and_f_tests_agree(data):
    fit = fit_ols(data)
    for k in range(1, fit.k + 1):
        assert abs(nhst_t(fit, k).p_value - nhst_f(fit, k).p_value) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(datasets, st.floats(0.01, 0.3), st.floats(0.0, 0.3))
def test_p_values_shrink_as_margins_widen(data, d, extra):
    fit = fit_ols(data)
    wide = d + extra
    for k in range(1, fit.k + 1):
        bound = max_feasible_std_margin(fit, k)
        if wide < bound:
            assert equiv_std_beta(fit, k, wide).p_value <= equiv_std_beta(fit, k, d).p_value + 1e-12
        assert noninf_diffP2(fit, k, min(wide, 0.99)).p_value <= noninf_diffP2(fit, k, d).p_value + 1e-12
        se = fit.se_beta_hat[k]
        assert tost_beta(fit, k, wide * 10 * se).p_value <= tost_beta(fit, k, d * 10 * se).p_value + 1e-12
    assert noninf_P2(fit, min(wide, 0.99)).p_value <= noninf_P2(fit, d).p_value + 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(10, 400), st.floats(0.001, 0.2))
def test_single_covariate_tests(seed, n, delta):
    fit = fit_ols(random_dataset(seed, n, 1))
    std = equiv_std_beta(fit, 1, math.sqrt(delta))
    inc = noninf_diffP2(fit, 1, delta)
    model = noninf_P2(fit, delta)
    # the standardized and increment tests coincide; the whole-model F test
    # differs from them by exactly the smaller one-sided tail
    assert abs(std.p_value - inc.p_value) <= 1e-10
    small = min(std.p_lower, std.p_upper)
    assert abs(model.p_value - (inc.p_value - small)) <= 1e-10


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(1e-4, 0.4999))
def test_cet_trichotomy_is_total(p1, p2, alpha):
    d = cet_decision(p1, p2, alpha)
    expected = (Decision.POSITIVE if p1 < alpha else Decision.NEGATIVE if p2 < alpha else Decision.INCONCLUSIVE)
    assert d is expected
    assert sum(d is x for x in Decision) == 1


def test_cet_on_salaries(fit_simple, fit_full):
    assert cet(fit_simple, 1, 0.10).decision is Decision.POSITIVE
    assert cet(fit_simple, 1, 0.10).p2 is None
    out = cet(fit_full, 1, 0.10)
    assert out.decision is Decision.INCONCLUSIVE
    assert abs(out.p1 - 0.216) <= 5e-4 and abs(out.p2 - 0.076) <= 5e-4


def test_cet_negative_case():
    from equitest.simulation import ScenarioSpec, generate_dataset

    spec = ScenarioSpec("neg", 5000, 4, (0.2, 0.0, 0.14, -0.1, -0.1), 1.0, seed=11)
    fit = fit_ols(generate_dataset(spec, 0))
    out = cet(fit, 1, 0.10)
    assert out.decision is Decision.NEGATIVE
    assert out.p2 == equiv_std_beta(fit, 1, 0.10).p_value < 0.05 <= out.p1


def test_infeasible_margin_reports_bound(fit_full):
    bound = max_feasible_std_margin(fit_full, 1)
    with pytest.raises(InfeasibleMarginError) as info:
        equiv_std_beta(fit_full, 1, bound + 0.01)
    assert info.value.max_feasible == pytest.approx(bound)
    equiv_std_beta(fit_full, 1, bound - 0.01)


def test_margin_validation(fit_full):
    with pytest.raises(InvalidMarginError):
        Margin.interval(0.2, 0.1)
    with pytest.raises(InvalidMarginError):
        Margin.one_sided(1.5)
    with pytest.raises(InvalidMarginError):
        Margin(Scale.STANDARDIZED)
    with pytest.raises(InvalidMarginError):
        equiv_std_beta(fit_full, 1, Margin.symmetric(5000, Scale.RAW))
    with pytest.raises(InvalidMarginError):
        noninf_diffP2(fit_full, 1, Margin.symmetric(0.1, Scale.VARIANCE_EXPLAINED))
    with pytest.raises(ValueError):
        cet(fit_full, 1, 0.1, alpha=0.7)


def test_index_validation(fit_full):
    with pytest.raises(IndexOutOfRangeError):
        nhst_t(fit_full, 7)
    with pytest.raises(IndexOutOfRangeError):
        equiv_std_beta(fit_full, 0, 0.1)
    with pytest.raises(IndexOutOfRangeError):
        nhst_f(fit_full, 1.0)
    assert nhst_t(fit_full, 0).p_value == pytest.approx(2 * stats.t.sf(14.373712898524422, 390), rel=1e-9)


def test_results_serialise(fit_full):
    d = equiv_std_beta(fit_full, 1, 0.1).to_dict()
    assert d["test_kind"] == "equiv-std-beta"
    assert d["margin"] == {"scale": "standardized", "delta1": -0.1, "delta2": 0.1, "delta": None}
    assert cet(fit_full, 1, 0.1).to_dict()["decision"] == "inconclusive"
