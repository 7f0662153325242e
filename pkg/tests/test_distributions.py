import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equitest.distributions import (
    FParams,
    TParams,
    betainc,
    betainc_pair,
    f_cdf,
    f_sf,
    integrate,
    log_beta,
    t_cdf,
    t_sf,
)
from equitest.exceptions import QuadratureFailure

ORACLE = json.loads((Path(__file__).parent / "data" / "distribution_oracle.json").read_text())


@pytest.mark.parametrize("df", [3, 30, 395])
@pytest.mark.parametrize("ncp", [-3.0, -1.0, 0.0, 1.0, 3.0])
def test_t_cdf_matches_density_integration(df, ncp):
    rows = [r for r in ORACLE["t"] if r["df"] == df and r["ncp"] == ncp]
    assert len(rows) == 25
    for r in rows:
        assert abs(t_cdf(r["x"], df, ncp) - r["cdf"]) <= 1e-9, r


@pytest.mark.parametrize("df1", [1, 2, 6])
def test_f_cdf_matches_density_integration(df1):
    rows = [r for r in ORACLE["f"] if r["df1"] == df1]
    for r in rows:
        assert abs(f_cdf(r["x"], r["df1"], r["df2"], r["ncp"]) - r["cdf"]) <= 1e-9, r


@settings(max_examples=200, deadline=None)
@given(t=st.floats(0.0, 8.0), df=st.integers(2, 2000), ncp=st.floats(-4.0, 4.0))
def test_squared_t_is_f_with_one_numerator_df(t, df, ncp):
    # P(T^2 <= t^2) for T ~ t(df, ncp) is the noncentral F(1, df, ncp^2) CDF
    lhs = t_cdf(t, df, ncp) - t_cdf(-t, df, ncp)
    assert abs(lhs - f_cdf(t * t, 1, df, ncp * ncp)) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-10, 10), df=st.floats(1.0, 1e4), ncp=st.floats(-10, 10))
def test_t_cdf_and_sf_are_complementary(x, df, ncp):
    assert abs(t_cdf(x, df, ncp) + t_sf(x, df, ncp) - 1.0) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-10, 10), df=st.floats(1.0, 1e4), ncp=st.floats(-10, 10))
def test_t_reflection(x, df, ncp):
    assert abs(t_cdf(x, df, ncp) - t_sf(-x, df, -ncp)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(x1=st.floats(-8, 8), dx=st.floats(0, 4), df=st.floats(1.0, 500), ncp=st.floats(-5, 5))
def test_t_cdf_monotone_in_x_and_ncp(x1, dx, df, ncp):
    # tolerance is the absolute accuracy of the series
    assert t_cdf(x1 + dx, df, ncp) >= t_cdf(x1, df, ncp) - 1e-12
    assert t_cdf(x1, df, ncp + dx) <= t_cdf(x1, df, ncp) + 1e-12


@settings(max_examples=100, deadline=None)
@given(x=st.floats(0, 50), d1=st.integers(1, 10), d2=st.integers(1, 500), ncp=st.floats(0, 40))
def test_f_cdf_and_sf_are_complementary(x, d1, d2, ncp):
    assert abs(f_cdf(x, d1, d2, ncp) + f_sf(x, d1, d2, ncp) - 1.0) <= 1e-12


def test_large_noncentrality_uses_stable_path():
    from scipy import stats

    for x, df, ncp in [(40.0, 395, 45.0), (-38.0, 30, -40.0), (60.0, 1e4, 58.0)]:
        assert abs(t_cdf(x, df, ncp) - stats.nct.cdf(x, df, ncp)) <= 1e-9


def test_infinite_arguments():
    assert t_cdf(math.inf, 5, 1.0) == 1.0
    assert t_cdf(-math.inf, 5, 1.0) == 0.0
    assert f_cdf(0.0, 2, 5, 3.0) == 0.0
    assert f_sf(math.inf, 2, 5) == 0.0


def test_invalid_parameters():
    with pytest.raises(ValueError):
        t_cdf(0.0, 0.0)
    with pytest.raises(ValueError):
        f_cdf(1.0, 1, 5, -1.0)
    with pytest.raises(ValueError):
        TParams(-1.0)
    with pytest.raises(ValueError):
        FParams(1, 0)


def test_parameter_objects_delegate():
    assert TParams(10, 1.0).cdf(0.5) == t_cdf(0.5, 10, 1.0)
    assert FParams(2, 10, 3.0).sf(1.5) == f_sf(1.5, 2, 10, 3.0)


def test_incomplete_beta_against_special_values():
    from scipy import special

    for a, b, x in [(0.5, 0.5, 0.2), (2.0, 3.0, 0.7), (200.0, 0.5, 0.99), (0.5, 197.5, 0.01)]:
        lo, hi = betainc_pair(a, b, x)
        assert abs(lo - special.betainc(a, b, x)) <= 1e-13
        assert abs(lo + hi - 1.0) <= 1e-14
        assert betainc(a, b, x) == lo
    assert abs(log_beta(3.0, 4.0) - math.log(1.0 / 60.0)) <= 1e-14
    assert abs(log_beta(1e4, 2.5) - special.betaln(1e4, 2.5)) <= 1e-10


@pytest.mark.parametrize("degree", range(0, 32, 3))
def test_kronrod_rule_is_exact_for_polynomials(degree):
    value, _ = integrate(lambda x: x ** degree, 0.0, 1.0)
    assert abs(value - 1.0 / (degree + 1)) <= 1e-14


def test_integrate_infinite_ranges():
    value, err = integrate(lambda x: np.exp(-x), 0.0, math.inf)
    assert abs(value - 1.0) <= 1e-12
    value, _ = integrate(lambda x: np.exp(-x * x / 2), -math.inf, math.inf, points=[0.0])
    assert abs(value - math.sqrt(2 * math.pi)) <= 1e-11
    value, _ = integrate(lambda x: x, 2.0, 1.0)
    assert abs(value + 1.5) <= 1e-15


def test_integrate_reports_failure():
    with pytest.raises(QuadratureFailure):
        integrate(lambda x: 1.0 / np.abs(x - 0.3), 0.0, 1.0, max_intervals=20)


@pytest.mark.parametrize("x", [5e-324, 1e-310, 1e-300])
@pytest.mark.parametrize("d1,d2,ncp", [(1, 1, 2.0), (1, 2, 1.0), (3, 1, 50.0), (1, 400, 30.0)])
def test_f_tiny_arguments(x, d1, d2, ncp):
    cdf, sf = f_cdf(x, d1, d2, ncp), f_sf(x, d1, d2, ncp)
    assert 0.0 <= cdf < 1e-100
    assert abs(cdf + sf - 1.0) <= 1e-12
