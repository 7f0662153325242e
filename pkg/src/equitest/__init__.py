"""Equivalence and non-inferiority tests for standardized effects in linear regression."""

from .bayes import BfDecision, BfResult, bf_decision, jzs_bf_compare, jzs_bf_inclusion
from .distributions import f_cdf, f_sf, integrate, t_cdf, t_sf
from .equivalence import (
    CetOutcome,
    Decision,
    Margin,
    Scale,
    TestKind,
    TestResult,
    cet,
    cet_decision,
    equiv_std_beta,
    max_feasible_std_margin,
    nhst_f,
    nhst_t,
    noninf_diffP2,
    noninf_P2,
    tost_beta,
)
from .estimator import EquivalenceOLS
from .exceptions import *  # noqa: F401,F403
from .linear_model import Dataset, RegressionFit, fit_ols, standardized_coefficients
from .simulation import (
    CorrelatedBinaryDesign,
    ScenarioSpec,
    SimSummary,
    generate_dataset,
    run_study1,
    run_study2,
    sample_correlated_binary,
)

__version__ = "0.1.0"


def load_salaries(covariates=None):
    from .cli import SALARIES_COVARIATES, load_salaries as _load

    return _load(SALARIES_COVARIATES if covariates is None else covariates)
