"""Significance, equivalence and non-inferiority tests on a fitted regression.

Tail conventions: every one-sided component below is an *upper* tail
probability of the stated statistic, except the two variance-explained
non-inferiority tests, whose p-values are lower-tail CDF values. This is the
convention under which the bundled salary example reproduces (e.g. the
standardized-coefficient test at margin 0.10 gives 0.780 for the simple
model).
"""

import enum
import math
import numbers
from dataclasses import dataclass, asdict
from typing import Optional

from .distributions import f_cdf, f_sf, t_cdf, t_sf
from .exceptions import (
    IndexOutOfRangeError,
    InfeasibleMarginError,
    InvalidMarginError,
)
from .linear_model import RegressionFit


class Scale(str, enum.Enum):
    RAW = "raw-coefficient"
    STANDARDIZED = "standardized"
    VARIANCE_EXPLAINED = "variance-explained"


class TestKind(str, enum.Enum):
    NHST_T = "nhst-t"
    NHST_F = "nhst-f"
    TOST_BETA = "tost-beta"
    EQUIV_STD_BETA = "equiv-std-beta"
    NONINF_DIFFP2 = "noninf-diffp2"
    NONINF_P2 = "noninf-p2"

    __test__ = False


class Decision(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Margin:
    """Equivalence interval ``[delta1, delta2]`` or one-sided bound ``delta``."""

    scale: Scale
    delta1: Optional[float] = None
    delta2: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "scale", Scale(self.scale))
        if self.delta is None:
            if self.delta1 is None or self.delta2 is None:
                raise InvalidMarginError("a margin needs delta1 and delta2, or a one-sided delta")
            if not (math.isfinite(self.delta1) and math.isfinite(self.delta2)):
                raise InvalidMarginError("margin bounds must be finite")
            if not self.delta1 < self.delta2:
                raise InvalidMarginError(f"need delta1 < delta2, got [{self.delta1}, {self.delta2}]")
        else:
            if self.delta1 is not None or self.delta2 is not None:
                raise InvalidMarginError("give either an interval or a one-sided delta, not both")
            if self.scale is Scale.VARIANCE_EXPLAINED and not 0.0 < self.delta < 1.0:
                raise InvalidMarginError(f"variance-explained margin must lie in (0, 1), got {self.delta}")

    @classmethod
    def symmetric(cls, delta, scale=Scale.STANDARDIZED):
        delta = abs(float(delta))
        return cls(scale=scale, delta1=-delta, delta2=delta)

    @classmethod
    def interval(cls, delta1, delta2, scale=Scale.STANDARDIZED):
        return cls(scale=scale, delta1=float(delta1), delta2=float(delta2))

    @classmethod
    def one_sided(cls, delta, scale=Scale.VARIANCE_EXPLAINED):
        return cls(scale=scale, delta=float(delta))

    @property
    def two_sided(self):
        return self.delta is None

    def to_dict(self):
        return {"scale": self.scale.value, "delta1": self.delta1, "delta2": self.delta2, "delta": self.delta}


@dataclass(frozen=True)
class TestResult:
    test_kind: TestKind
    p_value: float
    k: Optional[int] = None
    statistic: Optional[float] = None
    df: Optional[tuple] = None
    p_lower: Optional[float] = None
    p_upper: Optional[float] = None
    ncp_lower: Optional[float] = None
    ncp_upper: Optional[float] = None
    margin: Optional[Margin] = None

    __test__ = False

    def to_dict(self):
        d = asdict(self)
        d["test_kind"] = self.test_kind.value
        d["margin"] = self.margin.to_dict() if self.margin is not None else None
        d["df"] = list(self.df) if self.df is not None else None
        return d


@dataclass(frozen=True)
class CetOutcome:
    decision: Decision
    p1: float
    p2: Optional[float]
    alpha: float

    def to_dict(self):
        return {"decision": self.decision.value, "p1": self.p1, "p2": self.p2, "alpha": self.alpha}


def _coerce_margin(m, scale, one_sided=False):
    if isinstance(m, Margin):
        if m.scale is not scale:
            raise InvalidMarginError(f"expected a {scale.value} margin, got {m.scale.value}")
        if m.two_sided == one_sided:
            kind = "one-sided" if one_sided else "two-sided"
            raise InvalidMarginError(f"this test needs a {kind} margin")
        return m
    if one_sided:
        return Margin.one_sided(m, scale)
    return Margin.symmetric(m, scale)


def _check_k(fit, k, allow_intercept):
    lo = 0 if allow_intercept else 1
    if not isinstance(k, numbers.Integral) or isinstance(k, bool) or not lo <= k <= fit.k:
        raise IndexOutOfRangeError(f"coefficient index must be in {lo}..{fit.k}, got {k!r}")


def nhst_t(fit: RegressionFit, k: int) -> TestResult:
    """Two-sided t-test of beta_k = 0 (k = 0 is the intercept)."""
    _check_k(fit, k, allow_intercept=True)
    df = fit.df_resid
    stat = float(fit.beta_hat[k] / fit.se_beta_hat[k])
    p = min(1.0, 2.0 * t_sf(abs(stat), df))
    return TestResult(TestKind.NHST_T, p, k=k, statistic=stat, df=(df,))


def nhst_f(fit: RegressionFit, k: int) -> TestResult:
    """Partial F-test for dropping covariate k; same p-value as :func:`nhst_t`."""
    _check_k(fit, k, allow_intercept=False)
    df = fit.df_resid
    stat = float(df * fit.diff_r2[k - 1] / (1.0 - fit.r2_yx))
    return TestResult(TestKind.NHST_F, f_sf(stat, 1, df), k=k, statistic=stat, df=(1, df))


def tost_beta(fit: RegressionFit, k: int, m) -> TestResult:
    """Two one-sided t-tests for an unstandardized coefficient in [delta1, delta2]."""
    _check_k(fit, k, allow_intercept=True)
    m = _coerce_margin(m, Scale.RAW)
    df = fit.df_resid
    b, se = float(fit.beta_hat[k]), float(fit.se_beta_hat[k])
    p_lower = t_sf((b - m.delta1) / se, df)
    p_upper = t_sf((m.delta2 - b) / se, df)
    return TestResult(TestKind.TOST_BETA, max(p_lower, p_upper), k=k, statistic=b / se, df=(df,),
                      p_lower=p_lower, p_upper=p_upper, ncp_lower=0.0, ncp_upper=0.0, margin=m)


def max_feasible_std_margin(fit: RegressionFit, k: int) -> float:
    """Largest |delta| for which the standardized test's noncentrality exists."""
    _check_k(fit, k, allow_intercept=False)
    r2k = float(fit.r2_k_minus_k[k - 1])
    r2y = float(fit.r2_y_minus_k[k - 1])
    return math.sqrt((1.0 - r2y) / (1.0 - r2k))


def _std_ncp(fit, k, delta):
    r2k = float(fit.r2_k_minus_k[k - 1])
    r2y = float(fit.r2_y_minus_k[k - 1])
    denom = 1.0 - ((1.0 - r2k) * delta * delta + r2y)
    if denom <= 0.0:
        bound = max_feasible_std_margin(fit, k)
        raise InfeasibleMarginError(
            f"standardized margin {delta} is infeasible for covariate {k}: |delta| must be < {bound:.6g}",
            max_feasible=bound,
        )
    return delta * math.sqrt(fit.n * (1.0 - r2k)) / math.sqrt(denom)


def equiv_std_beta(fit: RegressionFit, k: int, m) -> TestResult:
    """Equivalence test for the standardized coefficient of covariate k (k >= 1).

    Inverts the noncentral-t confidence interval of the standardized slope:
    each bound contributes an upper-tail noncentral t probability.
    """
    _check_k(fit, k, allow_intercept=False)
    m = _coerce_margin(m, Scale.STANDARDIZED)
    df = fit.df_resid
    stat = float(fit.b_std_hat[k - 1] / fit.se_b_std_hat[k - 1])
    ncp1 = _std_ncp(fit, k, m.delta1)
    ncp2 = -_std_ncp(fit, k, m.delta2)
    p_lower = t_sf(stat, df, ncp1)
    p_upper = t_sf(-stat, df, ncp2)
    return TestResult(TestKind.EQUIV_STD_BETA, max(p_lower, p_upper), k=k, statistic=stat, df=(df,),
                      p_lower=p_lower, p_upper=p_upper, ncp_lower=ncp1, ncp_upper=ncp2, margin=m)


def noninf_diffP2(fit: RegressionFit, k: int, m) -> TestResult:
    """Non-inferiority test that covariate k adds less than ``delta`` to P^2."""
    _check_k(fit, k, allow_intercept=False)
    m = _coerce_margin(m, Scale.VARIANCE_EXPLAINED, one_sided=True)
    df = fit.df_resid
    delta = m.delta
    stat = math.sqrt(df * float(fit.diff_r2[k - 1])) / math.sqrt(1.0 - fit.r2_yx)
    ncp = math.sqrt(fit.n * delta) / math.sqrt(1.0 - delta + float(fit.r2_k_minus_k[k - 1]))
    p = t_cdf(stat, df, ncp)
    return TestResult(TestKind.NONINF_DIFFP2, p, k=k, statistic=stat, df=(df,),
                      p_upper=p, ncp_upper=ncp, margin=m)


def noninf_P2(fit: RegressionFit, m) -> TestResult:
    """Non-inferiority test that the whole model explains less than ``delta``."""
    m = _coerce_margin(m, Scale.VARIANCE_EXPLAINED, one_sided=True)
    df = fit.df_resid
    delta = m.delta
    stat = (fit.r2_yx / fit.k) / ((1.0 - fit.r2_yx) / df)
    ncp = fit.n * delta / (1.0 - delta)
    p = f_cdf(stat, fit.k, df, ncp)
    return TestResult(TestKind.NONINF_P2, p, statistic=stat, df=(fit.k, df),
                      p_upper=p, ncp_upper=ncp, margin=m)


def cet_decision(p1, p2, alpha):
    """Trichotomy: significant, significantly equivalent, or neither."""
    if p1 < alpha:
        return Decision.POSITIVE
    if p2 is None:
        raise ValueError("p2 is required when p1 >= alpha")
    if p2 < alpha:
        return Decision.NEGATIVE
    return Decision.INCONCLUSIVE


def cet(fit: RegressionFit, k: int, m, alpha=0.05) -> CetOutcome:
    """Conditional equivalence testing: NHST first, equivalence test only on failure."""
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must be in (0, 0.5), got {alpha}")
    m = _coerce_margin(m, Scale.STANDARDIZED)
    _check_k(fit, k, allow_intercept=False)
    p1 = nhst_t(fit, k).p_value
    if p1 < alpha:
        return CetOutcome(Decision.POSITIVE, p1, None, alpha)
    p2 = equiv_std_beta(fit, k, m).p_value
    return CetOutcome(cet_decision(p1, p2, alpha), p1, p2, alpha)
