"""Default (JZS) Bayes factor for including one covariate in a linear model.

For a model with ``p`` covariates and coefficient of determination ``R2``,
the Bayes factor against the intercept-only model under the Zellner-Siow
mixture of g-priors is

    BF = int_0^inf (1 + g)^((N-p-1)/2) (1 + g (1 - R2))^(-(N-1)/2) pi(g) dg,

with ``pi`` the inverse-gamma(1/2, rscale^2 N / 2) density. The inclusion
Bayes factor for covariate k is the ratio of that quantity for the full
model over the model without k. The integral is taken over ``u = log g``
and evaluated in log space, scaled by its maximum, so large N cannot
overflow.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import integrate
from .exceptions import IndexOutOfRangeError, InvalidThresholdError, QuadratureFailure
from .linear_model import Dataset, RegressionFit, fit_ols

RSCALE_MEDIUM = math.sqrt(2.0) / 4.0
RSCALES = {"medium": RSCALE_MEDIUM, "wide": 0.5, "ultrawide": math.sqrt(2.0) / 2.0}

_QUAD_TOL = 1e-10


class BfDecision(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    INCONCLUSIVE = "inconclusive"


def _exp(x):
    # Bayes factors can exceed the float range; the log is always kept
    return math.inf if x > 709.0 else math.exp(x)


@dataclass(frozen=True)
class BfResult:
    """``quadrature_error`` is the estimated relative error of ``bf10``."""

    bf10: float
    log_bf10: float
    rscale: float
    quadrature_error: float

    @property
    def bf01(self):
        return _exp(-self.log_bf10)

    def to_dict(self):
        return {"bf10": self.bf10, "log_bf10": self.log_bf10, "bf01": self.bf01,
                "rscale": self.rscale, "quadrature_error": self.quadrature_error}


def resolve_rscale(rscale):
    if isinstance(rscale, str):
        try:
            return RSCALES[rscale]
        except KeyError:
            raise ValueError(f"unknown rscale {rscale!r}; use a number or one of {sorted(RSCALES)}") from None
    rscale = float(rscale)
    if not rscale > 0:
        raise ValueError(f"rscale must be positive, got {rscale}")
    return rscale


def log_integrand(u, n, p, r2, rscale):
    """Log of the g-integrand after the substitution g = exp(u) (Jacobian included)."""
    u = np.asarray(u, dtype=float)
    g = np.exp(u)
    scale = rscale * rscale * n / 2.0
    lik = 0.5 * ((n - p - 1) * np.log1p(g) - (n - 1) * np.log1p(g * (1.0 - r2)))
    # inverse-gamma(1/2, scale) log density at g, times dg/du = g
    prior = 0.5 * math.log(scale) - math.lgamma(0.5) - 1.5 * u - scale * np.exp(-u)
    return lik + prior + u


def log_bf_vs_null(n, p, r2, rscale=RSCALE_MEDIUM):
    """log BF of a p-covariate model with the given R^2 against intercept-only.

    Returns ``(log_bf, relative_error)``.
    """
    if p == 0:
        return 0.0, 0.0
    if not 0.0 <= r2 < 1.0:
        raise ValueError(f"R^2 must lie in [0, 1), got {r2}")
    if n - p - 1 <= 0:
        raise ValueError("need N - p - 1 > 0")
    grid = np.linspace(-60.0, 60.0, 4001)
    vals = log_integrand(grid, n, p, r2, rscale)
    imax = int(np.argmax(vals))
    peak = float(vals[imax])
    inside = grid[vals > peak - 50.0]
    points = sorted({float(inside.min()), float(grid[imax]), float(inside.max())})

    def scaled(u):
        return np.exp(log_integrand(u, n, p, r2, rscale) - peak)

    try:
        value, err = integrate(scaled, -math.inf, math.inf, tol=_QUAD_TOL, points=points)
    except QuadratureFailure as exc:
        raise QuadratureFailure(f"Bayes factor integral failed (N={n}, p={p}, R2={r2}): {exc}") from exc
    if not value > 0.0:
        raise QuadratureFailure(f"Bayes factor integral is not positive ({value})")
    return peak + math.log(value), err / value


def jzs_bf_compare(n, p1, r2_1, p0, r2_0, rscale=RSCALE_MEDIUM) -> BfResult:
    """Bayes factor of model 1 over model 0, both compared through the null model."""
    rscale = resolve_rscale(rscale)
    l1, e1 = log_bf_vs_null(n, p1, r2_1, rscale)
    l0, e0 = log_bf_vs_null(n, p0, r2_0, rscale)
    log_bf = l1 - l0
    return BfResult(_exp(log_bf), log_bf, rscale, e1 + e0)


def jzs_bf_inclusion(data, k, rscale=RSCALE_MEDIUM) -> BfResult:
    """Bayes factor for including covariate k (1-based) given the others.

    ``data`` is a :class:`Dataset` or an already computed :class:`RegressionFit`.
    """
    fit = data if isinstance(data, RegressionFit) else fit_ols(data)
    if not isinstance(data, (Dataset, RegressionFit)):
        raise TypeError("data must be a Dataset or RegressionFit")
    if not 1 <= k <= fit.k:
        raise IndexOutOfRangeError(f"covariate index must be in 1..{fit.k}, got {k}")
    return jzs_bf_compare(fit.n, fit.k, fit.r2_yx, fit.k - 1, float(fit.r2_y_minus_k[k - 1]), rscale)


def bf_decision(bf10, threshold) -> BfDecision:
    if not threshold > 1:
        raise InvalidThresholdError(f"evidence threshold must exceed 1, got {threshold}")
    if not bf10 > 0:
        raise ValueError(f"Bayes factor must be positive, got {bf10}")
    if bf10 >= threshold:
        return BfDecision.POSITIVE
    if bf10 <= 1.0 / threshold:
        return BfDecision.NEGATIVE
    return BfDecision.INCONCLUSIVE
