"""Least-squares fitting and the R^2 family the equivalence tests consume."""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import (
    DegenerateFitError,
    InputError,
    NonFiniteInputError,
    RankDeficientError,
    TooFewObservationsError,
)

RANK_RTOL = 1e-10
# residual SS below this fraction of the total SS counts as an exact fit
DEGENERATE_RSS = 1e-20


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """Outcome ``y`` (length N) and covariates ``X`` (N x K, no intercept column)."""

    y: np.ndarray
    X: np.ndarray
    column_names: Optional[Sequence[str]] = None

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if y.ndim != 1:
            raise InputError(f"y must be one-dimensional, got shape {y.shape}")
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise InputError(f"X must be ({y.shape[0]}, K), got shape {X.shape}")
        if X.shape[1] < 1:
            raise InputError("at least one covariate is required")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))):
            raise NonFiniteInputError("data contain NaN or infinite values")
        n, k = X.shape
        if n < k + 2:
            raise TooFewObservationsError(f"need N >= K + 2 observations, got N={n}, K={k}")
        names = self.column_names
        if names is None:
            names = tuple(f"x{j + 1}" for j in range(k))
        else:
            names = tuple(str(c) for c in names)
            if len(names) != k:
                raise InputError(f"{len(names)} column names for {k} covariates")
        object.__setattr__(self, "y", _readonly(y))
        object.__setattr__(self, "X", _readonly(X))
        object.__setattr__(self, "column_names", names)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def k(self):
        return self.X.shape[1]

    def design(self):
        """The N x (K+1) design matrix with a leading column of ones."""
        return np.column_stack([np.ones(self.n), self.X])

    def drop(self, k):
        """Dataset without covariate ``k`` (1-based, as in the coefficient vector)."""
        keep = [j for j in range(self.k) if j != k - 1]
        return Dataset(self.y, self.X[:, keep], [self.column_names[j] for j in keep])


@dataclass(frozen=True)
class RegressionFit:
    beta_hat: np.ndarray
    se_beta_hat: np.ndarray
    sigma_hat: float
    r2_yx: float
    r2_y_minus_k: np.ndarray
    r2_k_minus_k: np.ndarray
    b_std_hat: np.ndarray
    se_b_std_hat: np.ndarray
    diff_r2: np.ndarray
    n: int
    k: int
    column_names: Sequence[str] = field(default=())

    @property
    def df_resid(self):
        return self.n - self.k - 1

    def index_of(self, name):
        """1-based coefficient index of a named covariate."""
        try:
            return list(self.column_names).index(name) + 1
        except ValueError:
            raise InputError(f"unknown covariate {name!r}; have {list(self.column_names)}") from None

    def to_dict(self):
        return {
            "n": self.n,
            "k": self.k,
            "column_names": list(self.column_names),
            "beta_hat": self.beta_hat.tolist(),
            "se_beta_hat": self.se_beta_hat.tolist(),
            "sigma_hat": self.sigma_hat,
            "r2_yx": self.r2_yx,
            "r2_y_minus_k": self.r2_y_minus_k.tolist(),
            "r2_k_minus_k": self.r2_k_minus_k.tolist(),
            "b_std_hat": self.b_std_hat.tolist(),
            "se_b_std_hat": self.se_b_std_hat.tolist(),
            "diff_r2": self.diff_r2.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        arrays = ("beta_hat", "se_beta_hat", "r2_y_minus_k", "r2_k_minus_k",
                  "b_std_hat", "se_b_std_hat", "diff_r2")
        kwargs = {name: _readonly(d[name]) for name in arrays}
        return cls(sigma_hat=float(d["sigma_hat"]), r2_yx=float(d["r2_yx"]),
                   n=int(d["n"]), k=int(d["k"]),
                   column_names=tuple(d.get("column_names", ())), **kwargs)


def _qr(A):
    """QR of the column-equilibrated design, with a relative rank check.

    Returns ``(q, r, norms)`` where ``q @ r == A / norms``.
    """
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0.0):
        raise RankDeficientError("design matrix has an all-zero column")
    q, r = np.linalg.qr(A / norms)
    if np.abs(np.diag(r)).min() <= RANK_RTOL:
        raise RankDeficientError("design matrix (with intercept) is rank deficient")
    return q, r, norms


def _r2_with_intercept(target, Z):
    """R^2 of ``target`` regressed on an intercept plus the columns of ``Z``."""
    centered = target - target.mean()
    tss = float(centered @ centered)
    if Z.shape[1] == 0:
        return 0.0
    q, _, _ = _qr(np.column_stack([np.ones(len(target)), Z]))
    # projection of the centered target onto the column space
    fitted = q @ (q.T @ centered)
    rss = float((centered - fitted) @ (centered - fitted))
    return min(max(1.0 - rss / tss, 0.0), 1.0)


def fit_ols(data: Dataset) -> RegressionFit:
    """Fit the intercept-augmented OLS model and every auxiliary R^2."""
    y, X = data.y, data.X
    n, k = X.shape
    A = data.design()
    q, r, norms = _qr(A)
    beta = np.linalg.solve(r, q.T @ y) / norms
    resid = y - A @ beta
    rss = float(resid @ resid)
    centered = y - y.mean()
    tss = float(centered @ centered)
    if tss == 0.0:
        raise DegenerateFitError("outcome is constant")
    if rss <= DEGENERATE_RSS * tss:
        raise DegenerateFitError("residual sum of squares is zero (R^2 = 1); tests are undefined")
    df = n - k - 1
    sigma = float(np.sqrt(rss / df))
    r_inv = np.linalg.solve(r, np.eye(k + 1))
    # (X'X)^-1 = D^-1 R^-1 R^-T D^-1 for the equilibrated factor
    se = sigma * np.sqrt(np.sum(r_inv * r_inv, axis=1)) / norms
    r2 = 1.0 - rss / tss

    r2_y_minus = np.empty(k)
    r2_k_minus = np.empty(k)
    for j in range(k):
        others = np.delete(X, j, axis=1)
        r2_y_minus[j] = _r2_with_intercept(y, others)
        r2_k_minus[j] = _r2_with_intercept(X[:, j], others)
    diff_r2 = np.maximum(r2 - r2_y_minus, 0.0)

    b_std = beta[1:] * X.std(axis=0, ddof=1) / y.std(ddof=1)
    se_b_std = np.sqrt((1.0 - r2) / ((1.0 - r2_k_minus) * df))
    return RegressionFit(
        beta_hat=_readonly(beta),
        se_beta_hat=_readonly(se),
        sigma_hat=sigma,
        r2_yx=float(r2),
        r2_y_minus_k=_readonly(r2_y_minus),
        r2_k_minus_k=_readonly(r2_k_minus),
        b_std_hat=_readonly(b_std),
        se_b_std_hat=_readonly(se_b_std),
        diff_r2=_readonly(diff_r2),
        n=n,
        k=k,
        column_names=tuple(data.column_names),
    )


def standardized_coefficients(fit: RegressionFit, data: Dataset):
    """Standardized slopes and their standard errors.

    Slopes are scaled by ``sd(X_k) / sd(y)`` with N - 1 denominators.
    The standard error is ``sqrt((1 - R2_yx) / ((1 - R2_k.-k) (N - K - 1)))``.
    """
    s_x = data.X.std(axis=0, ddof=1)
    s_y = data.y.std(ddof=1)
    b = fit.beta_hat[1:] * s_x / s_y
    se = np.sqrt((1.0 - fit.r2_yx) / ((1.0 - fit.r2_k_minus_k) * fit.df_resid))
    return b, se
