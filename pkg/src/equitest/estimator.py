"""scikit-learn compatible front end for the OLS fit and its tests."""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y, validate_data

from . import bayes, equivalence
from .linear_model import Dataset, fit_ols


class EquivalenceOLS(RegressorMixin, BaseEstimator):
    """Ordinary least squares with equivalence and Bayes factor tests attached.

    Parameters
    ----------
    alpha : float
        Level used by :meth:`cet`.
    rscale : float or str
        Prior scale for :meth:`bayes_factor` ("medium", "wide", "ultrawide" or a number).

    After ``fit`` the estimator exposes ``coef_``, ``intercept_``,
    ``standardized_coef_``, ``standardized_se_`` and the full
    :class:`~equitest.linear_model.RegressionFit` as ``result_``.
    Covariates may be referred to by 1-based index or by column name.
    """

    def __init__(self, alpha=0.05, rscale="medium"):
        self.alpha = alpha
        self.rscale = rscale

    def fit(self, X, y):
        X, y = validate_data(self, X, y, y_numeric=True, ensure_min_samples=3)
        names = getattr(self, "feature_names_in_", None)
        self.data_ = Dataset(y, X, None if names is None else list(names))
        self.result_ = fit_ols(self.data_)
        self.intercept_ = float(self.result_.beta_hat[0])
        self.coef_ = np.asarray(self.result_.beta_hat[1:])
        self.standardized_coef_ = np.asarray(self.result_.b_std_hat)
        self.standardized_se_ = np.asarray(self.result_.se_b_std_hat)
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        X = validate_data(self, X, reset=False)
        return self.intercept_ + X @ self.coef_

    def _index(self, k):
        check_is_fitted(self, "result_")
        if isinstance(k, str):
            return self.result_.index_of(k)
        return k

    def nhst(self, k):
        k = self._index(k)
        return equivalence.nhst_t(self.result_, k)

    def tost(self, k, margin):
        k = self._index(k)
        return equivalence.tost_beta(self.result_, k, margin)

    def equivalence_test(self, k, margin):
        k = self._index(k)
        return equivalence.equiv_std_beta(self.result_, k, margin)

    def noninferiority_increment(self, k, margin):
        k = self._index(k)
        return equivalence.noninf_diffP2(self.result_, k, margin)

    def noninferiority_model(self, margin):
        check_is_fitted(self, "result_")
        return equivalence.noninf_P2(self.result_, margin)

    def cet(self, k, margin):
        k = self._index(k)
        return equivalence.cet(self.result_, k, margin, self.alpha)

    def bayes_factor(self, k):
        k = self._index(k)
        return bayes.jzs_bf_inclusion(self.result_, k, self.rscale)


def as_dataset(X, y, column_names=None):
    """Validate array-likes with scikit-learn's checks and wrap them in a Dataset."""
    X, y = check_X_y(X, y, y_numeric=True, ensure_min_samples=3)
    return Dataset(y, X, column_names)
