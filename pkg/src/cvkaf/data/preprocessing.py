"""Per-coordinate affine scaling of real and imaginary parts to ``[-1, 1]``."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..validation import check_complex_array, check_n_features

__all__ = ["ComplexMinMaxScaler", "preprocess_minmax"]


class ComplexMinMaxScaler(TransformerMixin, BaseEstimator):
    """Map each feature's real and imaginary parts separately onto ``[-1, 1]``.

    Statistics come from ``fit``; values outside the fitted range extrapolate
    linearly (no clipping). A constant part maps to 0.
    """

    def fit(self, X, y=None):
        X = check_complex_array(X)
        check_n_features(self, X, reset=True)
        self.re_min_, self.re_max_ = X.real.min(axis=0), X.real.max(axis=0)
        self.im_min_, self.im_max_ = X.imag.min(axis=0), X.imag.max(axis=0)
        return self

    @staticmethod
    def _scale(v, lo, hi):
        span = hi - lo
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, 2.0 * (v - lo) / safe - 1.0, 0.0)

    def transform(self, X):
        check_is_fitted(self, "re_min_")
        X = check_complex_array(X)
        check_n_features(self, X, reset=False)
        re = self._scale(X.real, self.re_min_, self.re_max_)
        im = self._scale(X.imag, self.im_min_, self.im_max_)
        return re + 1j * im

    def transform_record(self) -> dict:
        check_is_fitted(self, "re_min_")
        return {
            "re_min": self.re_min_.tolist(),
            "re_max": self.re_max_.tolist(),
            "im_min": self.im_min_.tolist(),
            "im_max": self.im_max_.tolist(),
        }


def preprocess_minmax(dataset, fit_split: str = "train"):
    """Scale every split with statistics from ``fit_split``; returns ``(dataset, record)``."""
    X_fit, _ = dataset.subset(fit_split)
    if len(X_fit) == 0:
        raise ValueError(f"split {fit_split!r} is empty")
    scaler = ComplexMinMaxScaler().fit(X_fit)
    return dataset.with_inputs(scaler.transform(dataset.inputs)), scaler.transform_record()
