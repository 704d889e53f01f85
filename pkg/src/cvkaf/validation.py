"""Input validation for complex-valued estimators.

scikit-learn's ``check_array`` rejects complex input, so these helpers play
the same role for ``complex128`` data.
"""

from __future__ import annotations

import numbers

import numpy as np

__all__ = ["check_complex_array", "check_complex_X_y", "check_n_features", "check_positive"]


def check_complex_array(X, *, ensure_2d: bool = True, name: str = "X", min_samples: int = 1) -> np.ndarray:
    try:
        arr = np.array(X, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} cannot be converted to a complex array: {exc}") from None
    if ensure_2d:
        if arr.ndim == 1:
            raise ValueError(
                f"Expected 2D array for {name}, got 1D array instead. Reshape with "
                "array.reshape(-1, 1) for a single feature or array.reshape(1, -1) for a single sample."
            )
        if arr.ndim != 2:
            raise ValueError(f"Expected 2D array for {name}, got {arr.ndim}D array instead.")
    if arr.shape[0] < min_samples:
        raise ValueError(f"{name} has {arr.shape[0]} sample(s); at least {min_samples} required.")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinity.")
    return arr


def check_complex_X_y(X, y, *, labels: bool = False):
    """Validate features and either complex targets or integer class labels."""
    X = check_complex_array(X)
    if labels:
        y = np.asarray(y)
        if y.ndim != 1:
            raise ValueError(f"labels must be 1D, got shape {y.shape}")
    else:
        y = check_complex_array(y, ensure_2d=False, name="y")
        if y.ndim not in (1, 2):
            raise ValueError(f"y must be 1D or 2D, got shape {y.shape}")
    if y.shape[0] != X.shape[0]:
        raise ValueError(f"Found input variables with inconsistent numbers of samples: [{X.shape[0]}, {y.shape[0]}]")
    return X, y


def check_n_features(estimator, X, reset: bool) -> None:
    n = X.shape[1]
    if reset:
        estimator.n_features_in_ = n
    elif n != estimator.n_features_in_:
        raise ValueError(
            f"X has {n} features, but {type(estimator).__name__} is expecting {estimator.n_features_in_} features as input."
        )


def check_positive(value, name: str, *, integer: bool = False, allow_zero: bool = False):
    kind = numbers.Integral if integer else numbers.Real
    if not isinstance(value, kind) or isinstance(value, bool):
        raise TypeError(f"{name} must be {'an integer' if integer else 'a real number'}, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'non-negative' if allow_zero else 'positive'}, got {value}")
    return value
