"""Evaluation metrics for complex regression and classification."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

__all__ = ["MetricsRecord", "mse_db", "r_squared", "accuracy", "mean_std"]


def mse_db(squared_errors) -> float:
    """``10 log10`` of the mean squared error magnitude."""
    e = np.asarray(squared_errors, dtype=np.float64).ravel()
    if e.size == 0:
        raise ValueError("mse_db needs at least one error")
    return float(10.0 * np.log10(e.mean()))


def r_squared(y, y_hat) -> float:
    """Coefficient of determination for complex targets (mean taken over ``y``)."""
    y = np.asarray(y).ravel()
    y_hat = np.asarray(y_hat).ravel()
    if y.shape != y_hat.shape:
        raise ValueError(f"length mismatch: {y.size} targets, {y_hat.size} predictions")
    if y.size < 2:
        raise ValueError("r_squared needs at least two samples")
    total = np.sum(np.abs(y - y.mean()) ** 2)
    if total <= 0:
        raise ValueError("r_squared is undefined for a constant target")
    return float(1.0 - np.sum(np.abs(y - y_hat) ** 2) / total)


def accuracy(labels, predicted) -> float:
    labels = np.asarray(labels)
    return float(np.mean(labels == np.asarray(predicted)))


def mean_std(values) -> tuple[float, float]:
    """Mean and population standard deviation."""
    v = np.asarray(values, dtype=np.float64)
    return float(v.mean()), float(v.std())


@dataclass
class MetricsRecord:
    mse_db: float | None = None
    r2: float | None = None
    accuracy: float | None = None
    loss_curve: list = field(default_factory=list)

    def summary(self) -> dict:
        out = asdict(self)
        out.pop("loss_curve")
        return {k: v for k, v in out.items() if v is not None}
