"""Complex wind series: CSV ingestion, embedding and synthetic stand-ins.

CSV schema: two numeric columns (north, east) per hourly row, an optional
single header row, UTF-8, LF or CRLF line endings. Row ``t`` becomes
``north_t + 1j * east_t``.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..core import Rng
from .datasets import RegressionDataset

__all__ = [
    "WindFormatError",
    "load_wind_csv",
    "save_wind_csv",
    "make_wind_dataset",
    "synthetic_wind_series",
    "multitone_series",
]


class WindFormatError(ValueError):
    """Malformed wind CSV."""


def _parse_row(row, lineno):
    if len(row) != 2:
        raise WindFormatError(f"line {lineno}: expected 2 columns, found {len(row)}")
    try:
        north, east = float(row[0]), float(row[1])
    except ValueError:
        raise WindFormatError(f"line {lineno}: non-numeric value in {row!r}") from None
    if not (np.isfinite(north) and np.isfinite(east)):
        raise WindFormatError(f"line {lineno}: non-finite value in {row!r}")
    return north, east


def load_wind_csv(path) -> np.ndarray:
    """Read the two-column CSV into a complex series."""
    values = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row]
            if not any(cells):
                continue
            if lineno == 1 and len(cells) == 2:
                try:
                    float(cells[0]), float(cells[1])
                except ValueError:
                    continue  # header row
            values.append(_parse_row(cells, lineno))
    if not values:
        raise WindFormatError(f"{path}: no data rows")
    arr = np.asarray(values)
    return arr[:, 0] + 1j * arr[:, 1]


def save_wind_csv(series, path) -> Path:
    path = Path(path)
    series = np.asarray(series)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["north", "east"])
        for z in series:
            writer.writerow([repr(float(z.real)), repr(float(z.imag))])
    return path


def make_wind_dataset(series, embed: int = 10, horizon: int = 8, test_len: int = 500, val_len: int = 500) -> RegressionDataset:
    """Pairs ``(z_{t-embed+1}, ..., z_t) -> z_{t+horizon}`` in time order.

    The last ``test_len`` pairs (whose targets are the last ``test_len``
    samples) form the test split, the ``val_len`` pairs before them the
    validation split, and everything earlier the training split.
    """
    z = np.asarray(series, dtype=np.complex128).ravel()
    n_pairs = z.size - embed - horizon + 1
    if z.size <= embed + horizon + test_len or n_pairs - test_len - val_len < 1:
        raise ValueError(
            f"series of length {z.size} too short for embed={embed}, horizon={horizon}, "
            f"test_len={test_len}, val_len={val_len}"
        )
    inputs = np.lib.stride_tricks.sliding_window_view(z, embed)[:n_pairs].copy()
    targets = z[embed - 1 + horizon :]
    idx = np.arange(n_pairs)
    n_train = n_pairs - test_len - val_len
    splits = {
        "train": idx[:n_train],
        "validation": idx[n_train : n_train + val_len],
        "test": idx[n_train + val_len :],
    }
    return RegressionDataset(inputs, splits, targets)


def synthetic_wind_series(n: int = 5000, seed: int = 0) -> np.ndarray:
    """Wind-like complex series for tests and demos.

    A slowly rotating, non-circular complex AR(2) process with gusty
    (magnitude-dependent) innovations, loosely mimicking hourly wind vectors.
    """
    rng = Rng(seed)
    burn = 200
    total = n + burn
    innov = rng.normal(total) + 1j * 0.6 * rng.normal(total)
    z = np.zeros(total, dtype=np.complex128)
    rot = np.exp(1j * 0.02)
    for t in range(2, total):
        gust = 1.0 + 0.3 * np.tanh(abs(z[t - 1]) - 2.0)
        z[t] = 1.5 * rot * z[t - 1] - 0.56 * z[t - 2] + 0.3 * gust * innov[t]
    return z[burn:]


def multitone_series(n: int = 5000, freqs=(0.031, 0.117, 0.29), amps=(1.0, 0.6, 0.3)) -> np.ndarray:
    """Sum of complex exponentials; any future sample is an exact linear map of
    ``len(freqs)`` or more consecutive past samples."""
    t = np.arange(n)
    return sum(a * np.exp(2j * np.pi * f * t) for f, a in zip(freqs, amps))
