"""Synthetic nonlinear channel-identification benchmark.

A (possibly non-circular) Gaussian source goes through a 5-tap complex FIR
filter, a memoryless quadratic nonlinearity and additive white noise. The
task is to predict the noisy channel output from the last ``embed`` inputs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..core import Rng
from .datasets import RegressionDataset

__all__ = [
    "ChannelConfig",
    "channel_taps",
    "channel_source",
    "channel_filter",
    "channel_nonlinearity",
    "add_awgn",
    "make_channel_dataset",
    "realized_snr_db",
]

NONLINEAR_COEF = 0.15 - 0.1j


@dataclass
class ChannelConfig:
    rho: float = math.sqrt(2) / 2
    n_samples: int = 2000
    embed: int = 5
    snr_db: float = 13.0
    test_fraction: float = 0.15
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must satisfy 0 < rho < 1, got {self.rho}")
        if self.n_samples <= self.embed:
            raise ValueError(f"n_samples ({self.n_samples}) must exceed embed ({self.embed})")
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must lie in (0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)


def channel_taps() -> np.ndarray:
    """``h(k) = 0.432 (1 + cos(2pi(k-3)/5) - i(1 + cos(2pi(k-3)/10)))`` for k = 1..5."""
    k = np.arange(1, 6)
    return 0.432 * ((1 + np.cos(2 * np.pi * (k - 3) / 5)) - 1j * (1 + np.cos(2 * np.pi * (k - 3) / 10)))


def channel_source(rng: Rng, rho: float, n: int) -> np.ndarray:
    """``sqrt(1 - rho^2) X + i rho Y`` with independent standard normal X, Y.

    ``rho = sqrt(2)/2`` gives a circular source; pseudo-variance is ``1 - 2 rho^2``.
    """
    if not 0 < rho < 1:
        raise ValueError(f"rho must satisfy 0 < rho < 1, got {rho}")
    x = rng.normal(n)
    y = rng.normal(n)
    return math.sqrt(1 - rho**2) * x + 1j * rho * y


def channel_filter(s) -> np.ndarray:
    """Causal FIR output ``t_n = sum_k h(k) s_{n-k+1}`` with zero initial state.

    The first four outputs contain the start-up transient.
    """
    s = np.asarray(s, dtype=np.complex128)
    return np.convolve(s, channel_taps())[: s.size]


def channel_nonlinearity(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.complex128)
    return t + NONLINEAR_COEF * t**2


def add_awgn(r, snr_db: float, rng: Rng) -> np.ndarray:
    """Add circular white noise with power ``mean|r|^2 / 10^(snr_db/10)``.

    ``snr_db = inf`` returns ``r`` unchanged (no random draws consumed).
    """
    r = np.asarray(r, dtype=np.complex128)
    if math.isinf(snr_db) and snr_db > 0:
        return r.copy()
    noise_power = np.mean(np.abs(r) ** 2) / 10 ** (snr_db / 10)
    return r + rng.complex_normal(r.shape, scale=math.sqrt(noise_power / 2))


def realized_snr_db(clean, noisy) -> float:
    clean = np.asarray(clean)
    noise = np.asarray(noisy) - clean
    return float(10 * np.log10(np.mean(np.abs(clean) ** 2) / np.mean(np.abs(noise) ** 2)))


def make_channel_dataset(cfg: ChannelConfig | None = None, **overrides) -> RegressionDataset:
    """One random generation of the channel benchmark.

    Pairs start at the first sample with a full embedding, giving
    ``n_samples - embed + 1`` pairs. The test split holds
    ``round(test_fraction * n_samples)`` randomly chosen pairs.
    """
    cfg = cfg or ChannelConfig(**overrides)
    rng = Rng(cfg.seed)
    N, L = cfg.n_samples, cfg.embed
    s = channel_source(rng, cfg.rho, N)
    r = channel_nonlinearity(channel_filter(s))[L - 1 :]
    r_noisy = add_awgn(r, cfg.snr_db, rng)
    # row j embeds s[j], ..., s[j + L - 1] (oldest first)
    inputs = np.lib.stride_tricks.sliding_window_view(s, L).copy()
    n_pairs = inputs.shape[0]
    n_test = min(int(round(cfg.test_fraction * N)), n_pairs - 1)
    perm = rng.permutation(n_pairs)
    splits = {"train": np.sort(perm[n_test:]), "test": np.sort(perm[:n_test])}
    return RegressionDataset(inputs, splits, r_noisy)
