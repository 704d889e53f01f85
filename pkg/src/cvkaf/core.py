"""Complex-number helpers, seeded random streams and CR-calculus utilities.

Complex tensors are plain ``numpy`` arrays of dtype ``complex128`` (interleaved
real/imaginary storage); scalars are Python ``complex``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "WirtingerPair",
    "Rng",
    "wirtinger_from_real_partials",
    "gaussian_sample",
    "finite_difference_cogradient",
    "finite_difference_gradient",
    "NonFiniteError",
]


class NonFiniteError(FloatingPointError):
    """Raised when a loss, gradient or update stops being finite."""


@dataclass(frozen=True)
class WirtingerPair:
    """R-derivative ``d_z`` and R*-derivative ``d_zstar`` of a map.

    Both fields may be scalars or arrays of identical shape.
    """

    d_z: complex | np.ndarray
    d_zstar: complex | np.ndarray


def wirtinger_from_real_partials(df_da, df_db) -> WirtingerPair:
    """Combine the partials of ``f = u + iv`` w.r.t. ``a = Re z`` and ``b = Im z``."""
    df_da = np.asarray(df_da, dtype=np.complex128)
    df_db = np.asarray(df_db, dtype=np.complex128)
    d_z = 0.5 * (df_da - 1j * df_db)
    d_zstar = 0.5 * (df_da + 1j * df_db)
    if d_z.ndim == 0:
        return WirtingerPair(complex(d_z), complex(d_zstar))
    return WirtingerPair(d_z, d_zstar)


class Rng:
    """Seeded random stream.

    Bits come from numpy's PCG64 generator, which produces the same stream on
    every platform for a given seed. Normal variates are produced with the
    Box-Muller transform from those uniforms, so the Gaussian stream does not
    depend on numpy's (version-specific) ziggurat sampler.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, index: int) -> "Rng":
        """Independent stream for repetition ``index`` (seed + index)."""
        return Rng(self.seed + int(index))

    def uniform(self, size=None):
        """Uniform variates on ``[0, 1)``."""
        return self._gen.random(size)

    def normal(self, size=None):
        """Standard normal variates (Box-Muller, pairs drawn in blocks).

        An odd request consumes a full pair and discards the spare value.
        """
        n = 1 if size is None else int(np.prod(size))
        m = (n + 1) // 2
        u1 = 1.0 - self._gen.random(m)  # (0, 1], keeps log finite
        u2 = self._gen.random(m)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        z = np.empty(2 * m)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        if size is None:
            return float(z[0])
        return z[:n].reshape(size)

    def complex_normal(self, size, scale: float = 1.0):
        """Complex variates with independent ``N(0, scale**2)`` parts."""
        parts = self.normal((2,) + tuple(np.atleast_1d(size)))
        return scale * (parts[0] + 1j * parts[1])

    def integers(self, high: int, size=None):
        """Uniform integers on ``[0, high)``."""
        return self._gen.integers(0, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def __getstate__(self):
        return {"seed": self.seed, "state": self._gen.bit_generator.state}

    def __setstate__(self, state):
        self.seed = state["seed"]
        self._gen = np.random.Generator(np.random.PCG64(self.seed))
        self._gen.bit_generator.state = state["state"]


def gaussian_sample(rng: Rng) -> float:
    """One standard normal draw from ``rng``."""
    return rng.normal()


def _checked(value) -> float:
    value = float(value)
    if math.isnan(value):
        raise NonFiniteError("loss returned NaN at a finite-difference probe")
    return value


def finite_difference_cogradient(
    loss: Callable[[np.ndarray], float], w, h: float = 1e-5
) -> np.ndarray:
    """Central-difference conjugate cogradient of a real loss.

    Returns ``0.5 * (dJ/da + 1j * dJ/db)`` for every entry of ``w``, where
    ``a`` and ``b`` are the entry's real and imaginary parts.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    w = np.array(w, dtype=np.complex128)
    flat = w.reshape(-1)
    grad = np.zeros_like(flat)
    for k in range(flat.size):
        orig = flat[k]
        partials = []
        for step in (h, 1j * h):
            flat[k] = orig + step
            plus = _checked(loss(w))
            flat[k] = orig - step
            minus = _checked(loss(w))
            partials.append((plus - minus) / (2.0 * h))
        flat[k] = orig
        grad[k] = 0.5 * (partials[0] + 1j * partials[1])
    return grad.reshape(w.shape)


def finite_difference_gradient(
    loss: Callable[[np.ndarray], float], p, h: float = 1e-5
) -> np.ndarray:
    """Central-difference gradient of a real loss w.r.t. a real array."""
    if h <= 0:
        raise ValueError("step h must be positive")
    p = np.array(p, dtype=np.float64)
    flat = p.reshape(-1)
    grad = np.zeros_like(flat)
    for k in range(flat.size):
        orig = flat[k]
        flat[k] = orig + h
        plus = _checked(loss(p))
        flat[k] = orig - h
        minus = _checked(loss(p))
        flat[k] = orig
        grad[k] = (plus - minus) / (2.0 * h)
    return grad.reshape(p.shape)
