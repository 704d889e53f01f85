"""Real and complex kernels, KAF dictionaries and PSD checks.

All kernel functions broadcast over numpy arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KernelKind",
    "KernelDictionary",
    "KernelDomainError",
    "build_dictionary_1d",
    "build_dictionary_2d",
    "bandwidth_rule",
    "real_gaussian",
    "complex_gaussian",
    "complex_gaussian_expanded",
    "independent_kernel",
    "szego_kernel",
    "kernel_function",
    "gram_matrix",
    "min_eigenvalue_ratio",
    "is_psd",
]


class KernelDomainError(ValueError):
    """Kernel evaluated outside its domain."""


class KernelKind(str, enum.Enum):
    REAL_GAUSSIAN = "real_gaussian"
    COMPLEX_GAUSSIAN = "complex_gaussian"
    INDEPENDENT = "independent"
    SZEGO = "szego"

    @classmethod
    def parse(cls, name) -> "KernelKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown kernel {name!r}; expected one of: {valid}") from None


@dataclass
class KernelDictionary:
    """Fixed grid of kernel centres.

    ``grid`` is the 1-D axis (``size`` real points). For ``ndim == 2`` the
    centres are ``grid[n] + 1j * grid[m]`` flattened with ``n`` as the outer
    index, so ``elements[n * size + m] == grid[n] + 1j * grid[m]``.
    """

    grid: np.ndarray
    spacing: float
    gamma: float
    ndim: int = 1

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def elements(self) -> np.ndarray:
        if self.ndim == 1:
            return self.grid
        return (self.grid[:, None] + 1j * self.grid[None, :]).reshape(-1)

    def __len__(self) -> int:
        return self.size**self.ndim


def bandwidth_rule(spacing: float) -> float:
    """Rule-of-thumb bandwidth ``1 / (6 * spacing**2)`` for a uniform grid."""
    if not spacing > 0:
        raise ValueError(f"grid spacing must be positive, got {spacing}")
    return 1.0 / (6.0 * spacing**2)


def build_dictionary_1d(size: int, lo: float = -2.0, hi: float = 2.0) -> KernelDictionary:
    if size < 2:
        raise ValueError(f"dictionary size must be at least 2, got {size}")
    if not lo < hi:
        raise ValueError(f"dictionary range must satisfy lo < hi, got [{lo}, {hi}]")
    grid = np.linspace(lo, hi, size)
    spacing = (hi - lo) / (size - 1)
    return KernelDictionary(grid, spacing, bandwidth_rule(spacing), ndim=1)


def build_dictionary_2d(size: int, lo: float = -2.0, hi: float = 2.0) -> KernelDictionary:
    """Square grid ``d_n + i d_m`` over ``[lo, hi]`` on both axes."""
    base = build_dictionary_1d(size, lo, hi)
    return KernelDictionary(base.grid, base.spacing, base.gamma, ndim=2)


def real_gaussian(s, d, gamma):
    return np.exp(-gamma * (np.subtract(s, d)) ** 2)


def complex_gaussian(z, d, gamma):
    """``exp(-gamma * (z - conj(d))**2)``; holomorphic in ``z``."""
    return np.exp(-gamma * (np.subtract(z, np.conj(d))) ** 2)


def complex_gaussian_expanded(z, d, gamma):
    """Same kernel as :func:`complex_gaussian`, written with cos/sin of real parts."""
    z = np.asarray(z, dtype=np.complex128)
    d = np.asarray(d, dtype=np.complex128)
    u = z.real - d.real
    v = z.imag + d.imag
    phase = 2.0 * gamma * u * v
    return np.exp(-gamma * u**2) * np.exp(gamma * v**2) * (np.cos(phase) - 1j * np.sin(phase))


def independent_kernel(z, d, gamma):
    """Complex kernel built from four real Gaussian evaluations."""
    z = np.asarray(z, dtype=np.complex128)
    d = np.asarray(d, dtype=np.complex128)
    zr, zi, dr, di = z.real, z.imag, d.real, d.imag
    re = real_gaussian(zr, dr, gamma) + real_gaussian(zi, di, gamma)
    im = real_gaussian(zr, di, gamma) - real_gaussian(zi, dr, gamma)
    return re + 1j * im


def szego_kernel(z, d, gamma=None):
    """``1 / (1 - z * conj(d))**2`` on the open unit disk. ``gamma`` is ignored."""
    z = np.asarray(z, dtype=np.complex128)
    d = np.asarray(d, dtype=np.complex128)
    if np.any(np.abs(z) >= 1.0) or np.any(np.abs(d) >= 1.0):
        raise KernelDomainError("Szego kernel requires |z| < 1 and |d| < 1")
    denom = 1.0 - z * np.conj(d)
    if np.any(np.abs(denom) < 1e-9):
        raise KernelDomainError("Szego kernel denominator vanishes")
    return 1.0 / denom**2


_KERNELS = {
    KernelKind.REAL_GAUSSIAN: real_gaussian,
    KernelKind.COMPLEX_GAUSSIAN: complex_gaussian,
    KernelKind.INDEPENDENT: independent_kernel,
    KernelKind.SZEGO: szego_kernel,
}


def kernel_function(kind):
    return _KERNELS[KernelKind.parse(kind)]


def gram_matrix(kind, points, gamma: float = 1.0) -> np.ndarray:
    """``G[n, m] = k(points[n], points[m])``."""
    kind = KernelKind.parse(kind)
    points = np.asarray(points).reshape(-1)
    if kind is KernelKind.REAL_GAUSSIAN:
        points = np.real_if_close(points)
        if np.iscomplexobj(points):
            raise KernelDomainError("real Gaussian kernel needs real points")
        return real_gaussian(points[:, None], points[None, :], gamma)
    return _KERNELS[kind](points[:, None], points[None, :], gamma)


def min_eigenvalue_ratio(gram: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part, divided by the trace."""
    herm = 0.5 * (gram + np.conj(gram.T))
    eig = np.linalg.eigvalsh(herm)
    return float(eig[0] / np.real(np.trace(herm)))


def is_psd(gram: np.ndarray, rtol: float = 1e-8) -> bool:
    return min_eigenvalue_ratio(gram) >= -rtol
