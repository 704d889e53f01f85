"""Complex activation functions with closed-form Wirtinger derivatives.

Every activation acts elementwise on a ``(batch, units)`` array of
pre-activations. Besides the value it exposes its :class:`WirtingerPair`
(``dg/dz``, ``dg/dz*``) and the gradients of the loss with respect to its own
trainable parameters, given the upstream ``delta = dJ/dh*``.

Real parameters ``p`` get the plain derivative ``dJ/dp = 2 Re(conj(delta) dh/dp)``;
complex parameters get the conjugate cogradient ``dJ/dp*``.
"""

from __future__ import annotations

import enum

import numpy as np

from .core import Rng, WirtingerPair, wirtinger_from_real_partials
from .kernels import (
    KernelDictionary,
    KernelKind,
    build_dictionary_1d,
    build_dictionary_2d,
    complex_gaussian,
    independent_kernel,
    real_gaussian,
)

__all__ = [
    "ActivationKind",
    "Activation",
    "SingularityError",
    "make_activation",
    "split_apply",
    "amp",
    "pa_tanh",
    "complex_tanh",
    "crelu",
    "modrelu",
    "cardioid",
    "split_kaf_forward",
    "complex_kaf_forward",
    "activation_wirtinger",
    "activation_param_grads",
    "GAMMA_FLOOR",
    "SINGULARITY_RADIUS",
]

GAMMA_FLOOR = 1e-3
SINGULARITY_RADIUS = 1e-6


class SingularityError(ArithmeticError):
    """Input too close to a pole of the complex tanh."""


class ActivationKind(str, enum.Enum):
    IDENTITY = "identity"
    SPLIT_TANH = "split_tanh"
    SPLIT_RELU = "split_relu"
    REAL_TANH = "real_tanh"
    REAL_RELU = "real_relu"
    AMP = "amp"
    PA_TANH = "pa_tanh"
    COMPLEX_TANH = "complex_tanh"
    CRELU = "crelu"
    MODRELU = "modrelu"
    CARDIOID = "cardioid"
    SPLIT_KAF = "split_kaf"
    COMPLEX_KAF = "complex_kaf"

    @classmethod
    def parse(cls, name) -> "ActivationKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown activation {name!r}; expected one of: {valid}") from None


# --------------------------------------------------------------------------
# scalar/broadcasting forms


def split_apply(g_real, z):
    """Apply a real function separately to the real and imaginary parts."""
    z = np.asarray(z, dtype=np.complex128)
    return g_real(z.real) + 1j * g_real(z.imag)


def _relu(x):
    return np.maximum(x, 0.0)


def amp(z, c: float = 1.0, r: float = 1.0):
    z = np.asarray(z, dtype=np.complex128)
    return z / (c + np.abs(z) / r)


def pa_tanh(z, m: float = 1.0):
    z = np.asarray(z, dtype=np.complex128)
    mag = np.abs(z)
    safe = np.where(mag > 0, mag, 1.0)
    return np.where(mag > 0, np.tanh(mag / m) * z / safe, 0.0)


def _check_tanh_poles(z):
    # poles at i*(k + 1/2)*pi for every integer k
    k = np.round(z.imag / np.pi - 0.5)
    dist = np.hypot(z.real, z.imag - (k + 0.5) * np.pi)
    if np.any(dist < SINGULARITY_RADIUS):
        bad = np.asarray(z)[dist < SINGULARITY_RADIUS].ravel()[0]
        raise SingularityError(f"complex tanh evaluated within {SINGULARITY_RADIUS} of a pole at {bad}")


def complex_tanh(z):
    z = np.asarray(z, dtype=np.complex128)
    _check_tanh_poles(z)
    return np.tanh(z)


def crelu(z):
    z = np.asarray(z, dtype=np.complex128)
    return np.where((z.real >= 0) & (z.imag >= 0), z, 0.0)


def modrelu(z, b):
    """``ReLU(|z| + b) * exp(i phase(z))``; zero at ``z == 0``."""
    z = np.asarray(z, dtype=np.complex128)
    mag = np.abs(z)
    safe = np.where(mag > 0, mag, 1.0)
    scale = np.where(mag > 0, _relu(mag + b) / safe, 0.0)
    return scale * z


def cardioid(z):
    z = np.asarray(z, dtype=np.complex128)
    mag = np.abs(z)
    safe = np.where(mag > 0, mag, 1.0)
    cos_phase = np.where(mag > 0, z.real / safe, 0.0)
    return 0.5 * (1.0 + cos_phase) * z


def split_kaf_forward(z, alpha_re, alpha_im, dictionary: KernelDictionary, gamma=None):
    """Split KAF of a single neuron; ``z`` may be an array of inputs."""
    gamma = dictionary.gamma if gamma is None else gamma
    z = np.asarray(z, dtype=np.complex128)[..., None]
    d = dictionary.grid
    k_re = real_gaussian(z.real, d, gamma)
    k_im = real_gaussian(z.imag, d, gamma)
    return (k_re * alpha_re).sum(-1) + 1j * (k_im * alpha_im).sum(-1)


def complex_kaf_forward(z, alpha, dictionary: KernelDictionary, kind="independent", gamma=None):
    """Fully complex KAF of a single neuron; ``alpha`` is ``(D, D)`` or ``(D*D,)``."""
    gamma = dictionary.gamma if gamma is None else gamma
    kernel = _complex_kaf_kernel(kind)
    z = np.asarray(z, dtype=np.complex128)[..., None]
    alpha = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    return (kernel(z, dictionary.elements, gamma) * alpha).sum(-1)


def _complex_kaf_kernel(kind):
    kind = KernelKind.parse(kind)
    if kind is KernelKind.COMPLEX_GAUSSIAN:
        return complex_gaussian
    if kind is KernelKind.INDEPENDENT:
        return independent_kernel
    raise ValueError(f"complex KAF supports complex_gaussian or independent kernels, not {kind.value!r}")


# --------------------------------------------------------------------------
# layer-level activations


class Activation:
    """Elementwise activation acting on ``(batch, units)`` arrays.

    Subclasses provide ``value`` and ``wirtinger``; those with trainable
    parameters also override ``init_params`` and ``param_grads``.
    """

    kind: ActivationKind
    param_names: tuple[str, ...] = ()
    real_params: tuple[str, ...] = ()
    # test hook: scales the derivative used during backpropagation
    derivative_scale: float = 1.0

    def init_params(self, n_units: int, rng: Rng) -> dict:
        return {}

    def value(self, s, params):
        raise NotImplementedError

    def wirtinger(self, s, params) -> WirtingerPair:
        raise NotImplementedError

    def param_grads(self, s, delta, params) -> dict:
        return {}

    def project(self, params) -> None:
        """Enforce parameter constraints in place after an update."""

    def forward(self, s, params):
        return self.value(s, params), s

    def backward(self, ctx, delta, params):
        """Return ``(dJ/ds*, parameter gradients)`` given ``delta = dJ/dh*``."""
        pair = self.wirtinger(ctx, params)
        d_z = pair.d_z * self.derivative_scale
        delta_pre = np.conj(delta) * pair.d_zstar + delta * np.conj(d_z)
        return delta_pre, self.param_grads(ctx, delta, params)

    def config(self) -> dict:
        return {"kind": self.kind.value}

    def __repr__(self):
        return f"{type(self).__name__}()"


def _real_param_grad(delta, dh_dp):
    """``sum over batch of 2 Re(conj(delta) dh/dp)``."""
    return 2.0 * np.real(np.conj(delta) * dh_dp).sum(axis=0)


class Identity(Activation):
    kind = ActivationKind.IDENTITY

    def value(self, s, params):
        return s

    def wirtinger(self, s, params):
        return WirtingerPair(np.ones_like(s), np.zeros_like(s))

    def backward(self, ctx, delta, params):
        return delta * self.derivative_scale, {}


class _Split(Activation):
    def _g(self, x):
        raise NotImplementedError

    def _dg(self, x):
        raise NotImplementedError

    def value(self, s, params):
        return split_apply(self._g, s)

    def wirtinger(self, s, params):
        da, db = self._dg(s.real), self._dg(s.imag)
        return WirtingerPair(0.5 * (da + db) + 0j, 0.5 * (da - db) + 0j)


class SplitTanh(_Split):
    kind = ActivationKind.SPLIT_TANH

    def _g(self, x):
        return np.tanh(x)

    def _dg(self, x):
        return 1.0 - np.tanh(x) ** 2


class SplitReLU(_Split):
    kind = ActivationKind.SPLIT_RELU

    def _g(self, x):
        return _relu(x)

    def _dg(self, x):
        return (x > 0).astype(np.float64)


class _RealPart(Activation):
    """Real activation of ``Re z``; used by the real-valued baseline network."""

    def value(self, s, params):
        return self._g(s.real) + 0j

    def wirtinger(self, s, params):
        half = 0.5 * self._dg(s.real) + 0j
        return WirtingerPair(half, half)


class RealTanh(_RealPart):
    kind = ActivationKind.REAL_TANH
    _g = staticmethod(np.tanh)

    @staticmethod
    def _dg(x):
        return 1.0 - np.tanh(x) ** 2


class RealReLU(_RealPart):
    kind = ActivationKind.REAL_RELU
    _g = staticmethod(_relu)

    @staticmethod
    def _dg(x):
        return (x > 0).astype(np.float64)


class AMP(Activation):
    kind = ActivationKind.AMP

    def __init__(self, c: float = 1.0, r: float = 1.0):
        self.c, self.r = c, r

    def value(self, s, params):
        return amp(s, self.c, self.r)

    def wirtinger(self, s, params):
        mag = np.abs(s)
        denom = self.c + mag / self.r
        safe = np.where(mag > 0, mag, 1.0)
        d_z = 1.0 / denom - mag / (2.0 * self.r * denom**2)
        d_zstar = np.where(mag > 0, -(s**2) / (2.0 * self.r * safe * denom**2), 0.0)
        return WirtingerPair(d_z + 0j, d_zstar)


class PATanh(Activation):
    kind = ActivationKind.PA_TANH

    def __init__(self, m: float = 1.0):
        self.m = m

    def value(self, s, params):
        return pa_tanh(s, self.m)

    def wirtinger(self, s, params):
        # g = f(|z|) z with f(r) = tanh(r/m) / r
        mag = np.abs(s)
        small = mag < 1e-4
        safe = np.where(small, 1.0, mag)
        t = np.tanh(safe / self.m)
        f = np.where(small, 1.0 / self.m - mag**2 / (3.0 * self.m**3), t / safe)
        sech2 = 1.0 - t**2
        df = np.where(
            small,
            -2.0 * mag / (3.0 * self.m**3),
            (sech2 * safe / self.m - t) / safe**2,
        )
        # df / r stays finite as r -> 0
        df_over_r = np.where(small, -2.0 / (3.0 * self.m**3), df / safe)
        d_z = f + 0.5 * mag * df
        d_zstar = 0.5 * df_over_r * s**2
        return WirtingerPair(d_z + 0j, d_zstar)


class ComplexTanh(Activation):
    kind = ActivationKind.COMPLEX_TANH

    def value(self, s, params):
        return complex_tanh(s)

    def forward(self, s, params):
        h = complex_tanh(s)
        return h, (s, h)

    def wirtinger(self, s, params):
        t = complex_tanh(s)
        return WirtingerPair(1.0 - t**2, np.zeros_like(t))

    def backward(self, ctx, delta, params):
        s, h = ctx
        d_z = (1.0 - h**2) * self.derivative_scale
        return delta * np.conj(d_z), {}


class CReLU(Activation):
    kind = ActivationKind.CRELU

    def value(self, s, params):
        return crelu(s)

    def wirtinger(self, s, params):
        inside = ((s.real > 0) & (s.imag > 0)).astype(np.float64)
        return WirtingerPair(inside + 0j, np.zeros_like(s))


class ModReLU(Activation):
    kind = ActivationKind.MODRELU
    param_names = ("radius",)
    real_params = ("radius",)

    def __init__(self, init: float = 0.1):
        self.init = init

    def init_params(self, n_units, rng):
        return {"radius": np.full(n_units, self.init)}

    def value(self, s, params):
        return modrelu(s, params["radius"])

    def _parts(self, s, b):
        mag = np.abs(s)
        active = (mag > 0) & (mag + b > 0)
        safe = np.where(mag > 0, mag, 1.0)
        return mag, active, safe

    def wirtinger(self, s, params):
        b = params["radius"]
        mag, active, safe = self._parts(s, b)
        d_z = np.where(active, 1.0 + b / (2.0 * safe), 0.0) + 0j
        d_zstar = np.where(active, -b * s**2 / (2.0 * safe**3), 0.0)
        return WirtingerPair(d_z, d_zstar)

    def param_grads(self, s, delta, params):
        mag, active, safe = self._parts(s, params["radius"])
        dh_db = np.where(active, s / safe, 0.0)
        return {"radius": _real_param_grad(delta, dh_db)}

    def config(self):
        return {"kind": self.kind.value, "init": self.init}


class Cardioid(Activation):
    kind = ActivationKind.CARDIOID

    def value(self, s, params):
        return cardioid(s)

    def wirtinger(self, s, params):
        mag = np.abs(s)
        nz = mag > 0
        safe = np.where(nz, mag, 1.0)
        a = s.real
        d_z = np.where(nz, 0.5 + (s + a) / (4.0 * safe), 0.5)
        d_zstar = np.where(nz, s / (4.0 * safe) - a * s**2 / (4.0 * safe**3), 0.0)
        return WirtingerPair(d_z, d_zstar)


class SplitKAF(Activation):
    """Split kernel activation: one 1-D Gaussian KAF per part, shared grid."""

    kind = ActivationKind.SPLIT_KAF
    param_names = ("alpha_re", "alpha_im", "gamma")
    real_params = ("alpha_re", "alpha_im", "gamma")

    def __init__(self, dictionary: KernelDictionary | None = None, init_std: float = 0.3):
        self.dictionary = dictionary if dictionary is not None else build_dictionary_1d(20, -2.0, 2.0)
        if self.dictionary.ndim != 1:
            raise ValueError("split KAF needs a 1-D dictionary")
        self.init_std = init_std

    def init_params(self, n_units, rng):
        shape = (n_units, self.dictionary.size)
        return {
            "alpha_re": self.init_std * rng.normal(shape),
            "alpha_im": self.init_std * rng.normal(shape),
            "gamma": np.array(self.dictionary.gamma),
        }

    def _kernels(self, s, gamma):
        d = self.dictionary.grid
        diff_re = s.real[..., None] - d
        diff_im = s.imag[..., None] - d
        return diff_re, diff_im, np.exp(-gamma * diff_re**2), np.exp(-gamma * diff_im**2)

    def value(self, s, params):
        return self.forward(s, params)[0]

    def forward(self, s, params):
        diff_re, diff_im, k_re, k_im = ctx = self._kernels(s, params["gamma"])
        h = (params["alpha_re"] * k_re).sum(-1) + 1j * (params["alpha_im"] * k_im).sum(-1)
        return h, ctx

    def _pair(self, ctx, params):
        diff_re, diff_im, k_re, k_im = ctx
        gamma = params["gamma"]
        dg_re = (params["alpha_re"] * k_re * (-2.0 * gamma * diff_re)).sum(-1)
        dg_im = (params["alpha_im"] * k_im * (-2.0 * gamma * diff_im)).sum(-1)
        return WirtingerPair(0.5 * (dg_re + dg_im) + 0j, 0.5 * (dg_re - dg_im) + 0j)

    def wirtinger(self, s, params):
        return self._pair(self._kernels(s, params["gamma"]), params)

    def _grads(self, ctx, delta, params):
        diff_re, diff_im, k_re, k_im = ctx
        d_re = 2.0 * np.real(delta)[..., None]
        d_im = 2.0 * np.imag(delta)[..., None]
        # h = sum(A_re * K_re) + i sum(A_im * K_im)
        dgamma_re = (params["alpha_re"] * k_re * -(diff_re**2)).sum(-1)
        dgamma_im = (params["alpha_im"] * k_im * -(diff_im**2)).sum(-1)
        return {
            "alpha_re": (d_re * k_re).sum(axis=0),
            "alpha_im": (d_im * k_im).sum(axis=0),
            "gamma": np.array(_real_param_grad(delta, dgamma_re + 1j * dgamma_im).sum()),
        }

    def param_grads(self, s, delta, params):
        return self._grads(self._kernels(s, params["gamma"]), delta, params)

    def backward(self, ctx, delta, params):
        pair = self._pair(ctx, params)
        d_z = pair.d_z * self.derivative_scale
        delta_pre = np.conj(delta) * pair.d_zstar + delta * np.conj(d_z)
        return delta_pre, self._grads(ctx, delta, params)

    def project(self, params):
        np.maximum(params["gamma"], GAMMA_FLOOR, out=params["gamma"])

    def config(self):
        return {
            "kind": self.kind.value,
            "dict_size": self.dictionary.size,
            "dict_range": [float(self.dictionary.grid[0]), float(self.dictionary.grid[-1])],
            "init_std": self.init_std,
        }


class ComplexKAF(Activation):
    """Fully complex KAF over a square grid of ``D*D`` complex centres."""

    kind = ActivationKind.COMPLEX_KAF
    param_names = ("alpha", "gamma")
    real_params = ("gamma",)

    def __init__(
        self,
        dictionary: KernelDictionary | None = None,
        kernel="independent",
        init_std: float = 0.3,
    ):
        self.dictionary = dictionary if dictionary is not None else build_dictionary_2d(8, -2.0, 2.0)
        if self.dictionary.ndim != 2:
            raise ValueError("complex KAF needs a 2-D dictionary")
        self.kernel = KernelKind.parse(kernel)
        _complex_kaf_kernel(self.kernel)
        self.init_std = init_std

    def init_params(self, n_units, rng):
        D = self.dictionary.size
        return {
            "alpha": rng.complex_normal((n_units, D * D), scale=self.init_std / D),
            "gamma": np.array(self.dictionary.gamma),
        }

    def _kernels(self, s, gamma):
        if self.kernel is KernelKind.COMPLEX_GAUSSIAN:
            diff = s[..., None] - np.conj(self.dictionary.elements)
            return (diff, np.exp(-gamma * diff**2))
        # on a grid the independent kernel separates: K[n, m] = A[n] + B[m]
        g = self.dictionary.grid
        u_x = s.real[..., None] - g
        u_y = s.imag[..., None] - g
        k_x = np.exp(-gamma * u_x**2)
        k_y = np.exp(-gamma * u_y**2)
        A = k_x - 1j * k_y
        B = k_y + 1j * k_x
        return (u_x, u_y, k_x, k_y, A, B)

    def _alpha_grid(self, alpha):
        D = self.dictionary.size
        return alpha.reshape(alpha.shape[0], D, D)

    def value(self, s, params):
        return self.forward(s, params)[0]

    def forward(self, s, params):
        ctx = self._kernels(s, params["gamma"])
        alpha = params["alpha"]
        if self.kernel is KernelKind.COMPLEX_GAUSSIAN:
            return (alpha * ctx[-1]).sum(-1), ctx
        a = self._alpha_grid(alpha)
        A, B = ctx[4], ctx[5]
        return (A * a.sum(2)).sum(-1) + (B * a.sum(1)).sum(-1), ctx

    def _pair(self, ctx, params):
        alpha, gamma = params["alpha"], params["gamma"]
        c = -2.0 * gamma
        if self.kernel is KernelKind.COMPLEX_GAUSSIAN:
            diff, K = ctx
            d_z = (alpha * c * diff * K).sum(-1)
            return WirtingerPair(d_z, np.zeros_like(d_z))
        u_x, u_y, k_x, k_y, _, _ = ctx
        a = self._alpha_grid(alpha)
        rows, cols = a.sum(2), a.sum(1)
        dA_da, dA_db = c * u_x * k_x, -1j * c * u_y * k_y
        dB_da, dB_db = 1j * c * u_x * k_x, c * u_y * k_y
        df_da = (rows * dA_da).sum(-1) + (cols * dB_da).sum(-1)
        df_db = (rows * dA_db).sum(-1) + (cols * dB_db).sum(-1)
        return wirtinger_from_real_partials(df_da, df_db)

    def wirtinger(self, s, params):
        return self._pair(self._kernels(s, params["gamma"]), params)

    def _grads(self, ctx, delta, params):
        alpha = params["alpha"]
        if self.kernel is KernelKind.COMPLEX_GAUSSIAN:
            diff, K = ctx
            dh_dgamma = (alpha * (-(diff**2) * K)).sum(-1)
            g_alpha = (delta[..., None] * np.conj(K)).sum(axis=0)
        else:
            u_x, u_y, k_x, k_y, A, B = ctx
            a = self._alpha_grid(alpha)
            dA = -(u_x**2) * k_x + 1j * u_y**2 * k_y
            dB = -(u_y**2) * k_y - 1j * u_x**2 * k_x
            dh_dgamma = (a.sum(2) * dA).sum(-1) + (a.sum(1) * dB).sum(-1)
            gA = (delta[..., None] * np.conj(A)).sum(axis=0)
            gB = (delta[..., None] * np.conj(B)).sum(axis=0)
            g_alpha = (gA[:, :, None] + gB[:, None, :]).reshape(alpha.shape)
        return {
            "alpha": g_alpha,
            "gamma": np.array(_real_param_grad(delta, dh_dgamma).sum()),
        }

    def param_grads(self, s, delta, params):
        return self._grads(self._kernels(s, params["gamma"]), delta, params)

    def backward(self, ctx, delta, params):
        pair = self._pair(ctx, params)
        d_z = pair.d_z * self.derivative_scale
        delta_pre = np.conj(delta) * pair.d_zstar + delta * np.conj(d_z)
        return delta_pre, self._grads(ctx, delta, params)

    def project(self, params):
        np.maximum(params["gamma"], GAMMA_FLOOR, out=params["gamma"])

    def config(self):
        return {
            "kind": self.kind.value,
            "kernel": self.kernel.value,
            "dict_size": self.dictionary.size,
            "dict_range": [float(self.dictionary.grid[0]), float(self.dictionary.grid[-1])],
            "init_std": self.init_std,
        }


_SIMPLE = {
    ActivationKind.IDENTITY: Identity,
    ActivationKind.SPLIT_TANH: SplitTanh,
    ActivationKind.SPLIT_RELU: SplitReLU,
    ActivationKind.REAL_TANH: RealTanh,
    ActivationKind.REAL_RELU: RealReLU,
    ActivationKind.AMP: AMP,
    ActivationKind.PA_TANH: PATanh,
    ActivationKind.COMPLEX_TANH: ComplexTanh,
    ActivationKind.CRELU: CReLU,
    ActivationKind.CARDIOID: Cardioid,
}


def make_activation(
    kind,
    *,
    dict_size: int | None = None,
    dict_range=(-2.0, 2.0),
    kernel="independent",
    kaf_init_std: float = 0.3,
    modrelu_init: float = 0.1,
    dictionary: KernelDictionary | None = None,
) -> Activation:
    """Build an activation from its config name and settings."""
    kind = ActivationKind.parse(kind)
    if kind in _SIMPLE:
        return _SIMPLE[kind]()
    if kind is ActivationKind.MODRELU:
        return ModReLU(modrelu_init)
    lo, hi = dict_range
    if kind is ActivationKind.SPLIT_KAF:
        if dictionary is None:
            dictionary = build_dictionary_1d(dict_size or 20, lo, hi)
        return SplitKAF(dictionary, kaf_init_std)
    if dictionary is None:
        dictionary = build_dictionary_2d(dict_size or 8, lo, hi)
    return ComplexKAF(dictionary, kernel, kaf_init_std)


def activation_from_config(cfg: dict) -> Activation:
    cfg = dict(cfg)
    kind = ActivationKind.parse(cfg.pop("kind"))
    if kind is ActivationKind.MODRELU:
        return ModReLU(cfg.get("init", 0.1))
    if kind in (ActivationKind.SPLIT_KAF, ActivationKind.COMPLEX_KAF):
        return make_activation(
            kind,
            dict_size=cfg["dict_size"],
            dict_range=tuple(cfg["dict_range"]),
            kernel=cfg.get("kernel", "independent"),
            kaf_init_std=cfg["init_std"],
        )
    return make_activation(kind)


# --------------------------------------------------------------------------
# single-neuron convenience wrappers


def _as_neuron_params(kind, params):
    params = dict(params or {})
    if kind is ActivationKind.MODRELU:
        params.setdefault("radius", 0.1)
        params["radius"] = np.atleast_1d(np.asarray(params["radius"], dtype=np.float64))
    for key in ("alpha_re", "alpha_im", "alpha"):
        if key in params:
            params[key] = np.asarray(params[key]).reshape(1, -1)
    return params


def _neuron_activation(kind, params, dictionary, kernel):
    kind = ActivationKind.parse(kind)
    act = make_activation(kind, dictionary=dictionary, kernel=kernel)
    params = _as_neuron_params(kind, params)
    if "gamma" in act.param_names:
        params["gamma"] = np.array(params.get("gamma", act.dictionary.gamma), dtype=np.float64)
    return act, params


def activation_wirtinger(kind, z, params=None, *, dictionary=None, kernel="independent") -> WirtingerPair:
    """Wirtinger pair of one neuron's activation at ``z`` (scalar or array)."""
    act, params = _neuron_activation(kind, params, dictionary, kernel)
    z = np.asarray(z, dtype=np.complex128)
    pair = act.wirtinger(z.reshape(-1, 1), params)
    d_z = np.asarray(pair.d_z).reshape(z.shape)
    d_zstar = np.asarray(pair.d_zstar).reshape(z.shape)
    if z.ndim == 0:
        return WirtingerPair(complex(d_z), complex(d_zstar))
    return WirtingerPair(d_z, d_zstar)


def activation_param_grads(kind, z, delta, params=None, *, dictionary=None, kernel="independent") -> dict:
    """Gradient of the loss w.r.t. one neuron's activation parameters.

    ``delta`` is ``dJ/dh*`` for the neuron output at input ``z``.
    """
    act, params = _neuron_activation(kind, params, dictionary, kernel)
    z = np.asarray(z, dtype=np.complex128).reshape(-1, 1)
    delta = np.asarray(delta, dtype=np.complex128).reshape(-1, 1)
    grads = act.param_grads(z, delta, params)
    out = {}
    for key, g in grads.items():
        g = np.asarray(g)
        out[key] = g.reshape(g.shape[1:]) if g.ndim >= 1 and g.shape[0] == 1 else g
    return out
