"""Fully connected complex-valued networks trained with CR-calculus.

Backpropagation carries ``delta = dJ/dh*`` for every layer output ``h``.
Through an activation with Wirtinger pair ``(g_z, g_zs)``::

    dJ/ds* = conj(delta) * g_zs + delta * conj(g_z)

and through ``s = W h + b``::

    dJ/dW* = delta_s h^H,   dJ/db* = delta_s,   dJ/dh* = W^H delta_s

Losses are averaged over the batch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .activations import Activation, Identity, activation_from_config, make_activation
from .core import NonFiniteError, Rng

__all__ = [
    "Layer",
    "Network",
    "squared_loss",
    "magnitude_softmax",
    "cross_entropy",
    "init_weights",
    "save_network",
    "load_network",
    "CHECKPOINT_VERSION",
]

CHECKPOINT_VERSION = 1
HEADS = ("regression", "softmax")
PROB_FLOOR = 1e-12
# parameter names never regularized: layer biases and the modReLU radius
UNREGULARIZED = frozenset({"b", "radius"})


def squared_loss(y, y_hat):
    """``|y - y_hat|**2``."""
    e = np.subtract(y, y_hat)
    return np.real(e * np.conj(e))


def magnitude_softmax(h, axis=-1):
    """Softmax of the squared magnitudes ``|h_n|**2`` (max-shifted)."""
    energy = np.abs(np.asarray(h)) ** 2
    energy = energy - energy.max(axis=axis, keepdims=True)
    e = np.exp(energy)
    return e / e.sum(axis=axis, keepdims=True)


def cross_entropy(p, label):
    """``-log p[label]`` with the probability clamped at 1e-12."""
    p = np.asarray(p)
    if p.ndim == 1:
        return float(-np.log(max(p[label], PROB_FLOOR)))
    picked = p[np.arange(p.shape[0]), np.asarray(label)]
    return -np.log(np.maximum(picked, PROB_FLOOR))


def init_weights(fan_out: int, fan_in: int, rng: Rng, real_valued: bool = False) -> np.ndarray:
    """Random weights with variance ``1 / fan_in`` per entry.

    Complex weights have Rayleigh magnitude (scale ``1/sqrt(2 fan_in)``) and
    uniform phase, i.e. independent normal parts with that standard deviation.
    """
    if real_valued:
        return rng.normal((fan_out, fan_in)) / np.sqrt(fan_in) + 0j
    return rng.complex_normal((fan_out, fan_in), scale=1.0 / np.sqrt(2.0 * fan_in))


@dataclass
class Layer:
    """``h = g(W h_prev + b)``; ``params`` holds W, b and activation parameters."""

    activation: Activation
    params: dict = field(default_factory=dict)

    @property
    def W(self) -> np.ndarray:
        return self.params["W"]

    @property
    def b(self) -> np.ndarray:
        return self.params["b"]

    @property
    def n_in(self) -> int:
        return self.W.shape[1]

    @property
    def n_out(self) -> int:
        return self.W.shape[0]

    def is_real(self, name: str) -> bool:
        return name in self.activation.real_params


class Network:
    """Stack of fully connected complex layers with a regression or softmax head."""

    def __init__(self, layers: list[Layer], head: str = "regression", real_valued: bool = False):
        if not layers:
            raise ValueError("a network needs at least one layer")
        if head not in HEADS:
            raise ValueError(f"unknown head {head!r}; expected one of {HEADS}")
        for prev, nxt in zip(layers, layers[1:]):
            if prev.n_out != nxt.n_in:
                raise ValueError(f"layer shapes do not chain: {prev.n_out} -> {nxt.n_in}")
        self.layers = layers
        self.head = head
        self.real_valued = real_valued

    @classmethod
    def build(
        cls,
        sizes,
        activation: Activation,
        rng: Rng,
        head: str = "regression",
        output_activation: Activation | None = None,
        real_valued: bool = False,
    ) -> "Network":
        """Network with layer widths ``sizes = [n_in, hidden..., n_out]``.

        Hidden layers share ``activation`` (and therefore its kernel
        dictionary); each layer gets its own activation parameters.
        """
        sizes = [int(n) for n in sizes]
        if len(sizes) < 2:
            raise ValueError("sizes needs an input and an output width")
        output_activation = output_activation or Identity()
        layers = []
        for i, (n_in, n_out) in enumerate(zip(sizes[:-1], sizes[1:])):
            act = output_activation if i == len(sizes) - 2 else activation
            params = {
                "W": init_weights(n_out, n_in, rng, real_valued),
                "b": np.zeros(n_out, dtype=np.complex128),
            }
            params.update(act.init_params(n_out, rng))
            layers.append(Layer(act, params))
        return cls(layers, head=head, real_valued=real_valued)

    @property
    def input_dim(self) -> int:
        return self.layers[0].n_in

    @property
    def output_dim(self) -> int:
        return self.layers[-1].n_out

    @property
    def sizes(self) -> list[int]:
        return [self.input_dim] + [layer.n_out for layer in self.layers]

    def parameters(self) -> Iterator[tuple[int, str, np.ndarray]]:
        for i, layer in enumerate(self.layers):
            for name, value in layer.params.items():
                yield i, name, value

    def n_parameters(self) -> int:
        """Number of adaptable scalars (a complex entry counts once)."""
        return sum(v.size for _, _, v in self.parameters())

    # -- propagation -------------------------------------------------------

    def forward(self, X):
        """Return the network output and the cache needed by :meth:`backward`."""
        h = np.asarray(X, dtype=np.complex128)
        if h.ndim != 2 or h.shape[1] != self.input_dim:
            raise ValueError(f"expected input of shape (n, {self.input_dim}), got {h.shape}")
        cache = []
        for layer in self.layers:
            s = h @ layer.W.T + layer.b
            h_next, ctx = layer.activation.forward(s, layer.params)
            cache.append((h, ctx))
            h = h_next
        return h, cache

    def __call__(self, X):
        return self.forward(X)[0]

    def predict_proba(self, X):
        if self.head != "softmax":
            raise ValueError("predict_proba needs a softmax head")
        return magnitude_softmax(self(X))

    def loss(self, out, targets) -> float:
        """Mean batch loss (squared error or cross-entropy)."""
        if self.head == "regression":
            y = _as_targets(targets, out.shape)
            return float(squared_loss(y, out).sum(axis=1).mean())
        # log-sum-exp form: exact for saturated outputs where a clamp would flatten the loss
        energy = np.abs(out) ** 2
        top = energy.max(axis=1)
        lse = top + np.log(np.exp(energy - top[:, None]).sum(axis=1))
        picked = energy[np.arange(out.shape[0]), np.asarray(targets)]
        return float((lse - picked).mean())

    def output_delta(self, out, targets):
        n = out.shape[0]
        if self.head == "regression":
            return (out - _as_targets(targets, out.shape)) / n
        p = magnitude_softmax(out)
        p[np.arange(n), np.asarray(targets)] -= 1.0
        return p * out / n

    def backward(self, cache, out, targets) -> list[dict]:
        """Conjugate cogradients (real gradients for real parameters) of the mean loss."""
        delta = self.output_delta(out, targets)
        grads: list[dict] = [None] * len(self.layers)
        for i in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[i]
            h_in, ctx = cache[i]
            delta_s, act_grads = layer.activation.backward(ctx, delta, layer.params)
            g = {"W": delta_s.T @ np.conj(h_in), "b": delta_s.sum(axis=0)}
            g.update(act_grads)
            grads[i] = g
            if i:
                delta = delta_s @ np.conj(layer.W)
        for g in grads:
            for name, value in g.items():
                if not np.all(np.isfinite(value)):
                    raise NonFiniteError(f"non-finite gradient for parameter {name!r}")
        return grads

    def loss_and_grads(self, X, targets):
        out, cache = self.forward(X)
        return self.loss(out, targets), self.backward(cache, out, targets)

    def copy(self) -> "Network":
        layers = [Layer(l.activation, {k: v.copy() for k, v in l.params.items()}) for l in self.layers]
        return Network(layers, self.head, self.real_valued)


def _as_targets(targets, shape):
    y = np.asarray(targets, dtype=np.complex128)
    if y.ndim == 1:
        y = y[:, None]
    if y.shape != shape:
        raise ValueError(f"targets of shape {y.shape} do not match outputs {shape}")
    return y


# -- checkpoints ---------------------------------------------------------------


def save_network(net: Network, path) -> Path:
    """Write a versioned ``.npz`` checkpoint (JSON header + parameter arrays)."""
    path = Path(path)
    header = {
        "format": "cvkaf-network",
        "version": CHECKPOINT_VERSION,
        "head": net.head,
        "real_valued": net.real_valued,
        "sizes": net.sizes,
        "activations": [layer.activation.config() for layer in net.layers],
        "parameters": [sorted(layer.params) for layer in net.layers],
    }
    arrays = {f"layer{i}.{name}": value for i, name, value in net.parameters()}
    with open(path, "wb") as fh:
        np.savez(fh, header=np.array(json.dumps(header)), **arrays)
    return path


def load_network(path) -> Network:
    with np.load(path, allow_pickle=False) as data:
        header = json.loads(str(data["header"]))
        if header.get("format") != "cvkaf-network":
            raise ValueError(f"{path} is not a network checkpoint")
        if header["version"] > CHECKPOINT_VERSION:
            raise ValueError(f"checkpoint version {header['version']} is newer than supported")
        shared: dict[str, Activation] = {}
        layers = []
        for i, (act_cfg, names) in enumerate(zip(header["activations"], header["parameters"])):
            key = json.dumps(act_cfg, sort_keys=True)
            if key not in shared:
                shared[key] = activation_from_config(act_cfg)
            params = {name: np.array(data[f"layer{i}.{name}"]) for name in names}
            layers.append(Layer(shared[key], params))
    return Network(layers, head=header["head"], real_valued=header["real_valued"])


def make_network(
    sizes,
    activation="split_kaf",
    rng: Rng | None = None,
    head="regression",
    real_valued=False,
    **activation_kwargs,
) -> Network:
    """Shorthand for :meth:`Network.build` from an activation name."""
    act = make_activation(activation, **activation_kwargs)
    return Network.build(sizes, act, rng or Rng(0), head=head, real_valued=real_valued)
