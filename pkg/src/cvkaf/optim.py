"""Complex Adagrad, squared-magnitude regularization and the training loop."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import NonFiniteError, Rng
from .network import UNREGULARIZED, Network

__all__ = [
    "Adagrad",
    "TrainingError",
    "regularization_penalty",
    "regularized_loss",
    "add_regularization_grads",
    "sample_minibatch",
    "train",
]

logger = logging.getLogger(__name__)


class TrainingError(RuntimeError):
    """Training produced a non-finite loss or update."""


def _regularized(net: Network):
    for i, name, value in net.parameters():
        if name not in UNREGULARIZED:
            yield i, name, value


def regularization_penalty(net: Network) -> float:
    """Sum of ``|w|**2`` over all regularized parameters (biases and modReLU radius exempt)."""
    return float(sum(np.sum(np.abs(w) ** 2) for _, _, w in _regularized(net)))


def regularized_loss(net: Network, batch_loss: float, lam: float) -> float:
    if lam < 0:
        raise ValueError("regularization strength must be non-negative")
    if lam == 0:
        return float(batch_loss)
    return float(batch_loss) + lam * regularization_penalty(net)


def add_regularization_grads(net: Network, grads: list[dict], lam: float) -> None:
    """Add the gradient of ``lam * |w|**2`` in place.

    That is ``lam * w`` for the conjugate cogradient of a complex parameter
    and ``2 * lam * p`` for the derivative of a real one.
    """
    if lam == 0:
        return
    for i, name, w in _regularized(net):
        scale = 2.0 * lam if net.layers[i].is_real(name) else lam
        grads[i][name] = grads[i][name] + scale * w


@dataclass
class Adagrad:
    """Per-parameter step ``lr / (sqrt(sum |g|**2) + epsilon)``.

    Complex parameters move along the conjugate cogradient, real ones along
    their ordinary gradient. One accumulator per scalar parameter.
    """

    lr: float = 0.01
    epsilon: float = 1e-8
    accumulators: dict = field(default_factory=dict)

    def step(self, net: Network, grads: list[dict]) -> None:
        updates = []
        for i, name, w in net.parameters():
            g = grads[i][name]
            if not np.all(np.isfinite(g)):
                raise NonFiniteError(f"non-finite gradient for layer {i} parameter {name!r}")
            acc = self.accumulators.get((i, name))
            if acc is None:
                acc = self.accumulators[(i, name)] = np.zeros(np.shape(w))
            acc += np.abs(g) ** 2
            denom = np.sqrt(acc) + self.epsilon
            upd = self.lr * np.divide(g, denom, out=np.zeros_like(g), where=denom > 0)
            if not np.all(np.isfinite(upd)):
                raise NonFiniteError(f"non-finite update for layer {i} parameter {name!r}")
            updates.append((w, upd))
        for w, upd in updates:
            w -= upd
        for layer in net.layers:
            layer.activation.project(layer.params)


def sample_minibatch(rng: Rng, n_samples: int, size: int = 40) -> np.ndarray:
    """Indices of ``size`` samples drawn uniformly with replacement."""
    if n_samples < 1:
        raise ValueError("cannot sample from an empty dataset")
    return rng.integers(n_samples, size)


def train(
    net: Network,
    X,
    y,
    *,
    iterations: int = 10000,
    lr: float = 0.01,
    epsilon: float = 1e-8,
    batch_size: int = 40,
    lam: float = 0.0,
    rng: Rng | int = 0,
    optimizer: Adagrad | None = None,
) -> np.ndarray:
    """Mini-batch Adagrad training in place; returns the per-iteration loss curve.

    The curve holds the regularized batch loss measured before each update.
    """
    rng = rng if isinstance(rng, Rng) else Rng(rng)
    X = np.asarray(X, dtype=np.complex128)
    y = np.asarray(y)
    opt = optimizer or Adagrad(lr, epsilon)
    curve = np.empty(iterations)
    for it in range(iterations):
        idx = sample_minibatch(rng, X.shape[0], batch_size)
        try:
            loss, grads = net.loss_and_grads(X[idx], y[idx])
            loss = regularized_loss(net, loss, lam)
            if not np.isfinite(loss):
                raise NonFiniteError("loss is not finite")
            add_regularization_grads(net, grads, lam)
            opt.step(net, grads)
        except (NonFiniteError, ArithmeticError) as exc:
            raise TrainingError(f"training aborted at iteration {it}: {exc}") from exc
        curve[it] = loss
    return curve
