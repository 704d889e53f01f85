"""Analytic-vs-finite-difference gradient comparison for whole networks."""

from __future__ import annotations

import numpy as np

from .activations import ActivationKind, make_activation
from .core import Rng, finite_difference_cogradient, finite_difference_gradient
from .network import Network
from .optim import add_regularization_grads, regularized_loss

__all__ = ["gradient_errors", "check_kind", "run_gradcheck", "GRADCHECK_TOL", "HEAD_SHAPES"]

GRADCHECK_TOL = 1e-4
# (input, hidden, output) widths per head
HEAD_SHAPES = {"regression": (3, 5, 1), "softmax": (4, 5, 3)}


def gradient_errors(net: Network, X, targets, lam: float = 0.0, h: float = 1e-5) -> dict:
    """Relative error of every parameter tensor's analytic gradient.

    The error of a tensor is ``max|g_analytic - g_fd| / max|g_fd|`` (absolute
    when the finite-difference gradient vanishes).
    """
    _, grads = net.loss_and_grads(X, targets)
    add_regularization_grads(net, grads, lam)
    errors = {}
    for i, name, value in net.parameters():
        layer = net.layers[i]

        def loss(w, value=value):
            saved = value.copy()
            value[...] = w
            try:
                return regularized_loss(net, net.loss(net(X), targets), lam)
            finally:
                value[...] = saved

        if layer.is_real(name):
            fd = finite_difference_gradient(loss, value, h)
        else:
            fd = finite_difference_cogradient(loss, value, h)
        scale = np.max(np.abs(fd))
        diff = np.max(np.abs(np.asarray(grads[i][name]) - fd))
        errors[(i, name)] = float(diff / scale) if scale > 0 else float(diff)
    return errors


def _random_problem(kind, head, seed, kernel="independent"):
    rng = Rng(seed)
    n_in, n_hidden, n_out = HEAD_SHAPES[head]
    act = make_activation(kind, kernel=kernel)
    net = Network.build([n_in, n_hidden, n_out], act, rng, head=head)
    # move activation parameters away from their deterministic initial values
    for layer in net.layers:
        if "radius" in layer.params:
            layer.params["radius"][...] = 0.5 * rng.normal(layer.params["radius"].shape)
        if "gamma" in layer.params:
            layer.params["gamma"][...] *= 1.0 + 0.2 * rng.uniform()
    batch = 4
    X = rng.complex_normal((batch, n_in), scale=0.5)
    if head == "regression":
        targets = rng.complex_normal((batch, n_out))
    else:
        targets = rng.integers(n_out, batch)
    return net, X, targets


def check_kind(kind, head: str, seed: int, kernel="independent", corrupt: bool = False, lam: float = 0.0) -> float:
    """Largest relative gradient error for one activation kind, head and seed."""
    net, X, targets = _random_problem(kind, head, seed, kernel)
    if corrupt:
        net.layers[0].activation.derivative_scale = 1.01
    return max(gradient_errors(net, X, targets, lam).values())


def run_gradcheck(seeds=range(10), corrupt=None, lam: float = 1e-2) -> dict:
    """Max relative error per activation kind over both heads and all seeds.

    The complex KAF is checked with both the complex Gaussian and the
    independent kernel. ``corrupt`` names an activation whose backpropagated
    derivative is deliberately perturbed.
    """
    corrupt = ActivationKind.parse(corrupt) if corrupt else None
    report = {}
    for kind in ActivationKind:
        kernels = ("complex_gaussian", "independent") if kind is ActivationKind.COMPLEX_KAF else ("independent",)
        worst = 0.0
        for kernel in kernels:
            for head in HEAD_SHAPES:
                for seed in seeds:
                    err = check_kind(kind, head, seed, kernel, corrupt=kind is corrupt, lam=lam)
                    worst = max(worst, err)
        report[kind.value] = worst
    return report
