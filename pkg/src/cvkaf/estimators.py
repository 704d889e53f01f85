"""scikit-learn compatible complex-valued network estimators."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .activations import ActivationKind, make_activation
from .core import Rng
from .metrics import r_squared
from .network import Network, magnitude_softmax
from .optim import train
from .validation import check_complex_array, check_complex_X_y, check_n_features, check_positive

__all__ = ["ComplexMLPRegressor", "ComplexMLPClassifier"]


class _BaseComplexMLP(BaseEstimator):
    _head = "regression"

    def __init__(
        self,
        hidden_layer_sizes=(10,),
        activation="split_kaf",
        *,
        kernel="independent",
        dict_size=None,
        dict_range=(-2.0, 2.0),
        kaf_init_std=0.3,
        modrelu_init=0.1,
        real_valued=False,
        alpha=1e-4,
        lr=0.01,
        epsilon=1e-8,
        max_iter=10000,
        batch_size=40,
        random_state=0,
    ):
        self.hidden_layer_sizes = hidden_layer_sizes
        self.activation = activation
        self.kernel = kernel
        self.dict_size = dict_size
        self.dict_range = dict_range
        self.kaf_init_std = kaf_init_std
        self.modrelu_init = modrelu_init
        self.real_valued = real_valued
        self.alpha = alpha
        self.lr = lr
        self.epsilon = epsilon
        self.max_iter = max_iter
        self.batch_size = batch_size
        self.random_state = random_state

    def _validate_params(self):
        ActivationKind.parse(self.activation)
        check_positive(self.alpha, "alpha", allow_zero=True)
        check_positive(self.lr, "lr")
        check_positive(self.epsilon, "epsilon", allow_zero=True)
        check_positive(self.max_iter, "max_iter", integer=True, allow_zero=True)
        check_positive(self.batch_size, "batch_size", integer=True)
        for n in self.hidden_layer_sizes:
            check_positive(n, "hidden layer size", integer=True)

    def _inputs(self, X):
        # the real-valued baseline sees real and imaginary parts as separate real features
        if self.real_valued:
            return np.hstack([X.real, X.imag]) + 0j
        return X

    def _build(self, n_in, n_out, rng):
        act = make_activation(
            self.activation,
            dict_size=self.dict_size,
            dict_range=tuple(self.dict_range),
            kernel=self.kernel,
            kaf_init_std=self.kaf_init_std,
            modrelu_init=self.modrelu_init,
        )
        sizes = [n_in, *self.hidden_layer_sizes, n_out]
        return Network.build(sizes, act, rng, head=self._head, real_valued=self.real_valued)

    def _fit_network(self, X, targets, n_out):
        rng = Rng(self.random_state if self.random_state is not None else 0)
        Xi = self._inputs(X)
        self.network_ = self._build(Xi.shape[1], n_out, rng)
        self.loss_curve_ = train(
            self.network_,
            Xi,
            targets,
            iterations=self.max_iter,
            lr=self.lr,
            epsilon=self.epsilon,
            batch_size=self.batch_size,
            lam=self.alpha,
            rng=rng,
        )
        self.n_iter_ = self.max_iter
        return self

    def _forward(self, X):
        check_is_fitted(self, "network_")
        X = check_complex_array(X)
        check_n_features(self, X, reset=False)
        return self.network_(self._inputs(X))


class ComplexMLPRegressor(RegressorMixin, _BaseComplexMLP):
    """Complex-valued multilayer perceptron for (multi-output) regression.

    Trained on the mean squared error magnitude with mini-batch complex
    Adagrad. ``hidden_layer_sizes=()`` gives a linear model.

    With ``real_valued=True`` the same engine runs as a real network: inputs
    are split into real and imaginary parts, weights stay real, and each
    complex target is predicted by two real outputs. Use it with the
    ``real_tanh`` or ``real_relu`` activations.
    """

    def fit(self, X, y):
        self._validate_params()
        X, y = check_complex_X_y(X, y)
        check_n_features(self, X, reset=True)
        self._y_1d = y.ndim == 1
        Y = y[:, None] if self._y_1d else y
        self.n_outputs_ = Y.shape[1]
        if self.real_valued:
            targets, n_out = np.hstack([Y.real, Y.imag]) + 0j, 2 * self.n_outputs_
        else:
            targets, n_out = Y, self.n_outputs_
        return self._fit_network(X, targets, n_out)

    def predict(self, X):
        out = self._forward(X)
        if self.real_valued:
            k = self.n_outputs_
            out = out[:, :k].real + 1j * out[:, k:].real
        return out[:, 0] if self._y_1d else out

    def score(self, X, y, sample_weight=None):
        """Complex coefficient of determination of the prediction."""
        return r_squared(np.asarray(y), self.predict(X))


class ComplexMLPClassifier(ClassifierMixin, _BaseComplexMLP):
    """Complex-valued multilayer perceptron classifier.

    Class probabilities are the softmax of the squared output magnitudes;
    training minimizes the regularized cross-entropy.
    """

    _head = "softmax"

    def __init__(
        self,
        hidden_layer_sizes=(100, 100, 100),
        activation="split_kaf",
        *,
        kernel="independent",
        dict_size=None,
        dict_range=(-2.0, 2.0),
        kaf_init_std=0.3,
        modrelu_init=0.1,
        real_valued=False,
        alpha=1e-4,
        lr=0.01,
        epsilon=1e-8,
        max_iter=20000,
        batch_size=40,
        random_state=0,
    ):
        super().__init__(
            hidden_layer_sizes,
            activation,
            kernel=kernel,
            dict_size=dict_size,
            dict_range=dict_range,
            kaf_init_std=kaf_init_std,
            modrelu_init=modrelu_init,
            real_valued=real_valued,
            alpha=alpha,
            lr=lr,
            epsilon=epsilon,
            max_iter=max_iter,
            batch_size=batch_size,
            random_state=random_state,
        )

    def fit(self, X, y):
        self._validate_params()
        X, y = check_complex_X_y(X, y, labels=True)
        check_n_features(self, X, reset=True)
        self.classes_, encoded = np.unique(y, return_inverse=True)
        if self.classes_.size < 2:
            raise ValueError("need at least two classes")
        return self._fit_network(X, encoded, self.classes_.size)

    def predict_proba(self, X):
        return magnitude_softmax(self._forward(X))

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]
