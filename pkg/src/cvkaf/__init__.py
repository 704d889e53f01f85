"""Complex-valued neural networks with kernel activation functions."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree without installation
    __version__ = "0.1.0"

from .activations import ActivationKind, make_activation
from .core import NonFiniteError, Rng, WirtingerPair
from .estimators import ComplexMLPClassifier, ComplexMLPRegressor
from .kernels import KernelDictionary, KernelKind
from .network import Network, load_network, save_network
from .optim import Adagrad, TrainingError, train

__all__ = [
    "__version__",
    "ActivationKind",
    "Adagrad",
    "ComplexMLPClassifier",
    "ComplexMLPRegressor",
    "KernelDictionary",
    "KernelKind",
    "Network",
    "NonFiniteError",
    "Rng",
    "TrainingError",
    "WirtingerPair",
    "load_network",
    "make_activation",
    "save_network",
    "train",
]
