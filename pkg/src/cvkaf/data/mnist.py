"""MNIST IDX reader and 2-D DFT coefficient features."""

from __future__ import annotations

import gzip
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .datasets import ClassificationDataset

__all__ = [
    "IDXFormatError",
    "read_idx",
    "write_idx",
    "load_mnist",
    "dft_matrix",
    "dft2",
    "FFTFeatureSelector",
    "mnist_fft_pipeline",
    "MNIST_FILES",
]

IMAGE_MAGIC = 2051
LABEL_MAGIC = 2049
MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}


class IDXFormatError(ValueError):
    """Malformed IDX file."""


def _open(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def read_idx(path) -> np.ndarray:
    """Read an unsigned-byte IDX file (images: magic 2051, labels: magic 2049)."""
    with _open(path) as fh:
        raw = fh.read()
    if len(raw) < 8:
        raise IDXFormatError(f"{path}: file too short for an IDX header")
    magic = int.from_bytes(raw[:4], "big")
    if magic == IMAGE_MAGIC:
        ndim = 3
    elif magic == LABEL_MAGIC:
        ndim = 1
    else:
        raise IDXFormatError(f"{path}: bad magic number {magic}")
    header = 4 + 4 * ndim
    if len(raw) < header:
        raise IDXFormatError(f"{path}: truncated header")
    dims = [int.from_bytes(raw[4 + 4 * k : 8 + 4 * k], "big") for k in range(ndim)]
    expected = int(np.prod(dims))
    if len(raw) - header != expected:
        raise IDXFormatError(f"{path}: expected {expected} data bytes for shape {dims}, found {len(raw) - header}")
    return np.frombuffer(raw, dtype=np.uint8, offset=header).reshape(dims)


def write_idx(array, path) -> Path:
    array = np.asarray(array, dtype=np.uint8)
    magic = {3: IMAGE_MAGIC, 1: LABEL_MAGIC}.get(array.ndim)
    if magic is None:
        raise ValueError("IDX writer supports 1-D labels or 3-D images")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(magic.to_bytes(4, "big"))
        for d in array.shape:
            fh.write(int(d).to_bytes(4, "big"))
        fh.write(array.tobytes())
    return path


def _find(directory: Path, stem: str) -> Path:
    for candidate in (directory / stem, directory / f"{stem}.gz"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"{stem} not found in {directory}")


def load_mnist(directory):
    """Return ``(train_images, train_labels, test_images, test_labels)``."""
    directory = Path(directory)
    arrays = {key: read_idx(_find(directory, stem)) for key, stem in MNIST_FILES.items()}
    for split in ("train", "test"):
        n_img, n_lab = arrays[f"{split}_images"].shape[0], arrays[f"{split}_labels"].shape[0]
        if n_img != n_lab:
            raise IDXFormatError(f"{split}: {n_img} images but {n_lab} labels")
    return arrays["train_images"], arrays["train_labels"], arrays["test_images"], arrays["test_labels"]


def dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n)


def dft2(images) -> np.ndarray:
    """Unnormalized 2-D DFT ``W X W^T`` of each image in a ``(..., n, n)`` stack."""
    images = np.asarray(images, dtype=np.float64)
    W = dft_matrix(images.shape[-1])
    return W @ images @ W.T


class FFTFeatureSelector(TransformerMixin, BaseEstimator):
    """Keep the ``keep`` DFT coefficients with the largest mean magnitude.

    Significance is measured on the images passed to ``fit`` only. Ties keep
    row-major order.

    Parameters
    ----------
    keep : int, default=100
        Number of coefficients kept per image.
    scale : float, default=1/255
        Pixel scaling applied before the transform.
    chunk_size : int, default=5000
        Images transformed at a time (bounds memory).
    """

    def __init__(self, keep: int = 100, scale: float = 1.0 / 255.0, chunk_size: int = 5000):
        self.keep = keep
        self.scale = scale
        self.chunk_size = chunk_size

    def _chunks(self, images):
        for start in range(0, images.shape[0], self.chunk_size):
            yield dft2(images[start : start + self.chunk_size] * self.scale)

    def fit(self, images, y=None):
        images = np.asarray(images)
        if images.ndim != 3 or images.shape[1] != images.shape[2]:
            raise ValueError(f"expected a stack of square images, got shape {images.shape}")
        total = np.zeros(images.shape[1:])
        for F in self._chunks(images):
            total += np.abs(F).sum(axis=0)
        self.significance_ = total / images.shape[0]
        n_coef = self.significance_.size
        if not 1 <= self.keep <= n_coef:
            raise ValueError(f"keep must be in [1, {n_coef}], got {self.keep}")
        order = np.argsort(-self.significance_.ravel(), kind="stable")
        self.positions_ = order[: self.keep]
        self.image_shape_ = images.shape[1:]
        return self

    def transform(self, images):
        check_is_fitted(self, "positions_")
        images = np.asarray(images)
        if images.shape[1:] != self.image_shape_:
            raise ValueError(f"expected images of shape {self.image_shape_}, got {images.shape[1:]}")
        out = [F.reshape(F.shape[0], -1)[:, self.positions_] for F in self._chunks(images)]
        return np.concatenate(out) if out else np.empty((0, self.keep), dtype=np.complex128)

    def transform_record(self) -> dict:
        check_is_fitted(self, "positions_")
        return {"positions": self.positions_.tolist(), "significance": self.significance_.ravel()[self.positions_].tolist()}


def mnist_fft_pipeline(train_images, train_labels, test_images, test_labels, keep: int = 100):
    """Complex DFT features for train and test images, ranked on the training set.

    Returns ``(dataset, selector)``; the dataset's splits are ``train`` and ``test``.
    """
    for name, imgs, labs in (("train", train_images, train_labels), ("test", test_images, test_labels)):
        if len(imgs) != len(labs):
            raise ValueError(f"{name}: {len(imgs)} images but {len(labs)} labels")
    selector = FFTFeatureSelector(keep).fit(train_images)
    X = np.concatenate([selector.transform(train_images), selector.transform(test_images)])
    labels = np.concatenate([np.asarray(train_labels), np.asarray(test_labels)]).astype(np.int64)
    n_train = len(train_labels)
    splits = {"train": np.arange(n_train), "test": np.arange(n_train, labels.size)}
    return ClassificationDataset(X, splits, labels), selector
