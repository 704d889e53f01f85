"""Dataset containers with named, disjoint splits."""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["RegressionDataset", "ClassificationDataset", "export_csv"]


def _fingerprint(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(a)
        h.update(str(a.dtype).encode())
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


@dataclass
class _Dataset:
    inputs: np.ndarray
    splits: dict = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for name, idx in self.splits.items():
            idx = np.asarray(idx, dtype=np.int64)
            overlap = seen.intersection(idx.tolist())
            if overlap:
                raise ValueError(f"split {name!r} overlaps another split at {len(overlap)} indices")
            seen.update(idx.tolist())
            self.splits[name] = idx

    def __len__(self):
        return self.inputs.shape[0]

    def indices(self, split: str) -> np.ndarray:
        return self.splits[split]


@dataclass
class RegressionDataset(_Dataset):
    """Complex inputs ``(n, dim)`` and complex targets ``(n,)``."""

    targets: np.ndarray = None

    def subset(self, split: str):
        idx = self.splits[split]
        return self.inputs[idx], self.targets[idx]

    def with_inputs(self, inputs) -> "RegressionDataset":
        return RegressionDataset(inputs, dict(self.splits), self.targets)

    def fingerprint(self) -> str:
        return _fingerprint(self.inputs, self.targets, *self.splits.values())


@dataclass
class ClassificationDataset(_Dataset):
    """Complex inputs ``(n, dim)`` and integer labels ``(n,)``."""

    labels: np.ndarray = None

    def subset(self, split: str):
        idx = self.splits[split]
        return self.inputs[idx], self.labels[idx]

    def with_inputs(self, inputs) -> "ClassificationDataset":
        return ClassificationDataset(inputs, dict(self.splits), self.labels)

    def fingerprint(self) -> str:
        return _fingerprint(self.inputs, self.labels, *self.splits.values())


def export_csv(dataset, path) -> Path:
    """Write one row per sample: split, ``x{j}_re``/``x{j}_im`` ..., then target or label."""
    path = Path(path)
    n, dim = dataset.inputs.shape
    split_of = np.full(n, "", dtype=object)
    for name, idx in dataset.splits.items():
        split_of[idx] = name
    header = ["split"] + [f"x{j}_{part}" for j in range(dim) for part in ("re", "im")]
    regression = isinstance(dataset, RegressionDataset)
    header += ["y_re", "y_im"] if regression else ["label"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(n):
            row = [split_of[i]]
            for x in dataset.inputs[i]:
                row += [repr(float(x.real)), repr(float(x.imag))]
            if regression:
                y = dataset.targets[i]
                row += [repr(float(y.real)), repr(float(y.imag))]
            else:
                row.append(int(dataset.labels[i]))
            writer.writerow(row)
    return path
