"""Benchmark experiment runner: configuration, repetitions and run manifests."""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import platform
from dataclasses import MISSING, asdict, dataclass, field, fields
from functools import partial
from pathlib import Path

import numpy as np
import tomli
from joblib import Parallel, delayed

from . import __version__
from .activations import ActivationKind
from .data import (
    ChannelConfig,
    load_mnist,
    load_wind_csv,
    make_channel_dataset,
    make_wind_dataset,
    mnist_fft_pipeline,
    multitone_series,
    preprocess_minmax,
    synthetic_wind_series,
)
from .estimators import ComplexMLPClassifier, ComplexMLPRegressor
from .kernels import KernelKind
from .metrics import MetricsRecord, accuracy, mean_std, mse_db, r_squared
from .optim import TrainingError

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "RunManifest",
    "MODELS",
    "TASKS",
    "MODEL_SEED_OFFSET",
    "load_config",
    "build_estimator",
    "run_channel",
    "run_wind",
    "run_mnist",
    "run_experiment",
    "task_dataset",
    "write_run",
]

logger = logging.getLogger(__name__)

TASKS = ("channel", "wind", "mnist")
MODELS = ("lin", "rnn_2r", "cvnn_fixed", "modrelu", "kaf_split", "kaf_complex")
WIND_SOURCES = ("csv", "synthetic", "multitone")

# the model stream of repetition r is seeded with seed + r + MODEL_SEED_OFFSET,
# keeping it apart from the data stream (seed + r)
MODEL_SEED_OFFSET = 1_000_003

_FIXED_ACTIVATIONS = {"split_tanh", "split_relu", "amp", "pa_tanh", "complex_tanh", "crelu", "cardioid"}
_MODEL_ACTIVATIONS = {
    "lin": ({"identity"}, "identity"),
    "rnn_2r": ({"real_tanh", "real_relu"}, "real_tanh"),
    "cvnn_fixed": (_FIXED_ACTIVATIONS, "split_tanh"),
    "modrelu": ({"modrelu"}, "modrelu"),
    "kaf_split": ({"split_kaf"}, "split_kaf"),
    "kaf_complex": ({"complex_kaf"}, "complex_kaf"),
}
_TASK_DEFAULTS = {
    "channel": {"hidden": [10], "lambda": 1e-4, "iterations": 10000, "repetitions": 15},
    "wind": {"iterations": 10000, "repetitions": 5},
    "mnist": {"hidden": [100, 100, 100], "lambda": 1e-4, "iterations": 20000, "repetitions": 1},
}
# keys that only make sense for one task
_TASK_KEYS = {
    "channel": {"rho", "n_samples", "snr_db", "hidden", "lambda"},
    "wind": {"wind_source", "wind_csv", "hidden_grid", "lambda_grid"},
    "mnist": {"mnist_dir", "hidden", "lambda"},
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    """Every setting of one benchmark run.

    ``None`` marks a value resolved from the task and model by ``resolve``.
    """

    task: str = "channel"
    model: str = "kaf_split"
    activation: str | None = None
    kernel: str = "independent"
    hidden: list | None = None
    hidden_grid: list | None = None
    dict_size: int | None = None
    dict_range: list = field(default_factory=lambda: [-2.0, 2.0])
    kaf_init_std: float = 0.3
    modrelu_init: float = 0.1
    lr: float = 0.01
    epsilon: float = 1e-8
    iterations: int | None = None
    batch_size: int = 40
    lam: float | None = None
    lambda_grid: list | None = None
    seed: int = 0
    repetitions: int | None = None
    rho: float = math.sqrt(2) / 2
    n_samples: int = 2000
    snr_db: float = 13.0
    wind_source: str = "csv"
    wind_csv: str | None = None
    mnist_dir: str | None = None
    workers: int = 0
    out: str = "runs/latest"

    # "lambda" is a keyword in Python, so the field is named ``lam``
    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        raw = dict(raw)
        if "lam" in raw:
            raise ConfigError("unknown config key 'lam' (use 'lambda')")
        if "lambda" in raw:
            raw["lam"] = raw.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        return cls(**raw).resolve()

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out

    def resolve(self) -> "ExperimentConfig":
        """Validate and fill task and model dependent defaults."""
        if self.task not in TASKS:
            raise ConfigError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")

        foreign = set()
        for task, keys in _TASK_KEYS.items():
            if task != self.task:
                foreign |= keys - _TASK_KEYS[self.task]
        # a key set away from its default on the wrong task is almost surely a mistake
        given = {"lambda" if f.name == "lam" else f.name for f in fields(self) if getattr(self, f.name) != _default(f)}
        misplaced = sorted(given & foreign)
        if misplaced:
            raise ConfigError(f"key(s) {', '.join(misplaced)} do not apply to task {self.task!r}")

        allowed, default_act = _MODEL_ACTIVATIONS[self.model]
        if self.activation is None:
            self.activation = default_act
        try:
            ActivationKind.parse(self.activation)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.activation not in allowed:
            raise ConfigError(f"model {self.model!r} accepts activation(s) {sorted(allowed)}, got {self.activation!r}")
        try:
            kernel = KernelKind.parse(self.kernel)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.model == "kaf_complex" and kernel not in (KernelKind.COMPLEX_GAUSSIAN, KernelKind.INDEPENDENT):
            raise ConfigError(f"kaf_complex needs kernel complex_gaussian or independent, got {self.kernel!r}")

        defaults = _TASK_DEFAULTS[self.task]
        for key in ("iterations", "repetitions"):
            if getattr(self, key) is None:
                setattr(self, key, defaults[key])
        if self.task == "wind":
            if self.hidden_grid is None:
                self.hidden_grid = [[]] if self.model == "lin" else [[w, w] for w in (10, 20, 30)]
            if self.lambda_grid is None:
                self.lambda_grid = [1e-2, 1e-3, 1e-4]
            self.hidden_grid = [self._sizes(h, "hidden_grid entry") for h in self._list(self.hidden_grid, "hidden_grid")]
            self.lambda_grid = [self._nonneg(v, "lambda_grid entry") for v in self._list(self.lambda_grid, "lambda_grid")]
            if self.model == "lin" and any(self.hidden_grid):
                raise ConfigError("model 'lin' has no hidden layers; hidden_grid must be [[]]")
        else:
            if self.hidden is None:
                self.hidden = [] if self.model == "lin" else list(defaults["hidden"])
            self.hidden = self._sizes(self.hidden, "hidden")
            if self.model == "lin" and self.hidden:
                raise ConfigError("model 'lin' has no hidden layers; hidden must be []")
            if self.lam is None:
                self.lam = defaults["lambda"]
            self.lam = self._nonneg(self.lam, "lambda")

        for key in ("iterations", "repetitions", "batch_size", "n_samples", "seed", "workers"):
            value = getattr(self, key)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{key} must be an integer, got {value!r}")
        if self.repetitions < 1 or self.batch_size < 1 or self.iterations < 0 or self.seed < 0 or self.workers < 0:
            raise ConfigError("repetitions and batch_size must be positive; iterations, seed and workers non-negative")
        for key in ("lr", "kaf_init_std"):
            if not self._real(getattr(self, key)) or getattr(self, key) <= 0:
                raise ConfigError(f"{key} must be a positive number, got {getattr(self, key)!r}")
        for key in ("epsilon", "modrelu_init"):
            self._nonneg(getattr(self, key), key)
        if self.dict_size is not None and (not isinstance(self.dict_size, int) or self.dict_size < 2):
            raise ConfigError(f"dict_size must be an integer >= 2, got {self.dict_size!r}")
        rng_ = self._list(self.dict_range, "dict_range")
        if len(rng_) != 2 or not all(self._real(v) for v in rng_) or rng_[0] >= rng_[1]:
            raise ConfigError(f"dict_range must be [lo, hi] with lo < hi, got {self.dict_range!r}")
        self.dict_range = [float(v) for v in rng_]

        if self.task == "channel":
            try:
                ChannelConfig(rho=self.rho, n_samples=self.n_samples, snr_db=self.snr_db)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if self.task == "wind":
            if self.wind_source not in WIND_SOURCES:
                raise ConfigError(f"wind_source must be one of {WIND_SOURCES}, got {self.wind_source!r}")
            if self.wind_source == "csv" and not self.wind_csv:
                raise ConfigError("task 'wind' with wind_source 'csv' needs wind_csv (path to the series)")
        if self.task == "mnist" and not self.mnist_dir:
            raise ConfigError("task 'mnist' needs mnist_dir (directory holding the IDX files)")
        return self

    @staticmethod
    def _real(v) -> bool:
        return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)

    @classmethod
    def _nonneg(cls, v, name):
        if not cls._real(v) or v < 0:
            raise ConfigError(f"{name} must be a non-negative number, got {v!r}")
        return float(v)

    @staticmethod
    def _list(v, name):
        if not isinstance(v, (list, tuple)):
            raise ConfigError(f"{name} must be a list, got {v!r}")
        return list(v)

    @classmethod
    def _sizes(cls, v, name):
        sizes = cls._list(v, name)
        if not all(isinstance(n, int) and not isinstance(n, bool) and n > 0 for n in sizes):
            raise ConfigError(f"{name} must list positive integers, got {v!r}")
        return sizes


def _default(f):
    if f.default_factory is not MISSING:
        return f.default_factory()
    return f.default


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Read a TOML config (or a run manifest's resolved config) and apply overrides.

    Overrides with value ``None`` are ignored.
    """
    raw: dict = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_bytes()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if path.suffix == ".json":
            try:
                doc = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None
            raw = doc.get("config", doc) if isinstance(doc, dict) else None
            if not isinstance(raw, dict):
                raise ConfigError(f"{path}: expected a JSON object")
        else:
            try:
                raw = tomli.loads(text.decode("utf-8"))
            except (tomli.TOMLDecodeError, UnicodeDecodeError) as exc:
                raise ConfigError(f"{path}: {exc}") from None
        # a manifest stores materialized values; drop unset ones so they re-resolve
        raw = {k: v for k, v in raw.items() if v is not None}
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(raw)


# --------------------------------------------------------------------------
# models


def build_estimator(cfg: ExperimentConfig, *, hidden=None, lam=None, seed: int = 0, classifier: bool = False):
    hidden = cfg.hidden if hidden is None else hidden
    cls = ComplexMLPClassifier if classifier else ComplexMLPRegressor
    return cls(
        hidden_layer_sizes=tuple(hidden),
        activation=cfg.activation,
        kernel=cfg.kernel,
        dict_size=cfg.dict_size,
        dict_range=tuple(cfg.dict_range),
        kaf_init_std=cfg.kaf_init_std,
        modrelu_init=cfg.modrelu_init,
        real_valued=cfg.model == "rnn_2r",
        alpha=cfg.lam if lam is None else lam,
        lr=cfg.lr,
        epsilon=cfg.epsilon,
        max_iter=cfg.iterations,
        batch_size=cfg.batch_size,
        random_state=seed,
    )


def _seeds(cfg: ExperimentConfig, rep: int) -> tuple[int, int]:
    return cfg.seed + rep, cfg.seed + rep + MODEL_SEED_OFFSET


def _fit(est, X, y, rep):
    try:
        return est.fit(X, y)
    except TrainingError as exc:
        raise TrainingError(f"repetition {rep}: {exc}") from exc


def _parallel(cfg, fn, reps):
    # joblib returns results in submission order whatever the completion order
    n_jobs = cfg.workers or os.cpu_count() or 1
    n_jobs = min(n_jobs, len(reps))
    if n_jobs == 1:
        return [fn(cfg, r) for r in reps]
    return Parallel(n_jobs=n_jobs)(delayed(fn)(cfg, r) for r in reps)


# --------------------------------------------------------------------------
# tasks


def _channel_rep(cfg: ExperimentConfig, rep: int) -> dict:
    data_seed, model_seed = _seeds(cfg, rep)
    ds = make_channel_dataset(ChannelConfig(rho=cfg.rho, n_samples=cfg.n_samples, snr_db=cfg.snr_db, seed=data_seed))
    ds, record = preprocess_minmax(ds)
    X_tr, y_tr = ds.subset("train")
    X_te, y_te = ds.subset("test")
    est = _fit(build_estimator(cfg, seed=model_seed), X_tr, y_tr, rep)
    metrics = MetricsRecord(mse_db=mse_db(np.abs(est.predict(X_te) - y_te) ** 2), loss_curve=est.loss_curve_.tolist())
    return {
        "index": rep,
        "data_seed": data_seed,
        "model_seed": model_seed,
        "fingerprint": ds.fingerprint(),
        "split_sizes": {"train": len(y_tr), "test": len(y_te)},
        "preprocessing": record,
        "metrics": metrics,
    }


def _wind_series(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.wind_source == "csv":
        return load_wind_csv(cfg.wind_csv)
    if cfg.wind_source == "synthetic":
        return synthetic_wind_series(5000, cfg.seed)
    return multitone_series(5000)


def _wind_data(cfg: ExperimentConfig):
    ds, record = preprocess_minmax(make_wind_dataset(_wind_series(cfg)))
    return ds, record


def _wind_select(cfg: ExperimentConfig, ds) -> tuple[list, float, list]:
    """Grid search on the validation split with repetition 0's model seed."""
    X_tr, y_tr = ds.subset("train")
    X_va, y_va = ds.subset("validation")
    _, model_seed = _seeds(cfg, 0)
    table = []
    for hidden in cfg.hidden_grid:
        for lam in cfg.lambda_grid:
            est = _fit(build_estimator(cfg, hidden=hidden, lam=lam, seed=model_seed), X_tr, y_tr, 0)
            score = r_squared(y_va, est.predict(X_va))
            table.append({"hidden": hidden, "lambda": lam, "validation_r2": score})
            logger.info("wind grid hidden=%s lambda=%g -> validation R2 %.4f", hidden, lam, score)
    best = max(table, key=lambda row: row["validation_r2"])  # first best wins ties
    return best["hidden"], best["lambda"], table


def _wind_rep(cfg: ExperimentConfig, rep: int, hidden: list, lam: float) -> dict:
    data_seed, model_seed = _seeds(cfg, rep)
    ds, record = _wind_data(cfg)
    X_tr, y_tr = ds.subset("train")
    X_te, y_te = ds.subset("test")
    est = _fit(build_estimator(cfg, hidden=hidden, lam=lam, seed=model_seed), X_tr, y_tr, rep)
    metrics = MetricsRecord(r2=r_squared(y_te, est.predict(X_te)), loss_curve=est.loss_curve_.tolist())
    return {
        "index": rep,
        "data_seed": data_seed,
        "model_seed": model_seed,
        "fingerprint": ds.fingerprint(),
        "split_sizes": {k: int(v.size) for k, v in ds.splits.items()},
        "preprocessing": record,
        "metrics": metrics,
    }


def _mnist_data(cfg: ExperimentConfig):
    ds, selector = mnist_fft_pipeline(*load_mnist(cfg.mnist_dir))
    ds, record = preprocess_minmax(ds)
    return ds, {"fft": selector.transform_record(), "scaling": record}


def _mnist_rep(cfg: ExperimentConfig, rep: int, data=None) -> dict:
    data_seed, model_seed = _seeds(cfg, rep)
    ds, record = data if data is not None else _mnist_data(cfg)
    X_tr, y_tr = ds.subset("train")
    X_te, y_te = ds.subset("test")
    est = _fit(build_estimator(cfg, seed=model_seed, classifier=True), X_tr, y_tr, rep)
    metrics = MetricsRecord(accuracy=accuracy(y_te, est.predict(X_te)), loss_curve=est.loss_curve_.tolist())
    return {
        "index": rep,
        "data_seed": data_seed,
        "model_seed": model_seed,
        "fingerprint": ds.fingerprint(),
        "split_sizes": {"train": int(y_tr.size), "test": int(y_te.size)},
        "preprocessing": record,
        "metrics": metrics,
    }


@dataclass
class RunManifest:
    """Everything needed to reproduce and audit one run."""

    config: dict
    software: dict
    repetitions: list
    aggregate: dict
    selection: dict | None = None

    def to_dict(self) -> dict:
        reps = []
        for rep in self.repetitions:
            rep = dict(rep)
            rep["metrics"] = rep["metrics"].summary()
            reps.append(rep)
        out = {
            "format": "cvkaf-run",
            "version": 1,
            "config": self.config,
            "software": self.software,
            "repetitions": reps,
            "aggregate": self.aggregate,
        }
        if self.selection is not None:
            out["selection"] = self.selection
        return out

    @property
    def metric_name(self) -> str:
        return next(iter(self.aggregate))


def _software() -> dict:
    import sklearn

    return {"cvkaf": __version__, "numpy": np.__version__, "scikit-learn": sklearn.__version__, "python": platform.python_version()}


def _manifest(cfg: ExperimentConfig, reps: list, metric: str, selection=None) -> RunManifest:
    values = [getattr(rep["metrics"], metric) for rep in reps]
    mean, std = mean_std(values)
    return RunManifest(cfg.to_dict(), _software(), reps, {metric: {"mean": mean, "std": std, "n": len(values)}}, selection)


def run_channel(cfg: ExperimentConfig) -> RunManifest:
    """Fresh channel generation per repetition; reports test MSE in dB."""
    _require(cfg, "channel")
    reps = _parallel(cfg, _channel_rep, list(range(cfg.repetitions)))
    return _manifest(cfg, reps, "mse_db")


def run_wind(cfg: ExperimentConfig) -> RunManifest:
    """Validation grid search over width and lambda, then test R2 per repetition."""
    _require(cfg, "wind")
    ds, _ = _wind_data(cfg)
    hidden, lam, table = _wind_select(cfg, ds)
    reps = _parallel(cfg, partial(_wind_rep, hidden=hidden, lam=lam), list(range(cfg.repetitions)))
    return _manifest(cfg, reps, "r2", selection={"hidden": hidden, "lambda": lam, "grid": table})


def run_mnist(cfg: ExperimentConfig) -> RunManifest:
    """Classification of the FFT-MNIST features; reports test accuracy."""
    _require(cfg, "mnist")
    data = _mnist_data(cfg)
    reps = [_mnist_rep(cfg, r, data) for r in range(cfg.repetitions)]
    return _manifest(cfg, reps, "accuracy")


def task_dataset(cfg: ExperimentConfig, rep: int = 0):
    """The preprocessed dataset that repetition ``rep`` trains on, with its transform record."""
    if cfg.task == "channel":
        data_seed, _ = _seeds(cfg, rep)
        ds = make_channel_dataset(ChannelConfig(rho=cfg.rho, n_samples=cfg.n_samples, snr_db=cfg.snr_db, seed=data_seed))
        return preprocess_minmax(ds)
    if cfg.task == "wind":
        return _wind_data(cfg)
    return _mnist_data(cfg)


def _require(cfg, task):
    if cfg.task != task:
        raise ConfigError(f"config is for task {cfg.task!r}, not {task!r}")


_RUNNERS = {"channel": run_channel, "wind": run_wind, "mnist": run_mnist}


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    return _RUNNERS[cfg.task](cfg)


def write_run(manifest: RunManifest, out) -> Path:
    """Write ``manifest.json``, ``metrics.csv`` and ``loss_curve.csv`` into ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2)
        fh.write("\n")
    metric = manifest.metric_name
    with open(out / "metrics.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["repetition", "data_seed", "model_seed", metric, "final_loss"])
        for rep in manifest.repetitions:
            curve = rep["metrics"].loss_curve
            writer.writerow(
                [rep["index"], rep["data_seed"], rep["model_seed"], repr(getattr(rep["metrics"], metric)), repr(curve[-1]) if curve else ""]
            )
    with open(out / "loss_curve.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["repetition", "iteration", "loss"])
        for rep in manifest.repetitions:
            for it, loss in enumerate(rep["metrics"].loss_curve):
                writer.writerow([rep["index"], it, repr(loss)])
    return out
