"""Benchmark datasets: channel identification, wind prediction, FFT-MNIST."""

from .channel import (
    ChannelConfig,
    add_awgn,
    channel_filter,
    channel_nonlinearity,
    channel_source,
    channel_taps,
    make_channel_dataset,
    realized_snr_db,
)
from .datasets import ClassificationDataset, RegressionDataset, export_csv
from .mnist import FFTFeatureSelector, IDXFormatError, dft2, dft_matrix, load_mnist, mnist_fft_pipeline, read_idx, write_idx
from .preprocessing import ComplexMinMaxScaler, preprocess_minmax
from .wind import (
    WindFormatError,
    load_wind_csv,
    make_wind_dataset,
    multitone_series,
    save_wind_csv,
    synthetic_wind_series,
)

__all__ = [
    "ChannelConfig",
    "add_awgn",
    "channel_filter",
    "channel_nonlinearity",
    "channel_source",
    "channel_taps",
    "make_channel_dataset",
    "realized_snr_db",
    "ClassificationDataset",
    "RegressionDataset",
    "export_csv",
    "FFTFeatureSelector",
    "IDXFormatError",
    "dft2",
    "dft_matrix",
    "load_mnist",
    "mnist_fft_pipeline",
    "read_idx",
    "write_idx",
    "ComplexMinMaxScaler",
    "preprocess_minmax",
    "WindFormatError",
    "load_wind_csv",
    "make_wind_dataset",
    "multitone_series",
    "save_wind_csv",
    "synthetic_wind_series",
]
