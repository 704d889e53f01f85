import math

import numpy as np
import pytest

from cvkaf.core import Rng
from cvkaf.data import (
    ChannelConfig,
    ComplexMinMaxScaler,
    FFTFeatureSelector,
    IDXFormatError,
    RegressionDataset,
    WindFormatError,
    add_awgn,
    channel_filter,
    channel_nonlinearity,
    channel_source,
    channel_taps,
    dft2,
    export_csv,
    load_wind_csv,
    make_channel_dataset,
    make_wind_dataset,
    mnist_fft_pipeline,
    multitone_series,
    preprocess_minmax,
    read_idx,
    realized_snr_db,
    save_wind_csv,
    synthetic_wind_series,
    write_idx,
)


# --- channel -----------------------------------------------------------------

def test_channel_taps_values():
    h = channel_taps()
    assert h.shape == (5,)
    assert abs(h[2] - (0.864 - 0.864j)) < 1e-12
    assert abs(h[0] - (0.08250 - 0.56550j)) < 1e-5
    # symmetric around the centre tap
    np.testing.assert_allclose(h, h[::-1], atol=1e-15)


def test_filter_impulse_response_and_linearity():
    s = np.zeros(10, complex)
    s[0] = 1
    np.testing.assert_allclose(channel_filter(s)[:5], channel_taps(), atol=1e-15)
    np.testing.assert_array_equal(channel_filter(s)[5:], 0)
    a, b = Rng(0).complex_normal(50), Rng(1).complex_normal(50)
    np.testing.assert_allclose(channel_filter(2 * a - 1j * b), 2 * channel_filter(a) - 1j * channel_filter(b), atol=1e-12)


def test_nonlinearity_values():
    assert channel_nonlinearity(0)[()] == 0
    assert abs(channel_nonlinearity(1)[()] - (1.15 - 0.1j)) < 1e-15
    assert abs(channel_nonlinearity(1j)[()] - (-0.15 + 1.1j)) < 1e-15


@pytest.mark.parametrize("rho", [math.sqrt(2) / 2, 0.95])
def test_source_second_order_statistics(rho):
    s = channel_source(Rng(3), rho, 100_000)
    assert abs(np.mean(np.abs(s) ** 2) - 1) < 0.02
    assert abs(np.mean(s * s) - (1 - 2 * rho**2)) < 0.02
    assert abs(np.mean(s)) < 0.02


@pytest.mark.parametrize("rho", [0.0, 1.0, 1.2, -0.5])
def test_rho_validated(rho):
    with pytest.raises(ValueError):
        channel_source(Rng(0), rho, 10)
    with pytest.raises(ValueError):
        ChannelConfig(rho=rho)


def test_noise_power_and_snr():
    r = np.exp(2j * np.pi * Rng(0).uniform(100_000))  # unit power
    noisy = add_awgn(r, 13.0, Rng(1))
    noise = noisy - r
    assert abs(np.mean(np.abs(noise) ** 2) / 10**-1.3 - 1) < 0.02
    assert abs(np.mean(noise * noise)) < 0.005  # circular
    assert abs(realized_snr_db(r, noisy) - 13) < 0.5
    np.testing.assert_array_equal(add_awgn(r, math.inf, Rng(1)), r)


def test_channel_dataset_shapes_and_splits():
    ds = make_channel_dataset(seed=4)
    assert ds.inputs.shape == (1996, 5) and ds.targets.shape == (1996,)
    assert ds.indices("test").size == 300 and ds.indices("train").size == 1696
    assert np.intersect1d(ds.indices("test"), ds.indices("train")).size == 0
    X, y = ds.subset("test")
    assert X.shape == (300, 5)
    # realized SNR of the noisy target around 13 dB
    clean = make_channel_dataset(seed=4, snr_db=math.inf).targets
    assert abs(realized_snr_db(clean, ds.targets) - 13) < 0.5


def test_channel_embedding_order():
    ds = make_channel_dataset(seed=2, snr_db=math.inf, n_samples=50)
    h = channel_taps()
    for j in (0, 7, ds.inputs.shape[0] - 1):
        window = ds.inputs[j]  # oldest first
        t = sum(h[k] * window[4 - k] for k in range(5))
        assert abs(ds.targets[j] - channel_nonlinearity(t)[()]) < 1e-12
    np.testing.assert_array_equal(ds.inputs[1, :4], ds.inputs[0, 1:])


def test_channel_determinism_and_seed_sensitivity():
    a, b, c = make_channel_dataset(seed=5), make_channel_dataset(seed=5), make_channel_dataset(seed=6)
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()


# --- wind --------------------------------------------------------------------

def test_wind_csv_roundtrip_and_header(tmp_path):
    z = synthetic_wind_series(50, seed=1)
    path = save_wind_csv(z, tmp_path / "w.csv")
    np.testing.assert_array_equal(load_wind_csv(path), z)
    raw = tmp_path / "raw.csv"
    raw.write_text("1.5,2\r\n-3,4e-1\r\n\r\n")
    np.testing.assert_array_equal(load_wind_csv(raw), [1.5 + 2j, -3 + 0.4j])


@pytest.mark.parametrize(
    "text, line",
    [("n,e\n1,2\n3\n", 3), ("1,2\n3,x\n", 2), ("1,2\n3,nan\n", 2), ("1,2,3\n", 1)],
)
def test_wind_csv_errors_name_line(tmp_path, text, line):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(WindFormatError, match=f"line {line}"):
        load_wind_csv(path)


def test_wind_csv_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("north,east\n")
    with pytest.raises(WindFormatError):
        load_wind_csv(path)


def test_wind_dataset_counts_and_horizon():
    ramp = np.arange(5000) * (1 + 1j)
    ds = make_wind_dataset(ramp)
    assert len(ds) == 4983
    X, y = ds.inputs, ds.targets
    # target lies 8 steps after the newest input
    np.testing.assert_array_equal(y, X[:, -1] + 8 * (1 + 1j))
    np.testing.assert_array_equal(X[0], ramp[:10])
    tr, va, te = (ds.indices(s) for s in ("train", "validation", "test"))
    assert te.size == 500 and va.size == 500 and tr.size == 3983
    assert tr.max() < va.min() and va.max() < te.min()
    assert y[te[-1]] == ramp[-1]


def test_wind_dataset_too_short():
    with pytest.raises(ValueError, match="too short"):
        make_wind_dataset(np.ones(600))


def test_multitone_is_linearly_predictable():
    z = multitone_series(200)
    A = np.lib.stride_tricks.sliding_window_view(z, 10)[:-8]
    coef, *_ = np.linalg.lstsq(A, z[17:], rcond=None)
    assert np.max(np.abs(A @ coef - z[17:])) < 1e-9


def test_synthetic_wind_deterministic_and_finite():
    a, b = synthetic_wind_series(300, seed=3), synthetic_wind_series(300, seed=3)
    np.testing.assert_array_equal(a, b)
    assert np.all(np.isfinite(a)) and np.std(a) > 0


# --- MNIST / DFT ---------------------------------------------------------------

def test_idx_roundtrip(tmp_path):
    imgs = np.arange(2 * 3 * 3, dtype=np.uint8).reshape(2, 3, 3)
    labels = np.array([4, 7], np.uint8)
    np.testing.assert_array_equal(read_idx(write_idx(imgs, tmp_path / "i")), imgs)
    np.testing.assert_array_equal(read_idx(write_idx(labels, tmp_path / "l")), labels)


def test_idx_bad_magic_and_count(tmp_path):
    bad = tmp_path / "bad"
    bad.write_bytes((1234).to_bytes(4, "big") + (1).to_bytes(4, "big") + b"\x00")
    with pytest.raises(IDXFormatError, match="magic"):
        read_idx(bad)
    short = tmp_path / "short"
    short.write_bytes((2049).to_bytes(4, "big") + (5).to_bytes(4, "big") + b"\x00\x01")
    with pytest.raises(IDXFormatError, match="expected 5"):
        read_idx(short)


def test_dft_constant_and_impulse():
    F = dft2(np.ones((28, 28)))
    assert abs(F[0, 0] - 784) < 1e-9
    F[0, 0] = 0
    assert np.max(np.abs(F)) < 1e-9
    imp = np.zeros((28, 28))
    imp[0, 0] = 1
    np.testing.assert_allclose(dft2(imp), np.ones((28, 28)), atol=1e-12)


def test_dft_matches_bruteforce_and_parseval():
    img = Rng(0).uniform((8, 8))
    F = dft2(img)
    k = np.arange(8)
    for u, v in [(0, 0), (1, 3), (7, 5)]:
        ref = np.sum(img * np.exp(-2j * np.pi * (u * k[:, None] + v * k[None, :]) / 8))
        assert abs(F[u, v] - ref) < 1e-10
    assert abs(np.sum(np.abs(F) ** 2) - 64 * np.sum(img**2)) < 1e-9
    np.testing.assert_allclose(F, np.fft.fft2(img), atol=1e-10)


def _toy_images(seed, n=30):
    return (Rng(seed).uniform((n, 28, 28)) * 255).astype(np.uint8)


def test_feature_selector_keep_all_and_bounds():
    imgs = _toy_images(0, 5)
    sel = FFTFeatureSelector(keep=784).fit(imgs)
    assert sorted(sel.positions_.tolist()) == list(range(784))
    assert sel.transform(imgs).shape == (5, 784)
    with pytest.raises(ValueError):
        FFTFeatureSelector(keep=785).fit(imgs)
    with pytest.raises(ValueError):
        FFTFeatureSelector(keep=0).fit(imgs)


def test_selection_uses_training_images_only():
    tr, te = _toy_images(1), _toy_images(2)
    y_tr, y_te = np.arange(30) % 10, np.arange(30) % 10
    ds1, sel1 = mnist_fft_pipeline(tr, y_tr, te, y_te, keep=100)
    ds2, sel2 = mnist_fft_pipeline(tr, y_tr, te[::-1], y_te[::-1], keep=100)
    assert sel1.transform_record() == sel2.transform_record()
    assert sel1.positions_[0] == 0  # DC dominates for nonnegative pixels
    assert ds1.inputs.shape == (60, 100)
    np.testing.assert_array_equal(ds1.indices("test"), np.arange(30, 60))


def test_pipeline_rejects_mismatched_labels():
    with pytest.raises(ValueError, match="labels"):
        mnist_fft_pipeline(_toy_images(0, 3), np.zeros(2), _toy_images(1, 3), np.zeros(3))


# --- preprocessing & containers ----------------------------------------------

def test_minmax_scaling_values():
    X = np.array([[0 + 5j], [10 + 5j], [5 + 5j]])
    sc = ComplexMinMaxScaler().fit(X)
    out = sc.transform(X)
    np.testing.assert_allclose(out.real[:, 0], [-1, 1, 0])
    np.testing.assert_array_equal(out.imag, 0)  # constant part
    assert sc.transform(np.array([[20 + 5j]]))[0, 0] == 3


def test_preprocess_uses_train_statistics_only():
    ds = make_channel_dataset(seed=0, n_samples=200)
    scaled, record = preprocess_minmax(ds)
    Xtr, _ = scaled.subset("train")
    assert np.isclose(Xtr.real.min(), -1) and np.isclose(Xtr.real.max(), 1)
    ds2 = RegressionDataset(ds.inputs.copy(), dict(ds.splits), ds.targets)
    ds2.inputs[ds.indices("test")] *= 100
    assert preprocess_minmax(ds2)[1] == record


def test_overlapping_splits_rejected():
    with pytest.raises(ValueError, match="overlaps"):
        RegressionDataset(np.zeros((4, 1)), {"train": [0, 1], "test": [1, 2]}, np.zeros(4))


def test_export_csv(tmp_path):
    ds = make_channel_dataset(seed=0, n_samples=20)
    path = export_csv(ds, tmp_path / "d.csv")
    lines = path.read_text().splitlines()
    assert lines[0].split(",")[:3] == ["split", "x0_re", "x0_im"]
    assert lines[0].endswith("y_re,y_im")
    assert len(lines) == len(ds) + 1
    first = lines[1].split(",")
    assert first[0] in ("train", "test")
    assert float(first[1]) == ds.inputs[0, 0].real
