import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvkaf.core import Rng, finite_difference_cogradient
from cvkaf.kernels import (
    KernelDomainError,
    KernelKind,
    bandwidth_rule,
    build_dictionary_1d,
    build_dictionary_2d,
    complex_gaussian,
    complex_gaussian_expanded,
    gram_matrix,
    independent_kernel,
    is_psd,
    kernel_function,
    min_eigenvalue_ratio,
    real_gaussian,
    szego_kernel,
)


def test_dictionary_d4():
    d = build_dictionary_1d(4, -1.5, 1.5)
    np.testing.assert_allclose(d.grid, [-1.5, -0.5, 0.5, 1.5], atol=1e-15)
    assert d.spacing == pytest.approx(1.0)
    assert d.size == 4


def test_dictionary_d2():
    d = build_dictionary_1d(2, -1, 1)
    np.testing.assert_allclose(d.grid, [-1, 1])
    assert d.spacing == 2


def test_dictionary_d20_spacing_and_gamma():
    d = build_dictionary_1d(20, -2, 2)
    assert abs(d.spacing - 4 / 19) < 1e-15
    assert abs(d.gamma - 361 / 96) < 1e-12


def test_dictionary_invariants():
    d = build_dictionary_1d(9, -2, 2)
    assert np.all(np.diff(d.grid) > 0)
    np.testing.assert_allclose(np.diff(d.grid), d.spacing)
    np.testing.assert_allclose(d.grid, -d.grid[::-1], atol=1e-15)
    assert d.gamma > 0


@pytest.mark.parametrize("size, lo, hi", [(1, -1, 1), (0, -1, 1), (4, 1, 1), (4, 2, -2)])
def test_dictionary_rejects_bad_arguments(size, lo, hi):
    with pytest.raises(ValueError):
        build_dictionary_1d(size, lo, hi)


def test_dictionary_2d_grid():
    d = build_dictionary_2d(3, -1, 1)
    g = d.grid
    expected = np.array([g[n] + 1j * g[m] for n in range(3) for m in range(3)])
    np.testing.assert_array_equal(d.elements, expected)
    assert d.elements.size == 9


def test_bandwidth_rule_values():
    assert bandwidth_rule(1.0) == pytest.approx(1 / 6)
    assert abs(bandwidth_rule(4 / 19) - 361 / 96) < 1e-12
    assert bandwidth_rule(2.0) == pytest.approx(bandwidth_rule(1.0) / 4)


@pytest.mark.parametrize("spacing", [0.0, -1.0])
def test_bandwidth_rule_rejects_nonpositive(spacing):
    with pytest.raises(ValueError):
        bandwidth_rule(spacing)


def test_kernel_kind_parse():
    assert KernelKind.parse("szego") is KernelKind.SZEGO
    with pytest.raises(ValueError):
        KernelKind.parse("laplacian")


def test_real_gaussian_values():
    assert real_gaussian(0.7, 0.7, 3.0) == 1.0
    assert real_gaussian(1.0, 0.0, 1.0) == pytest.approx(np.exp(-1), abs=1e-15)
    assert real_gaussian(0.2, -1.3, 0.5) == real_gaussian(-1.3, 0.2, 0.5)


def test_complex_gaussian_values():
    assert complex_gaussian(0, 0, 1.0) == 1
    assert abs(complex_gaussian(1j, 1j, 1.0) - np.exp(4)) < 1e-12
    assert abs(complex_gaussian(1, 1, 1.0) - 1) < 1e-15


def test_independent_kernel_values():
    assert abs(independent_kernel(0.3 - 0.8j, 0.3 - 0.8j, 2.0) - 2) < 1e-15
    e = np.exp(-1)
    assert abs(independent_kernel(0, 1, 1.0) - ((e + 1) + 1j * (1 - e))) < 1e-15


def test_szego_values():
    assert szego_kernel(0, 0) == 1
    assert abs(szego_kernel(0.5, 0.5) - 1 / 0.5625) < 1e-12
    assert abs(szego_kernel(0.5j, 0.5) - 1 / (1 - 0.25j) ** 2) < 1e-15
    # (1 - 0.25i)**2 = 0.9375 - 0.5i, so the value is (0.9375 + 0.5i) / 1.12890625
    assert abs(szego_kernel(0.5j, 0.5) - (0.9375 + 0.5j) / 1.12890625) < 1e-15


@pytest.mark.parametrize("z, d", [(1.0, 0.0), (0.0, -1.0), (0.99, 1.2j)])
def test_szego_domain_errors(z, d):
    with pytest.raises(KernelDomainError):
        szego_kernel(z, d)


def _random_pairs(seed, n=1000, radius=None):
    rng = Rng(seed)
    if radius is None:
        return rng.complex_normal(n), rng.complex_normal(n)
    r = radius * np.sqrt(rng.uniform(2 * n))
    phi = 2 * np.pi * rng.uniform(2 * n)
    z = r * np.exp(1j * phi)
    return z[:n], z[n:]


@pytest.mark.parametrize("gamma", [0.01, 0.1, 1.0])
def test_complex_gaussian_expansion_identity(gamma):
    z, d = _random_pairs(11)
    direct = complex_gaussian(z, d, gamma)
    expanded = complex_gaussian_expanded(z, d, gamma)
    # the kernel grows like exp(gamma * Im**2); compare on the scale max(1, |k|)
    assert np.max(np.abs(direct - expanded) / np.maximum(1.0, np.abs(direct))) <= 1e-12


@pytest.mark.parametrize("kind", ["complex_gaussian", "independent", "szego"])
def test_hermitian_symmetry(kind):
    radius = 0.9 if kind == "szego" else None
    z, d = _random_pairs(5, radius=radius)
    k = kernel_function(kind)
    if kind == "szego":
        a, b = k(z, d, None), k(d, z, None)
    else:
        a, b = k(z, d, 0.7), k(d, z, 0.7)
    assert np.max(np.abs(a - np.conj(b))) <= 1e-12


def _gram_points(kind, seed, m=50):
    rng = Rng(seed)
    if kind == "real_gaussian":
        return rng.normal(m)
    if kind == "szego":
        r = 0.9 * np.sqrt(rng.uniform(m))
        return r * np.exp(2j * np.pi * rng.uniform(m))
    return rng.complex_normal(m)


@pytest.mark.parametrize("kind", [k.value for k in KernelKind])
@pytest.mark.parametrize("seed", range(20))
def test_gram_psd_and_hermitian(kind, seed):
    pts = _gram_points(kind, seed)
    G = gram_matrix(kind, pts, gamma=0.5)
    assert G.shape == (50, 50)
    assert np.max(np.abs(G - np.conj(G.T))) <= 1e-12
    assert min_eigenvalue_ratio(G) >= -1e-8
    assert is_psd(G)


def test_gram_single_point():
    np.testing.assert_array_equal(gram_matrix("real_gaussian", [0.4], 1.0), [[1.0]])


def test_is_psd_detects_indefinite():
    assert not is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_gram_propagates_domain_error():
    with pytest.raises(KernelDomainError):
        gram_matrix("szego", [0.1, 1.5], None)


@pytest.mark.parametrize("kind", ["complex_gaussian", "szego"])
def test_holomorphic_kernels_have_zero_conjugate_derivative(kind):
    k = kernel_function(kind)
    gamma = 0.8 if kind == "complex_gaussian" else None
    d = 0.3 - 0.2j
    for z0 in (0.1 + 0.4j, -0.5 + 0.2j, 0.6j):
        # d/dz* of Re k and Im k combine into d k / d z*
        g_re = finite_difference_cogradient(lambda w: float(k(w[0], d, gamma).real), np.array([z0]))[0]
        g_im = finite_difference_cogradient(lambda w: float(k(w[0], d, gamma).imag), np.array([z0]))[0]
        d_zstar = g_re + 1j * g_im
        scale = abs(k(z0, d, gamma))
        assert abs(d_zstar) <= 1e-6 * max(scale, 1.0)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.01, 5)
)
def test_independent_kernel_is_hermitian_property(a, b, c, e, gamma):
    z, d = complex(a, b), complex(c, e)
    assert abs(independent_kernel(z, d, gamma) - np.conj(independent_kernel(d, z, gamma))) <= 1e-12
