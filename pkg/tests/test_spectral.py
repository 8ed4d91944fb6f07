import threading

import numpy as np
import pytest
import scipy.fft as sfft

import gfc.spectral as spectral
from gfc import (
    DIRAC_STAMP,
    LAPLACE_STAMP,
    KernelStamp,
    build_dipole_spectra,
    build_green_spectrum,
    cached_green_spectrum,
    convolve_spectral,
    embed_stamp,
    invert_kernel,
)


def circular_convolve_dense(a, b):
    """O(n^2) direct circular convolution, the independent reference."""
    h, w = a.shape
    out = np.zeros((h, w))
    for r in range(h):
        for c in range(w):
            acc = 0.0
            for i in range(h):
                for j in range(w):
                    acc += a[i, j] * b[(r - i) % h, (c - j) % w]
            out[r, c] = acc
    return out


def test_embed_dirac_into_4x4():
    grid = embed_stamp(DIRAC_STAMP, 4, 4)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0
    np.testing.assert_array_equal(grid, expected)


def test_embed_laplace_into_4x4():
    grid = embed_stamp(LAPLACE_STAMP, 4, 4)
    expected = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [1.0, -4.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ])
    np.testing.assert_array_equal(grid, expected)


def test_embed_into_exact_size_is_identity():
    np.testing.assert_array_equal(embed_stamp(LAPLACE_STAMP, 3, 3), LAPLACE_STAMP.values)
    np.testing.assert_array_equal(embed_stamp(DIRAC_STAMP, 1, 1), [[1.0]])


def test_embed_rejects_oversized_stamp():
    with pytest.raises(ValueError):
        embed_stamp(LAPLACE_STAMP, 2, 4)


@pytest.mark.parametrize("h,w", [(8, 8), (12, 7), (3, 3)])
def test_green_spectrum_quotient_identity(h, w):
    g = build_green_spectrum(h, w)
    lap_hat = sfft.fft2(embed_stamp(LAPLACE_STAMP, h, w))
    dirac_hat = sfft.fft2(embed_stamp(DIRAC_STAMP, h, w))
    product = lap_hat * g.spectrum
    err = np.abs(product - dirac_hat)
    err[0, 0] = 0.0  # DC bin zeroed by construction
    assert err.max() <= 1e-10


def test_green_spectrum_dc_bin_exactly_zero():
    g = build_green_spectrum(8, 8)
    assert g.spectrum[0, 0] == 0.0
    assert g.zeroed_bins == 1


@pytest.mark.parametrize("h,w", [(8, 8), (16, 9)])
def test_green_function_real_domain_identity(h, w):
    # conv(green, stencil) == dirac minus the uniform offset forced by the
    # zeroed DC bin; checked with a roll-based independent circular conv
    g = build_green_spectrum(h, w)
    green_real = sfft.ifft2(g.spectrum).real
    lap_grid = embed_stamp(LAPLACE_STAMP, h, w)
    conv = np.zeros((h, w))
    for (i, j), v in np.ndenumerate(lap_grid):
        if v:
            conv += v * np.roll(green_real, (i, j), axis=(0, 1))
    dirac = embed_stamp(DIRAC_STAMP, h, w)
    np.testing.assert_allclose(conv, dirac - 1.0 / (h * w), atol=1e-10)


def test_green_spectrum_inverse_transform_nearly_real():
    g = build_green_spectrum(13, 21)
    assert np.abs(sfft.ifft2(g.spectrum).imag).max() <= 1e-10


def test_green_spectrum_rejects_tiny_grids():
    with pytest.raises(ValueError):
        build_green_spectrum(2, 8)


def test_dipole_identity_against_forward_stamps():
    h, w = 10, 14
    d = build_dipole_spectra(h, w)
    # forward differences embedded with the same anchor rule as the stamps
    gx = sfft.fft2(embed_stamp(KernelStamp(np.array([[1.0, -1.0]]), (0, 1)), h, w))
    gy = sfft.fft2(embed_stamp(KernelStamp(np.array([[1.0], [-1.0]]), (1, 0)), h, w))
    dirac_hat = sfft.fft2(embed_stamp(DIRAC_STAMP, h, w))
    combined = d.vx * gx + d.vy * gy
    err = np.abs(combined - dirac_hat)
    err[0, 0] = 0.0
    assert err.max() <= 1e-10


def test_invert_kernel_specializes_to_green_spectrum():
    g1 = invert_kernel(LAPLACE_STAMP, 9, 11, epsilon=0.0)
    g2 = build_green_spectrum(9, 11)
    np.testing.assert_array_equal(g1.spectrum, g2.spectrum)
    assert g1.zeroed_bins == g2.zeroed_bins == 1


def test_invert_kernel_dirac_is_identity():
    g = invert_kernel(DIRAC_STAMP, 6, 6, epsilon=0.0)
    np.testing.assert_allclose(g.spectrum, np.ones((6, 6)), atol=1e-12)
    assert g.zeroed_bins == 0
    rng = np.random.default_rng(0)
    f = rng.standard_normal((6, 6))
    np.testing.assert_allclose(convolve_spectral(f, g), f, atol=1e-12)


def test_invert_kernel_rejects_negative_epsilon():
    with pytest.raises(ValueError):
        invert_kernel(LAPLACE_STAMP, 8, 8, epsilon=-1.0)


def test_convolve_spectral_zero_field():
    g = build_green_spectrum(8, 8)
    assert not convolve_spectral(np.zeros((8, 8)), g).any()


def test_convolve_spectral_shape_mismatch():
    g = build_green_spectrum(8, 8)
    with pytest.raises(ValueError):
        convolve_spectral(np.zeros((8, 9)), g)


def test_convolve_spectral_matches_dense_oracle():
    rng = np.random.default_rng(1)
    f = rng.standard_normal((8, 8))
    g = build_green_spectrum(8, 8)
    green_real = sfft.ifft2(g.spectrum).real
    oracle = circular_convolve_dense(f, green_real)
    np.testing.assert_allclose(convolve_spectral(f, g), oracle, atol=1e-10)


def test_convolve_spectral_matches_full_complex_formula():
    rng = np.random.default_rng(2)
    f = rng.standard_normal((9, 13))
    g = build_green_spectrum(9, 13)
    literal = sfft.ifft2(sfft.fft2(f) * g.spectrum).real
    np.testing.assert_allclose(convolve_spectral(f, g), literal, atol=1e-12)


def test_cache_returns_same_object():
    spectral.clear_spectrum_cache()
    a = cached_green_spectrum(8, 8)
    b = cached_green_spectrum(8, 8)
    assert a is b
    assert cached_green_spectrum(8, 8, np.float32) is not a


def test_cache_builds_at_most_once_under_contention(monkeypatch):
    spectral.clear_spectrum_cache()
    calls = []
    real_builder = spectral.build_green_spectrum

    def counting_builder(h, w, dtype=np.float64):
        calls.append((h, w))
        return real_builder(h, w, dtype)

    monkeypatch.setattr(spectral, "build_green_spectrum", counting_builder)
    results = []
    barrier = threading.Barrier(8)

    def worker():
        barrier.wait()
        results.append(cached_green_spectrum(32, 32))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(calls) == 1
    assert all(r is results[0] for r in results)


def test_spectra_are_write_protected():
    g = build_green_spectrum(8, 8)
    with pytest.raises(ValueError):
        g.spectrum[0, 0] = 1.0
