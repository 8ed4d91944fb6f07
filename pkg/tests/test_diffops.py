import numpy as np
import pytest
from scipy.signal import convolve2d

from gfc import (
    LAPLACE_KERNEL,
    VectorField,
    divergence,
    divergence_periodic,
    gaussian_blur,
    gradient,
    gradient_periodic,
    laplacian,
    laplacian_periodic,
    magnitude_orientation,
    pad_zero,
    recompose,
)


def test_kernel_sums_to_zero():
    assert LAPLACE_KERNEL.sum() == 0.0


def test_gradient_zero_field():
    e = gradient(np.zeros((4, 6)))
    assert not e.ex.any() and not e.ey.any()


def test_gradient_two_by_two_exact():
    e = gradient(np.array([[1.0, 2.0], [3.0, 4.0]]))
    np.testing.assert_array_equal(e.ex, [[1.0, -2.0], [1.0, -4.0]])
    np.testing.assert_array_equal(e.ey, [[2.0, 2.0], [-3.0, -4.0]])


def test_gradient_of_padded_constant_zero_inside():
    padded = pad_zero(np.full((5, 7), 3.5), 2)
    e = gradient(padded)
    # strictly inside the original region both components vanish
    assert not e.ex[3:-3, 3:-3].any()
    assert not e.ey[3:-3, 3:-3].any()


def test_divergence_zero_field():
    assert not divergence(VectorField(np.zeros((3, 3)), np.zeros((3, 3)))).any()


def test_divergence_impulse():
    ex = np.zeros((2, 3))
    ex[0, 0] = 1.0
    div = divergence(VectorField(ex, np.zeros_like(ex)))
    expected = np.zeros((2, 3))
    expected[0, 0] = 1.0
    expected[0, 1] = -1.0
    np.testing.assert_array_equal(div, expected)


def test_divergence_shape_mismatch():
    with pytest.raises(ValueError):
        divergence(VectorField(np.zeros((2, 2)), np.zeros((3, 2))))


def test_divergence_of_gradient_equals_laplacian_on_padded_fields():
    rng = np.random.default_rng(0)
    for _ in range(100):
        h, w = rng.integers(3, 20, 2)
        f = pad_zero(rng.standard_normal((h, w)), 1)
        dg = divergence(gradient(f))
        np.testing.assert_allclose(dg, laplacian(f), atol=1e-12)


def test_composition_on_raw_fields_matches_away_from_first_row_col():
    # without a zero first row/column the one-sided boundary samples are
    # missing, so the identity holds strictly below/right of them
    rng = np.random.default_rng(1)
    f = rng.standard_normal((9, 14))
    dg = divergence(gradient(f))
    lap = laplacian(f)
    np.testing.assert_allclose(dg[1:, 1:], lap[1:, 1:], atol=1e-12)


def test_laplacian_impulse():
    f = np.zeros((3, 3))
    f[1, 1] = 1.0
    np.testing.assert_array_equal(laplacian(f), LAPLACE_KERNEL)


def test_laplacian_zero_field():
    assert not laplacian(np.zeros((5, 5))).any()


def test_laplacian_matches_convolution_oracle():
    rng = np.random.default_rng(2)
    for _ in range(20):
        f = rng.standard_normal((rng.integers(3, 24), rng.integers(3, 24)))
        oracle = convolve2d(f, LAPLACE_KERNEL, mode="same", boundary="fill")
        np.testing.assert_allclose(laplacian(f), oracle, atol=1e-12)


def test_laplacian_of_interior_supported_field_sums_to_zero():
    rng = np.random.default_rng(3)
    f = pad_zero(rng.standard_normal((6, 9)), 1)
    assert abs(laplacian(f).sum()) <= 1e-12


def test_periodic_composition_identity_everywhere():
    rng = np.random.default_rng(4)
    for _ in range(25):
        f = rng.standard_normal((rng.integers(3, 16), rng.integers(3, 16)))
        dg = divergence_periodic(gradient_periodic(f))
        np.testing.assert_allclose(dg, laplacian_periodic(f), atol=1e-12)


def test_periodic_ops_match_zero_exterior_on_padded_fields():
    rng = np.random.default_rng(5)
    f = pad_zero(rng.standard_normal((7, 8)), 2)
    gz, gp = gradient(f), gradient_periodic(f)
    np.testing.assert_array_equal(gz.ex, gp.ex)
    np.testing.assert_array_equal(gz.ey, gp.ey)
    e = VectorField(*gz)
    np.testing.assert_allclose(divergence(e), divergence_periodic(e), atol=1e-13)


def test_magnitude_orientation_pythagorean():
    e = VectorField(np.array([[3.0]]), np.array([[4.0]]))
    mag, theta = magnitude_orientation(e)
    assert mag[0, 0] == 5.0
    assert theta[0, 0] == np.arctan2(4.0, 3.0)


def test_magnitude_orientation_zero_convention():
    mag, theta = magnitude_orientation(VectorField(np.zeros((2, 2)), np.zeros((2, 2))))
    assert not mag.any() and not theta.any()


def test_recompose_round_trip():
    rng = np.random.default_rng(6)
    ex = rng.uniform(0.1, 2.0, (10, 12)) * rng.choice([-1.0, 1.0], (10, 12))
    ey = rng.uniform(0.1, 2.0, (10, 12)) * rng.choice([-1.0, 1.0], (10, 12))
    back = recompose(*magnitude_orientation(VectorField(ex, ey)))
    np.testing.assert_allclose(back.ex, ex, atol=1e-12)
    np.testing.assert_allclose(back.ey, ey, atol=1e-12)


def test_gaussian_blur_constant_interior_unchanged():
    f = pad_zero(np.full((20, 20), 4.0), 6)
    out = gaussian_blur(f, 1.0)
    # at least 3*sigma away from the constant patch's border nothing moves
    np.testing.assert_allclose(out[9:-9, 9:-9], 4.0, atol=1e-12)


def test_gaussian_blur_impulse_matches_dense_oracle():
    sigma = 1.0
    f = np.zeros((11, 13))
    f[5, 6] = 1.0
    out = gaussian_blur(f, sigma)

    radius = int(np.ceil(3 * sigma))
    x = np.arange(-radius, radius + 1)
    k1 = np.exp(-0.5 * (x / sigma) ** 2)
    k1 /= k1.sum()
    k2 = np.outer(k1, k1)
    oracle = np.zeros_like(f)
    for r in range(f.shape[0]):
        for c in range(f.shape[1]):
            acc = 0.0
            for dr in range(-radius, radius + 1):
                for dc in range(-radius, radius + 1):
                    rr, cc = r - dr, c - dc
                    if 0 <= rr < f.shape[0] and 0 <= cc < f.shape[1]:
                        acc += k2[dr + radius, dc + radius] * f[rr, cc]
            oracle[r, c] = acc
    np.testing.assert_allclose(out, oracle, atol=1e-12)


def test_gaussian_blur_zero_field():
    assert not gaussian_blur(np.zeros((8, 8)), 2.0).any()


def test_gaussian_blur_rejects_bad_sigma():
    with pytest.raises(ValueError):
        gaussian_blur(np.ones((4, 4)), 0.0)
    with pytest.raises(ValueError):
        gaussian_blur(np.ones((4, 4)), -1.0)


def test_gaussian_blur_preserves_interior_mass():
    rng = np.random.default_rng(8)
    sigma = 1.5
    margin = int(np.ceil(3 * sigma))
    f = pad_zero(rng.uniform(0.5, 2.0, (10, 10)), margin)
    out = gaussian_blur(f, sigma)
    assert abs(out.sum() - f.sum()) <= 1e-10 * f.sum()
