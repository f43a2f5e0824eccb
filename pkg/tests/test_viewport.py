import numpy as np
import pytest

from headsal.geometry import SpherePoint, ViewportSpec, pixel_to_latlon
from headsal.raster import EquirectImage
from headsal.viewport import bilinear_sample, extract_viewport, nearest_sample


def test_uniform_image_gives_uniform_patch():
    img = EquirectImage(np.full((90, 180), 0.37))
    patch = extract_viewport(img, SpherePoint(12, -140), ViewportSpec(90, 90, 32, 32))
    np.testing.assert_allclose(patch, 0.37, atol=1e-12)


def test_bright_dot_lands_at_patch_center():
    img = np.zeros((91, 181))
    img[45, 90] = 1.0
    lat, lon = pixel_to_latlon(90.5, 45.5, 181, 91)  # center of the lit pixel
    patch = extract_viewport(EquirectImage(img), SpherePoint(float(lat), float(lon)),
                             ViewportSpec(60, 60, 21, 21))
    assert np.unravel_index(np.argmax(patch), patch.shape) == (10, 10)


def test_hemisphere_contrast():
    w, h = 360, 180
    img = np.zeros((h, w))
    img[:, 90:270] = 1.0  # bright for |lon| < 90
    spec = ViewportSpec(90, 90, 32, 32)
    bright = extract_viewport(EquirectImage(img), SpherePoint(0, 0), spec)
    dark = extract_viewport(EquirectImage(img), SpherePoint(0, 180), spec)
    assert bright.mean() > 0.98
    assert dark.mean() < 0.02


def test_longitude_rotation_equivariance():
    rng = np.random.default_rng(0)
    w, h = 180, 90
    img = rng.uniform(0, 1, (h, w))
    spec = ViewportSpec(75, 75, 24, 24)
    shift_px = 25
    delta = shift_px * 360.0 / w
    rotated = np.roll(img, shift_px, axis=1)
    for lat, lon in [(0.0, 10.0), (30.0, -120.0), (-55.0, 77.0)]:
        base = extract_viewport(EquirectImage(img), SpherePoint(lat, lon), spec)
        moved = extract_viewport(EquirectImage(rotated), SpherePoint(lat, lon + delta), spec)
        np.testing.assert_allclose(moved, base, atol=1e-6)


def test_values_preserved_in_range():
    rng = np.random.default_rng(1)
    img = EquirectImage(rng.uniform(0, 1, (64, 128)))
    patch = extract_viewport(img, SpherePoint(80, 0), ViewportSpec(100, 100, 16, 16))
    assert patch.min() >= 0.0 and patch.max() <= 1.0


def test_nearest_interpolation_exact_on_constant_blocks():
    img = np.zeros((90, 180))
    img[:, :90] = 1.0
    patch = extract_viewport(EquirectImage(img), SpherePoint(0, -135),
                             ViewportSpec(40, 40, 8, 8), interpolation="nearest")
    assert set(np.unique(patch)) <= {0.0, 1.0}


def test_unknown_interpolation_rejected():
    img = EquirectImage(np.zeros((8, 16)))
    with pytest.raises(ValueError):
        extract_viewport(img, SpherePoint(0, 0), ViewportSpec(), interpolation="cubic")


def test_color_image_patch_shape():
    img = EquirectImage(np.random.default_rng(2).uniform(0, 1, (32, 64, 3)))
    patch = extract_viewport(img, SpherePoint(0, 0), ViewportSpec(90, 90, 12, 10))
    assert patch.shape == (10, 12, 3)


def test_sampling_helpers_agree_at_pixel_centers():
    rng = np.random.default_rng(3)
    plane = rng.uniform(0, 1, (20, 30))
    xs = np.arange(30) + 0.5
    ys = np.full_like(xs, 7.5)
    np.testing.assert_allclose(bilinear_sample(plane, xs, ys), plane[7, :], atol=1e-12)
    np.testing.assert_allclose(nearest_sample(plane, xs, ys), plane[7, :], atol=0)
