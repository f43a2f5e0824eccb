"""Gnomonic (rectilinear) viewport extraction from equirectangular images.

The viewport is what an HMD wearer sees at a given head orientation: a planar
perspective image tangent to the sphere at the view center.  Sampling wraps in
longitude and clamps at the poles.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .geometry import SpherePoint, ViewportSpec, latlon_to_pixel
from .raster import EquirectImage


@lru_cache(maxsize=16)
def _view_directions(spec: ViewportSpec) -> np.ndarray:
    """Unit ray directions of the output grid in the camera frame, (out_h, out_w, 3).

    Camera frame: +x forward (view center), +y toward increasing patch column,
    +z up.  With the world frame used below this makes patch columns increase
    with longitude and row 0 the top of the view, so a viewport near the image
    center reads like a crop of the equirectangular neighborhood.
    """
    half_w = math.tan(math.radians(spec.fov_w_deg) / 2.0)
    half_h = math.tan(math.radians(spec.fov_h_deg) / 2.0)
    # pixel centers of the image plane at focal distance 1
    us = (np.arange(spec.out_w) + 0.5) / spec.out_w * 2.0 - 1.0  # -1..1 left->right
    vs = 1.0 - (np.arange(spec.out_h) + 0.5) / spec.out_h * 2.0  # +1..-1 top->bottom
    y = np.tile(us * half_w, (spec.out_h, 1))
    z = np.tile((vs * half_h)[:, None], (1, spec.out_w))
    x = np.ones_like(y)
    d = np.stack([x, y, z], axis=-1)
    return d / np.linalg.norm(d, axis=-1, keepdims=True)


def _rotate_to_center(dirs: np.ndarray, center: SpherePoint) -> np.ndarray:
    """Rotate camera-frame rays so that +x points at (lat, lon) = center."""
    la = math.radians(center.lat)
    lo = math.radians(center.lon)
    # pitch up by lat (about camera y), then yaw by lon (about world z)
    r_pitch = np.array([[math.cos(la), 0.0, -math.sin(la)],
                        [0.0, 1.0, 0.0],
                        [math.sin(la), 0.0, math.cos(la)]])
    r_yaw = np.array([[math.cos(lo), -math.sin(lo), 0.0],
                      [math.sin(lo), math.cos(lo), 0.0],
                      [0.0, 0.0, 1.0]])
    return dirs @ (r_yaw @ r_pitch).T


def bilinear_sample(plane: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Sample a (H, W) plane at continuous pixel positions, wrap x / clamp y.

    Pixel (ix, iy) covers [ix, ix+1) x [iy, iy+1) with its center at
    (ix+0.5, iy+0.5).
    """
    h, w = plane.shape
    fx = x - 0.5
    fy = np.clip(y - 0.5, 0.0, h - 1.0)
    x0 = np.floor(fx).astype(np.int64)
    y0 = np.floor(fy).astype(np.int64)
    tx = fx - x0
    ty = fy - y0
    x0m = np.mod(x0, w)
    x1m = np.mod(x0 + 1, w)
    y0c = np.clip(y0, 0, h - 1)
    y1c = np.clip(y0 + 1, 0, h - 1)
    v00 = plane[y0c, x0m]
    v01 = plane[y0c, x1m]
    v10 = plane[y1c, x0m]
    v11 = plane[y1c, x1m]
    return (v00 * (1 - tx) * (1 - ty) + v01 * tx * (1 - ty)
            + v10 * (1 - tx) * ty + v11 * tx * ty)


def nearest_sample(plane: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Nearest-neighbor variant of :func:`bilinear_sample` (for exactness tests)."""
    h, w = plane.shape
    ix = np.mod(np.floor(x).astype(np.int64), w)
    iy = np.clip(np.floor(y).astype(np.int64), 0, h - 1)
    return plane[iy, ix]


def extract_viewport(image: EquirectImage, center: SpherePoint, spec: ViewportSpec,
                     interpolation: str = "bilinear") -> np.ndarray:
    """Extract the gnomonic viewport centered at ``center``.

    Returns a float array (out_h, out_w) for grayscale input or
    (out_h, out_w, 3) for color, values preserved in [0, 1].  Row 0 is the top
    of the view.
    """
    if image.w < 1 or image.h < 1:
        raise ValueError("cannot extract a viewport from an empty image")
    if interpolation not in ("bilinear", "nearest"):
        raise ValueError(f"unknown interpolation {interpolation!r}")
    dirs = _rotate_to_center(_view_directions(spec), center)
    lat = np.degrees(np.arcsin(np.clip(dirs[..., 2], -1.0, 1.0)))
    lon = np.degrees(np.arctan2(dirs[..., 1], dirs[..., 0]))
    x, y = latlon_to_pixel(lat, lon, image.w, image.h)
    sample = bilinear_sample if interpolation == "bilinear" else nearest_sample
    if image.values.ndim == 2:
        return sample(image.values, x, y)
    return np.stack([sample(image.values[..., c], x, y) for c in range(3)], axis=-1)
