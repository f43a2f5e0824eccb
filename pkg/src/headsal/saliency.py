"""Saliency maps from fixation sets, and the front-center-bias (FCB) prior.

Fixations are splatted onto the equirectangular grid with an isotropic 2-D
Gaussian whose width matches a 90-pixel FWHM at the 4000-pixel reference image
width (about 1.5 degrees of visual angle), scaled linearly for other widths.
Kernels wrap across the left/right seam.  Maps are max-normalized to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import SpherePoint, latlon_to_pixel, pixel_to_latlon
from .raster import SaliencyMap

# FWHM -> sigma for the 90 px kernel of the reference rendering width
KERNEL_FWHM_PX = 90.0
REFERENCE_WIDTH_PX = 4000
SIGMA_REF_PX = KERNEL_FWHM_PX / (2.0 * math.sqrt(2.0 * math.log(2.0)))
DEFAULT_FCB_WEIGHT = 0.3


def kernel_sigma_px(w: int) -> float:
    """Splat kernel sigma in pixels for a map of width ``w``."""
    return SIGMA_REF_PX * w / REFERENCE_WIDTH_PX


@dataclass(frozen=True)
class FcbParams:
    """Separable equirectangular Gaussian centered at (0, 0)."""

    sigma_lon_deg: float
    sigma_lat_deg: float
    weight: float = DEFAULT_FCB_WEIGHT

    def __post_init__(self):
        if self.sigma_lon_deg <= 0 or self.sigma_lat_deg <= 0:
            raise ValueError("FCB sigmas must be positive")
        if self.weight < 0:
            raise ValueError("FCB weight must be >= 0")


def _splat(acc: np.ndarray, x0: float, y0: float, sigma_x: float, sigma_y: float) -> None:
    """Add one truncated Gaussian at continuous position (x0, y0), wrapping in x.

    Truncation at 3 sigma leaves at most exp(-4.5) ~ 1.1% of the peak outside.
    """
    h, w = acc.shape
    rx = max(int(math.ceil(3.0 * sigma_x)), 1)
    ry = max(int(math.ceil(3.0 * sigma_y)), 1)
    iy0 = max(int(math.floor(y0 - ry)), 0)
    iy1 = min(int(math.ceil(y0 + ry)), h)
    if iy1 <= iy0:
        return
    ix0 = int(math.floor(x0 - rx))
    ix1 = int(math.ceil(x0 + rx))
    cy = np.arange(iy0, iy1) + 0.5
    cx = np.arange(ix0, ix1) + 0.5
    gy = np.exp(-((cy - y0) ** 2) / (2.0 * sigma_y ** 2))
    gx = np.exp(-((cx - x0) ** 2) / (2.0 * sigma_x ** 2))
    patch = np.outer(gy, gx)
    if 0 <= ix0 and ix1 <= w:
        acc[iy0:iy1, ix0:ix1] += patch
    else:
        cols = np.mod(np.arange(ix0, ix1), w)
        np.add.at(acc, (np.arange(iy0, iy1)[:, None], cols[None, :]), patch)


def accumulate_fixations(fixations: Sequence[SpherePoint], w: int, h: int,
                         sigma_px: float | None = None,
                         sphere_aware: bool = False) -> np.ndarray:
    """Un-normalized fixation density on a w-by-h grid (fixed summation order)."""
    if w < 1 or h < 1:
        raise ValueError("map dimensions must be >= 1 pixel")
    sigma = kernel_sigma_px(w) if sigma_px is None else float(sigma_px)
    if sigma <= 0:
        raise ValueError("kernel sigma must be positive")
    acc = np.zeros((h, w), dtype=np.float64)
    for p in fixations:
        x0, y0 = latlon_to_pixel(p.lat, p.lon, w, h)
        sx = sigma
        if sphere_aware:
            # horizontal pixels shrink by cos(lat) on the sphere
            sx = sigma / max(math.cos(math.radians(p.lat)), 1e-3)
        _splat(acc, float(x0), float(y0), sx, sigma)
    return acc


def _max_normalized(acc: np.ndarray) -> np.ndarray:
    peak = acc.max()
    if peak <= 0:
        return np.zeros_like(acc)
    return acc / peak


def render_saliency(fixations: Sequence[SpherePoint], w: int, h: int,
                    sigma_px: float | None = None,
                    sphere_aware: bool = False) -> SaliencyMap:
    """Max-normalized saliency map of a fixation set; empty input gives a zero map."""
    acc = accumulate_fixations(fixations, w, h, sigma_px, sphere_aware)
    return SaliencyMap(_max_normalized(acc))


def build_fcb(w: int, h: int, params: FcbParams) -> SaliencyMap:
    """Render the front-center-bias prior; its grid maximum equals ``params.weight``."""
    if w < 1 or h < 1:
        raise ValueError("map dimensions must be >= 1 pixel")
    ys = np.arange(h) + 0.5
    xs = np.arange(w) + 0.5
    lat, _ = pixel_to_latlon(np.zeros_like(ys), ys, w, h)
    _, lon = pixel_to_latlon(xs, np.zeros_like(xs), w, h)
    gy = np.exp(-(lat ** 2) / (2.0 * params.sigma_lat_deg ** 2))
    gx = np.exp(-(lon ** 2) / (2.0 * params.sigma_lon_deg ** 2))
    grid = np.outer(gy, gx)
    if params.weight == 0:
        return SaliencyMap(np.zeros((h, w)))
    return SaliencyMap(params.weight * grid / grid.max())


def fuse_fcb(s_tilde: SaliencyMap, c: SaliencyMap) -> SaliencyMap:
    """Element-wise sum of content map and FCB prior, max-normalized to [0, 1]."""
    if s_tilde.values.shape != c.values.shape:
        raise ValueError(f"map shapes differ: {s_tilde.values.shape} vs {c.values.shape}")
    return SaliencyMap(_max_normalized(s_tilde.values + c.values))


def fit_fcb(fixations: Sequence[SpherePoint], min_sigma_deg: float = 1.0) -> FcbParams:
    """Moment-matched FCB parameters from a fixation sample (unit weight).

    The longitude spread is estimated circularly (so a near-uniform longitude
    distribution yields a very large sigma rather than an aliased one); the
    latitude spread is the plain standard deviation about 0.
    """
    pts = list(fixations)
    if len(pts) < 10:
        raise ValueError(f"need >= 10 fixations to fit the FCB, got {len(pts)}")
    lats = np.array([p.lat for p in pts])
    lons = np.radians(np.array([p.lon for p in pts]))
    sigma_lat = float(np.sqrt(np.mean(lats ** 2)))
    r = float(np.abs(np.mean(np.exp(1j * lons))))
    sigma_lon = math.degrees(math.sqrt(-2.0 * math.log(max(r, 1e-12))))
    return FcbParams(sigma_lon_deg=max(sigma_lon, min_sigma_deg),
                     sigma_lat_deg=max(sigma_lat, min_sigma_deg),
                     weight=1.0)
