"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def check_grid(values, name: str = "map") -> np.ndarray:
    """Validate a dense 2-D float grid (saliency map or grayscale image plane).

    Accepts anything array-like, including the package's grid containers via
    their ``values`` attribute.  Returns a float64 (H, W) array.
    """
    values = getattr(values, "values", values)
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "maps") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{what} have mismatched shapes {a.shape} vs {b.shape}")


def check_fixation_pixels(fixations, w: int, h: int) -> np.ndarray:
    """Validate a fixation list as integer pixel indices, returned as (n, 2) [ix, iy].

    Accepts PixelCoord-like objects (``.x``/``.y``) or (x, y) pairs; continuous
    coordinates are binned to the pixel that contains them.
    """
    rows = []
    for f in fixations:
        x = getattr(f, "x", None)
        if x is None:
            x, y = f
        else:
            y = f.y
        ix = min(int(x), w - 1)
        iy = min(int(y), h - 1)
        if not (0 <= ix < w and 0 <= iy < h):
            raise ValueError(f"fixation pixel ({x}, {y}) out of bounds for {w}x{h}")
        rows.append((ix, iy))
    if not rows:
        raise ValueError("need at least one fixation")
    return np.asarray(rows, dtype=np.int64)


def check_distribution(p, n: int | None = None, name: str = "distribution") -> np.ndarray:
    """Validate a 1-D probability vector (non-negative, sums to 1)."""
    arr = np.asarray(p, dtype=np.float64).ravel()
    if n is not None and arr.size != n:
        raise ValueError(f"{name} must have length {n}, got {arr.size}")
    if np.any(arr < -1e-12) or not np.isclose(arr.sum(), 1.0, atol=1e-6):
        raise ValueError(f"{name} is not a probability distribution (sum={arr.sum()})")
    return np.clip(arr, 0.0, None)


def check_seed(seed) -> int:
    if seed is None:
        raise ValueError("a seed is required for reproducible runs")
    return int(seed)
