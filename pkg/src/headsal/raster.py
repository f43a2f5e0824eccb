"""Dense equirectangular grids (images and saliency maps) and their file formats.

Two interchange formats are supported:

* 8-bit grayscale PNG (linear quantization of [0, 1]).
* Raw little-endian float32, row-major, with a JSON sidecar
  ``{"width": W, "height": H, "channels": C}`` next to it (same stem, ``.json``).

Files store rows top-to-bottom like PNG.  In memory, grids are float64 arrays
indexed ``values[iy, ix]`` with row 0 at the *bottom* of the image so that the
row index increases with latitude (the pixel frame has its origin at the
lower-left corner).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, PngImagePlugin

from .validation import check_grid


@dataclass
class EquirectImage:
    """A full 360x180 image; ``values`` is (H, W) or (H, W, 3) float in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim not in (2, 3):
            raise ValueError(f"image must be (H, W) or (H, W, C), got {arr.shape}")
        if arr.ndim == 3 and arr.shape[2] != 3:
            raise ValueError("color images must have 3 channels")
        self.values = arr

    @property
    def h(self) -> int:
        return self.values.shape[0]

    @property
    def w(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.values.ndim == 2 else self.values.shape[2]

    def gray(self) -> np.ndarray:
        """Single-channel view; color is reduced by the Rec.601 luma weights."""
        if self.values.ndim == 2:
            return self.values
        return self.values @ np.array([0.299, 0.587, 0.114])


@dataclass
class SaliencyMap:
    """Dense non-negative (H, W) grid, normalized to [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        self.values = check_grid(self.values, "saliency map")
        if self.values.min() < -1e-12:
            raise ValueError("saliency values must be non-negative")

    @property
    def h(self) -> int:
        return self.values.shape[0]

    @property
    def w(self) -> int:
        return self.values.shape[1]


def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def save_float_grid(path, values: np.ndarray, provenance: dict | None = None) -> None:
    """Write a raw float32 grid plus its JSON sidecar."""
    path = Path(path)
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 2:
        h, w, c = arr.shape[0], arr.shape[1], 1
    elif arr.ndim == 3:
        h, w, c = arr.shape
    else:
        raise ValueError(f"grid must be 2-D or 3-D, got shape {arr.shape}")
    blob = arr[::-1].astype("<f4").tobytes()  # rows top-to-bottom on disk
    path.write_bytes(blob)
    sidecar = {"width": w, "height": h, "channels": c}
    if provenance:
        sidecar["provenance"] = provenance
    _sidecar_path(path).write_text(json.dumps(sidecar) + "\n")


def load_float_grid(path) -> np.ndarray:
    path = Path(path)
    meta = json.loads(_sidecar_path(path).read_text())
    w, h, c = int(meta["width"]), int(meta["height"]), int(meta["channels"])
    blob = path.read_bytes()
    expected = w * h * c * 4
    if len(blob) != expected:
        raise ValueError(f"{path}: expected {expected} bytes for {w}x{h}x{c}, got {len(blob)}")
    arr = np.frombuffer(blob, dtype="<f4").astype(np.float64)
    shape = (h, w) if c == 1 else (h, w, c)
    return arr.reshape(shape)[::-1].copy()


def _png_info(provenance: dict | None) -> PngImagePlugin.PngInfo | None:
    if not provenance:
        return None
    info = PngImagePlugin.PngInfo()
    info.add_text("provenance", json.dumps(provenance))
    return info


def save_png_gray(path, values: np.ndarray, provenance: dict | None = None) -> None:
    """8-bit grayscale PNG, linear quantization of values assumed in [0, 1]."""
    arr = check_grid(values, "grid")
    q = np.clip(np.rint(arr * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(q[::-1], mode="L").save(Path(path), pnginfo=_png_info(provenance))


def load_png(path, color: bool = False) -> np.ndarray:
    """PNG to float grid in [0, 1]; grayscale by default, (H, W, 3) with ``color``."""
    img = Image.open(Path(path))
    img = img.convert("RGB" if color else "L")
    arr = np.asarray(img, dtype=np.float64) / 255.0
    return arr[::-1].copy()


def _jet(v: np.ndarray) -> np.ndarray:
    """Classic piecewise-linear jet colormap; v in [0, 1] -> (..., 3) in [0, 1]."""
    r = np.clip(1.5 - np.abs(4.0 * v - 3.0), 0.0, 1.0)
    g = np.clip(1.5 - np.abs(4.0 * v - 2.0), 0.0, 1.0)
    b = np.clip(1.5 - np.abs(4.0 * v - 1.0), 0.0, 1.0)
    return np.stack([r, g, b], axis=-1)


def save_png_heatmap(path, values: np.ndarray, provenance: dict | None = None) -> None:
    """Color heatmap PNG for figures (jet colormap over [0, 1])."""
    arr = check_grid(values, "grid")
    rgb = np.clip(np.rint(_jet(np.clip(arr, 0.0, 1.0)) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(rgb[::-1], mode="RGB").save(Path(path), pnginfo=_png_info(provenance))


def load_image(path, color: bool = False) -> EquirectImage:
    """Load a PNG or raw-float32 equirectangular image."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        return EquirectImage(load_png(path, color=color))
    return EquirectImage(load_float_grid(path))


def load_map(path) -> SaliencyMap:
    path = Path(path)
    if path.suffix.lower() == ".png":
        return SaliencyMap(load_png(path))
    return SaliencyMap(load_float_grid(path))


def save_map(path, m: SaliencyMap, provenance: dict | None = None) -> None:
    path = Path(path)
    if path.suffix.lower() == ".png":
        save_png_gray(path, m.values, provenance)
    else:
        save_float_grid(path, m.values, provenance)
