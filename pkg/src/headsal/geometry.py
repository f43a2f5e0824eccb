"""Spherical coordinates, great-circle arithmetic and the equirectangular mapping.

Positions on the unit sphere are (latitude, longitude) in degrees: latitude is
the pitch angle in [-90, +90], longitude the yaw angle in [-180, +180).  The
equirectangular pixel frame has its origin at the *lower left* corner, x along
longitude and y along latitude.

All functions accept plain floats or numpy arrays and are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def canonicalize_latlon(lat, lon):
    """Reduce (lat, lon) to latitude in [-90, 90], longitude in [-180, 180).

    A latitude beyond a pole is reflected back across it and the longitude
    shifted by 180 degrees (what physically happens when a head trajectory
    crosses a pole).  Idempotent.
    """
    lat = np.asarray(lat, dtype=float)
    lon = np.asarray(lon, dtype=float)
    lat = np.mod(lat + 90.0, 360.0) - 90.0
    over = lat > 90.0
    lat = np.where(over, 180.0 - lat, lat)
    lon = np.where(over, lon + 180.0, lon)
    lon = np.mod(lon + 180.0, 360.0) - 180.0
    lat = np.clip(lat, -90.0, 90.0)
    if lat.ndim == 0:
        return float(lat), float(lon)
    return lat, lon


@dataclass(frozen=True)
class SpherePoint:
    """A head-movement position: latitude (pitch) and longitude (yaw), degrees."""

    lat: float
    lon: float

    @classmethod
    def canonical(cls, lat: float, lon: float) -> "SpherePoint":
        la, lo = canonicalize_latlon(lat, lon)
        return cls(la, lo)

    def canonicalized(self) -> "SpherePoint":
        return SpherePoint.canonical(self.lat, self.lon)


@dataclass(frozen=True)
class PixelCoord:
    """Continuous pixel position, origin at the lower-left image corner."""

    x: float
    y: float


@dataclass(frozen=True)
class ViewportSpec:
    """Field of view and output resolution of the extracted viewport."""

    fov_w_deg: float = 90.0
    fov_h_deg: float = 90.0
    out_w: int = 84
    out_h: int = 84

    def __post_init__(self):
        if not (0.0 < self.fov_w_deg < 180.0 and 0.0 < self.fov_h_deg < 180.0):
            raise ValueError(f"field of view must lie in (0, 180) degrees, got "
                             f"{self.fov_w_deg}x{self.fov_h_deg}")
        if self.out_w < 1 or self.out_h < 1:
            raise ValueError("viewport output resolution must be >= 1 pixel")


def haversine_rad(lat1, lon1, lat2, lon2):
    """Central angle between two (lat, lon) degree positions, in radians.

    Haversine form: numerically stable for small separations, exact range
    [0, pi].  Vectorized over numpy inputs.
    """
    p1 = np.radians(np.asarray(lat1, dtype=float))
    p2 = np.radians(np.asarray(lat2, dtype=float))
    dpsi = p2 - p1
    dtheta = np.radians(np.asarray(lon2, dtype=float)) - np.radians(np.asarray(lon1, dtype=float))
    h = np.sin(dpsi / 2.0) ** 2 + np.cos(p1) * np.cos(p2) * np.sin(dtheta / 2.0) ** 2
    out = 2.0 * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))
    if out.ndim == 0:
        return float(out)
    return out


def spherical_delta(a: SpherePoint, b: SpherePoint) -> float:
    """Central angle between two sphere points, radians in [0, pi]."""
    return haversine_rad(a.lat, a.lon, b.lat, b.lon)


def orthodromic_distance(a: SpherePoint, b: SpherePoint, r: float = 1.0) -> float:
    """Great-circle distance between two points on a sphere of radius ``r``."""
    if r <= 0:
        raise ValueError(f"sphere radius must be positive, got {r}")
    return r * spherical_delta(a, b)


def latlon_to_pixel(lat, lon, w: int, h: int):
    """Map degrees to equirectangular pixel coordinates (vectorized).

    x = (lon/360 + 1/2) * w,  y = (lat/180 + 1/2) * h, origin lower-left.
    """
    x = (np.asarray(lon, dtype=float) / 360.0 + 0.5) * w
    y = (np.asarray(lat, dtype=float) / 180.0 + 0.5) * h
    return x, y


def pixel_to_latlon(x, y, w: int, h: int):
    """Inverse of :func:`latlon_to_pixel` (vectorized)."""
    lon = (np.asarray(x, dtype=float) / w - 0.5) * 360.0
    lat = (np.asarray(y, dtype=float) / h - 0.5) * 180.0
    return lat, lon


def to_equirect(p: SpherePoint, w: int, h: int) -> PixelCoord:
    """Project a sphere point onto a w-by-h equirectangular image."""
    if w < 1 or h < 1:
        raise ValueError("image dimensions must be >= 1 pixel")
    x, y = latlon_to_pixel(p.lat, p.lon, w, h)
    return PixelCoord(float(x), float(y))


def from_equirect(px: PixelCoord, w: int, h: int) -> SpherePoint:
    """Back-project a pixel position to the sphere; rejects out-of-bounds pixels."""
    if not (0.0 <= px.x <= w and 0.0 <= px.y <= h):
        raise ValueError(f"pixel ({px.x}, {px.y}) out of bounds for {w}x{h} image")
    lat, lon = pixel_to_latlon(px.x, px.y, w, h)
    return SpherePoint(float(lat), float(lon))


def great_circle_step(p: SpherePoint, direction_deg: float, arc_deg: float) -> SpherePoint:
    """Move ``arc_deg`` along the great circle leaving ``p`` toward ``direction_deg``.

    Directions are measured in the local tangent frame of the equirectangular
    image: 0 deg points toward +longitude (east), 90 deg toward +latitude
    (north).  Pole crossings come out already canonical.
    """
    lat1 = math.radians(p.lat)
    d = math.radians(arc_deg)
    # navigation form expects bearing clockwise from north
    brg = math.radians(90.0 - direction_deg)
    sin_lat2 = math.sin(lat1) * math.cos(d) + math.cos(lat1) * math.sin(d) * math.cos(brg)
    lat2 = math.asin(max(-1.0, min(1.0, sin_lat2)))
    dlon = math.atan2(math.sin(brg) * math.sin(d) * math.cos(lat1),
                      math.cos(d) - math.sin(lat1) * sin_lat2)
    return SpherePoint.canonical(math.degrees(lat2), p.lon + math.degrees(dlon))


def great_circle_bearing(a: SpherePoint, b: SpherePoint) -> float:
    """Initial direction from ``a`` toward ``b`` (0=east, 90=north), degrees in [0, 360)."""
    la1 = math.radians(a.lat)
    la2 = math.radians(b.lat)
    dlon = math.radians(b.lon - a.lon)
    y = math.sin(dlon) * math.cos(la2)
    x = math.cos(la1) * math.sin(la2) - math.sin(la1) * math.cos(la2) * math.cos(dlon)
    nav = math.degrees(math.atan2(y, x))  # clockwise from north
    return (90.0 - nav) % 360.0
