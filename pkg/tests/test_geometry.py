import math

import numpy as np
import pytest

from headsal.geometry import (PixelCoord, SpherePoint, ViewportSpec, canonicalize_latlon,
                              from_equirect, great_circle_bearing, great_circle_step,
                              haversine_rad, latlon_to_pixel, orthodromic_distance,
                              pixel_to_latlon, spherical_delta, to_equirect)


def cart(lat, lon):
    la, lo = math.radians(lat), math.radians(lon)
    return np.array([math.cos(la) * math.cos(lo), math.cos(la) * math.sin(lo), math.sin(la)])


def arccos_oracle(a: SpherePoint, b: SpherePoint) -> float:
    """Independent great-circle distance via the dot product."""
    return math.acos(float(np.clip(np.dot(cart(a.lat, a.lon), cart(b.lat, b.lon)), -1, 1)))


class TestSphericalDelta:
    def test_identical_points(self):
        assert spherical_delta(SpherePoint(0, 0), SpherePoint(0, 0)) == 0.0

    def test_antipodal_on_equator(self):
        assert spherical_delta(SpherePoint(0, 0), SpherePoint(0, 180)) == pytest.approx(math.pi)

    def test_pole_from_equator(self):
        assert spherical_delta(SpherePoint(0, 0), SpherePoint(90, 0)) == pytest.approx(math.pi / 2)

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = SpherePoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
            b = SpherePoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
            assert abs(spherical_delta(a, b) - spherical_delta(b, a)) < 1e-12

    def test_triangle_inequality(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            pts = [SpherePoint(math.degrees(math.asin(rng.uniform(-1, 1))),
                               rng.uniform(-180, 180)) for _ in range(3)]
            ab = spherical_delta(pts[0], pts[1])
            bc = spherical_delta(pts[1], pts[2])
            ac = spherical_delta(pts[0], pts[2])
            assert ac <= ab + bc + 1e-9

    def test_matches_arccos_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            a = SpherePoint(rng.uniform(-89, 89), rng.uniform(-180, 180))
            b = SpherePoint(rng.uniform(-89, 89), rng.uniform(-180, 180))
            assert spherical_delta(a, b) == pytest.approx(arccos_oracle(a, b), abs=1e-9)


class TestOrthodromicDistance:
    def test_quarter_circle_unit_radius(self):
        d = orthodromic_distance(SpherePoint(0, 0), SpherePoint(0, 90), 1.0)
        assert d == pytest.approx(math.pi / 2)

    def test_antipodal_radius_two(self):
        d = orthodromic_distance(SpherePoint(0, 0), SpherePoint(0, 180), 2.0)
        assert d == pytest.approx(2 * math.pi)

    def test_against_dot_product_oracle(self):
        a, b = SpherePoint(45, 10), SpherePoint(45, 20)
        assert orthodromic_distance(a, b, 1.0) == pytest.approx(arccos_oracle(a, b), abs=1e-12)

    @pytest.mark.parametrize("r", [0.0, -1.0])
    def test_rejects_nonpositive_radius(self, r):
        with pytest.raises(ValueError):
            orthodromic_distance(SpherePoint(0, 0), SpherePoint(0, 1), r)


class TestEquirectMapping:
    def test_center(self):
        px = to_equirect(SpherePoint(0, 0), 4000, 2000)
        assert (px.x, px.y) == (2000.0, 1000.0)

    def test_corner(self):
        px = to_equirect(SpherePoint(90, -180), 4000, 2000)
        assert (px.x, px.y) == (0.0, 2000.0)

    def test_hand_evaluated_point(self):
        px = to_equirect(SpherePoint(-45, 90), 360, 180)
        assert (px.x, px.y) == (270.0, 45.0)

    def test_inverse_center(self):
        p = from_equirect(PixelCoord(2000, 1000), 4000, 2000)
        assert (p.lat, p.lon) == (0.0, 0.0)

    def test_inverse_origin(self):
        p = from_equirect(PixelCoord(0, 0), 4, 2)
        assert (p.lat, p.lon) == (-90.0, -180.0)

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            from_equirect(PixelCoord(4001, 10), 4000, 2000)
        with pytest.raises(ValueError):
            from_equirect(PixelCoord(10, -0.5), 4000, 2000)

    def test_round_trip_random_pixels(self):
        rng = np.random.default_rng(3)
        w, h = 4000, 2000
        x = rng.uniform(0, w, 1000)
        y = rng.uniform(0, h, 1000)
        lat, lon = pixel_to_latlon(x, y, w, h)
        x2, y2 = latlon_to_pixel(lat, lon, w, h)
        assert np.max(np.abs(x2 - x)) < 1e-9
        assert np.max(np.abs(y2 - y)) < 1e-9

    def test_longitude_strictly_increasing_in_x(self):
        xs = np.linspace(0, 360, 37)
        lats, lons = pixel_to_latlon(xs, np.full_like(xs, 90.0), 360, 180)
        assert np.all(np.diff(lons) > 0)


class TestCanonicalize:
    def test_pole_reflection(self):
        assert canonicalize_latlon(91, 10) == (89.0, -170.0)
        assert canonicalize_latlon(-91, 10) == (-89.0, -170.0)

    def test_longitude_wrap(self):
        assert canonicalize_latlon(0, 180) == (0.0, -180.0)
        assert canonicalize_latlon(0, 540) == (0.0, -180.0)
        assert canonicalize_latlon(0, -181) == (0.0, 179.0)

    def test_idempotent(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            lat, lon = rng.uniform(-400, 400, 2)
            once = canonicalize_latlon(lat, lon)
            assert canonicalize_latlon(*once) == once

    def test_bounds(self):
        rng = np.random.default_rng(5)
        lat, lon = canonicalize_latlon(rng.uniform(-720, 720, 100), rng.uniform(-720, 720, 100))
        assert np.all((lat >= -90) & (lat <= 90))
        assert np.all((lon >= -180) & (lon < 180))


class TestGreatCircleStep:
    def test_east_on_equator(self):
        p = great_circle_step(SpherePoint(0, 0), 0.0, 4.0)
        assert p.lat == pytest.approx(0.0, abs=1e-12)
        assert p.lon == pytest.approx(4.0)

    def test_north(self):
        p = great_circle_step(SpherePoint(10, 20), 90.0, 5.0)
        assert p.lat == pytest.approx(15.0)
        assert p.lon == pytest.approx(20.0)

    def test_pole_crossing_reflects(self):
        p = great_circle_step(SpherePoint(89, 0), 90.0, 4.0)
        assert p.lat == pytest.approx(87.0)
        assert abs(p.lon) == pytest.approx(180.0)

    def test_step_length_is_arc(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            start = SpherePoint(rng.uniform(-85, 85), rng.uniform(-180, 180))
            arc = rng.uniform(0.5, 20)
            end = great_circle_step(start, rng.uniform(0, 360), arc)
            assert math.degrees(spherical_delta(start, end)) == pytest.approx(arc, abs=1e-9)

    def test_bearing_round_trip(self):
        assert great_circle_bearing(SpherePoint(0, 0), SpherePoint(0, 10)) == pytest.approx(0.0)
        assert great_circle_bearing(SpherePoint(0, 0), SpherePoint(10, 0)) == pytest.approx(90.0)


class TestViewportSpec:
    @pytest.mark.parametrize("fov", [0.0, 180.0, -10.0])
    def test_rejects_bad_fov(self, fov):
        with pytest.raises(ValueError):
            ViewportSpec(fov_w_deg=fov)

    def test_rejects_empty_output(self):
        with pytest.raises(ValueError):
            ViewportSpec(out_w=0)
