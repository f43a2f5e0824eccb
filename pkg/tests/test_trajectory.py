import math

import numpy as np
import pytest

from headsal.geometry import SpherePoint, great_circle_step
from headsal.synth import ivt_corpus_trajectory
from headsal.trajectory import (IVT_THRESHOLD_DEGPS, HmSample, Label, LabeledTrajectory,
                                fixations_of, ivt_classify, log_filename,
                                parse_log_filename, read_labeled_log, read_raw_log,
                                velocity, write_labeled_log)


def equator_track(step_deg, dt_ms=100.0, n=10):
    """Samples walking east along the equator at a constant angular step."""
    return [HmSample(i * dt_ms, SpherePoint(0.0, i * step_deg)) for i in range(n)]


class TestVelocity:
    def test_stationary_is_zero(self):
        a = HmSample(0, SpherePoint(12, 34))
        b = HmSample(100, SpherePoint(12, 34))
        assert velocity(a, b) == 0.0

    def test_equatorial_step_18_degps(self):
        # 1.8 deg in 100 ms; on the equator the central angle equals the
        # longitude difference, so v = 1.8 / 0.1 = 18 deg/s exactly
        a = HmSample(0, SpherePoint(0, 0))
        b = HmSample(100, SpherePoint(0, 1.8))
        assert velocity(a, b) == pytest.approx(18.0, abs=1e-12)

    def test_nine_degrees_per_second(self):
        a = HmSample(0, SpherePoint(0, 0))
        b = HmSample(1000, SpherePoint(0, 9))
        assert velocity(a, b) == pytest.approx(9.0, abs=1e-12)

    def test_rejects_non_increasing_time(self):
        a = HmSample(100, SpherePoint(0, 0))
        b = HmSample(100, SpherePoint(0, 1))
        with pytest.raises(ValueError):
            velocity(a, b)

    def test_invariant_under_longitude_rotation(self):
        rng = np.random.default_rng(0)
        pos = SpherePoint(20, 30)
        samples, rotated = [HmSample(0, pos)], [HmSample(0, SpherePoint(20, 30 + 77))]
        t = 0.0
        for _ in range(8):
            t += 100
            pos = great_circle_step(pos, rng.uniform(0, 360), rng.uniform(0.5, 5))
            samples.append(HmSample(t, pos))
            rotated.append(HmSample(t, SpherePoint.canonical(pos.lat, pos.lon + 77)))
        v1 = ivt_classify(samples).velocities
        v2 = ivt_classify(rotated).velocities
        np.testing.assert_allclose(v1, v2, atol=1e-9)


class TestIvtClassify:
    def test_stationary_all_fixation(self):
        traj = ivt_classify(equator_track(0.0))
        assert traj.labels[0] is Label.FIRST
        assert all(l is Label.FIXATION for l in traj.labels[1:])

    def test_constant_sweep_all_saccade(self):
        traj = ivt_classify(equator_track(3.0))  # 30 deg/s
        assert all(l is Label.SACCADE for l in traj.labels[1:])

    def test_exact_threshold_is_saccade(self):
        traj = ivt_classify(equator_track(1.8))  # exactly 18 deg/s
        assert all(l is Label.SACCADE for l in traj.labels[1:])
        just_below = ivt_classify(equator_track(1.8 - 1e-9))
        assert all(l is Label.FIXATION for l in just_below.labels[1:])

    def test_default_threshold_is_18(self):
        assert IVT_THRESHOLD_DEGPS == 18.0

    def test_alternating_corpus_matches_generator_truth(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            samples, truth = ivt_corpus_trajectory(rng)
            traj = ivt_classify(samples)
            assert [l.value for l in traj.labels] == truth

    def test_rejects_short_input(self):
        with pytest.raises(ValueError):
            ivt_classify([HmSample(0, SpherePoint(0, 0))])


class TestFixationsOf:
    def test_all_saccade_empty(self):
        traj = ivt_classify(equator_track(5.0))
        assert fixations_of(traj) == []

    def test_all_fixation_full_length(self):
        traj = ivt_classify(equator_track(0.5, n=7))
        assert len(fixations_of(traj)) == 6  # first sample excluded

    def test_mixed_trace_selects_dwells(self):
        rng = np.random.default_rng(2)
        samples, truth = ivt_corpus_trajectory(rng)
        traj = ivt_classify(samples)
        expected = [s.pos for s, t in zip(samples, truth) if t == "fixation"]
        assert fixations_of(traj) == expected


class TestLogIo:
    def test_filename_round_trip(self):
        name = log_filename("city_004", 17)
        assert name == "city_004__s17.csv"
        assert parse_log_filename(name) == ("city_004", 17)

    def test_filename_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_log_filename("nope.csv")

    def test_raw_log_round_trip(self, tmp_path):
        path = tmp_path / "img__s0.csv"
        path.write_text("t_ms,pitch_deg,yaw_deg\n0,0,0\n100,1.5,0\n250,2.0,3.0\n")
        samples = read_raw_log(path)
        assert len(samples) == 3
        assert samples[1].pos.lat == 1.5

    def test_raw_log_rejects_bad_header(self, tmp_path):
        path = tmp_path / "img__s0.csv"
        path.write_text("time,pitch,yaw\n0,0,0\n")
        with pytest.raises(ValueError, match="header"):
            read_raw_log(path)

    def test_raw_log_rejects_non_increasing_time(self, tmp_path):
        path = tmp_path / "img__s0.csv"
        path.write_text("t_ms,pitch_deg,yaw_deg\n0,0,0\n0,1,1\n")
        with pytest.raises(ValueError, match="timestamp"):
            read_raw_log(path)

    def test_labeled_round_trip_stable(self, tmp_path):
        rng = np.random.default_rng(3)
        samples, _ = ivt_corpus_trajectory(rng)
        traj = ivt_classify(samples, subject_id=4, image_id="img")
        path = tmp_path / log_filename("img", 4)
        write_labeled_log(path, traj)
        back = read_labeled_log(path)
        assert back.labels == traj.labels
        assert back.subject_id == 4 and back.image_id == "img"
        np.testing.assert_allclose(back.velocities, traj.velocities, rtol=1e-9)
        # a second round trip is bit-stable
        path2 = tmp_path / log_filename("img2", 4)
        write_labeled_log(path2, back)
        assert path2.read_text().splitlines()[1:] == path.read_text().splitlines()[1:]

    def test_label_count_enforced(self):
        with pytest.raises(ValueError):
            LabeledTrajectory(0, "x", [HmSample(0, SpherePoint(0, 0))], [])
