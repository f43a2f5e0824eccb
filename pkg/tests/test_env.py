import numpy as np
import pytest

from headsal.analysis import finding_band_corpus
from headsal.env import (EnvConfig, FixationMode, HeadMovementEnv, Rollout,
                         action_direction_deg, mean_step_magnitude, read_rollouts,
                         trajectory_to_fixations, write_rollouts)
from headsal.geometry import SpherePoint, ViewportSpec
from headsal.raster import EquirectImage
from headsal.synth import smooth_image
from headsal.trajectory import ivt_classify, HmSample
from headsal.viewport import extract_viewport


@pytest.fixture
def cfg():
    return EnvConfig(step_mag_deg=4.0, steps=12, viewport=ViewportSpec(90, 90, 16, 16))


@pytest.fixture
def image():
    return smooth_image(96, 48, np.random.default_rng(0))


class TestReset:
    def test_starts_at_center(self, image, cfg):
        state = HeadMovementEnv(image, cfg).reset()
        assert (state.pos.lat, state.pos.lon) == (0.0, 0.0)
        assert state.t == 0

    def test_reset_deterministic(self, image, cfg):
        env = HeadMovementEnv(image, cfg)
        a, b = env.reset(), env.reset()
        assert a.pos == b.pos
        np.testing.assert_array_equal(a.obs, b.obs)

    def test_obs_matches_direct_extraction(self, image, cfg):
        state = HeadMovementEnv(image, cfg).reset()
        direct = extract_viewport(EquirectImage(image.gray()), SpherePoint(0, 0), cfg.viewport)
        np.testing.assert_array_equal(state.obs, direct)


class TestStep:
    def test_stay_keeps_position(self, image, cfg):
        env = HeadMovementEnv(image, cfg)
        s0 = env.reset()
        s1 = env.step(s0, 0)
        assert s1.pos == s0.pos
        assert s1.t == 1

    def test_east_step_on_equator(self, image, cfg):
        env = HeadMovementEnv(image, cfg)
        s1 = env.step(env.reset(), 1)
        assert s1.pos.lat == pytest.approx(0.0, abs=1e-12)
        assert s1.pos.lon == pytest.approx(4.0)

    def test_action_directions(self):
        assert action_direction_deg(1) == 0.0
        assert action_direction_deg(3) == 90.0
        assert action_direction_deg(8) == 315.0
        with pytest.raises(ValueError):
            action_direction_deg(0)

    def test_pole_crossing_reflects(self, image):
        cfg = EnvConfig(step_mag_deg=4.0, steps=40, viewport=ViewportSpec(90, 90, 8, 8))
        env = HeadMovementEnv(image, cfg)
        state = env.reset()
        for _ in range(23):  # 92 degrees north in 4-degree steps
            state = env.step(state, 3)
        assert state.pos.lat == pytest.approx(88.0)
        assert abs(state.pos.lon) == pytest.approx(180.0)

    def test_stays_are_idempotent(self, image, cfg):
        env = HeadMovementEnv(image, cfg)
        state = env.step(env.reset(), 5)
        pos = state.pos
        for _ in range(5):
            state = env.step(state, 0)
        assert state.pos == pos

    def test_step_after_end_rejected(self, image):
        cfg = EnvConfig(step_mag_deg=4.0, steps=1, viewport=ViewportSpec(90, 90, 8, 8))
        env = HeadMovementEnv(image, cfg)
        state = env.step(env.reset(), 1)
        with pytest.raises(RuntimeError):
            env.step(state, 1)

    def test_invalid_action_rejected(self, image, cfg):
        env = HeadMovementEnv(image, cfg)
        with pytest.raises(ValueError):
            env.step(env.reset(), 9)

    def test_longitude_rotation_equivariance(self, cfg):
        rng = np.random.default_rng(1)
        plane = rng.uniform(0, 1, (48, 96))
        shift_px = 24  # 90 degrees on a 96-wide image
        delta = shift_px * 360.0 / 96
        env_a = HeadMovementEnv(EquirectImage(plane), cfg)
        env_b = HeadMovementEnv(EquirectImage(np.roll(plane, shift_px, axis=1)), cfg)
        actions = [int(rng.integers(9)) for _ in range(10)]
        sa, sb = env_a.reset(), env_b.reset()
        # start env_b's agent at the rotated position to follow the rotated image
        sb = type(sb)(pos=SpherePoint.canonical(0.0, delta), t=0,
                      obs=env_b.observe(SpherePoint.canonical(0.0, delta)))
        for act in actions:
            sa = env_a.step(sa, act)
            sb = env_b.step(sb, act)
            assert sb.pos.lat == pytest.approx(sa.pos.lat, abs=1e-9)
            lon_diff = (sb.pos.lon - sa.pos.lon - delta + 180) % 360 - 180
            assert lon_diff == pytest.approx(0.0, abs=1e-9)
            np.testing.assert_allclose(sb.obs, sa.obs, atol=1e-6)


class TestMeanStepMagnitude:
    def test_constant_steps(self):
        rng = np.random.default_rng(2)
        from headsal.analysis import constant_step_trajectory

        trajs = [constant_step_trajectory(0, "x", 20, 4.0, 100.0, rng)]
        assert mean_step_magnitude(trajs) == pytest.approx(4.0, abs=1e-9)

    def test_mixed_two_and_six(self):
        samples = [HmSample(0, SpherePoint(0, 0))]
        lon = 0.0
        for i, step in enumerate([2.0, 6.0, 2.0, 6.0]):
            lon += step
            samples.append(HmSample(100.0 * (i + 1), SpherePoint(0, lon)))
        traj = ivt_classify(samples)
        assert mean_step_magnitude([traj]) == pytest.approx(4.0, abs=1e-9)

    def test_band_corpus_in_range(self):
        trajs = finding_band_corpus(5, 60, np.random.default_rng(3))
        m = mean_step_magnitude(trajs)
        assert 2.0 <= m <= 6.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mean_step_magnitude([])


class TestFixationExtraction:
    def test_all_stay_rollout_stay_only(self):
        pos = [SpherePoint(0, 0)] * 6
        fix = trajectory_to_fixations(pos, [0] * 5, FixationMode.STAY_ONLY)
        assert len(fix) == 5

    def test_never_stay_rollout_stay_only_empty(self):
        pos = [SpherePoint(0, i * 4.0) for i in range(6)]
        fix = trajectory_to_fixations(pos, [1] * 5, FixationMode.STAY_ONLY)
        assert fix == []

    def test_all_steps_mode_full_length(self):
        pos = [SpherePoint(0, i * 4.0) for i in range(6)]
        fix = trajectory_to_fixations(pos, [1, 0, 1, 0, 1], FixationMode.ALL_STEPS)
        assert fix == pos[1:]

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            trajectory_to_fixations([SpherePoint(0, 0)], [1])


def test_rollout_csv_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    rollouts = []
    for stream in range(3):
        pos = [SpherePoint(0.0, 0.0)]
        actions = []
        for _ in range(7):
            actions.append(int(rng.integers(9)))
            pos.append(SpherePoint(float(rng.uniform(-80, 80)), float(rng.uniform(-180, 179))))
        rollouts.append(Rollout(stream, pos, actions))
    path = tmp_path / "rollouts.csv"
    write_rollouts(path, rollouts, provenance={"tool": "headsal"})
    back = read_rollouts(path)
    assert len(back) == 3
    for orig, rt in zip(rollouts, back):
        assert rt.actions == orig.actions
        for a, b in zip(orig.positions[1:], rt.positions[1:]):
            assert b.lat == pytest.approx(a.lat, abs=1e-9)
            assert b.lon == pytest.approx(a.lon, abs=1e-9)
