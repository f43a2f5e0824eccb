import numpy as np
import pytest
from scipy import stats

from headsal.analysis import (FixationCorpus, constant_step_trajectory, fcb_cloud,
                              finding_band_corpus, fixation_histograms,
                              magnitude_distribution, random_walk_trajectory,
                              shared_attractor_corpus, split_half_cc,
                              uniform_sphere_fixations, write_histogram_csv,
                              write_split_half_csv)
from headsal.geometry import SpherePoint


class TestSplitHalfCc:
    def test_identical_subjects_give_unit_curve(self):
        rng = np.random.default_rng(0)
        pts = fcb_cloud(30, 40, 20, rng)
        corpus: FixationCorpus = {"img": {s: list(pts) for s in range(6)}}
        curve = split_half_cc(corpus, reps=3, rng=rng)
        assert curve.ks == [1, 2, 3]
        np.testing.assert_allclose(curve.mean_cc, 1.0, atol=1e-9)

    def test_independent_uniform_subjects_near_control(self):
        rng = np.random.default_rng(1)
        corpus: FixationCorpus = {
            "img": {s: uniform_sphere_fixations(40, rng) for s in range(8)}}
        curve = split_half_cc(corpus, reps=8, rng=rng)
        diffs = np.abs(np.array(curve.mean_cc) - np.array(curve.control_cc))
        assert np.all(diffs < 0.15)

    def test_attractor_corpus_curve_monotone(self):
        rng = np.random.default_rng(2)
        corpus = shared_attractor_corpus(10, 2, 30, noise_deg=10.0, rng=rng)
        curve = split_half_cc(corpus, reps=10, rng=rng)
        rho = stats.spearmanr(curve.ks, curve.mean_cc).statistic
        assert rho > 0.9
        assert all(m > c for m, c in zip(curve.mean_cc, curve.control_cc))

    def test_invariant_under_subject_relabeling(self):
        rng = np.random.default_rng(3)
        corpus = shared_attractor_corpus(6, 1, 20, 15.0, rng)
        relabeled: FixationCorpus = {
            img: {s + 100: pts for s, pts in per.items()} for img, per in corpus.items()}
        a = split_half_cc(corpus, reps=5, rng=np.random.default_rng(7))
        b = split_half_cc(relabeled, reps=5, rng=np.random.default_rng(7))
        np.testing.assert_allclose(a.mean_cc, b.mean_cc, atol=1e-12)

    def test_needs_two_subjects(self):
        with pytest.raises(ValueError):
            split_half_cc({"img": {0: [SpherePoint(0, 0)]}}, reps=2,
                          rng=np.random.default_rng(4))


class TestFixationHistograms:
    def test_point_mass_in_single_bin(self):
        h = fixation_histograms([SpherePoint(0.1, 0.1)] * 50)
        assert h.lon_counts.max() == 50 and (h.lon_counts > 0).sum() == 1
        assert h.lat_counts.max() == 50 and (h.lat_counts > 0).sum() == 1
        assert h.grid_counts.max() == 50 and (h.grid_counts > 0).sum() == 1

    def test_counts_sum_to_total(self):
        rng = np.random.default_rng(5)
        pts = uniform_sphere_fixations(777, rng)
        h = fixation_histograms(pts)
        assert h.lon_counts.sum() == 777
        assert h.lat_counts.sum() == 777
        assert h.grid_counts.sum() == 777

    def test_grid_shape_is_4p5_by_2p25_degrees(self):
        h = fixation_histograms([SpherePoint(0, 0)])
        assert h.grid_counts.shape == (80, 80)
        assert len(h.lon_centers) == 80
        assert len(h.lat_centers) == 80

    def test_uniform_sphere_latitude_follows_cosine(self):
        rng = np.random.default_rng(6)
        h = fixation_histograms(uniform_sphere_fixations(200_000, rng))
        expected = np.cos(np.radians(h.lat_centers))
        expected = expected / expected.sum() * h.lat_counts.sum()
        corr = np.corrcoef(h.lat_counts, expected)[0, 1]
        assert corr > 0.995

    def test_fcb_cloud_modal_bins_at_center(self):
        rng = np.random.default_rng(7)
        h = fixation_histograms(fcb_cloud(20_000, 30, 15, rng))
        assert abs(h.lon_centers[np.argmax(h.lon_counts)]) < 5.0
        assert abs(h.lat_centers[np.argmax(h.lat_counts)]) < 3.0

    def test_permutation_invariance_of_grid(self):
        rng = np.random.default_rng(8)
        pts = uniform_sphere_fixations(300, rng)
        a = fixation_histograms(pts).grid_counts
        b = fixation_histograms(pts[::-1]).grid_counts
        np.testing.assert_array_equal(a, b)


class TestMagnitudeDistribution:
    def test_constant_step_degenerate(self):
        rng = np.random.default_rng(9)
        trajs = [constant_step_trajectory(0, "x", 50, 4.0, 100.0, rng)]
        stats_by_subject = magnitude_distribution(trajs)
        s = stats_by_subject[0]
        assert (s.counts > 0).sum() == 1
        lo, hi = s.interval95
        assert lo == pytest.approx(4.0, abs=1e-6)
        assert hi == pytest.approx(4.0, abs=1e-6)

    def test_identical_generators_ks_close(self):
        rng = np.random.default_rng(10)
        a = random_walk_trajectory(0, "x", 4000, 2.0, 6.0, 100.0, rng)
        b = random_walk_trajectory(1, "x", 4000, 2.0, 6.0, 100.0, rng)

        def mags(t):
            from headsal.geometry import spherical_delta
            import math

            return [math.degrees(spherical_delta(p.pos, q.pos))
                    for p, q in zip(t.samples, t.samples[1:])]

        d = stats.ks_2samp(mags(a), mags(b)).statistic
        assert d < 0.05

    def test_band_corpus_interval_inside_one_to_eight(self):
        trajs = finding_band_corpus(5, 300, np.random.default_rng(11))
        for s in magnitude_distribution(trajs).values():
            lo, hi = s.interval95
            assert 1.0 <= lo and hi <= 8.0


def test_csv_emitters(tmp_path):
    rng = np.random.default_rng(12)
    corpus = shared_attractor_corpus(4, 1, 10, 10.0, rng)
    curve = split_half_cc(corpus, reps=2, rng=rng)
    write_split_half_csv(tmp_path / "curve.csv", curve, provenance={"v": 1})
    lines = (tmp_path / "curve.csv").read_text().splitlines()
    assert lines[0].startswith("# provenance:")
    assert lines[1] == "k,mean_cc,control_cc"
    assert len(lines) == 2 + len(curve.ks)

    h = fixation_histograms(fcb_cloud(100, 30, 15, rng))
    write_histogram_csv(tmp_path / "lon.csv", h.lon_centers, h.lon_counts)
    lines = (tmp_path / "lon.csv").read_text().splitlines()
    assert lines[0] == "bin_center,count"
    assert len(lines) == 81
