"""Corpus-level behavior of head fixations: inter-subject consistency,
center-bias histograms and step-magnitude statistics.

The synthetic corpus generators live here too; they stand in for recorded
viewing data, which is not distributed with this package.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import SpherePoint, great_circle_step, spherical_delta
from .metrics import cc
from .saliency import accumulate_fixations
from .trajectory import HmSample, LabeledTrajectory, ivt_classify

# FixationCorpus: image_id -> subject_id -> fixation list
FixationCorpus = dict[str, dict[int, list[SpherePoint]]]

LON_BIN_DEG = 4.5
LAT_BIN_DEG = 2.25


@dataclass
class SplitHalfCurve:
    """Mean inter-group map correlation per group size, with a random control."""

    ks: list[int]
    mean_cc: list[float]
    control_cc: list[float]
    reps: int


def uniform_sphere_fixations(n: int, rng: np.random.Generator) -> list[SpherePoint]:
    """Area-correct uniform sample on the sphere."""
    lat = np.degrees(np.arcsin(rng.uniform(-1.0, 1.0, n)))
    lon = rng.uniform(-180.0, 180.0, n)
    return [SpherePoint(float(la), float(lo)) for la, lo in zip(lat, lon)]


def split_half_cc(corpus: FixationCorpus, reps: int, rng: np.random.Generator,
                  map_w: int = 192, map_h: int = 96,
                  sigma_px: float | None = None) -> SplitHalfCurve:
    """Consistency curve: subjects split into two size-k groups, CC of their maps.

    For each k up to half the subject count and each repetition, a random
    disjoint split is drawn; group maps pool the group's fixations.  The
    control correlates the first group against a map of uniformly random
    fixations of the same count.
    """
    if not corpus:
        raise ValueError("empty corpus")
    subjects = sorted({s for per_image in corpus.values() for s in per_image})
    if len(subjects) < 2:
        raise ValueError(f"need >= 2 subjects, got {len(subjects)}")
    half = len(subjects) // 2

    def group_map(image_fix: dict[int, list[SpherePoint]], group: list[int]) -> np.ndarray:
        pts = [p for s in group for p in image_fix.get(s, [])]
        return accumulate_fixations(pts, map_w, map_h, sigma_px)

    ks = list(range(1, half + 1))
    mean_cc = []
    control_cc = []
    for k in ks:
        vals = []
        ctrl = []
        for _rep in range(reps):
            perm = list(rng.permutation(subjects))
            ga, gb = perm[:k], perm[k:2 * k]
            for image_fix in corpus.values():
                map_a = group_map(image_fix, ga)
                map_b = group_map(image_fix, gb)
                n_a = sum(len(image_fix.get(s, [])) for s in ga)
                map_r = accumulate_fixations(uniform_sphere_fixations(n_a, rng),
                                             map_w, map_h, sigma_px)
                vals.append(cc(map_a, map_b))
                ctrl.append(cc(map_a, map_r))
        mean_cc.append(float(np.mean(vals)))
        control_cc.append(float(np.mean(ctrl)))
    return SplitHalfCurve(ks=ks, mean_cc=mean_cc, control_cc=control_cc, reps=reps)


@dataclass
class FixationHistograms:
    lon_centers: np.ndarray
    lon_counts: np.ndarray
    lat_centers: np.ndarray
    lat_counts: np.ndarray
    grid_counts: np.ndarray  # (lat bins, lon bins), row 0 at -90 deg


def fixation_histograms(fixations) -> FixationHistograms:
    """Longitude/latitude histograms and the grid of counts (4.5 x 2.25 degree cells)."""
    pts = list(fixations)
    if not pts:
        raise ValueError("no fixations")
    lons = np.array([p.lon for p in pts])
    lats = np.array([p.lat for p in pts])
    n_lon = int(round(360.0 / LON_BIN_DEG))
    n_lat = int(round(180.0 / LAT_BIN_DEG))
    lon_edges = np.linspace(-180.0, 180.0, n_lon + 1)
    lat_edges = np.linspace(-90.0, 90.0, n_lat + 1)
    lon_counts, _ = np.histogram(lons, bins=lon_edges)
    lat_counts, _ = np.histogram(lats, bins=lat_edges)
    grid, _, _ = np.histogram2d(lats, lons, bins=[lat_edges, lon_edges])
    return FixationHistograms(
        lon_centers=(lon_edges[:-1] + lon_edges[1:]) / 2, lon_counts=lon_counts,
        lat_centers=(lat_edges[:-1] + lat_edges[1:]) / 2, lat_counts=lat_counts,
        grid_counts=grid.astype(np.int64))


@dataclass
class MagnitudeStats:
    bin_centers: np.ndarray
    counts: np.ndarray
    interval95: tuple[float, float]


def magnitude_distribution(trajs: list[LabeledTrajectory],
                           bin_deg: float = 0.5) -> dict[int, MagnitudeStats]:
    """Per-subject histogram of consecutive-sample angular steps, plus the
    central 95% interval of each subject's step magnitudes."""
    per_subject: dict[int, list[float]] = {}
    for traj in trajs:
        if len(traj.samples) < 2:
            raise ValueError("trajectories need >= 2 samples")
        steps = [math.degrees(spherical_delta(a.pos, b.pos))
                 for a, b in zip(traj.samples, traj.samples[1:])]
        per_subject.setdefault(traj.subject_id, []).extend(steps)
    out = {}
    for subject, mags in sorted(per_subject.items()):
        arr = np.asarray(mags)
        hi_edge = max(float(arr.max()), bin_deg)
        edges = np.arange(0.0, hi_edge + bin_deg, bin_deg)
        counts, _ = np.histogram(arr, bins=edges)
        lo, hi = np.percentile(arr, [2.5, 97.5])
        out[subject] = MagnitudeStats(bin_centers=(edges[:-1] + edges[1:]) / 2,
                                      counts=counts, interval95=(float(lo), float(hi)))
    return out


# ---------------------------------------------------------------------------
# synthetic corpora


def fcb_cloud(n: int, sigma_lon_deg: float, sigma_lat_deg: float,
              rng: np.random.Generator) -> list[SpherePoint]:
    """Center-biased fixation cloud: independent Gaussians in longitude/latitude."""
    lon = rng.normal(0.0, sigma_lon_deg, n)
    lat = rng.normal(0.0, sigma_lat_deg, n)
    return [SpherePoint.canonical(float(la), float(lo)) for la, lo in zip(lat, lon)]


def shared_attractor_corpus(n_subjects: int, n_images: int, fix_per_subject: int,
                            noise_deg: float, rng: np.random.Generator,
                            attractors_per_image: int = 3) -> FixationCorpus:
    """Subjects fixate the same per-image attractor points plus individual noise."""
    corpus: FixationCorpus = {}
    for i in range(n_images):
        centers = uniform_sphere_fixations(attractors_per_image, rng)
        per_image: dict[int, list[SpherePoint]] = {}
        for s in range(n_subjects):
            pts = []
            for _ in range(fix_per_subject):
                c = centers[int(rng.integers(attractors_per_image))]
                pts.append(SpherePoint.canonical(c.lat + rng.normal(0, noise_deg),
                                                 c.lon + rng.normal(0, noise_deg)))
            per_image[s] = pts
        corpus[f"img{i:03d}"] = per_image
    return corpus


def random_walk_trajectory(subject_id: int, image_id: str, n_steps: int,
                           step_deg_lo: float, step_deg_hi: float, dt_ms: float,
                           rng: np.random.Generator,
                           start: SpherePoint | None = None) -> LabeledTrajectory:
    """A trajectory whose per-sample step magnitudes are uniform in a band."""
    pos = start or SpherePoint(0.0, 0.0)
    samples = [HmSample(0.0, pos)]
    for i in range(1, n_steps + 1):
        mag = float(rng.uniform(step_deg_lo, step_deg_hi))
        pos = great_circle_step(pos, float(rng.uniform(0, 360)), mag)
        samples.append(HmSample(i * dt_ms, pos))
    return ivt_classify(samples, subject_id=subject_id, image_id=image_id)


def constant_step_trajectory(subject_id: int, image_id: str, n_steps: int,
                             step_deg: float, dt_ms: float,
                             rng: np.random.Generator) -> LabeledTrajectory:
    return random_walk_trajectory(subject_id, image_id, n_steps, step_deg, step_deg,
                                  dt_ms, rng)


def finding_band_corpus(n_subjects: int, n_steps: int, rng: np.random.Generator,
                        lo_deg: float = 2.0, hi_deg: float = 6.0,
                        dt_ms: float = 200.0) -> list[LabeledTrajectory]:
    """Trajectories whose step magnitudes concentrate in the 2-6 degree band."""
    return [random_walk_trajectory(s, "band", n_steps, lo_deg, hi_deg, dt_ms, rng)
            for s in range(n_subjects)]


# ---------------------------------------------------------------------------
# plot-ready CSV emitters


def write_split_half_csv(path, curve: SplitHalfCurve, provenance: dict | None = None) -> None:
    with open(Path(path), "w", newline="") as fh:
        if provenance:
            import json

            fh.write(f"# provenance: {json.dumps(provenance)}\n")
        w = csv.writer(fh)
        w.writerow(["k", "mean_cc", "control_cc"])
        for k, m, c in zip(curve.ks, curve.mean_cc, curve.control_cc):
            w.writerow([k, f"{m:.6g}", f"{c:.6g}"])


def write_histogram_csv(path, centers, counts, provenance: dict | None = None) -> None:
    with open(Path(path), "w", newline="") as fh:
        if provenance:
            import json

            fh.write(f"# provenance: {json.dumps(provenance)}\n")
        w = csv.writer(fh)
        w.writerow(["bin_center", "count"])
        for c, n in zip(centers, counts):
            w.writerow([f"{float(c):.6g}", int(n)])
