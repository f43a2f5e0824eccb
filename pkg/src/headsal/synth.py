"""Synthetic images, scripted gaze behaviors and dataset packaging.

Everything the pipeline needs to exercise itself without recorded viewing
data: spherically smooth random images, bright-blob navigation tasks, scripted
expert policies, I-VT corpora with known labels, and a manifest format that
ties images and expert trajectories together for training.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .env import EnvConfig, EnvState, HeadMovementEnv, Rollout, read_rollouts, write_rollouts
from .gail import ExpertTrajectory
from .geometry import (SpherePoint, ViewportSpec, great_circle_bearing, great_circle_step,
                       pixel_to_latlon, spherical_delta)
from .raster import EquirectImage, load_float_grid, save_float_grid
from .trajectory import HmSample

MANIFEST_NAME = "manifest.json"


def _latlon_grid(w: int, h: int):
    ys = np.arange(h) + 0.5
    xs = np.arange(w) + 0.5
    lat, _ = pixel_to_latlon(np.zeros_like(ys), ys, w, h)
    _, lon = pixel_to_latlon(xs, np.zeros_like(xs), w, h)
    return np.radians(lat)[:, None], np.radians(lon)[None, :]


def _bump(lat_r, lon_r, center: SpherePoint, sigma_deg: float) -> np.ndarray:
    """Gaussian bump in great-circle distance from a center; seam-free."""
    c_lat = math.radians(center.lat)
    c_lon = math.radians(center.lon)
    cos_d = (np.sin(lat_r) * math.sin(c_lat)
             + np.cos(lat_r) * math.cos(c_lat) * np.cos(lon_r - c_lon))
    d = np.degrees(np.arccos(np.clip(cos_d, -1.0, 1.0)))
    return np.exp(-(d ** 2) / (2.0 * sigma_deg ** 2))


def smooth_image(w: int, h: int, rng: np.random.Generator, n_bumps: int = 8,
                 amplitude: float = 0.25, base: float = 0.35) -> EquirectImage:
    """A random spherically smooth grayscale image in [0, 1]."""
    lat_r, lon_r = _latlon_grid(w, h)
    acc = np.full((h, w), base)
    for _ in range(n_bumps):
        lat = math.degrees(math.asin(rng.uniform(-1, 1)))
        lon = rng.uniform(-180, 180)
        acc += rng.uniform(-amplitude, amplitude) * _bump(
            lat_r, lon_r, SpherePoint(lat, lon), rng.uniform(10, 40))
    return EquirectImage(np.clip(acc, 0.0, 1.0))


def blob_image(w: int, h: int, center: SpherePoint, sigma_deg: float,
               rng: np.random.Generator, bg_amplitude: float = 0.08) -> EquirectImage:
    """A dim smooth background with one bright blob at ``center``."""
    base = smooth_image(w, h, rng, n_bumps=5, amplitude=bg_amplitude, base=0.2)
    lat_r, lon_r = _latlon_grid(w, h)
    vals = np.clip(base.values + 0.8 * _bump(lat_r, lon_r, center, sigma_deg), 0.0, 1.0)
    return EquirectImage(vals)


def random_blob_center(max_offset_deg: float, rng: np.random.Generator) -> SpherePoint:
    """A point within ``max_offset_deg`` great-circle distance of the image center."""
    bearing = rng.uniform(0, 360)
    dist = max_offset_deg * math.sqrt(rng.uniform(0.2, 1.0))
    return great_circle_step(SpherePoint(0.0, 0.0), float(bearing), float(dist))


# ---------------------------------------------------------------------------
# scripted experts


def expert_stay(state: EnvState, cfg: EnvConfig) -> int:
    return 0


def make_expert_const(action: int):
    def expert(state: EnvState, cfg: EnvConfig) -> int:
        return action

    return expert


def make_expert_seek(target: SpherePoint, stay_within_deg: float | None = None):
    """Head toward a target along the nearest 45-degree direction; stay on arrival."""

    def expert(state: EnvState, cfg: EnvConfig) -> int:
        within = stay_within_deg if stay_within_deg is not None else 0.75 * cfg.step_mag_deg
        if math.degrees(spherical_delta(state.pos, target)) <= within:
            return 0
        bearing = great_circle_bearing(state.pos, target)
        return 1 + int(round(bearing / 45.0)) % 8

    return expert


def record_expert(image: EquirectImage, expert_fn, cfg: EnvConfig, steps: int,
                  stream: int, image_id: str) -> ExpertTrajectory:
    """Roll a scripted expert through the environment and record its trajectory."""
    env = HeadMovementEnv(image, cfg)
    state = env.reset()
    positions = [state.pos]
    actions = []
    for _ in range(steps):
        act = expert_fn(state, cfg)
        actions.append(int(act))
        state = env.step(state, act)
        positions.append(state.pos)
    return ExpertTrajectory(stream=stream, image_id=image_id,
                            positions=positions, actions=actions)


# ---------------------------------------------------------------------------
# I-VT corpus with known labels


def ivt_corpus_trajectory(rng: np.random.Generator, n_segments: int = 6,
                          seg_len: int = 8, dt_ms: float = 100.0,
                          dwell_degps=(0.0, 10.0), sweep_degps=(25.0, 60.0)):
    """Alternating dwell/sweep samples plus their ground-truth labels.

    Returns (samples, labels) where labels[i] in {"first", "fixation",
    "saccade"} states what I-VT at the 18 deg/s threshold must produce.
    """
    pos = SpherePoint(0.0, 0.0)
    samples = [HmSample(0.0, pos)]
    truth = ["first"]
    t = 0.0
    for seg in range(n_segments):
        sweeping = seg % 2 == 1
        lo, hi = sweep_degps if sweeping else dwell_degps
        bearing = float(rng.uniform(0, 360))
        for _ in range(seg_len):
            speed = float(rng.uniform(lo, hi))
            t += dt_ms
            pos = great_circle_step(pos, bearing + float(rng.uniform(-10, 10)),
                                    speed * dt_ms / 1000.0)
            samples.append(HmSample(t, pos))
            truth.append("saccade" if sweeping else "fixation")
    return samples, truth


# ---------------------------------------------------------------------------
# training dataset on disk


def write_training_dataset(out_dir, images: dict[str, EquirectImage],
                           experts: list[ExpertTrajectory], env_cfg: EnvConfig,
                           provenance: dict | None = None,
                           extra: dict | None = None) -> Path:
    """Write images, expert rollout CSVs and the manifest that ties them together."""
    out = Path(out_dir)
    (out / "images").mkdir(parents=True, exist_ok=True)
    (out / "experts").mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "images": {},
        "experts": [],
        "env": {"step_mag_deg": env_cfg.step_mag_deg, "steps": env_cfg.steps,
                "viewport": {"fov_w_deg": env_cfg.viewport.fov_w_deg,
                             "fov_h_deg": env_cfg.viewport.fov_h_deg,
                             "out_w": env_cfg.viewport.out_w,
                             "out_h": env_cfg.viewport.out_h}},
    }
    if provenance:
        manifest["provenance"] = provenance
    if extra:
        manifest.update(extra)
    for image_id in sorted(images):
        rel = f"images/{image_id}.f32"
        save_float_grid(out / rel, images[image_id].values, provenance)
        manifest["images"][image_id] = rel
    for traj in experts:
        rel = f"experts/{traj.image_id}__stream{traj.stream}.csv"
        write_rollouts(out / rel, [Rollout(traj.stream, traj.positions, traj.actions)],
                       provenance)
        manifest["experts"].append({"stream": traj.stream, "image": traj.image_id,
                                    "path": rel})
    (out / MANIFEST_NAME).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return out / MANIFEST_NAME


def read_training_dataset(data_dir):
    """Load a manifest dataset: (images, experts, env_cfg, manifest)."""
    data_dir = Path(data_dir)
    manifest_path = data_dir / MANIFEST_NAME
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no {MANIFEST_NAME} in {data_dir}")
    manifest = json.loads(manifest_path.read_text())
    images = {image_id: EquirectImage(load_float_grid(data_dir / rel))
              for image_id, rel in manifest["images"].items()}
    experts = []
    for entry in manifest["experts"]:
        for r in read_rollouts(data_dir / entry["path"]):
            experts.append(ExpertTrajectory(stream=entry["stream"], image_id=entry["image"],
                                            positions=r.positions, actions=r.actions))
    env = manifest["env"]
    cfg = EnvConfig(step_mag_deg=env["step_mag_deg"], steps=env["steps"],
                    viewport=ViewportSpec(**env["viewport"]))
    return images, experts, cfg, manifest
