"""The head-movement decision environment.

An agent looks at one equirectangular image through a viewport.  At each step
it either stays or moves its head a fixed angular magnitude along one of 8
directions (multiples of 45 degrees); the observation is the grayscale
viewport at the new position.  Episodes start at the image center (0, 0).
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .geometry import SpherePoint, ViewportSpec, great_circle_step, spherical_delta
from .raster import EquirectImage
from .trajectory import LabeledTrajectory
from .viewport import extract_viewport

N_ACTIONS = 9
STAY = 0


def action_direction_deg(action: int) -> float:
    """Movement direction of a non-stay action (0=east, 90=north)."""
    if not 1 <= action <= 8:
        raise ValueError(f"action {action} has no direction (1..8 move, 0 stays)")
    return (action - 1) * 45.0


@dataclass(frozen=True)
class EnvConfig:
    step_mag_deg: float = 4.0
    steps: int = 210  # per-trajectory step budget (episodes x episode steps)
    viewport: ViewportSpec = field(default_factory=ViewportSpec)

    def __post_init__(self):
        if self.step_mag_deg <= 0:
            raise ValueError("step magnitude must be positive")
        if self.steps < 1:
            raise ValueError("need at least one step per trajectory")


@dataclass(frozen=True)
class EnvState:
    pos: SpherePoint
    t: int
    obs: np.ndarray


class HeadMovementEnv:
    """Deterministic transition kernel over head positions on one image."""

    def __init__(self, image: EquirectImage, cfg: EnvConfig):
        if image.w < 1 or image.h < 1:
            raise ValueError("environment needs a non-empty image")
        self.image = image
        self.cfg = cfg
        self._plane = EquirectImage(image.gray())

    def observe(self, pos: SpherePoint) -> np.ndarray:
        return extract_viewport(self._plane, pos, self.cfg.viewport)

    def reset(self) -> EnvState:
        pos = SpherePoint(0.0, 0.0)
        return EnvState(pos=pos, t=0, obs=self.observe(pos))

    def step(self, state: EnvState, action: int) -> EnvState:
        if state.t >= self.cfg.steps:
            raise RuntimeError(f"episode ended at step {self.cfg.steps}")
        if not 0 <= action < N_ACTIONS:
            raise ValueError(f"action must be in 0..8, got {action}")
        if action == STAY:
            pos = state.pos
        else:
            pos = great_circle_step(state.pos, action_direction_deg(action),
                                    self.cfg.step_mag_deg)
        return EnvState(pos=pos, t=state.t + 1, obs=self.observe(pos))


def mean_step_magnitude(trajs: Iterable[LabeledTrajectory]) -> float:
    """Mean consecutive-sample angular separation (degrees) across a corpus."""
    total = 0.0
    count = 0
    for traj in trajs:
        for a, b in zip(traj.samples, traj.samples[1:]):
            total += math.degrees(spherical_delta(a.pos, b.pos))
            count += 1
    if count == 0:
        raise ValueError("no consecutive sample pairs in the corpus")
    return total / count


class FixationMode(enum.Enum):
    ALL_STEPS = "all_steps"
    STAY_ONLY = "stay_only"


@dataclass
class Rollout:
    """One predicted head trajectory: initial position plus a step sequence."""

    stream: int
    positions: list[SpherePoint]  # length = len(actions) + 1, includes start
    actions: list[int]

    def __post_init__(self):
        if len(self.positions) != len(self.actions) + 1:
            raise ValueError("rollout needs one position per action plus the start")


def trajectory_to_fixations(positions: Sequence[SpherePoint], actions: Sequence[int],
                            mode: FixationMode = FixationMode.ALL_STEPS) -> list[SpherePoint]:
    """Head fixations of a rollout.

    ALL_STEPS treats every post-initialization position as a fixation-scale
    dwell; STAY_ONLY keeps only positions held by an explicit stay action.
    """
    if len(positions) != len(actions) + 1:
        raise ValueError("need one position per action plus the start")
    if not actions:
        raise ValueError("empty rollout")
    if mode is FixationMode.ALL_STEPS:
        return list(positions[1:])
    return [pos for pos, act in zip(positions[1:], actions) if act == STAY]


def write_rollouts(path, rollouts: Iterable[Rollout], provenance: dict | None = None) -> None:
    """Dump rollouts as ``stream,step,action,lat,lon`` rows (post-action positions)."""
    with open(Path(path), "w", newline="") as fh:
        if provenance:
            import json

            fh.write(f"# provenance: {json.dumps(provenance)}\n")
        w = csv.writer(fh)
        w.writerow(["stream", "step", "action", "lat", "lon"])
        for r in rollouts:
            for t, (act, pos) in enumerate(zip(r.actions, r.positions[1:]), start=1):
                w.writerow([r.stream, t, act, f"{pos.lat:.10g}", f"{pos.lon:.10g}"])


def read_rollouts(path) -> list[Rollout]:
    """Read a rollout dump; all trajectories start at the image center."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows or [c.strip() for c in rows[0][:5]] != ["stream", "step", "action", "lat", "lon"]:
        raise ValueError(f"{path}: expected header stream,step,action,lat,lon")
    by_stream: dict[int, Rollout] = {}
    for i, row in enumerate(rows[1:], start=2):
        try:
            stream, step, act = int(row[0]), int(row[1]), int(row[2])
            pos = SpherePoint(float(row[3]), float(row[4]))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}:{i}: malformed row {row}") from exc
        r = by_stream.setdefault(stream, Rollout(stream, [SpherePoint(0.0, 0.0)], []))
        if step != len(r.actions) + 1:
            raise ValueError(f"{path}:{i}: out-of-order step {step} for stream {stream}")
        r.actions.append(act)
        r.positions.append(pos)
    return [by_stream[k] for k in sorted(by_stream)]
