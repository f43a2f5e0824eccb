"""Head-movement logs: parsing, angular velocities and I-VT fixation labeling.

A raw log is a time-stamped sequence of (pitch, yaw) samples for one subject on
one image.  Sample-to-sample angular velocity (great-circle separation over the
time delta) classifies each sample: below the velocity threshold it is a head
fixation, otherwise a saccade.  The radius of the viewing sphere cancels out of
the velocity, so everything here is in degrees and degrees/second.
"""

from __future__ import annotations

import csv
import enum
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import SpherePoint, spherical_delta

IVT_THRESHOLD_DEGPS = 18.0


class Label(enum.Enum):
    FIRST = "first"
    FIXATION = "fixation"
    SACCADE = "saccade"


@dataclass(frozen=True)
class HmSample:
    t_ms: float
    pos: SpherePoint


@dataclass
class LabeledTrajectory:
    subject_id: int
    image_id: str
    samples: list[HmSample]
    labels: list[Label]
    velocities: list[float] = field(default_factory=list)  # deg/s, 0.0 for the first sample

    def __post_init__(self):
        if len(self.samples) != len(self.labels):
            raise ValueError("one label per sample required")

    def fixations(self) -> list[SpherePoint]:
        return [s.pos for s, l in zip(self.samples, self.labels) if l is Label.FIXATION]


def velocity(prev: HmSample, cur: HmSample) -> float:
    """Angular head velocity between two consecutive samples, degrees/second."""
    dt_s = (cur.t_ms - prev.t_ms) / 1000.0
    if dt_s <= 0:
        raise ValueError(f"timestamps must strictly increase ({prev.t_ms} -> {cur.t_ms})")
    return math.degrees(spherical_delta(prev.pos, cur.pos)) / dt_s


def ivt_classify(samples: list[HmSample], subject_id: int = 0, image_id: str = "",
                 threshold_degps: float = IVT_THRESHOLD_DEGPS) -> LabeledTrajectory:
    """Velocity-threshold (I-VT) split of a head trajectory.

    A sample is a fixation iff its velocity is strictly below the threshold;
    at or above it is a saccade.  The first sample has no predecessor velocity
    and carries the dedicated FIRST label.
    """
    if len(samples) < 2:
        raise ValueError(f"need >= 2 samples to classify, got {len(samples)}")
    labels = [Label.FIRST]
    vels = [0.0]
    for prev, cur in zip(samples, samples[1:]):
        v = velocity(prev, cur)
        vels.append(v)
        labels.append(Label.FIXATION if v < threshold_degps else Label.SACCADE)
    return LabeledTrajectory(subject_id, image_id, list(samples), labels, vels)


def fixations_of(traj: LabeledTrajectory) -> list[SpherePoint]:
    """Fixation positions in trajectory order; saccades and the first sample drop out."""
    return traj.fixations()


_FILENAME_RE = re.compile(r"^(?P<image>.+)__s(?P<subject>\d+)\.csv$")


def parse_log_filename(name: str) -> tuple[str, int]:
    """Split ``<image_id>__s<subject_id>.csv`` into its parts."""
    m = _FILENAME_RE.match(Path(name).name)
    if not m:
        raise ValueError(f"log filename {name!r} does not match '<image_id>__s<subject>.csv'")
    return m.group("image"), int(m.group("subject"))


def log_filename(image_id: str, subject_id: int) -> str:
    return f"{image_id}__s{subject_id}.csv"


def _data_rows(path: Path) -> list[list[str]]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty log")
    return rows


def read_raw_log(path) -> list[HmSample]:
    """Read a raw head-movement CSV with header ``t_ms,pitch_deg,yaw_deg``."""
    path = Path(path)
    rows = _data_rows(path)
    if [c.strip() for c in rows[0][:3]] != ["t_ms", "pitch_deg", "yaw_deg"]:
        raise ValueError(f"{path}: expected header t_ms,pitch_deg,yaw_deg, got {rows[0]}")
    samples = []
    last_t = -math.inf
    for i, row in enumerate(rows[1:], start=2):
        try:
            t, pitch, yaw = float(row[0]), float(row[1]), float(row[2])
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}:{i}: malformed row {row}") from exc
        if t <= last_t:
            raise ValueError(f"{path}:{i}: non-increasing timestamp {t}")
        last_t = t
        samples.append(HmSample(t, SpherePoint.canonical(pitch, yaw)))
    return samples


def write_labeled_log(path, traj: LabeledTrajectory, provenance: dict | None = None) -> None:
    """Write a labeled CSV: the raw columns plus ``v_degps,label``."""
    with open(Path(path), "w", newline="") as fh:
        if provenance:
            import json

            fh.write(f"# provenance: {json.dumps(provenance)}\n")
        w = csv.writer(fh)
        w.writerow(["t_ms", "pitch_deg", "yaw_deg", "v_degps", "label"])
        for s, v, l in zip(traj.samples, traj.velocities, traj.labels):
            w.writerow([f"{s.t_ms:.6g}", f"{s.pos.lat:.10g}", f"{s.pos.lon:.10g}",
                        f"{v:.10g}", l.value])


def read_labeled_log(path, subject_id: int | None = None,
                     image_id: str | None = None) -> LabeledTrajectory:
    path = Path(path)
    if subject_id is None or image_id is None:
        image_id, subject_id = parse_log_filename(path.name)
    rows = _data_rows(path)
    if [c.strip() for c in rows[0][:5]] != ["t_ms", "pitch_deg", "yaw_deg", "v_degps", "label"]:
        raise ValueError(f"{path}: expected labeled-log header, got {rows[0]}")
    samples, labels, vels = [], [], []
    for i, row in enumerate(rows[1:], start=2):
        try:
            t, pitch, yaw, v = (float(row[0]), float(row[1]), float(row[2]), float(row[3]))
            label = Label(row[4].strip())
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}:{i}: malformed row {row}") from exc
        samples.append(HmSample(t, SpherePoint(pitch, yaw)))
        vels.append(v)
        labels.append(label)
    return LabeledTrajectory(subject_id, image_id, samples, labels, vels)
