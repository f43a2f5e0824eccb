"""Command-line pipeline: data processing, map building, training, inference,
evaluation, dataset findings and synthetic-data generation.

Exit codes: 0 success, 2 input error, 3 numerical failure, 4 config error.
Every output file carries a JSON provenance header (tool version + config
hash).  All subcommands honor --seed; --jobs 1 guarantees reproducible output
ordering.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, analysis, gail, metrics, synth, trajectory
from .env import EnvConfig, FixationMode, mean_step_magnitude, write_rollouts
from .geometry import SpherePoint, ViewportSpec, latlon_to_pixel
from .raster import (EquirectImage, load_image, load_map, save_float_grid, save_map,
                     save_png_gray, save_png_heatmap)
from .saliency import FcbParams, build_fcb, fit_fcb, fuse_fcb, render_saliency

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_CONFIG = 4


class InputError(Exception):
    pass


class ConfigError(Exception):
    pass


def _provenance(command: str, config: dict) -> dict:
    blob = json.dumps(config, sort_keys=True, default=str)
    return {"tool": "headsal", "version": __version__, "command": command,
            "config_hash": hashlib.sha256(blob.encode()).hexdigest()[:16]}


def _require_dir(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_dir():
        raise InputError(f"{what} directory {path!r} does not exist")
    return p


def _out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _run_jobs(jobs: int, fn, items):
    if jobs <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# ivt


def cmd_ivt(args) -> int:
    in_dir = _require_dir(args.in_dir, "input")
    out = _out_dir(args.out_dir)
    prov = _provenance("ivt", vars(args))
    files = sorted(in_dir.glob("*.csv"))
    if not files:
        print(f"warning: no .csv logs found in {in_dir}", file=sys.stderr)
        return EXIT_OK

    failures: list[str] = []

    def process(path: Path):
        try:
            image_id, subject_id = trajectory.parse_log_filename(path.name)
            samples = trajectory.read_raw_log(path)
            labeled = trajectory.ivt_classify(samples, subject_id, image_id,
                                              threshold_degps=args.threshold)
            trajectory.write_labeled_log(out / path.name, labeled, prov)
        except (ValueError, OSError) as exc:
            failures.append(f"{path}: {exc}")

    _run_jobs(args.jobs, process, files)
    if failures:
        for f in sorted(failures):
            print(f"error: {f}", file=sys.stderr)
        raise InputError(f"{len(failures)} malformed input file(s)")
    print(f"labeled {len(files)} trajectories -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# salmap


def _load_fixation_corpus(fix_dir: Path) -> dict[str, list[SpherePoint]]:
    """Pool fixations of all subjects per image from labeled logs."""
    per_image: dict[str, list[SpherePoint]] = {}
    files = sorted(fix_dir.glob("*.csv"))
    if not files:
        raise InputError(f"no labeled .csv logs in {fix_dir}")
    for path in files:
        traj = trajectory.read_labeled_log(path)
        per_image.setdefault(traj.image_id, []).extend(traj.fixations())
    return per_image


def _fcb_from_args(args, all_fixations) -> FcbParams | None:
    if args.no_fcb:
        return None
    if args.fit_fcb:
        fitted = fit_fcb(all_fixations)
        return replace(fitted, weight=args.fcb_weight)
    return FcbParams(sigma_lon_deg=args.fcb_sigma_lon, sigma_lat_deg=args.fcb_sigma_lat,
                     weight=args.fcb_weight)


def cmd_salmap(args) -> int:
    fix_dir = _require_dir(args.fixations, "fixations")
    out = _out_dir(args.out_dir)
    prov = _provenance("salmap", vars(args))
    per_image = _load_fixation_corpus(fix_dir)
    fcb = _fcb_from_args(args, [p for pts in per_image.values() for p in pts])
    fcb_map = None if fcb is None else build_fcb(args.width, args.height, fcb)

    def process(item):
        image_id, fixations = item
        content = render_saliency(fixations, args.width, args.height,
                                  sigma_px=args.sigma_px)
        final = content if fcb_map is None else fuse_fcb(content, fcb_map)
        save_float_grid(out / f"{image_id}.f32", final.values, prov)
        save_png_gray(out / f"{image_id}.png", final.values, prov)
        save_png_heatmap(out / f"{image_id}_heat.png", final.values, prov)

    _run_jobs(args.jobs, process, sorted(per_image.items()))
    print(f"rendered {len(per_image)} saliency maps -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval


def _fixation_pixels_for(fixations: list[SpherePoint], w: int, h: int):
    x, y = latlon_to_pixel(np.array([p.lat for p in fixations]),
                           np.array([p.lon for p in fixations]), w, h)
    return np.stack([x, y], axis=1)


def cmd_eval(args) -> int:
    pred_dir = _require_dir(args.pred, "prediction")
    gt_dir = _require_dir(args.gt, "ground-truth")
    fix_dir = _require_dir(args.fixations, "fixations")
    prov = _provenance("eval", vars(args))
    per_image = _load_fixation_corpus(fix_dir)
    gt_files = sorted(p for p in gt_dir.iterdir() if p.suffix in (".f32", ".png"))
    if not gt_files:
        raise InputError(f"no ground-truth maps (.f32/.png) in {gt_dir}")

    rows = []
    for gt_path in gt_files:
        image_id = gt_path.stem
        pred_path = pred_dir / gt_path.name
        if not pred_path.is_file():
            raise InputError(f"missing prediction for {image_id!r}: {pred_path}")
        if image_id not in per_image:
            raise InputError(f"no fixations for image {image_id!r} in {fix_dir}")
        gt = load_map(gt_path)
        pred = load_map(pred_path)
        pix = _fixation_pixels_for(per_image[image_id], gt.w, gt.h)
        rep = metrics.report(pred, gt, pix)
        rows.append((image_id, rep))

    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    import csv as _csv

    with open(out_path, "w", newline="") as fh:
        fh.write(f"# provenance: {json.dumps(prov)}\n")
        w = _csv.writer(fh)
        w.writerow(["image_id", "cc", "kl", "nss", "auc"])
        for image_id, rep in rows:
            w.writerow([image_id, f"{rep.cc:.6g}", f"{rep.kl:.6g}",
                        f"{rep.nss:.6g}", f"{rep.auc:.6g}"])
        cols = {name: np.array([getattr(r, name) for _, r in rows])
                for name in ("cc", "kl", "nss", "auc")}
        w.writerow(["mean(std)"] + [f"{cols[n].mean():.3f} ({cols[n].std():.3f})"
                                    for n in ("cc", "kl", "nss", "auc")])
    print(f"evaluated {len(rows)} images -> {out_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# train


PAPER_HEADER = (
    ("Maximum number of training cycles H", "50000"),
    ("The number of episodes I", "42"),
    ("The step size of one episode B", "5"),
    ("Mini-batch size", "6"),
    ("Discount factor gamma", "0.99"),
    ("Generator initial learning rate (RMSprop)", "0.0007"),
    ("Generator LeakyReLU negative slope", "0.01"),
    ("Discriminator/selector initial learning rate (Adam)", "0.0002"),
    ("Discriminator/selector batch size", "150"),
    ("Discriminator/selector LeakyReLU negative slope", "0.2"),
    ("BatchNorm numerical stability value", "1e-05"),
    ("BatchNorm momentum", "0.1"),
    ("Weight decay", "0.002"),
    ("Reward trade-off lambda1", "0.7"),
    ("Causal entropy coefficient lambda2", "0.01"),
)

_HYPER_FLAGS = ("cycles", "episodes", "episode_steps", "gamma", "lambda1", "lambda2",
                "minibatch", "d_batch")


def _resolve_hyper(args) -> gail.GailHyper:
    """Preset, overridden by explicit flags, overridden by the config file."""
    hyper = gail.paper_hyper() if args.preset == "paper" else gail.desk_hyper()
    for name in _HYPER_FLAGS:
        val = getattr(args, name)
        if val is not None:
            hyper = replace(hyper, **{name: val})
    if args.config:
        cfg_path = Path(args.config)
        if not cfg_path.is_file():
            raise ConfigError(f"config file {args.config!r} does not exist")
        try:
            overrides = json.loads(cfg_path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {args.config!r} is not valid JSON: {exc}")
        unknown = set(overrides) - set(gail.GailHyper().__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown hyperparameter(s) in config: {sorted(unknown)}")
        hyper = replace(hyper, **overrides)
    return hyper


def _labeled_experts(images: dict[str, EquirectImage], traj_dir: Path,
                     cfg: EnvConfig) -> list[gail.ExpertTrajectory]:
    files = sorted(traj_dir.glob("*.csv"))
    if not files:
        raise InputError(f"no labeled trajectories in {traj_dir}")
    trajs = [trajectory.read_labeled_log(p) for p in files]
    subjects = sorted({t.subject_id for t in trajs})
    stream_of = {s: i for i, s in enumerate(subjects)}
    experts = []
    for t in trajs:
        if t.image_id not in images:
            raise InputError(f"trajectory {t.image_id!r}/s{t.subject_id} has no matching image")
        experts.append(gail.expert_from_labeled(t, images[t.image_id], cfg,
                                                stream=stream_of[t.subject_id]))
    return experts


def cmd_train(args) -> int:
    seed = args.seed
    hyper = _resolve_hyper(args)
    if args.preset == "paper":
        print("preset=paper  (hyperparameter table)")
        for name, value in PAPER_HEADER:
            print(f"  {name}: {value}")
        print("warning: the paper preset is full scale and can take days of CPU "
              "time; use --preset desk for checks", file=sys.stderr)

    if args.data:
        images, experts, env_cfg, _manifest = synth.read_training_dataset(
            _require_dir(args.data, "dataset"))
        env_cfg = replace(env_cfg, steps=hyper.trajectory_steps())
    elif args.images and args.trajectories:
        img_dir = _require_dir(args.images, "images")
        images = {p.stem: load_image(p) for p in sorted(img_dir.iterdir())
                  if p.suffix in (".png", ".f32")}
        if not images:
            raise InputError(f"no images (.png/.f32) in {img_dir}")
        traj_dir = _require_dir(args.trajectories, "trajectories")
        labeled = [trajectory.read_labeled_log(p) for p in sorted(traj_dir.glob("*.csv"))]
        step_mag = args.step_mag if args.step_mag else mean_step_magnitude(labeled)
        env_cfg = EnvConfig(step_mag_deg=step_mag, steps=hyper.trajectory_steps(),
                            viewport=ViewportSpec(args.fov, args.fov, args.obs, args.obs))
        experts = _labeled_experts(images, traj_dir, env_cfg)
    else:
        raise ConfigError("provide either --data (manifest dataset) or both "
                          "--images and --trajectories")

    log_rows: list[gail.CycleLog] = []
    model = gail.train(images, experts, hyper, env_cfg=env_cfg, seed=seed,
                       log_rows=log_rows)
    gail.save_model(args.out, model)
    prov = _provenance("train", vars(args))
    if args.log:
        Path(args.log).parent.mkdir(parents=True, exist_ok=True)
        gail.write_training_log(args.log, log_rows, prov)
    print(f"trained {model.n_streams} streams for {len(log_rows)} cycles -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    model_path = Path(args.model)
    if not model_path.is_file():
        raise InputError(f"model checkpoint {args.model!r} does not exist")
    model = gail.load_model(model_path)
    img_dir = _require_dir(args.images, "images")
    out = _out_dir(args.out_dir)
    prov = _provenance("simulate", vars(args))
    files = sorted(p for p in img_dir.iterdir() if p.suffix in (".png", ".f32"))
    if not files:
        raise InputError(f"no images (.png/.f32) in {img_dir}")
    mode = FixationMode(args.fixation_mode)
    for path in files:
        image = load_image(path)
        smap = gail.predict_saliency(model, image, args.map_width, args.map_height,
                                     mode=mode, include_fcb=not args.no_fcb)
        if not np.all(np.isfinite(smap.values)):
            raise FloatingPointError(f"non-finite saliency values for {path.stem}")
        save_float_grid(out / f"{path.stem}.f32", smap.values, prov)
        save_png_gray(out / f"{path.stem}.png", smap.values, prov)
        save_png_heatmap(out / f"{path.stem}_heat.png", smap.values, prov)
        if args.dump_rollouts:
            write_rollouts(out / f"{path.stem}_rollouts.csv",
                           gail.greedy_rollouts(model, image), prov)
    print(f"predicted {len(files)} saliency maps -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# findings


def cmd_findings(args) -> int:
    traj_dir = _require_dir(args.trajectories, "trajectories")
    out = _out_dir(args.out_dir)
    prov = _provenance("findings", vars(args))
    rng = np.random.default_rng(args.seed)
    files = sorted(traj_dir.glob("*.csv"))
    if not files:
        raise InputError(f"no labeled trajectories in {traj_dir}")
    trajs = [trajectory.read_labeled_log(p) for p in files]

    corpus: analysis.FixationCorpus = {}
    for t in trajs:
        corpus.setdefault(t.image_id, {}).setdefault(t.subject_id, []).extend(t.fixations())

    curve = analysis.split_half_cc(corpus, reps=args.reps, rng=rng)
    analysis.write_split_half_csv(out / "split_half_cc.csv", curve, prov)

    all_fix = [p for per_image in corpus.values() for pts in per_image.values() for p in pts]
    hists = analysis.fixation_histograms(all_fix)
    analysis.write_histogram_csv(out / "lon_hist.csv", hists.lon_centers,
                                 hists.lon_counts, prov)
    analysis.write_histogram_csv(out / "lat_hist.csv", hists.lat_centers,
                                 hists.lat_counts, prov)
    grid = hists.grid_counts.astype(np.float64)
    save_float_grid(out / "grid_counts.f32", grid, prov)

    mags = analysis.magnitude_distribution(trajs)
    with open(out / "magnitude_intervals.csv", "w", newline="") as fh:
        fh.write(f"# provenance: {json.dumps(prov)}\n")
        fh.write("subject_id,p2.5_deg,p97.5_deg\n")
        for subject, stats in mags.items():
            fh.write(f"{subject},{stats.interval95[0]:.6g},{stats.interval95[1]:.6g}\n")
            analysis.write_histogram_csv(out / f"magnitude_hist_s{subject}.csv",
                                         stats.bin_centers, stats.counts, prov)
    print(f"findings written -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# synth


HABITS = ("stay", "east", "north", "west", "south", "northeast", "southwest", "seek")
_HABIT_ACTIONS = {"east": 1, "northeast": 2, "north": 3, "west": 5, "south": 7,
                  "southwest": 6}


def _habit_expert(name: str, blob: SpherePoint | None):
    if name == "stay":
        return synth.expert_stay
    if name == "seek":
        if blob is None:
            raise ConfigError("the seek habit needs --task blob images")
        return synth.make_expert_seek(blob)
    return synth.make_expert_const(_HABIT_ACTIONS[name])


def cmd_synth(args) -> int:
    rng = np.random.default_rng(args.seed)
    out = _out_dir(args.out_dir)
    prov = _provenance("synth", vars(args))

    if args.kind == "experts":
        cfg = EnvConfig(step_mag_deg=args.step_mag,
                        steps=args.steps,
                        viewport=ViewportSpec(args.fov, args.fov, args.obs, args.obs))
        habits = [HABITS[i % len(HABITS)] for i in range(args.experts)] \
            if not args.habits else args.habits.split(",")
        if len(habits) != args.experts:
            raise ConfigError(f"--habits lists {len(habits)} habits for "
                              f"{args.experts} experts")
        images: dict[str, EquirectImage] = {}
        blobs: dict[str, SpherePoint] = {}
        for i in range(args.images):
            image_id = f"img{i:03d}"
            if args.task == "blob":
                center = synth.random_blob_center(args.blob_offset, rng)
                images[image_id] = synth.blob_image(args.width, args.height, center,
                                                    args.blob_sigma, rng)
                blobs[image_id] = center
            else:
                images[image_id] = synth.smooth_image(args.width, args.height, rng)
        experts = []
        for stream, habit in enumerate(habits):
            for image_id in sorted(images):
                fn = _habit_expert(habit, blobs.get(image_id))
                experts.append(synth.record_expert(images[image_id], fn, cfg,
                                                   args.steps, stream, image_id))
        extra = {"habits": habits}
        if blobs:
            extra["blobs"] = {k: [v.lat, v.lon] for k, v in sorted(blobs.items())}
        manifest = synth.write_training_dataset(out, images, experts, cfg, prov, extra)
        print(f"synthetic expert dataset ({args.experts} streams, "
              f"{len(images)} images) -> {manifest}")
        return EXIT_OK

    if args.kind == "ivt":
        truth = {}
        for s in range(args.subjects):
            for i in range(args.images):
                image_id = f"img{i:03d}"
                samples, labels = synth.ivt_corpus_trajectory(rng)
                name = trajectory.log_filename(image_id, s)
                with open(out / name, "w", newline="") as fh:
                    fh.write(f"# provenance: {json.dumps(prov)}\n")
                    fh.write("t_ms,pitch_deg,yaw_deg\n")
                    for smp in samples:
                        fh.write(f"{smp.t_ms:.6g},{smp.pos.lat:.10g},{smp.pos.lon:.10g}\n")
                truth[name] = labels
        (out / "truth.json").write_text(json.dumps(truth, sort_keys=True) + "\n")
        print(f"I-VT corpus ({len(truth)} logs + truth.json) -> {out}")
        return EXIT_OK

    if args.kind == "findings":
        corpus = analysis.shared_attractor_corpus(args.subjects, args.images,
                                                  args.fixations, args.noise, rng)
        count = 0
        for image_id, per_subject in sorted(corpus.items()):
            for subject, pts in sorted(per_subject.items()):
                samples = [trajectory.HmSample(100.0 * (i + 1), p)
                           for i, p in enumerate(pts)]
                samples.insert(0, trajectory.HmSample(0.0, SpherePoint(0.0, 0.0)))
                labels = [trajectory.Label.FIRST] + [trajectory.Label.FIXATION] * len(pts)
                traj = trajectory.LabeledTrajectory(subject, image_id, samples, labels,
                                                    [0.0] * len(samples))
                trajectory.write_labeled_log(out / trajectory.log_filename(image_id, subject),
                                             traj, prov)
                count += 1
        print(f"findings corpus ({count} labeled logs) -> {out}")
        return EXIT_OK

    raise ConfigError(f"unknown synth kind {args.kind!r}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="headsal",
                                description="head-movement saliency pipeline for "
                                            "omnidirectional images")
    p.add_argument("--version", action="version", version=f"headsal {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    ivt = sub.add_parser("ivt", help="label head-movement logs into fixations/saccades")
    ivt.add_argument("--in", dest="in_dir", required=True, help="directory of raw logs")
    ivt.add_argument("--out", dest="out_dir", required=True)
    ivt.add_argument("--threshold", type=float, default=trajectory.IVT_THRESHOLD_DEGPS,
                     help="velocity threshold in deg/s (default %(default)s)")
    ivt.add_argument("--jobs", type=int, default=1)
    ivt.add_argument("--seed", type=int, default=0)
    ivt.set_defaults(fn=cmd_ivt)

    sm = sub.add_parser("salmap", help="render saliency maps from labeled logs")
    sm.add_argument("--fixations", required=True, help="directory of labeled logs")
    sm.add_argument("--out", dest="out_dir", required=True)
    sm.add_argument("--width", type=int, default=2048)
    sm.add_argument("--height", type=int, default=1024)
    sm.add_argument("--sigma-px", type=float, default=None,
                    help="override the splat kernel sigma in pixels")
    sm.add_argument("--no-fcb", action="store_true", help="skip the center-bias fusion")
    sm.add_argument("--fit-fcb", action="store_true",
                    help="fit the center-bias widths from the input fixations")
    sm.add_argument("--fcb-sigma-lon", type=float, default=40.0)
    sm.add_argument("--fcb-sigma-lat", type=float, default=20.0)
    sm.add_argument("--fcb-weight", type=float, default=0.3)
    sm.add_argument("--jobs", type=int, default=1)
    sm.add_argument("--seed", type=int, default=0)
    sm.set_defaults(fn=cmd_salmap)

    ev = sub.add_parser("eval", help="score predicted maps against ground truth")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--gt", required=True)
    ev.add_argument("--fixations", required=True, help="labeled logs for NSS/AUC positives")
    ev.add_argument("--out", required=True, help="output metrics CSV")
    ev.add_argument("--seed", type=int, default=0)
    ev.set_defaults(fn=cmd_eval)

    tr = sub.add_parser("train", help="train the imitation model")
    tr.add_argument("--data", help="manifest dataset directory (from `headsal synth`)")
    tr.add_argument("--images", help="image directory (with --trajectories)")
    tr.add_argument("--trajectories", help="labeled log directory (with --images)")
    tr.add_argument("--out", required=True, help="checkpoint path")
    tr.add_argument("--seed", type=int, required=True)
    tr.add_argument("--preset", choices=("desk", "paper"), default="desk")
    tr.add_argument("--config", help="JSON file of hyperparameter overrides "
                                     "(overrides flags, which override the preset)")
    tr.add_argument("--log", help="training log CSV path")
    for name in _HYPER_FLAGS:
        typ = float if name in ("gamma", "lambda1", "lambda2") else int
        tr.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ, default=None)
    tr.add_argument("--obs", type=int, default=32, help="observation size (with --images)")
    tr.add_argument("--fov", type=float, default=90.0)
    tr.add_argument("--step-mag", dest="step_mag", type=float, default=None,
                    help="override the per-step head-movement magnitude in degrees")
    tr.set_defaults(fn=cmd_train)

    si = sub.add_parser("simulate", help="predict saliency maps with a trained model")
    si.add_argument("--model", required=True)
    si.add_argument("--images", required=True)
    si.add_argument("--out", dest="out_dir", required=True)
    si.add_argument("--seed", type=int, required=True)
    si.add_argument("--map-width", type=int, default=256)
    si.add_argument("--map-height", type=int, default=128)
    si.add_argument("--fixation-mode", choices=("all_steps", "stay_only"),
                    default="all_steps")
    si.add_argument("--no-fcb", action="store_true",
                    help="ablation: skip the center-bias fusion")
    si.add_argument("--dump-rollouts", action="store_true")
    si.set_defaults(fn=cmd_simulate)

    fi = sub.add_parser("findings", help="corpus statistics: consistency curve, "
                                         "center-bias histograms, step magnitudes")
    fi.add_argument("--trajectories", required=True)
    fi.add_argument("--out", dest="out_dir", required=True)
    fi.add_argument("--reps", type=int, default=20)
    fi.add_argument("--seed", type=int, default=0)
    fi.set_defaults(fn=cmd_findings)

    sy = sub.add_parser("synth", help="generate synthetic data")
    sy.add_argument("--kind", choices=("experts", "ivt", "findings"), default="experts")
    sy.add_argument("--out", dest="out_dir", required=True)
    sy.add_argument("--seed", type=int, required=True)
    sy.add_argument("--experts", type=int, default=2, help="number of expert streams")
    sy.add_argument("--habits", help="comma list from: " + ",".join(HABITS))
    sy.add_argument("--task", choices=("smooth", "blob"), default="smooth")
    sy.add_argument("--images", type=int, default=6)
    sy.add_argument("--subjects", type=int, default=10, help="for ivt/findings corpora")
    sy.add_argument("--fixations", type=int, default=40, help="per subject (findings)")
    sy.add_argument("--noise", type=float, default=10.0, help="attractor noise in degrees")
    sy.add_argument("--width", type=int, default=96)
    sy.add_argument("--height", type=int, default=48)
    sy.add_argument("--obs", type=int, default=32)
    sy.add_argument("--fov", type=float, default=90.0)
    sy.add_argument("--steps", type=int, default=10, help="expert trajectory steps")
    sy.add_argument("--step-mag", dest="step_mag", type=float, default=4.0)
    sy.add_argument("--blob-sigma", type=float, default=15.0)
    sy.add_argument("--blob-offset", type=float, default=12.0)
    sy.set_defaults(fn=cmd_synth)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FloatingPointError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
