"""Adversarial imitation training of the multi-stream gaze policy.

One latent-conditioned generator (policy + value heads) imitates per-subject
head trajectories.  A discriminator scores observation-action pairs as expert
or predicted and supplies the main reward term -log(1 - D); a stream selector
sharing the discriminator trunk supplies a mutual-information term
lambda1 * log S(c_true | obs, action).  Policy and value heads follow plain
policy-gradient updates on the discounted returns.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .env import (N_ACTIONS, EnvConfig, EnvState, FixationMode, HeadMovementEnv,
                  Rollout, trajectory_to_fixations)
from .geometry import SpherePoint, ViewportSpec, great_circle_step, spherical_delta
from .models import build_discriminator_selector, build_generator
from .nn import Adam, RmsProp, TwinHeadNet, load_checkpoint, log_softmax, one_hot, save_checkpoint, softmax
from .raster import EquirectImage, SaliencyMap
from .saliency import FcbParams, build_fcb, fit_fcb, fuse_fcb, render_saliency
from .validation import check_distribution

PROB_CLAMP = 1e-6


@dataclass(frozen=True)
class GailHyper:
    """Training-loop knobs; defaults are the CI-sized desk preset."""

    cycles: int = 2000              # max training cycles
    episodes: int = 42              # episodes per cycle
    episode_steps: int = 5          # steps per episode
    gamma: float = 0.99
    lambda1: float = 0.7            # reward trade-off (selector term)
    lambda2: float = 0.01           # causal-entropy coefficient
    minibatch: int = 6              # generator update batch
    d_batch: int = 150              # discriminator/selector batch cap (per side)
    lr_generator: float = 7e-4
    lr_discsel: float = 2e-4
    weight_decay: float = 2e-3
    slope_generator: float = 0.01
    slope_discsel: float = 0.2
    bn_eps: float = 1e-5
    bn_momentum: float = 0.1
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_anneal_frac: float = 0.5    # fraction of cycles over which epsilon anneals
    advantage_baseline: bool = False
    converge_tol: float = 1e-3
    converge_window: int = 10
    converge_patience: int = 3      # consecutive cycles below tol before breaking

    def trajectory_steps(self) -> int:
        return self.episodes * self.episode_steps

    def epsilon_at(self, cycle: int) -> float:
        span = max(int(self.cycles * self.eps_anneal_frac), 1)
        frac = min(cycle / span, 1.0)
        return self.eps_start + (self.eps_end - self.eps_start) * frac


def paper_hyper() -> GailHyper:
    """Full-scale settings (days of CPU time; use the desk preset for checks)."""
    return GailHyper(cycles=50_000, episodes=42, episode_steps=5)


def desk_hyper() -> GailHyper:
    return GailHyper()


@dataclass
class TransitionRecord:
    obs: np.ndarray
    action: int
    stream: int
    reward: float = 0.0
    return_: float = 0.0


@dataclass
class ExpertTrajectory:
    """A recorded subject trajectory on one image: start plus (action, position) steps."""

    stream: int
    image_id: str
    positions: list[SpherePoint]
    actions: list[int]

    def __post_init__(self):
        if len(self.positions) != len(self.actions) + 1:
            raise ValueError("expert trajectory needs one position per action plus the start")


def _stack_obs(obs_list) -> np.ndarray:
    arr = np.stack([np.asarray(o) for o in obs_list]).astype(np.float32)
    return arr[:, None, :, :]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class ExpertBank:
    """Expert observation-action pairs with precomputed viewports."""

    def __init__(self, trajs: Sequence[ExpertTrajectory],
                 images: dict[str, EquirectImage], cfg: EnvConfig,
                 min_window: int = 1):
        self._data: dict[tuple[int, str], tuple[np.ndarray, np.ndarray]] = {}
        self._images_of: dict[int, list[str]] = {}
        for traj in trajs:
            if traj.image_id not in images:
                raise ValueError(f"expert trajectory references unknown image {traj.image_id!r}")
            if len(traj.actions) < min_window:
                raise ValueError(f"expert trajectory on {traj.image_id!r} has "
                                 f"{len(traj.actions)} steps, need >= {min_window}")
            env = HeadMovementEnv(images[traj.image_id], cfg)
            obs = _stack_obs([env.observe(p) for p in traj.positions[:-1]])
            acts = np.asarray(traj.actions, dtype=np.int64)
            key = (traj.stream, traj.image_id)
            if key in self._data:  # concatenate repeated recordings
                o0, a0 = self._data[key]
                obs = np.concatenate([o0, obs])
                acts = np.concatenate([a0, acts])
            self._data[key] = (obs, acts)
            self._images_of.setdefault(traj.stream, [])
            if traj.image_id not in self._images_of[traj.stream]:
                self._images_of[traj.stream].append(traj.image_id)
        self.streams = sorted(self._images_of)

    def image_ids(self, stream: int) -> list[str]:
        return self._images_of[stream]

    def sample_image(self, stream: int, rng: np.random.Generator) -> str:
        ids = self._images_of[stream]
        return ids[int(rng.integers(len(ids)))]

    def window(self, stream: int, image_id: str, b: int,
               rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """A contiguous random-offset window of ``b`` expert pairs."""
        obs, acts = self._data[(stream, image_id)]
        if len(acts) < b:
            raise ValueError(f"expert data for stream {stream} on {image_id!r} shorter "
                             f"than one episode ({len(acts)} < {b})")
        off = int(rng.integers(0, len(acts) - b + 1))
        return obs[off:off + b], acts[off:off + b]

    def all_pairs(self, stream: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(obs, actions, streams) over the whole bank, for evaluation."""
        obs, acts, streams = [], [], []
        for (s, _), (o, a) in sorted(self._data.items(), key=lambda kv: kv[0]):
            if stream is not None and s != stream:
                continue
            obs.append(o)
            acts.append(a)
            streams.append(np.full(len(a), s, dtype=np.int64))
        return np.concatenate(obs), np.concatenate(acts), np.concatenate(streams)


def sample_action(policy_probs, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy draw: uniform with probability epsilon, else from the policy."""
    probs = check_distribution(policy_probs, N_ACTIONS, "policy distribution")
    if epsilon > 0 and rng.random() < epsilon:
        return int(rng.integers(N_ACTIONS))
    return int(rng.choice(N_ACTIONS, p=probs / probs.sum()))


def reward_value(d_prob: float, s_probs, stream: int, lambda1: float) -> float:
    """Per-transition reward: -log(1 - D) + lambda1 * log S(true stream)."""
    d = min(max(float(d_prob), PROB_CLAMP), 1.0 - PROB_CLAMP)
    s = max(float(np.asarray(s_probs).ravel()[stream]), PROB_CLAMP)
    return -math.log(1.0 - d) + lambda1 * math.log(s)


def discounted_returns(rewards, gamma: float) -> np.ndarray:
    """Suffix-discounted sums within one episode; last return equals last reward."""
    r = np.asarray(rewards, dtype=np.float64)
    if r.size == 0:
        raise ValueError("empty reward sequence")
    out = np.empty_like(r)
    acc = 0.0
    for i in range(r.size - 1, -1, -1):
        acc = r[i] + gamma * acc
        out[i] = acc
    return out


def policy_gradient_weights(returns, lambda2: float, values=None) -> np.ndarray:
    """Per-transition weight of the log-policy gradient: lambda2 + R_t.

    With a value baseline enabled, R_t is replaced by R_t - V(obs, c).
    """
    r = np.asarray(returns, dtype=np.float64)
    if values is not None:
        r = r - np.asarray(values, dtype=np.float64)
    return lambda2 + r


def _records_to_arrays(batch: Sequence[TransitionRecord]):
    if not batch:
        raise ValueError("empty transition batch")
    obs = _stack_obs([t.obs for t in batch])
    actions = np.asarray([t.action for t in batch], dtype=np.int64)
    streams = np.asarray([t.stream for t in batch], dtype=np.int64)
    rewards = np.asarray([t.reward for t in batch], dtype=np.float64)
    returns = np.asarray([t.return_ for t in batch], dtype=np.float64)
    return obs, actions, streams, rewards, returns


def discriminator_objective(d_expert, d_gen) -> float:
    """Value of E_expert[log D] + E_gen[log(1 - D)] with probability clamping."""
    de = np.clip(np.asarray(d_expert, dtype=np.float64), PROB_CLAMP, 1.0 - PROB_CLAMP)
    dg = np.clip(np.asarray(d_gen, dtype=np.float64), PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(np.mean(np.log(de)) + np.mean(np.log1p(-dg)))


def update_discriminator(discsel: TwinHeadNet, opt: Adam,
                         expert_batch: Sequence[TransitionRecord],
                         gen_batch: Sequence[TransitionRecord]) -> float:
    """One ascent step on the expert/predicted separation objective.

    Returns the objective value at the pre-update parameters.
    """
    eo, ea, _, _, _ = _records_to_arrays(expert_batch)
    go, ga, _, _, _ = _records_to_arrays(gen_batch)
    ne, ng = len(ea), len(ga)
    obs = np.concatenate([eo, go])
    aux = one_hot(np.concatenate([ea, ga]), N_ACTIONS)
    logits = discsel.forward(obs, aux=aux, head="d", train=True)[:, 0]
    d = _sigmoid(logits)
    # ascend:  dJ/dlogit = (1-D)/ne on expert rows, -D/ng on generated rows
    dlogit = np.empty_like(d)
    dlogit[:ne] = -(1.0 - d[:ne]) / ne
    dlogit[ne:] = d[ne:] / ng
    discsel.backward("d", dlogit[:, None])
    opt.step(discsel.named_params("d"))
    return discriminator_objective(d[:ne], d[ne:])


def update_selector(discsel: TwinHeadNet, opt: Adam,
                    gen_batch: Sequence[TransitionRecord], lambda1: float,
                    n_streams: int) -> float:
    """One step maximizing log-likelihood of the generating stream (scaled by lambda1).

    Returns the plain cross-entropy -mean log S(c_true).
    """
    obs, actions, streams, _, _ = _records_to_arrays(gen_batch)
    n = len(actions)
    logits = discsel.forward(obs, aux=one_hot(actions, N_ACTIONS), head="s", train=True)
    logp = log_softmax(logits.astype(np.float64))
    loss = -float(logp[np.arange(n), streams].mean())
    probs = np.exp(logp)
    dlogits = lambda1 * (probs - one_hot(streams, n_streams, dtype=np.float64)) / n
    discsel.backward("s", dlogits)
    opt.step(discsel.named_params("s"))
    return loss


def update_generator(gen: TwinHeadNet, opt: RmsProp,
                     batch: Sequence[TransitionRecord], n_streams: int,
                     lambda2: float, advantage_baseline: bool = False) -> tuple[float, float]:
    """One value step (squared return error) and one policy step (weighted log-policy).

    Returns (policy_loss, value_loss); the policy loss is the negated surrogate
    -mean(w * log pi(a)) with w = lambda2 + R_t.
    """
    obs, actions, streams, _, returns = _records_to_arrays(batch)
    n = len(actions)
    codes = one_hot(streams, n_streams)

    v = gen.forward(obs, aux=codes, head="value", train=True)[:, 0].astype(np.float64)
    value_loss = float(np.mean((returns - v) ** 2))
    gen.backward("value", (2.0 * (v - returns) / n)[:, None])
    opt.step(gen.named_params("value"))

    logits = gen.forward(obs, aux=codes, head="policy", train=True).astype(np.float64)
    logp = log_softmax(logits)
    probs = np.exp(logp)
    w = policy_gradient_weights(returns, lambda2, v if advantage_baseline else None)
    policy_loss = -float((w * logp[np.arange(n), actions]).mean())
    dlogits = -(w[:, None] * (one_hot(actions, N_ACTIONS, dtype=np.float64) - probs)) / n
    gen.backward("policy", dlogits)
    opt.step(gen.named_params("policy"))
    return policy_loss, value_loss


def score_pairs(discsel: TwinHeadNet, obs: np.ndarray, actions: np.ndarray):
    """Eval-mode discriminator probability and selector distribution per pair."""
    outs = discsel.forward(obs, aux=one_hot(actions, N_ACTIONS), head=None, train=False)
    d = _sigmoid(outs["d"][:, 0].astype(np.float64))
    s = softmax(outs["s"].astype(np.float64))
    return d, s


def policy_probs(gen: TwinHeadNet, obs: np.ndarray, streams: np.ndarray,
                 n_streams: int) -> np.ndarray:
    logits = gen.forward(obs, aux=one_hot(streams, n_streams), head="policy", train=False)
    return softmax(logits.astype(np.float64))


@dataclass
class GailModel:
    generator: TwinHeadNet
    discsel: TwinHeadNet
    n_streams: int
    env_cfg: EnvConfig
    hyper: GailHyper
    seed: int
    fcb: FcbParams | None = None
    trained: bool = False


@dataclass
class CycleLog:
    cycle: int
    mean_reward: float
    d_acc: float
    sel_acc: float
    policy_loss: float
    value_loss: float


def write_training_log(path, rows: Sequence[CycleLog], provenance: dict | None = None) -> None:
    with open(Path(path), "w", newline="") as fh:
        if provenance:
            import json

            fh.write(f"# provenance: {json.dumps(provenance)}\n")
        w = csv.writer(fh)
        w.writerow(["cycle", "mean_reward", "d_acc", "sel_acc", "policy_loss", "value_loss"])
        for r in rows:
            w.writerow([r.cycle, f"{r.mean_reward:.6g}", f"{r.d_acc:.6g}",
                        f"{r.sel_acc:.6g}", f"{r.policy_loss:.6g}", f"{r.value_loss:.6g}"])


def _converged(cycle_rewards: list[float], window: int, tol: float) -> bool:
    """Relative change of the trailing moving average against the one before it."""
    if len(cycle_rewards) < 2 * window:
        return False
    cur = float(np.mean(cycle_rewards[-window:]))
    prev = float(np.mean(cycle_rewards[-2 * window:-window]))
    return abs(cur - prev) <= tol * max(abs(prev), 1e-12)


class _Window:
    """Fixed-capacity FIFO of transitions; the newest ``cap`` records form a batch.

    At full scale one episode already yields a whole batch of pairs, so this
    reduces to batching the current episode; at desk scale it pools the most
    recent episodes to honor the configured batch size.
    """

    def __init__(self, cap: int):
        self.cap = cap
        self._items: list[TransitionRecord] = []

    def extend(self, records: Sequence[TransitionRecord]) -> None:
        self._items.extend(records)
        if len(self._items) > self.cap:
            self._items = self._items[-self.cap:]

    def batch(self) -> list[TransitionRecord]:
        return list(self._items)


def train(images: dict[str, EquirectImage], experts: Sequence[ExpertTrajectory],
          hyper: GailHyper, env_cfg: EnvConfig | None = None, seed: int = 0,
          log_rows: list[CycleLog] | None = None,
          fit_fcb_from_experts: bool = True) -> GailModel:
    """Run the adversarial imitation loop and return the trained model.

    ``experts`` must cover streams 0..N-1 (N inferred); every referenced image
    id must exist in ``images``.  Single-threaded and deterministic for a fixed
    seed.
    """
    if not images:
        raise ValueError("need at least one training image")
    if not experts:
        raise ValueError("need expert trajectories")
    streams = sorted({t.stream for t in experts})
    n_streams = len(streams)
    if streams != list(range(n_streams)):
        raise ValueError(f"expert streams must be 0..N-1, got {streams}")
    if env_cfg is None:
        env_cfg = EnvConfig(steps=hyper.trajectory_steps(),
                            viewport=ViewportSpec(out_w=32, out_h=32))
    obs_size = env_cfg.viewport.out_w
    if env_cfg.viewport.out_h != obs_size:
        raise ValueError("square observations required")

    rng = np.random.default_rng(seed)
    gen = build_generator(obs_size, n_streams, hyper.slope_generator,
                          seed=int(rng.integers(2 ** 31)))
    discsel = build_discriminator_selector(obs_size, n_streams, hyper.slope_discsel,
                                           hyper.bn_eps, hyper.bn_momentum,
                                           seed=int(rng.integers(2 ** 31)))
    opt_gen = RmsProp(hyper.lr_generator)
    opt_ds = Adam(hyper.lr_discsel, weight_decay=hyper.weight_decay)
    bank = ExpertBank(experts, images, env_cfg, min_window=hyper.episode_steps)

    gen_window = _Window(hyper.d_batch)
    expert_window = _Window(hyper.d_batch)
    cycle_rewards: list[float] = []
    flat_cycles = 0
    for cycle in range(hyper.cycles):
        epsilon = hyper.epsilon_at(cycle)
        img_ids = [bank.sample_image(n, rng) for n in range(n_streams)]
        envs = [HeadMovementEnv(images[i], env_cfg) for i in img_ids]
        states: list[EnvState] = [e.reset() for e in envs]
        rewards_seen: list[float] = []
        p_losses: list[float] = []
        v_losses: list[float] = []
        d_correct = 0
        d_total = 0
        s_correct = 0
        s_total = 0
        all_streams = np.arange(n_streams)
        for _episode in range(hyper.episodes):
            per_stream: list[list[TransitionRecord]] = [[] for _ in range(n_streams)]
            chi_s: list[TransitionRecord] = []
            for n in range(n_streams):
                eo, ea = bank.window(n, img_ids[n], hyper.episode_steps, rng)
                chi_s.extend(TransitionRecord(o[0], int(a), n) for o, a in zip(eo, ea))
            for _b in range(hyper.episode_steps):
                probs = policy_probs(gen, _stack_obs([states[n].obs for n in all_streams]),
                                     all_streams, n_streams)
                for n in range(n_streams):
                    st = states[n]
                    act = sample_action(probs[n], epsilon, rng)
                    per_stream[n].append(TransitionRecord(st.obs, act, n))
                    states[n] = envs[n].step(st, act)
            flat = [t for records in per_stream for t in records]
            d_probs, s_probs = score_pairs(discsel, _stack_obs([t.obs for t in flat]),
                                           np.asarray([t.action for t in flat]))
            for t, dp, sp in zip(flat, d_probs, s_probs):
                t.reward = reward_value(dp, sp, t.stream, hyper.lambda1)
                rewards_seen.append(t.reward)
            s_correct += int((np.argmax(s_probs, axis=1) ==
                              np.asarray([t.stream for t in flat])).sum())
            s_total += len(flat)
            d_correct += int((d_probs < 0.5).sum())
            d_total += len(flat)
            for records in per_stream:
                returns = discounted_returns([t.reward for t in records], hyper.gamma)
                for t, ret in zip(records, returns):
                    t.return_ = float(ret)

            exp_d, _ = score_pairs(discsel, _stack_obs([t.obs for t in chi_s]),
                                   np.asarray([t.action for t in chi_s]))
            d_correct += int((exp_d >= 0.5).sum())
            d_total += len(chi_s)

            expert_window.extend(chi_s)
            for records in per_stream:
                gen_window.extend(records)
            update_discriminator(discsel, opt_ds, expert_window.batch(), gen_window.batch())
            update_selector(discsel, opt_ds, gen_window.batch(), hyper.lambda1, n_streams)
            for records in per_stream:
                if len(records) > hyper.minibatch:
                    idx = rng.choice(len(records), size=hyper.minibatch, replace=False)
                    records = [records[i] for i in sorted(idx)]
                pl, vl = update_generator(gen, opt_gen, records, n_streams,
                                          hyper.lambda2, hyper.advantage_baseline)
                p_losses.append(pl)
                v_losses.append(vl)

        cycle_rewards.append(float(np.mean(rewards_seen)))
        if log_rows is not None:
            log_rows.append(CycleLog(cycle=cycle,
                                     mean_reward=cycle_rewards[-1],
                                     d_acc=d_correct / max(d_total, 1),
                                     sel_acc=s_correct / max(s_total, 1),
                                     policy_loss=float(np.mean(p_losses)),
                                     value_loss=float(np.mean(v_losses))))
        if _converged(cycle_rewards, hyper.converge_window, hyper.converge_tol):
            flat_cycles += 1
            if flat_cycles >= hyper.converge_patience:
                break
        else:
            flat_cycles = 0

    fcb = None
    if fit_fcb_from_experts:
        pts = [p for t in experts for p in t.positions[1:]]
        if len(pts) >= 10:
            fitted = fit_fcb(pts)
            fcb = replace(fitted, weight=0.3)
    return GailModel(generator=gen, discsel=discsel, n_streams=n_streams,
                     env_cfg=env_cfg, hyper=hyper, seed=seed, fcb=fcb, trained=True)


def expert_from_labeled(traj, image: EquirectImage, cfg: EnvConfig,
                        stream: int) -> ExpertTrajectory:
    """Project a recorded head trajectory onto the environment's action grid.

    Each recorded sample is matched greedily: the action whose environment
    transition lands closest to the sample becomes the expert action, and the
    expert position follows the environment dynamics, so expert observations
    are reachable states of the same environment the policy acts in.
    """
    pos = SpherePoint(0.0, 0.0)
    positions = [pos]
    actions: list[int] = []
    for sample in traj.samples[1:]:
        best_act, best_pos = 0, pos
        best_d = spherical_delta(pos, sample.pos)
        for act in range(1, N_ACTIONS):
            cand = great_circle_step(pos, (act - 1) * 45.0, cfg.step_mag_deg)
            d = spherical_delta(cand, sample.pos)
            if d < best_d:
                best_d, best_act, best_pos = d, act, cand
        actions.append(best_act)
        pos = best_pos
        positions.append(pos)
    return ExpertTrajectory(stream=stream, image_id=traj.image_id,
                            positions=positions, actions=actions)


def greedy_rollouts(model: GailModel, image: EquirectImage,
                    steps: int | None = None) -> list[Rollout]:
    """Deterministic (argmax) rollouts of every stream on one image."""
    env = HeadMovementEnv(image, model.env_cfg)
    steps = model.env_cfg.steps if steps is None else steps
    rollouts = []
    states = [env.reset() for _ in range(model.n_streams)]
    for n in range(model.n_streams):
        positions = [states[n].pos]
        actions = []
        for _t in range(steps):
            probs = policy_probs(model.generator, _stack_obs([states[n].obs]),
                                 np.array([n]), model.n_streams)[0]
            act = int(np.argmax(probs))
            actions.append(act)
            states[n] = env.step(states[n], act)
            positions.append(states[n].pos)
        rollouts.append(Rollout(stream=n, positions=positions, actions=actions))
    return rollouts


def predict_saliency(model: GailModel, image: EquirectImage,
                     map_w: int = 256, map_h: int = 128,
                     mode: FixationMode = FixationMode.ALL_STEPS,
                     include_fcb: bool = True,
                     fcb: FcbParams | None = None) -> SaliencyMap:
    """Saliency map of one image: greedy rollouts -> fixation splat -> FCB fusion."""
    if not model.trained:
        raise ValueError("model has not been trained")
    fixations: list[SpherePoint] = []
    for r in greedy_rollouts(model, image):
        fixations.extend(trajectory_to_fixations(r.positions, r.actions, mode))
    content = render_saliency(fixations, map_w, map_h)
    params = fcb if fcb is not None else model.fcb
    if include_fcb and params is not None:
        return fuse_fcb(content, build_fcb(map_w, map_h, params))
    return content


def action_agreement(model: GailModel, image: EquirectImage,
                     expert_fns: dict[int, Callable[[EnvState, EnvConfig], int]],
                     steps: int | None = None) -> dict[int, float]:
    """Fraction of greedy policy actions matching the scripted expert, per stream,
    evaluated along the policy's own rollout."""
    env = HeadMovementEnv(image, model.env_cfg)
    steps = model.env_cfg.steps if steps is None else steps
    out = {}
    for n, fn in expert_fns.items():
        state = env.reset()
        agree = 0
        for _t in range(steps):
            probs = policy_probs(model.generator, _stack_obs([state.obs]),
                                 np.array([n]), model.n_streams)[0]
            act = int(np.argmax(probs))
            if act == fn(state, model.env_cfg):
                agree += 1
            state = env.step(state, act)
        out[n] = agree / steps
    return out


def selector_accuracy(model: GailModel, obs: np.ndarray, actions: np.ndarray,
                      streams: np.ndarray) -> float:
    _, s = score_pairs(model.discsel, obs, actions)
    return float((np.argmax(s, axis=1) == streams).mean())


def discriminator_accuracy(model: GailModel, expert_obs: np.ndarray, expert_actions: np.ndarray,
                           gen_obs: np.ndarray, gen_actions: np.ndarray) -> float:
    """Balanced accuracy of D at threshold 0.5 on held-out pairs."""
    de, _ = score_pairs(model.discsel, expert_obs, expert_actions)
    dg, _ = score_pairs(model.discsel, gen_obs, gen_actions)
    return 0.5 * float((de >= 0.5).mean()) + 0.5 * float((dg < 0.5).mean())


def _model_header(model: GailModel) -> dict:
    vp = model.env_cfg.viewport
    return {
        "n_streams": model.n_streams,
        "seed": model.seed,
        "trained": model.trained,
        "env": {"step_mag_deg": model.env_cfg.step_mag_deg, "steps": model.env_cfg.steps,
                "viewport": {"fov_w_deg": vp.fov_w_deg, "fov_h_deg": vp.fov_h_deg,
                             "out_w": vp.out_w, "out_h": vp.out_h}},
        "fcb": None if model.fcb is None else asdict(model.fcb),
        "hyper": asdict(model.hyper),
    }


def save_model(path, model: GailModel) -> None:
    save_checkpoint(path, {"generator": model.generator, "discsel": model.discsel},
                    header_extra={"model": _model_header(model)})


def load_model(path) -> GailModel:
    nets, header = load_checkpoint(path)
    meta = header["model"]
    env = meta["env"]
    cfg = EnvConfig(step_mag_deg=env["step_mag_deg"], steps=env["steps"],
                    viewport=ViewportSpec(**env["viewport"]))
    fcb = None if meta["fcb"] is None else FcbParams(**meta["fcb"])
    return GailModel(generator=nets["generator"], discsel=nets["discsel"],
                     n_streams=meta["n_streams"], env_cfg=cfg,
                     hyper=GailHyper(**meta["hyper"]), seed=meta["seed"],
                     fcb=fcb, trained=meta["trained"])
