"""Scikit-learn style front end over the imitation-trained saliency model."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import gail
from .env import EnvConfig, FixationMode
from .geometry import ViewportSpec
from .raster import EquirectImage, SaliencyMap
from .validation import check_seed


class SaliencyImitator(BaseEstimator):
    """Predict head-fixation saliency maps by imitating per-subject trajectories.

    Fit on a corpus of equirectangular images and per-stream expert head
    trajectories; predict returns one normalized saliency map per image.
    Follows the scikit-learn estimator protocol (``get_params``/``set_params``,
    unfitted predicts raise ``NotFittedError``), so it composes with model
    selection utilities.
    """

    def __init__(self, cycles: int = 2000, episodes: int = 2, episode_steps: int = 5,
                 gamma: float = 0.99, lambda1: float = 0.7, lambda2: float = 0.01,
                 minibatch: int = 6, d_batch: int = 150,
                 step_mag_deg: float = 4.0, obs_size: int = 32, fov_deg: float = 90.0,
                 map_w: int = 256, map_h: int = 128, use_fcb: bool = True,
                 fixation_mode: str = "all_steps", seed: int | None = None):
        self.cycles = cycles
        self.episodes = episodes
        self.episode_steps = episode_steps
        self.gamma = gamma
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.minibatch = minibatch
        self.d_batch = d_batch
        self.step_mag_deg = step_mag_deg
        self.obs_size = obs_size
        self.fov_deg = fov_deg
        self.map_w = map_w
        self.map_h = map_h
        self.use_fcb = use_fcb
        self.fixation_mode = fixation_mode
        self.seed = seed

    def _hyper(self) -> gail.GailHyper:
        return gail.GailHyper(cycles=self.cycles, episodes=self.episodes,
                              episode_steps=self.episode_steps, gamma=self.gamma,
                              lambda1=self.lambda1, lambda2=self.lambda2,
                              minibatch=self.minibatch, d_batch=self.d_batch)

    def _env_cfg(self, hyper: gail.GailHyper) -> EnvConfig:
        return EnvConfig(step_mag_deg=self.step_mag_deg,
                         steps=hyper.trajectory_steps(),
                         viewport=ViewportSpec(self.fov_deg, self.fov_deg,
                                               self.obs_size, self.obs_size))

    def fit(self, X, y):
        """Train on images ``X`` (dict id -> EquirectImage) and expert
        trajectories ``y`` (sequence of gail.ExpertTrajectory)."""
        seed = check_seed(self.seed)
        hyper = self._hyper()
        self.training_log_ = []
        self.model_ = gail.train(dict(X), list(y), hyper,
                                 env_cfg=self._env_cfg(hyper), seed=seed,
                                 log_rows=self.training_log_)
        return self

    def _check_fitted(self) -> gail.GailModel:
        model = getattr(self, "model_", None)
        if model is None:
            raise NotFittedError("this SaliencyImitator instance is not fitted yet; "
                                 "call fit before predict")
        return model

    def predict(self, X) -> list[SaliencyMap]:
        """Saliency map per image; ``X`` is an iterable of EquirectImage."""
        model = self._check_fitted()
        mode = FixationMode(self.fixation_mode)
        return [gail.predict_saliency(model, img, self.map_w, self.map_h,
                                      mode=mode, include_fcb=self.use_fcb)
                for img in X]

    def predict_one(self, image: EquirectImage) -> SaliencyMap:
        return self.predict([image])[0]

    def save(self, path) -> None:
        gail.save_model(path, self._check_fitted())

    @classmethod
    def from_checkpoint(cls, path) -> "SaliencyImitator":
        model = gail.load_model(path)
        est = cls(cycles=model.hyper.cycles, episodes=model.hyper.episodes,
                  episode_steps=model.hyper.episode_steps, gamma=model.hyper.gamma,
                  lambda1=model.hyper.lambda1, lambda2=model.hyper.lambda2,
                  minibatch=model.hyper.minibatch, d_batch=model.hyper.d_batch,
                  step_mag_deg=model.env_cfg.step_mag_deg,
                  obs_size=model.env_cfg.viewport.out_w,
                  fov_deg=model.env_cfg.viewport.fov_w_deg, seed=model.seed)
        est.model_ = model
        return est
