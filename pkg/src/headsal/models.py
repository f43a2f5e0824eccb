"""Network architectures of the gaze policy and the trajectory critic pair.

The policy/value net consumes a grayscale viewport plus a one-hot stream code;
the discriminator/selector pair consumes a viewport plus a one-hot action and
shares its convolutional trunk between both heads.
"""

from __future__ import annotations

import numpy as np

from .env import N_ACTIONS
from .nn import (BatchNorm, Concat, Conv2d, Dense, Flatten, LeakyReLU, Network,
                 TwinHeadNet)


def _conv_out(size: int, k: int, s: int) -> int:
    return (size - k) // s + 1


def _flat_dim(obs_size: int, channels: int) -> int:
    s = _conv_out(_conv_out(obs_size, 8, 4), 4, 2)
    return channels * s * s


def build_generator(obs_size: int, n_streams: int, slope: float = 0.01,
                    dtype=np.float32, seed: int = 0) -> TwinHeadNet:
    """Policy + value network, conditioned on the stream one-hot after the trunk."""
    rng = np.random.default_rng(seed)
    trunk = Network([
        Conv2d(1, 16, 8, 4, rng=rng, dtype=dtype),
        LeakyReLU(slope),
        Conv2d(16, 32, 4, 2, rng=rng, dtype=dtype),
        LeakyReLU(slope),
        Flatten(),
        Dense(_flat_dim(obs_size, 32), 256, rng=rng, dtype=dtype),
        Concat(n_streams),
    ], dtype=dtype)
    heads = {
        "policy": Network([Dense(256 + n_streams, N_ACTIONS, rng=rng, dtype=dtype)], dtype=dtype),
        "value": Network([Dense(256 + n_streams, 1, rng=rng, dtype=dtype)], dtype=dtype),
    }
    return TwinHeadNet(trunk, heads)


def build_discriminator_selector(obs_size: int, n_streams: int, slope: float = 0.2,
                                 bn_eps: float = 1e-5, bn_momentum: float = 0.1,
                                 dtype=np.float32, seed: int = 0) -> TwinHeadNet:
    """Shared expert-vs-predicted scorer (head "d", a logit) and stream classifier
    (head "s", one logit per stream), conditioned on the taken action."""
    rng = np.random.default_rng(seed)
    trunk = Network([
        Conv2d(1, 16, 8, 4, rng=rng, dtype=dtype),
        LeakyReLU(slope),
        BatchNorm(16, eps=bn_eps, momentum=bn_momentum, dtype=dtype),
        Conv2d(16, 32, 4, 2, rng=rng, dtype=dtype),
        LeakyReLU(slope),
        BatchNorm(32, eps=bn_eps, momentum=bn_momentum, dtype=dtype),
        Flatten(),
        Concat(N_ACTIONS),
        Dense(_flat_dim(obs_size, 32) + N_ACTIONS, 128, rng=rng, dtype=dtype),
    ], dtype=dtype)
    heads = {
        "d": Network([Dense(128, 1, rng=rng, dtype=dtype)], dtype=dtype),
        "s": Network([Dense(128, n_streams, rng=rng, dtype=dtype)], dtype=dtype),
    }
    return TwinHeadNet(trunk, heads)
