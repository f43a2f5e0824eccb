"""Saliency evaluation metrics: CC, KL divergence, NSS and AUC.

All functions take dense maps (arrays or SaliencyMap) and, where relevant,
ground-truth fixations as pixel positions.  Conventions:

* KL is computed as KL(gt || pred) after both maps are sum-normalized with an
  additive epsilon, so identical maps score exactly 0 and disjoint supports
  stay finite.
* AUC is the Judd variant: fixation pixels are the positives, every other
  pixel is a negative, thresholds sweep all distinct prediction values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_fixation_pixels, check_grid, check_same_shape

KL_EPS = 1e-7


@dataclass(frozen=True)
class MetricReport:
    cc: float
    kl: float
    nss: float
    auc: float


def cc(pred, gt) -> float:
    """Pearson linear correlation over pixels; constant maps are rejected."""
    p = check_grid(pred, "pred")
    g = check_grid(gt, "gt")
    check_same_shape(p, g)
    dp = p - p.mean()
    dg = g - g.mean()
    denom = np.sqrt((dp * dp).sum() * (dg * dg).sum())
    if denom == 0:
        raise ValueError("correlation undefined for a constant map")
    return float((dp * dg).sum() / denom)


def kl(pred, gt, eps: float = KL_EPS) -> float:
    """KL(gt || pred) between eps-regularized, sum-normalized maps."""
    p = check_grid(pred, "pred")
    g = check_grid(gt, "gt")
    check_same_shape(p, g)
    if p.min() < 0 or g.min() < 0:
        raise ValueError("maps must be non-negative")
    pd = (p + eps) / (p.sum() + eps * p.size)
    gd = (g + eps) / (g.sum() + eps * g.size)
    return float(np.sum(gd * np.log(gd / pd)))


def nss(pred, fixations) -> float:
    """Mean z-scored prediction value at the fixation pixels."""
    p = check_grid(pred, "pred")
    std = p.std()
    if std == 0:
        raise ValueError("NSS undefined for a constant prediction")
    pix = check_fixation_pixels(fixations, p.shape[1], p.shape[0])
    z = (p - p.mean()) / std
    return float(z[pix[:, 1], pix[:, 0]].mean())


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties averaged (midrank)."""
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts).astype(np.float64)
    avg = ends - (counts - 1) / 2.0
    return avg[inverse]


def auc_judd(pred, fixations) -> float:
    """ROC area with fixation pixels as positives and all other pixels negative.

    Computed via midranks, which equals the exact threshold-sweep AUC with
    ties counted half.
    """
    p = check_grid(pred, "pred")
    h, w = p.shape
    pix = check_fixation_pixels(fixations, w, h)
    pos = np.zeros((h, w), dtype=bool)
    pos[pix[:, 1], pix[:, 0]] = True
    n_pos = int(pos.sum())
    n_neg = pos.size - n_pos
    if n_neg == 0:
        raise ValueError("every pixel is a fixation; AUC undefined")
    ranks = _average_ranks(p.ravel())
    rank_sum = ranks[pos.ravel()].sum()
    return float((rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def report(pred, gt, fixations) -> MetricReport:
    """All four metrics of one prediction against one ground truth."""
    return MetricReport(cc=cc(pred, gt), kl=kl(pred, gt),
                        nss=nss(pred, fixations), auc=auc_judd(pred, fixations))
