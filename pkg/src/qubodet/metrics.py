"""ROC AUC scoring for binary flags and for real-valued scores.

Flagging k points yields a single operating point, so its ROC has two
segments and the AUC equals (TPR + TNR) / 2, i.e. balanced accuracy.
Reports label this "binary AUC" to keep it distinct from the ranking AUC
of real-valued scores (Mann-Whitney, ties at half credit). Both functions
share the exact same rational arithmetic, so feeding flags in as scores
reproduces the binary AUC bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

__all__ = ["EvalReport", "roc_auc_binary", "roc_auc_scores"]


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts and the binary (two-segment) ROC AUC."""

    auc: float
    tp: int
    fp: int
    tn: int
    fn: int
    tpr: float
    fpr: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.auc <= 1.0:
            raise ValueError(f"auc must be in [0, 1], got {self.auc}")
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    def to_dict(self) -> dict:
        return {
            "auc": self.auc,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "tpr": self.tpr,
            "fpr": self.fpr,
        }


def _check_labels(labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError("labels must be a vector")
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError("labels must contain only 0 or 1")
    if labels.min() == labels.max():
        raise ValueError("labels must contain both classes")
    return labels.astype(np.int64)


def roc_auc_binary(labels: np.ndarray, flags: np.ndarray) -> EvalReport:
    """AUC of the two-segment ROC through one operating point.

    Args:
        labels: ground truth 0/1 vector with both classes present.
        flags: predicted 0/1 vector of the same length.

    Returns:
        EvalReport with confusion counts, rates, and
        auc = (tpr + (1 - fpr)) / 2.
    """
    labels = _check_labels(labels)
    flags = np.asarray(flags)
    if flags.shape != labels.shape:
        raise ValueError(
            f"flags shape {flags.shape} does not match labels {labels.shape}"
        )
    if not np.all((flags == 0) | (flags == 1)):
        raise ValueError("flags must contain only 0 or 1")
    flags = flags.astype(np.int64)

    tp = int(np.sum((labels == 1) & (flags == 1)))
    fp = int(np.sum((labels == 0) & (flags == 1)))
    tn = int(np.sum((labels == 0) & (flags == 0)))
    fn = int(np.sum((labels == 1) & (flags == 0)))
    pos = tp + fn
    neg = fp + tn
    # (tpr + (1 - fpr)) / 2 rearranged over the common denominator pos*neg;
    # the numerator is an exact half-integer, so this matches the ranking
    # formula of roc_auc_scores bit for bit on 2-level scores.
    auc = (tp * tn + 0.5 * (tp * fp + fn * tn)) / (pos * neg)
    return EvalReport(
        auc=auc, tp=tp, fp=fp, tn=tn, fn=fn, tpr=tp / pos, fpr=fp / neg
    )


def roc_auc_scores(labels: np.ndarray, scores: np.ndarray) -> float:
    """Probability a random positive outranks a random negative.

    Mann-Whitney formulation: ties count half. Invariant under any strictly
    increasing transform of the scores.

    Args:
        labels: ground truth 0/1 vector with both classes present.
        scores: finite real scores, higher = more anomalous.

    Returns:
        Ranking AUC in [0, 1].
    """
    labels = _check_labels(labels)
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != labels.shape:
        raise ValueError(
            f"scores shape {scores.shape} does not match labels {labels.shape}"
        )
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    pos = int(labels.sum())
    neg = labels.shape[0] - pos
    ranks = rankdata(scores)  # average rank on ties: exact half-integers
    rank_sum = float(ranks[labels == 1].sum())
    u = rank_sum - pos * (pos + 1) / 2
    return u / (pos * neg)
