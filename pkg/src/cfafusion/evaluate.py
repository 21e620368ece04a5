"""Binary decisions from fused columns, and classification metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import FusionSpec
from .exceptions import ConfigError

__all__ = [
    "EvalReport",
    "Metrics",
    "classify_by_threshold",
    "classify_top_k",
    "top_k_count",
    "compute_metrics",
    "f1_from_pr",
    "optimize_threshold",
]


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    # Names of metrics whose denominator was zero (reported as 0).
    degenerate: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class EvalReport:
    """Metrics for one fusion cell (or one single system, when ``spec`` is None)."""

    systems: tuple[str, ...]
    method: str
    weight_split: str | None
    transductive: bool
    metrics: Metrics
    spec: FusionSpec | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        m = self.metrics
        out = {
            "systems": "+".join(self.systems),
            "method": self.method,
            "weight_split": self.weight_split,
            "transductive": self.transductive,
            "tp": m.tp,
            "fp": m.fp,
            "tn": m.tn,
            "fn": m.fn,
            "accuracy": m.accuracy,
            "precision": m.precision,
            "recall": m.recall,
            "f1": m.f1,
            "degenerate": list(m.degenerate),
        }
        out.update(self.extra)
        return out


def _kind_name(fused) -> str | None:
    kind = getattr(fused, "kind", None)
    return None if kind is None else getattr(kind, "value", kind)


def _values(fused) -> np.ndarray:
    return np.asarray(getattr(fused, "values", fused), dtype=np.float64)


def classify_by_threshold(fused, threshold: float = 0.5) -> np.ndarray:
    """Predict 1 wherever the fused score is at least ``threshold``."""
    if _kind_name(fused) == "rank":
        raise ConfigError("threshold classification applies to score combinations only")
    return (_values(fused) >= threshold).astype(np.int8)


def top_k_count(n: int, positive_prior: float) -> int:
    # Round half up, so n * prior = 2.5 admits 3 items.
    return int(math.floor(n * positive_prior + 0.5))


def classify_top_k(fused, positive_prior: float) -> np.ndarray:
    """Mark the ``round(n * positive_prior)`` lowest fused ranks as positive.

    Ties at the cut are resolved in favour of the earlier item.
    """
    if _kind_name(fused) == "score":
        raise ConfigError("top-k classification applies to rank combinations only")
    if not 0.0 < positive_prior < 1.0:
        raise ConfigError(f"positive_prior must lie in (0, 1), got {positive_prior}")
    v = _values(fused)
    k = top_k_count(v.shape[0], positive_prior)
    pred = np.zeros(v.shape[0], dtype=np.int8)
    pred[np.argsort(v, kind="stable")[:k]] = 1
    return pred


def compute_metrics(predictions, labels) -> Metrics:
    p = np.asarray(predictions).astype(bool)
    y = np.asarray(labels).astype(bool)
    if p.shape != y.shape:
        raise ValueError(f"predictions and labels differ in length: {p.shape[0]} vs {y.shape[0]}")
    n = p.shape[0]
    tp = int(np.count_nonzero(p & y))
    fp = int(np.count_nonzero(p & ~y))
    fn = int(np.count_nonzero(~p & y))
    tn = n - tp - fp - fn

    degenerate = []

    def ratio(num, den, name):
        if den == 0:
            degenerate.append(name)
            return 0.0
        return num / den

    accuracy = ratio(tp + tn, n, "accuracy")
    precision = ratio(tp, tp + fp, "precision")
    recall = ratio(tp, tp + fn, "recall")
    if precision + recall == 0:
        degenerate.append("f1")
        f1 = 0.0
    else:
        f1 = f1_from_pr(precision, recall)
    return Metrics(tp, fp, tn, fn, accuracy, precision, recall, f1, tuple(degenerate))


def f1_from_pr(precision: float, recall: float) -> float:
    if precision + recall == 0:
        raise ValueError("F1 is undefined when precision and recall are both zero")
    return 2 * precision * recall / (precision + recall)


def optimize_threshold(train_values, train_labels) -> float:
    """Threshold maximizing training accuracy.

    Candidates are the midpoints between consecutive distinct sorted values,
    plus 0.5 itself; among equally accurate candidates the one closest to
    0.5 wins (then the smaller one).
    """
    v = np.asarray(train_values, dtype=np.float64)
    y = np.asarray(train_labels).astype(bool)
    u = np.unique(v)
    candidates = np.unique(np.concatenate([(u[:-1] + u[1:]) / 2, [0.5]]))
    # accuracy(c) = #(y & v >= c) + #(~y & v < c), counted via sorted searches
    pos = np.sort(v[y])
    neg = np.sort(v[~y])
    correct = (pos.shape[0] - np.searchsorted(pos, candidates, side="left")) + np.searchsorted(
        neg, candidates, side="left"
    )
    best = correct.max()
    tied = candidates[correct == best]
    dist = np.abs(tied - 0.5)
    return float(tied[np.lexsort((tied, dist))[0]])
