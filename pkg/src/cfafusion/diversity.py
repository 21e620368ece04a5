"""Cognitive diversity between RSC profiles and per-system diversity strength."""

from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ScoreTable, Split
from .ranking import RscProfile, rsc_profile

__all__ = [
    "WeightKind",
    "DiversityMatrix",
    "WeightVector",
    "DegenerateDiversityWarning",
    "cognitive_diversity",
    "diversity_matrix",
    "table_diversity",
    "diversity_strength",
]


class DegenerateDiversityWarning(UserWarning):
    """All profiles coincide, so diversity strength carries no information."""


class WeightKind(str, enum.Enum):
    DIVERSITY_STRENGTH = "diversity_strength"
    PERFORMANCE = "performance"
    EQUAL = "equal"


@dataclass(frozen=True, eq=False)
class DiversityMatrix:
    system_ids: tuple[str, ...]
    entries: np.ndarray
    source_split: Split = Split.TRAIN

    def submatrix(self, subset: Sequence[str]) -> DiversityMatrix:
        idx = [self.system_ids.index(s) for s in subset]
        return DiversityMatrix(tuple(subset), self.entries[np.ix_(idx, idx)], self.source_split)


@dataclass(frozen=True, eq=False)
class WeightVector:
    system_ids: tuple[str, ...]
    weights: np.ndarray
    kind: WeightKind
    source_split: Split | None = None
    # Set when diversity strength fell back to equal weights.
    degenerate: bool = False

    def select(self, subset: Sequence[str]) -> WeightVector:
        idx = [self.system_ids.index(s) for s in subset]
        return WeightVector(tuple(subset), self.weights[idx], self.kind, self.source_split, self.degenerate)

    @classmethod
    def equal(cls, system_ids: Sequence[str]) -> WeightVector:
        return cls(tuple(system_ids), np.ones(len(system_ids)), WeightKind.EQUAL)


def _values(p) -> np.ndarray:
    return p.values if isinstance(p, RscProfile) else np.asarray(p, dtype=np.float64)


def cognitive_diversity(fa, fb) -> float:
    """Root-mean-square difference between two RSC profiles of equal length."""
    a, b = _values(fa), _values(fb)
    if a.shape != b.shape:
        raise ValueError(f"profile lengths differ: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] == 0:
        raise ValueError("profiles must be nonempty")
    d = a - b
    # Correctly rounded sum: the result does not depend on summation order.
    return math.sqrt(math.fsum((d * d).tolist()) / a.shape[0])


def diversity_matrix(profiles: Sequence[RscProfile], source_split: Split | str = Split.TRAIN) -> DiversityMatrix:
    t = len(profiles)
    if t < 2:
        raise ValueError("need at least 2 profiles")
    entries = np.zeros((t, t))
    for j, k in itertools.combinations(range(t), 2):
        entries[j, k] = entries[k, j] = cognitive_diversity(profiles[j], profiles[k])
    ids = tuple(p.system_id if isinstance(p, RscProfile) else str(i) for i, p in enumerate(profiles))
    return DiversityMatrix(ids, entries, Split(source_split))


def table_diversity(table: ScoreTable) -> DiversityMatrix:
    """Diversity matrix of a normalized table, tagged with the table's split."""
    profiles = [rsc_profile(col, sid) for sid, col in zip(table.system_ids, table.scores.T)]
    return diversity_matrix(profiles, table.split)


def diversity_strength(matrix: DiversityMatrix, warn: bool = True) -> WeightVector:
    """Mean diversity of each system against the others in ``matrix``.

    An all-zero matrix yields equal weights with ``degenerate=True``.
    """
    t = len(matrix.system_ids)
    if t < 2:
        raise ValueError("diversity strength needs at least 2 systems")
    if not np.any(matrix.entries):
        if warn:
            warnings.warn(
                "all RSC profiles are identical; falling back to equal weights",
                DegenerateDiversityWarning,
                stacklevel=2,
            )
        return WeightVector(matrix.system_ids, np.ones(t), WeightKind.EQUAL, matrix.source_split, degenerate=True)
    ds = np.array([math.fsum(row) for row in matrix.entries.tolist()]) / (t - 1)
    return WeightVector(matrix.system_ids, ds, WeightKind.DIVERSITY_STRENGTH, matrix.source_split)
