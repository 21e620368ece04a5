"""Rank functions and rank-score characteristic (RSC) profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .core import ScoreTable, TiePolicy

__all__ = [
    "RankTable",
    "RscProfile",
    "scores_to_ranks",
    "rank_table",
    "rsc_profile",
    "rsc_plot_data",
]


def scores_to_ranks(column, tie_policy: TiePolicy | str = TiePolicy.ORDINAL) -> np.ndarray:
    """Rank a score vector so that rank 1 is the highest score.

    ``ordinal`` gives a permutation of 1..n where earlier items win ties;
    ``average`` gives tied items the mean of the ranks they span.
    """
    x = np.asarray(column, dtype=np.float64)
    if TiePolicy(tie_policy) is TiePolicy.AVERAGE:
        return rankdata(-x, method="average")
    order = np.argsort(-x, kind="stable")
    ranks = np.empty(x.shape[0], dtype=np.float64)
    ranks[order] = np.arange(1, x.shape[0] + 1)
    return ranks


@dataclass(frozen=True, eq=False)
class RankTable:
    item_ids: tuple[str, ...]
    system_ids: tuple[str, ...]
    ranks: np.ndarray
    tie_policy: TiePolicy = TiePolicy.ORDINAL


def rank_table(table: ScoreTable, tie_policy: TiePolicy | str = TiePolicy.ORDINAL) -> RankTable:
    ranks = np.column_stack([scores_to_ranks(col, tie_policy) for col in table.scores.T])
    ranks = ranks.reshape(table.n_items, table.n_systems)
    return RankTable(table.item_ids, table.system_ids, ranks, TiePolicy(tie_policy))


@dataclass(frozen=True, eq=False)
class RscProfile:
    """Scores indexed by rank: ``values[i - 1]`` is the score of the rank-i item."""

    system_id: str
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]


def rsc_profile(column, system_id: str = "") -> RscProfile:
    # s(r^-1(i)) is the i-th largest score, whatever the tie policy.
    values = np.sort(np.asarray(column, dtype=np.float64))[::-1].copy()
    values.flags.writeable = False
    return RscProfile(system_id, values)


def rsc_plot_data(table: ScoreTable) -> dict[str, list[tuple[int, float]]]:
    """Per-system (rank, score) series for plotting, ranks starting at 1."""
    series = {}
    for sid, col in zip(table.system_ids, table.scores.T):
        prof = rsc_profile(col, sid)
        series[sid] = list(zip(range(1, len(prof) + 1), prof.values.tolist()))
    return series
