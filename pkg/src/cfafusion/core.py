"""Shared domain types: score tables, fusion specifications and validation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .exceptions import ConfigError, InvalidTableError, UnknownSystemError

__all__ = [
    "Split",
    "Method",
    "TiePolicy",
    "RCWeighting",
    "ScoreTable",
    "FusionSpec",
    "Violation",
    "ValidationReport",
    "validate_table",
    "check_table",
    "select_systems",
]


class Split(str, enum.Enum):
    TRAIN = "train"
    TEST = "test"


class Method(str, enum.Enum):
    # Declaration order is the tie-break order used by sweep reports.
    ASC = "asc"
    ARC = "arc"
    WCP_SC = "wcp-sc"
    WCP_RC = "wcp-rc"
    WCDS_SC = "wcds-sc"
    WCDS_RC = "wcds-rc"

    @property
    def is_rank(self) -> bool:
        return self in (Method.ARC, Method.WCP_RC, Method.WCDS_RC)

    @property
    def weighting(self) -> str:
        """One of ``"equal"``, ``"performance"`` or ``"diversity"``."""
        if self in (Method.ASC, Method.ARC):
            return "equal"
        if self in (Method.WCP_SC, Method.WCP_RC):
            return "performance"
        return "diversity"

    @property
    def label(self) -> str:
        return self.name.replace("_", "-")


class TiePolicy(str, enum.Enum):
    ORDINAL = "ordinal"
    AVERAGE = "average"


class RCWeighting(str, enum.Enum):
    RECIPROCAL = "reciprocal"
    DIRECT = "direct"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ScoreTable:
    """n items scored by t systems, with optional binary labels.

    Construction only checks shapes; content checks (finite scores, unique
    ids, binary labels) live in :func:`validate_table` so that malformed
    tables can be inspected rather than refused outright.
    """

    item_ids: tuple[str, ...]
    system_ids: tuple[str, ...]
    scores: np.ndarray
    labels: np.ndarray | None = None
    split: Split = Split.TEST
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "item_ids", tuple(str(i) for i in self.item_ids))
        object.__setattr__(self, "system_ids", tuple(str(s) for s in self.system_ids))
        object.__setattr__(self, "split", Split(self.split))
        scores = np.array(self.scores, dtype=np.float64)
        if scores.ndim != 2:
            raise ValueError(f"scores must be 2-D, got shape {scores.shape}")
        n, t = len(self.item_ids), len(self.system_ids)
        if scores.shape != (n, t):
            raise ValueError(f"scores has shape {scores.shape}, expected ({n}, {t})")
        object.__setattr__(self, "scores", _frozen(scores))
        if self.labels is not None:
            labels = np.array(self.labels)
            if labels.shape != (n,):
                raise ValueError(f"labels has shape {labels.shape}, expected ({n},)")
            object.__setattr__(self, "labels", _frozen(labels))

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    @property
    def n_systems(self) -> int:
        return len(self.system_ids)

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    def column(self, system_id: str) -> np.ndarray:
        return self.scores[:, self.index_of(system_id)]

    def index_of(self, system_id: str) -> int:
        try:
            return self.system_ids.index(system_id)
        except ValueError:
            raise UnknownSystemError(system_id) from None

    def with_scores(self, scores: np.ndarray, normalized: bool | None = None) -> ScoreTable:
        return replace(
            self,
            scores=scores,
            normalized=self.normalized if normalized is None else normalized,
        )

    def __eq__(self, other):
        if not isinstance(other, ScoreTable):
            return NotImplemented
        if (self.labels is None) != (other.labels is None):
            return False
        return (
            self.item_ids == other.item_ids
            and self.system_ids == other.system_ids
            and self.split == other.split
            and self.normalized == other.normalized
            and np.array_equal(self.scores, other.scores)
            and (self.labels is None or np.array_equal(self.labels, other.labels))
        )

    __hash__ = None


@dataclass(frozen=True)
class FusionSpec:
    """One fusion cell: which systems, which rule, which split feeds the weights."""

    subset: tuple[str, ...]
    method: Method
    weight_split: Split = Split.TRAIN
    threshold: float = 0.5
    # None means: estimate from the training labels.
    positive_prior: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(self.subset))
        try:
            object.__setattr__(self, "method", Method(self.method))
            object.__setattr__(self, "weight_split", Split(self.weight_split))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if len(self.subset) < 2:
            raise ConfigError(f"a fusion subset needs at least 2 systems, got {len(self.subset)}")
        if len(set(self.subset)) != len(self.subset):
            raise ConfigError(f"duplicate systems in subset {'+'.join(self.subset)}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must lie in [0, 1], got {self.threshold}")
        if self.positive_prior is not None and not 0.0 < self.positive_prior < 1.0:
            raise ConfigError(f"positive_prior must lie in (0, 1), got {self.positive_prior}")

    @property
    def transductive(self) -> bool:
        """True when the weights are computed from the test split itself."""
        return self.method.weighting != "equal" and self.weight_split is Split.TEST


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    row: int | None = None
    system: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_table(table: ScoreTable) -> ValidationReport:
    """Collect every structural violation in ``table``.

    Rows are reported 1-based, counting data rows only.
    """
    out: list[Violation] = []

    seen: dict[str, int] = {}
    for row, item in enumerate(table.item_ids, start=1):
        if item in seen:
            out.append(Violation("duplicate_item", f"duplicate item id {item!r} at rows {seen[item]} and {row}", row=row))
        else:
            seen[item] = row

    seen_sys: set[str] = set()
    for sid in table.system_ids:
        if not sid:
            out.append(Violation("empty_system_id", "empty system id"))
        elif sid in seen_sys:
            out.append(Violation("duplicate_system", f"duplicate system id {sid!r}", system=sid))
        seen_sys.add(sid)

    bad_rows, bad_cols = np.nonzero(~np.isfinite(table.scores))
    for r, c in zip(bad_rows.tolist(), bad_cols.tolist()):
        sid = table.system_ids[c]
        out.append(
            Violation("non_finite", f"non-finite score at row {r + 1}, system {sid}", row=r + 1, system=sid)
        )

    if table.labels is not None:
        labels = table.labels
        if labels.dtype == object:
            missing = [i for i, v in enumerate(labels.tolist()) if v is None or (isinstance(v, float) and math.isnan(v))]
        elif np.issubdtype(labels.dtype, np.floating):
            missing = np.flatnonzero(np.isnan(labels)).tolist()
        else:
            missing = []
        if missing:
            out.append(
                Violation(
                    "partial_labels",
                    f"partial labels: {len(missing)} of {table.n_items} items have no label",
                    row=missing[0] + 1,
                )
            )
        missing_set = set(missing)
        for i, v in enumerate(labels.tolist()):
            if i not in missing_set and v not in (0, 1):
                out.append(Violation("bad_label", f"label {v!r} at row {i + 1} is not 0 or 1", row=i + 1))

    return ValidationReport(tuple(out))


def check_table(table: ScoreTable) -> ScoreTable:
    report = validate_table(table)
    if not report.ok:
        raise InvalidTableError(report)
    return table


def select_systems(table: ScoreTable, subset: Sequence[str]) -> ScoreTable:
    """Project ``table`` onto ``subset``, in subset order."""
    subset = tuple(subset)
    if not subset:
        raise ConfigError("empty system selection")
    idx = [table.index_of(s) for s in subset]
    return replace(table, system_ids=subset, scores=table.scores[:, idx])
