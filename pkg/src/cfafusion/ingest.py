"""Score-file parsing and min-max normalization fitted on training ranges.

Score files are plain CSV::

    item_id,label,A,B
    r1,1,0.9,0.2
    r2,0,0.1,0.7

Label cells are ``0``, ``1`` or empty (empty on every row means the file is
unlabeled). No quoting is supported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from os import PathLike
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator, OneToOneFeatureMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from .core import ScoreTable, Split
from .exceptions import ConfigError, ParseError

__all__ = [
    "parse_score_file",
    "read_score_file",
    "format_score_file",
    "write_score_file",
    "NormalizationParams",
    "MinMaxNormalizer",
    "min_max_fit",
    "min_max_apply",
]

_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _parse_float(cell: str, line: int, column: str) -> float:
    if not _DECIMAL.fullmatch(cell):
        raise ParseError(f"unparsable number {cell!r} in column {column}", line)
    value = float(cell)
    if not np.isfinite(value):
        raise ParseError(f"score {cell!r} in column {column} overflows float64", line)
    return value


def parse_score_file(text: str | bytes, split: Split | str = Split.TEST) -> ScoreTable:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in lines]
    if not lines:
        raise ParseError("empty file", 1)

    header = lines[0].split(",")
    if len(header) < 3 or header[0] != "item_id" or header[1] != "label":
        raise ParseError("header must be item_id,label,<system>,...", 1)
    systems = header[2:]
    if any(not s for s in systems):
        raise ParseError("empty system name in header", 1)
    if len(set(systems)) != len(systems):
        raise ParseError("duplicate system name in header", 1)
    if len(lines) < 2:
        raise ParseError("no data rows", 1)

    width = len(header)
    item_ids: list[str] = []
    labels: list[int | None] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != width:
            raise ParseError(f"expected {width} fields, got {len(cells)}", lineno)
        item = cells[0]
        if not item:
            raise ParseError("empty item_id", lineno)
        if item in seen:
            raise ParseError(f"duplicate item_id {item!r}", lineno)
        seen.add(item)
        lab = cells[1]
        if lab == "":
            labels.append(None)
        elif lab in ("0", "1"):
            labels.append(int(lab))
        else:
            raise ParseError(f"label must be 0, 1 or empty, got {lab!r}", lineno)
        if labels[-1] is None and labels[0] is not None or labels[-1] is not None and labels[0] is None:
            raise ParseError("mixed present and absent labels", lineno)
        item_ids.append(item)
        rows.append([_parse_float(c, lineno, systems[j]) for j, c in enumerate(cells[2:])])

    label_arr = None if labels[0] is None else np.array(labels, dtype=np.int8)
    return ScoreTable(
        item_ids=item_ids,
        system_ids=systems,
        scores=np.array(rows, dtype=np.float64).reshape(len(rows), len(systems)),
        labels=label_arr,
        split=Split(split),
    )


def read_score_file(path: str | PathLike, split: Split | str = Split.TEST) -> ScoreTable:
    with open(path, "rb") as fh:
        return parse_score_file(fh.read(), split)


def format_score_file(table: ScoreTable) -> str:
    """Serialize with shortest round-trip float formatting and LF endings."""
    out = ["item_id,label," + ",".join(table.system_ids)]
    labels = table.labels.tolist() if table.labels is not None else [None] * table.n_items
    for item, lab, row in zip(table.item_ids, labels, table.scores.tolist()):
        cell = "" if lab is None else str(int(lab))
        out.append(",".join([item, cell, *map(repr, row)]))
    return "\n".join(out) + "\n"


def write_score_file(table: ScoreTable, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_score_file(table))


@dataclass(frozen=True)
class NormalizationParams:
    """Per-system (min, max) pairs fitted on the training split."""

    ranges: Mapping[str, tuple[float, float]]

    def __post_init__(self):
        for sid, (lo, hi) in self.ranges.items():
            if not lo <= hi:
                raise ValueError(f"min > max for system {sid}: ({lo}, {hi})")

    def bounds(self, system_ids) -> tuple[np.ndarray, np.ndarray]:
        missing = [s for s in system_ids if s not in self.ranges]
        if missing:
            raise ConfigError(f"no normalization range for system {missing[0]}")
        lo = np.array([self.ranges[s][0] for s in system_ids], dtype=np.float64)
        hi = np.array([self.ranges[s][1] for s in system_ids], dtype=np.float64)
        return lo, hi


def _scale(X: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        span = hi - lo
    degenerate = span == 0
    if not np.all(np.isfinite(span)):
        # halving is exact and keeps huge ranges finite
        X, lo, span = X / 2, lo / 2, hi / 2 - lo / 2
    safe = np.where(degenerate, 1.0, span)
    with np.errstate(over="ignore"):
        out = np.clip((X - lo) / safe, 0.0, 1.0)
    out[:, degenerate] = 0.5
    return out


class MinMaxNormalizer(OneToOneFeatureMixin, TransformerMixin, BaseEstimator):
    """Map each column to [0, 1] using ranges learned in :meth:`fit`.

    Unlike :class:`sklearn.preprocessing.MinMaxScaler` (with ``clip=True``),
    a column that was constant during fit maps to 0.5 everywhere.

    Attributes
    ----------
    data_min_, data_max_ : ndarray of shape (n_features,)
        Per-column extremes seen during fit.
    """

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64)
        self.data_min_ = X.min(axis=0)
        self.data_max_ = X.max(axis=0)
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = validate_data(self, X, dtype=np.float64, reset=False)
        return _scale(X, self.data_min_, self.data_max_)


def min_max_fit(train: ScoreTable) -> NormalizationParams:
    if train.n_items == 0:
        raise ConfigError("cannot fit normalization on an empty table")
    est = MinMaxNormalizer().fit(train.scores)
    return NormalizationParams(
        {s: (float(lo), float(hi)) for s, lo, hi in zip(train.system_ids, est.data_min_, est.data_max_)}
    )


def min_max_apply(table: ScoreTable, params: NormalizationParams) -> ScoreTable:
    lo, hi = params.bounds(table.system_ids)
    X = check_array(table.scores, dtype=np.float64)
    return table.with_scores(_scale(X, lo, hi), normalized=True)
