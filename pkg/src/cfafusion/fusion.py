"""Score and rank combination rules, the fusion estimator, and the subset sweep.

Six rules are supported: average (ASC/ARC), performance weighted (WCP) and
diversity-strength weighted (WCDS), each over scores (SC) or ranks (RC).
Rank combinations weight by ``1/w`` by default; ``rc_weighting="direct"``
uses ``w`` itself.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from .core import (
    FusionSpec,
    Method,
    RCWeighting,
    ScoreTable,
    Split,
    TiePolicy,
    check_table,
    select_systems,
)
from .diversity import (
    DiversityMatrix,
    WeightKind,
    WeightVector,
    diversity_matrix,
    diversity_strength,
    table_diversity,
)
from .evaluate import (
    EvalReport,
    classify_by_threshold,
    classify_top_k,
    compute_metrics,
    optimize_threshold,
)
from .exceptions import ConfigError
from .ingest import MinMaxNormalizer, min_max_apply, min_max_fit
from .ranking import rank_table, rsc_profile, scores_to_ranks

__all__ = [
    "FusedKind",
    "FusedColumn",
    "combine_scores",
    "combine_ranks",
    "performance_weights",
    "estimate_prior",
    "CFAFusionClassifier",
    "FusionOutcome",
    "fuse_tables",
    "Variant",
    "DEFAULT_VARIANTS",
    "SweepConfig",
    "sweep",
    "single_system_reports",
    "REPORT_HEADER",
    "format_report",
]


class FusedKind(str, enum.Enum):
    SCORE = "score"
    RANK = "rank"


@dataclass(frozen=True, eq=False)
class FusedColumn:
    kind: FusedKind
    values: np.ndarray
    spec: FusionSpec | None = None
    weights: WeightVector | None = None


def _as_matrix(columns) -> np.ndarray:
    if isinstance(columns, np.ndarray) and columns.ndim == 2:
        return np.asarray(columns, dtype=np.float64)
    cols = [np.asarray(c, dtype=np.float64) for c in columns]
    if len({c.shape for c in cols}) > 1:
        raise ValueError("columns differ in length")
    return np.column_stack(cols)


def _weight_array(weights, t: int) -> tuple[np.ndarray, WeightKind]:
    if isinstance(weights, WeightVector):
        w, kind = weights.weights, weights.kind
    else:
        w, kind = np.asarray(weights, dtype=np.float64), WeightKind.EQUAL
    if w.shape != (t,):
        raise ValueError(f"got {w.shape[0] if w.ndim else 0} weights for {t} systems")
    if t < 2:
        raise ValueError("fusion needs at least 2 systems")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    return w.astype(np.float64), kind


def _weighted_mean(X: np.ndarray, w: np.ndarray) -> np.ndarray:
    # Accumulate system by system so results do not depend on BLAS ordering.
    num = np.zeros(X.shape[0])
    den = 0.0
    for j in range(X.shape[1]):
        num += w[j] * X[:, j]
        den += w[j]
    if den <= 0:
        raise ValueError("weights sum to zero")
    return num / den


def combine_scores(columns, weights=None, spec: FusionSpec | None = None) -> FusedColumn:
    """Weighted mean of per-item scores; ``weights=None`` means equal weights."""
    X = _as_matrix(columns)
    if weights is None:
        weights = WeightVector.equal([str(j) for j in range(X.shape[1])])
    w, _ = _weight_array(weights, X.shape[1])
    wv = weights if isinstance(weights, WeightVector) else None
    return FusedColumn(FusedKind.SCORE, _weighted_mean(X, w), spec, wv)


def combine_ranks(
    columns,
    weights=None,
    rc_weighting: RCWeighting | str = RCWeighting.RECIPROCAL,
    spec: FusionSpec | None = None,
) -> FusedColumn:
    """Weighted mean of per-item ranks; lower fused values are more positive.

    Performance and diversity-strength weights enter as ``1/w`` under the
    default reciprocal weighting. Equal weights are used as given.
    """
    X = _as_matrix(columns)
    if weights is None:
        weights = WeightVector.equal([str(j) for j in range(X.shape[1])])
    w, kind = _weight_array(weights, X.shape[1])
    if kind is not WeightKind.EQUAL and RCWeighting(rc_weighting) is RCWeighting.RECIPROCAL:
        if np.any(w == 0):
            raise ValueError("zero weight cannot be inverted for rank combination")
        w = 1.0 / w
    wv = weights if isinstance(weights, WeightVector) else None
    return FusedColumn(FusedKind.RANK, _weighted_mean(X, w), spec, wv)


def performance_weights(table: ScoreTable, subset: Sequence[str] | None = None, threshold: float = 0.5) -> WeightVector:
    """Per-system accuracy of ``score >= threshold`` on a labeled, normalized table."""
    if table.labels is None:
        raise ConfigError(f"performance weights need labels on the {table.split.value} split")
    if subset is not None:
        table = select_systems(table, subset)
    return WeightVector(
        table.system_ids,
        _accuracies(table.scores, table.labels, threshold),
        WeightKind.PERFORMANCE,
        table.split,
    )


def _accuracies(Xn: np.ndarray, y: np.ndarray, threshold: float) -> np.ndarray:
    pred = Xn >= threshold
    return np.count_nonzero(pred == np.asarray(y, dtype=bool)[:, None], axis=0) / Xn.shape[0]


def estimate_prior(labels) -> float:
    y = np.asarray(labels)
    prior = float(np.count_nonzero(y) / y.shape[0])
    if not 0.0 < prior < 1.0:
        raise ConfigError("training labels must contain both classes to estimate the positive prior")
    return prior


def _diversity_weights(Xn: np.ndarray, ids: Sequence[str], split: Split) -> WeightVector:
    profiles = [rsc_profile(Xn[:, j], ids[j]) for j in range(Xn.shape[1])]
    return diversity_strength(diversity_matrix(profiles, split), warn=False)


def _fuse(Xn, ranks, weights: WeightVector, method: Method, rc_weighting, spec=None) -> FusedColumn:
    if method.is_rank:
        return combine_ranks(ranks, weights, rc_weighting, spec)
    return combine_scores(Xn, weights, spec)


class CFAFusionClassifier(ClassifierMixin, BaseEstimator):
    """Combine the scores of several base classifiers into one binary classifier.

    ``fit`` receives the raw training scores (one column per base system)
    and learns the min-max ranges, the positive-class prior, and the
    train-split weights. ``predict`` normalizes new scores with those
    ranges and fuses them.

    Parameters
    ----------
    method : {"asc", "arc", "wcp-sc", "wcp-rc", "wcds-sc", "wcds-rc"}
    weight_split : {"train", "test"}
        Which split the performance or diversity weights come from.
        ``"test"`` recomputes them from the batch passed to ``predict``;
        test-split performance weights additionally need its labels.
    threshold : float
        Decision threshold for score combinations.
    rc_weighting : {"reciprocal", "direct"}
    tie_policy : {"ordinal", "average"}
    positive_prior : float or None
        Fraction of items labeled positive by rank combinations. Estimated
        from the training labels when None.
    optimize_threshold : bool
        Replace ``threshold`` by the value maximizing training accuracy of
        the fused scores.
    """

    def __init__(
        self,
        method="wcds-sc",
        weight_split="train",
        threshold=0.5,
        rc_weighting="reciprocal",
        tie_policy="ordinal",
        positive_prior=None,
        optimize_threshold=False,
    ):
        self.method = method
        self.weight_split = weight_split
        self.threshold = threshold
        self.rc_weighting = rc_weighting
        self.tie_policy = tie_policy
        self.positive_prior = positive_prior
        self.optimize_threshold = optimize_threshold

    def _resolve(self):
        try:
            return (
                Method(self.method),
                Split(self.weight_split),
                RCWeighting(self.rc_weighting),
                TiePolicy(self.tie_policy),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def fit(self, X, y=None, system_ids=None):
        method, split, _, _ = self._resolve()
        X = validate_data(self, X, dtype=np.float64)
        if X.shape[1] < 2:
            raise ConfigError(f"fusion needs at least 2 systems, got {X.shape[1]}")
        if system_ids is None:
            system_ids = getattr(self, "feature_names_in_", [f"s{j}" for j in range(X.shape[1])])
        self.system_ids_ = tuple(str(s) for s in system_ids)
        self.classes_ = np.array([0, 1])
        self.normalizer_ = MinMaxNormalizer().fit(X)
        self.train_scores_ = self.normalizer_.transform(X)
        self.train_labels_ = None if y is None else check_array(y, ensure_2d=False, dtype=np.int8)

        if self.positive_prior is not None:
            self.positive_prior_ = float(self.positive_prior)
        elif method.is_rank:
            if y is None:
                raise ConfigError("rank combinations need training labels or an explicit positive_prior")
            self.positive_prior_ = estimate_prior(self.train_labels_)
        else:
            self.positive_prior_ = None

        self.train_weights_ = None
        if split is Split.TRAIN:
            self.train_weights_ = self._weights(self.train_scores_, self.train_labels_, Split.TRAIN)
        return self

    def _weights(self, Xn, y, split: Split) -> WeightVector:
        method = Method(self.method)
        kind = method.weighting
        if kind == "equal":
            return WeightVector.equal(self.system_ids_)
        if kind == "performance":
            if y is None:
                raise ConfigError(f"performance weights need labels on the {split.value} split")
            return WeightVector(self.system_ids_, _accuracies(Xn, y, self.threshold), WeightKind.PERFORMANCE, split)
        return _diversity_weights(Xn, self.system_ids_, split)

    def weights_for(self, X, y=None) -> WeightVector:
        """Weights applied when fusing the batch ``X``."""
        check_is_fitted(self)
        if Split(self.weight_split) is Split.TRAIN:
            return self.train_weights_
        Xn = self.normalizer_.transform(X)
        return self._weights(Xn, y, Split.TEST)

    def fuse(self, X, y=None) -> FusedColumn:
        """Fused column for the batch ``X`` (labels ``y`` only feed test-split WCP)."""
        check_is_fitted(self)
        method, split, rcw, ties = self._resolve()
        X = validate_data(self, X, dtype=np.float64, reset=False)
        Xn = self.normalizer_.transform(X)
        if y is not None:
            y = check_array(y, ensure_2d=False, dtype=np.int8)
        weights = self.train_weights_ if split is Split.TRAIN else self._weights(Xn, y, Split.TEST)
        ranks = None
        if method.is_rank:
            ranks = np.column_stack([scores_to_ranks(Xn[:, j], ties) for j in range(Xn.shape[1])])
        return _fuse(Xn, ranks, weights, method, rcw)

    def decision_threshold(self, X=None, y=None) -> float:
        check_is_fitted(self)
        if not self.optimize_threshold or Method(self.method).is_rank:
            return float(self.threshold)
        if self.train_labels_ is None:
            raise ConfigError("threshold optimization needs training labels")
        weights = self.train_weights_ if self.train_weights_ is not None else self.weights_for(X, y)
        train_fused = combine_scores(self.train_scores_, weights)
        return optimize_threshold(train_fused.values, self.train_labels_)

    def predict(self, X, y=None):
        fused = self.fuse(X, y)
        if fused.kind is FusedKind.RANK:
            return classify_top_k(fused, self.positive_prior_)
        return classify_by_threshold(fused, self.decision_threshold(X, y))

    def score(self, X, y, sample_weight=None):
        return compute_metrics(self.predict(X, y), y).accuracy


@dataclass(frozen=True, eq=False)
class FusionOutcome:
    fused: FusedColumn
    predictions: np.ndarray
    threshold: float | None
    positive_prior: float | None
    report: EvalReport | None = None


def fuse_tables(
    train: ScoreTable,
    test: ScoreTable,
    spec: FusionSpec,
    rc_weighting: RCWeighting | str = RCWeighting.RECIPROCAL,
    tie_policy: TiePolicy | str = TiePolicy.ORDINAL,
    evaluate: bool = True,
    optimize_threshold: bool = False,
) -> FusionOutcome:
    """Run one fusion cell end to end on raw (unnormalized) score tables.

    When ``spec.positive_prior`` is None it is estimated from the training
    labels.
    """
    check_table(train)
    check_table(test)
    tr = select_systems(train, spec.subset)
    te = select_systems(test, spec.subset)
    clf = CFAFusionClassifier(
        method=spec.method.value,
        weight_split=spec.weight_split.value,
        threshold=spec.threshold,
        rc_weighting=RCWeighting(rc_weighting).value,
        tie_policy=TiePolicy(tie_policy).value,
        positive_prior=spec.positive_prior,
        optimize_threshold=optimize_threshold,
    )
    clf.fit(tr.scores, tr.labels, system_ids=tr.system_ids)
    fused = clf.fuse(te.scores, te.labels)
    fused = FusedColumn(fused.kind, fused.values, spec, fused.weights)
    threshold = None
    if fused.kind is FusedKind.RANK:
        predictions = classify_top_k(fused, clf.positive_prior_)
    else:
        threshold = clf.decision_threshold(te.scores, te.labels)
        predictions = classify_by_threshold(fused, threshold)

    report = None
    if evaluate:
        if te.labels is None:
            raise ConfigError("cannot evaluate: test file has no labels")
        report = EvalReport(
            systems=spec.subset,
            method=spec.method.label,
            weight_split=None if spec.method.weighting == "equal" else spec.weight_split.value,
            transductive=spec.transductive,
            metrics=compute_metrics(predictions, te.labels),
            spec=spec,
            extra={"rc_weighting": RCWeighting(rc_weighting).value if spec.method.is_rank else None},
        )
    return FusionOutcome(fused, predictions, threshold, clf.positive_prior_, report)


@dataclass(frozen=True)
class Variant:
    method: Method
    weight_split: Split | None = None


DEFAULT_VARIANTS: tuple[Variant, ...] = (
    Variant(Method.ASC),
    Variant(Method.ARC),
    Variant(Method.WCP_SC, Split.TRAIN),
    Variant(Method.WCP_SC, Split.TEST),
    Variant(Method.WCP_RC, Split.TRAIN),
    Variant(Method.WCP_RC, Split.TEST),
    Variant(Method.WCDS_SC, Split.TRAIN),
    Variant(Method.WCDS_SC, Split.TEST),
    Variant(Method.WCDS_RC, Split.TRAIN),
    Variant(Method.WCDS_RC, Split.TEST),
)


@dataclass(frozen=True)
class SweepConfig:
    threshold: float = 0.5
    rc_weighting: RCWeighting = RCWeighting.RECIPROCAL
    tie_policy: TiePolicy = TiePolicy.ORDINAL
    systems: tuple[str, ...] | None = None
    variants: tuple[Variant, ...] = DEFAULT_VARIANTS
    include_singles: bool = True


@dataclass
class _SplitState:
    """Everything one split contributes to a sweep, computed once."""

    table: ScoreTable
    ranks: np.ndarray
    diversity: DiversityMatrix
    accuracy: np.ndarray | None = None
    positions: dict = field(default_factory=dict)

    def weights(self, subset: tuple[str, ...], kind: str) -> WeightVector:
        if kind == "equal":
            return WeightVector.equal(subset)
        if kind == "performance":
            if self.accuracy is None:
                raise ConfigError(f"performance weights need labels on the {self.table.split.value} split")
            idx = [self.positions[s] for s in subset]
            return WeightVector(subset, self.accuracy[idx], WeightKind.PERFORMANCE, self.table.split)
        return diversity_strength(self.diversity.submatrix(subset), warn=False)


def _split_state(table: ScoreTable, cfg: SweepConfig) -> _SplitState:
    return _SplitState(
        table=table,
        ranks=rank_table(table, cfg.tie_policy).ranks,
        diversity=table_diversity(table),
        accuracy=None if table.labels is None else _accuracies(table.scores, table.labels, cfg.threshold),
        positions={s: j for j, s in enumerate(table.system_ids)},
    )


_METHOD_ORDER = {m: i for i, m in enumerate(Method)}
_SPLIT_ORDER = {None: -1, Split.TRAIN: 0, Split.TEST: 1}


def _sort_key(row: EvalReport, positions: dict) -> tuple:
    method_idx = -1 if row.spec is None else _METHOD_ORDER[row.spec.method]
    split = None if row.weight_split is None else Split(row.weight_split)
    return (
        -row.metrics.accuracy,
        tuple(positions[s] for s in row.systems),
        method_idx,
        _SPLIT_ORDER[split],
    )


def _prepare(train: ScoreTable, test: ScoreTable, cfg: SweepConfig):
    check_table(train)
    check_table(test)
    if set(train.system_ids) != set(test.system_ids):
        raise ConfigError("train and test files must score the same systems")
    systems = cfg.systems or train.system_ids
    train = select_systems(train, systems)
    test = select_systems(test, systems)
    params = min_max_fit(train)
    return systems, min_max_apply(train, params), min_max_apply(test, params)


def single_system_reports(train: ScoreTable, test: ScoreTable, cfg: SweepConfig = SweepConfig()) -> list[EvalReport]:
    """Threshold accuracy of each base system on the normalized test split."""
    systems, _, te = _prepare(train, test, cfg)
    if te.labels is None:
        raise ConfigError("cannot evaluate: test file has no labels")
    return [
        EvalReport(
            systems=(sid,),
            method="SINGLE",
            weight_split=None,
            transductive=False,
            metrics=compute_metrics(classify_by_threshold(te.scores[:, j], cfg.threshold), te.labels),
        )
        for j, sid in enumerate(systems)
    ]


def _subsets(systems: Sequence[str]) -> Iterable[tuple[str, ...]]:
    for size in range(2, len(systems) + 1):
        yield from itertools.combinations(systems, size)


def sweep(train: ScoreTable, test: ScoreTable, config: SweepConfig = SweepConfig()) -> list[EvalReport]:
    """Evaluate every subset of two or more systems under every variant.

    Rows are sorted by test accuracy, best first; ties are broken by the
    subset (lexicographic over system positions), then method, then weight
    split, so the output order is fully deterministic.
    """
    systems, tr, te = _prepare(train, test, config)
    if te.labels is None:
        raise ConfigError("cannot evaluate: test file has no labels")
    if tr.labels is None:
        raise ConfigError("sweep needs a labeled training file")
    needs_rank = any(v.method.is_rank for v in config.variants)
    prior = estimate_prior(tr.labels) if needs_rank else None
    states = {Split.TRAIN: _split_state(tr, config), Split.TEST: _split_state(te, config)}
    test_state = states[Split.TEST]

    rows: list[EvalReport] = []
    for subset in _subsets(systems):
        idx = [test_state.positions[s] for s in subset]
        Xn = te.scores[:, idx]
        ranks = test_state.ranks[:, idx]
        for variant in config.variants:
            kind = variant.method.weighting
            split = variant.weight_split if kind != "equal" else None
            spec = FusionSpec(
                subset,
                variant.method,
                split or Split.TRAIN,
                threshold=config.threshold,
                positive_prior=prior,
            )
            weights = states[split or Split.TRAIN].weights(subset, kind)
            fused = _fuse(Xn, ranks, weights, variant.method, config.rc_weighting, spec)
            if fused.kind is FusedKind.RANK:
                pred = classify_top_k(fused, prior)
            else:
                pred = classify_by_threshold(fused, config.threshold)
            rows.append(
                EvalReport(
                    systems=subset,
                    method=variant.method.label,
                    weight_split=None if split is None else split.value,
                    transductive=spec.transductive,
                    metrics=compute_metrics(pred, te.labels),
                    spec=spec,
                )
            )
    if config.include_singles:
        rows.extend(single_system_reports(train, test, config))
    positions = {s: j for j, s in enumerate(systems)}
    rows.sort(key=lambda r: _sort_key(r, positions))
    return rows


REPORT_HEADER = "systems,method,weight_split,transductive,accuracy,precision,recall,f1"


def format_report(rows: Sequence[EvalReport]) -> str:
    """Report CSV; metrics in 6-decimal fixed point, ``-`` for no weight split."""
    out = [REPORT_HEADER]
    for r in rows:
        m = r.metrics
        out.append(
            ",".join(
                [
                    "+".join(r.systems),
                    r.method,
                    r.weight_split or "-",
                    "true" if r.transductive else "false",
                    f"{m.accuracy:.6f}",
                    f"{m.precision:.6f}",
                    f"{m.recall:.6f}",
                    f"{m.f1:.6f}",
                ]
            )
        )
    return "\n".join(out) + "\n"
