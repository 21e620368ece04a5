"""Straight-line reference implementation of the whole fusion pipeline.

Nothing here calls into the main modules' arithmetic: normalization,
ranking, RSC profiles, cognitive diversity, weights, fusion, decisions and
metrics are all recomputed item by item with plain Python floats and
Python's own sort. Agreement with the vectorized path is therefore
evidence rather than tautology. Intended for n up to about 10,000.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

__all__ = ["OracleResult", "oracle_fuse", "oracle_sweep", "oracle_diversity"]

_MAX_ITEMS = 10_000


@dataclass
class OracleResult:
    values: list
    predictions: list
    metrics: dict | None


def _columns(table, subset):
    rows = table.scores.tolist()
    cols = []
    for sid in subset:
        if sid not in table.system_ids:
            raise KeyError(sid)
        j = list(table.system_ids).index(sid)
        cols.append([row[j] for row in rows])
    return cols


def _normalize(col, lo, hi):
    out = []
    for x in col:
        if hi == lo:
            out.append(0.5)
            continue
        if math.isinf(hi - lo):
            num, den = x / 2 - lo / 2, hi / 2 - lo / 2
        else:
            num, den = x - lo, hi - lo
        try:
            v = num / den
        except OverflowError:
            v = math.copysign(math.inf, num)
        if v < 0.0:
            v = 0.0
        if v > 1.0:
            v = 1.0
        out.append(v)
    return out


def _ranks(col, tie_policy):
    n = len(col)
    if tie_policy == "average":
        out = []
        for i in range(n):
            greater = sum(1 for x in col if x > col[i])
            equal = sum(1 for x in col if x == col[i])
            out.append(greater + (equal + 1) / 2)
        return out
    order = sorted(range(n), key=lambda i: (-col[i], i))
    out = [0.0] * n
    for r, i in enumerate(order, start=1):
        out[i] = float(r)
    return out


def _cd(a, b):
    fa = sorted(a, reverse=True)
    fb = sorted(b, reverse=True)
    return math.sqrt(math.fsum((x - y) * (x - y) for x, y in zip(fa, fb)) / len(fa))


def _diversity_strengths(cols):
    t = len(cols)
    cd = [[0.0] * t for _ in range(t)]
    for j in range(t):
        for k in range(t):
            if j != k:
                cd[j][k] = _cd(cols[j], cols[k])
    if all(cd[j][k] == 0.0 for j in range(t) for k in range(t)):
        return [1.0] * t, True
    return [math.fsum(cd[j][k] for k in range(t) if k != j) / (t - 1) for j in range(t)], False


def _accuracy(col, labels, threshold):
    hits = 0
    for x, y in zip(col, labels):
        if (1 if x >= threshold else 0) == y:
            hits += 1
    return hits / len(col)


def _weighted(cols, w):
    n = len(cols[0])
    den = 0.0
    for wj in w:
        den += wj
    if den <= 0.0:
        raise ValueError("weights sum to zero")
    out = []
    for i in range(n):
        s = 0.0
        for j in range(len(cols)):
            s += w[j] * cols[j][i]
        out.append(s / den)
    return out


def _metrics(pred, labels):
    tp = fp = tn = fn = 0
    for p, y in zip(pred, labels):
        if p == 1 and y == 1:
            tp += 1
        elif p == 1:
            fp += 1
        elif y == 1:
            fn += 1
        else:
            tn += 1
    n = tp + fp + tn + fn
    acc = (tp + tn) / n if n else 0.0
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return {"tp": tp, "fp": fp, "tn": tn, "fn": fn, "accuracy": acc, "precision": prec, "recall": rec, "f1": f1}


def oracle_fuse(train, test, spec, rc_weighting="reciprocal", tie_policy="ordinal", evaluate=True) -> OracleResult:
    """Recompute one fusion cell from raw train/test tables.

    ``spec`` is read for its subset, method, weight split, threshold and
    optional positive prior; everything else is derived here.
    """
    subset = list(spec.subset)
    method = getattr(spec.method, "value", spec.method)
    split = getattr(spec.weight_split, "value", spec.weight_split)
    rc_weighting = getattr(rc_weighting, "value", rc_weighting)
    tie_policy = getattr(tie_policy, "value", tie_policy)
    if len(test.item_ids) > _MAX_ITEMS or len(train.item_ids) > _MAX_ITEMS:
        raise ValueError("oracle is limited to 10,000 items")

    raw_tr = _columns(train, subset)
    raw_te = _columns(test, subset)
    tr, te = [], []
    for ctr, cte in zip(raw_tr, raw_te):
        lo, hi = min(ctr), max(ctr)
        tr.append(_normalize(ctr, lo, hi))
        te.append(_normalize(cte, lo, hi))

    y_tr = None if train.labels is None else [int(v) for v in train.labels.tolist()]
    y_te = None if test.labels is None else [int(v) for v in test.labels.tolist()]
    src_cols, src_labels = (tr, y_tr) if split == "train" else (te, y_te)

    is_rank = method in ("arc", "wcp-rc", "wcds-rc")
    if method in ("asc", "arc"):
        w = [1.0] * len(subset)
        equal = True
    elif method in ("wcp-sc", "wcp-rc"):
        if src_labels is None:
            raise ValueError("performance weights need labels")
        w = [_accuracy(c, src_labels, spec.threshold) for c in src_cols]
        equal = False
    else:
        w, equal = _diversity_strengths(src_cols)

    if is_rank:
        if not equal and rc_weighting == "reciprocal":
            if any(x == 0.0 for x in w):
                raise ValueError("zero weight cannot be inverted")
            w = [1.0 / x for x in w]
        values = _weighted([_ranks(c, tie_policy) for c in te], w)
        prior = spec.positive_prior
        if prior is None:
            if y_tr is None:
                raise ValueError("prior needs training labels")
            prior = sum(y_tr) / len(y_tr)
        k = math.floor(len(values) * prior + 0.5)
        chosen = sorted(range(len(values)), key=lambda i: (values[i], i))[:k]
        predictions = [0] * len(values)
        for i in chosen:
            predictions[i] = 1
    else:
        values = _weighted(te, w)
        predictions = [1 if v >= spec.threshold else 0 for v in values]

    metrics = None
    if evaluate and y_te is not None:
        metrics = _metrics(predictions, y_te)
    return OracleResult(values, predictions, metrics)


_VARIANTS = [
    ("asc", None),
    ("arc", None),
    ("wcp-sc", "train"),
    ("wcp-sc", "test"),
    ("wcp-rc", "train"),
    ("wcp-rc", "test"),
    ("wcds-sc", "train"),
    ("wcds-sc", "test"),
    ("wcds-rc", "train"),
    ("wcds-rc", "test"),
]


@dataclass
class _Cell:
    subset: tuple
    method: str
    weight_split: str | None
    threshold: float = 0.5
    positive_prior: float | None = None


def oracle_sweep(train, test, threshold=0.5, rc_weighting="reciprocal", tie_policy="ordinal") -> str:
    """Full subset-by-variant report CSV, produced cell by cell with :func:`oracle_fuse`."""
    systems = list(train.system_ids)
    rows = []
    for size in range(2, len(systems) + 1):
        for subset in itertools.combinations(range(len(systems)), size):
            names = tuple(systems[j] for j in subset)
            for method, split in _VARIANTS:
                cell = _Cell(names, method, split or "train", threshold)
                res = oracle_fuse(train, test, cell, rc_weighting, tie_policy)
                method_order = ["asc", "arc", "wcp-sc", "wcp-rc", "wcds-sc", "wcds-rc"].index(method)
                split_order = {None: -1, "train": 0, "test": 1}[split]
                rows.append(((-res.metrics["accuracy"], subset, method_order, split_order), names, method, split, res.metrics))
    y_te = [int(v) for v in test.labels.tolist()]
    for j, sid in enumerate(systems):
        lo = min(row[j] for row in train.scores.tolist())
        hi = max(row[j] for row in train.scores.tolist())
        col = _normalize([row[j] for row in test.scores.tolist()], lo, hi)
        m = _metrics([1 if v >= threshold else 0 for v in col], y_te)
        rows.append(((-m["accuracy"], (j,), -1, -1), (sid,), "single", None, m))
    rows.sort(key=lambda r: r[0])

    lines = ["systems,method,weight_split,transductive,accuracy,precision,recall,f1"]
    for _, names, method, split, m in rows:
        transductive = split == "test"
        lines.append(
            "%s,%s,%s,%s,%.6f,%.6f,%.6f,%.6f"
            % (
                "+".join(names),
                method.upper(),
                split or "-",
                "true" if transductive else "false",
                m["accuracy"],
                m["precision"],
                m["recall"],
                m["f1"],
            )
        )
    return "\n".join(lines) + "\n"


def oracle_diversity(table, reference=None):
    """Diversity matrix and diversity strengths of ``table``.

    Scores are normalized with ranges taken from ``reference`` (the training
    table) when given, else from ``table`` itself. Returns ``(ids, matrix, ds)``.
    """
    ids = list(table.system_ids)
    ref = table if reference is None else reference
    cols = []
    for sid, raw in zip(ids, _columns(table, ids)):
        ref_col = _columns(ref, [sid])[0]
        cols.append(_normalize(raw, min(ref_col), max(ref_col)))
    t = len(ids)
    matrix = [[0.0 if j == k else _cd(cols[j], cols[k]) for k in range(t)] for j in range(t)]
    ds, _ = _diversity_strengths(cols)
    return ids, matrix, ds
