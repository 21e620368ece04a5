import numpy as np
import pytest

from cfafusion.evaluate import (
    classify_by_threshold,
    classify_top_k,
    compute_metrics,
    f1_from_pr,
    optimize_threshold,
)
from cfafusion.exceptions import ConfigError
from cfafusion.fusion import FusedColumn, FusedKind


def test_threshold_examples():
    np.testing.assert_array_equal(classify_by_threshold([0.6, 0.4], 0.5), [1, 0])
    np.testing.assert_array_equal(classify_by_threshold([0.5]), [1])
    np.testing.assert_array_equal(classify_by_threshold([0.0, 0.3], 0.0), [1, 1])


def test_threshold_rejects_rank_column():
    with pytest.raises(ConfigError):
        classify_by_threshold(FusedColumn(FusedKind.RANK, np.array([1.0, 2.0])))


def test_top_k_examples():
    # fused order a < b < c < d
    fused = FusedColumn(FusedKind.RANK, np.array([3.0, 1.0, 4.0, 2.0]))
    np.testing.assert_array_equal(classify_top_k(fused, 0.5), [0, 1, 0, 1])
    tie = FusedColumn(FusedKind.RANK, np.array([2.0, 1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(classify_top_k(tie, 0.5), [1, 1, 0, 0])


def test_top_k_count_on_balanced_fixture():
    v = np.random.default_rng(0).random(100)
    assert classify_top_k(v, 0.5).sum() == 50


def test_top_k_rejects_score_column_and_bad_prior():
    with pytest.raises(ConfigError):
        classify_top_k(FusedColumn(FusedKind.SCORE, np.array([0.1])), 0.5)
    with pytest.raises(ConfigError):
        classify_top_k([1.0, 2.0], 0.0)


def test_metrics_hand_countable():
    m = compute_metrics([1, 1, 0, 0], [1, 0, 0, 1])
    assert (m.tp, m.fp, m.tn, m.fn) == (1, 1, 1, 1)
    assert (m.accuracy, m.precision, m.recall, m.f1) == (0.5, 0.5, 0.5, 0.5)
    assert m.degenerate == ()


def test_metrics_perfect():
    m = compute_metrics([1, 0, 1], [1, 0, 1])
    assert m.accuracy == 1.0 and m.f1 == 1.0


def test_metrics_zero_denominator_flagged():
    m = compute_metrics([0, 0, 0], [1, 0, 1])
    assert m.precision == 0.0 and "precision" in m.degenerate
    assert m.f1 == 0.0 and "f1" in m.degenerate


def test_metrics_length_mismatch():
    with pytest.raises(ValueError):
        compute_metrics([1, 0], [1])


@pytest.mark.parametrize(
    "p, r, f1",
    [
        (0.936313, 0.95856, 0.947306),
        (0.843940, 0.82112, 0.832374),
    ],
)
def test_f1_table_rows(p, r, f1):
    assert abs(f1_from_pr(p, r) - f1) < 1e-5


def test_f1_idempotent_and_undefined():
    assert f1_from_pr(0.37, 0.37) == pytest.approx(0.37, abs=1e-15)
    with pytest.raises(ValueError):
        f1_from_pr(0.0, 0.0)


def test_optimize_threshold_prefers_half_on_ties():
    assert optimize_threshold([0.1, 0.9], [0, 1]) == 0.5


def test_optimize_threshold_finds_separator():
    # only a cut between 0.7 and 0.8 classifies everything correctly
    t = optimize_threshold([0.2, 0.6, 0.7, 0.8, 0.95], [0, 0, 0, 1, 1])
    assert t == pytest.approx(0.75)
