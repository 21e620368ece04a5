import numpy as np
import pytest

from cfafusion.core import FusionSpec, Method, ScoreTable, Split, check_table, select_systems, validate_table
from cfafusion.exceptions import ConfigError, InvalidTableError, UnknownSystemError
from cfafusion.synth import SynthConfig, generate

from conftest import make_table


def test_well_formed_table_validates():
    assert validate_table(make_table([[0.1, 0.2], [0.3, 0.4]], labels=[0, 1])).ok


def test_nan_violation_names_row_and_system():
    scores = np.full((5, 2), 0.5)
    scores[2, 1] = np.nan
    report = validate_table(make_table(scores))
    assert not report.ok
    (v,) = report.violations
    assert (v.kind, v.row, v.system) == ("non_finite", 3, "B")
    assert "row 3" in v.message and "system B" in v.message


def test_partial_labels_violation():
    table = ScoreTable(
        item_ids=list("abcde"),
        system_ids=["A"],
        scores=np.zeros((5, 1)),
        labels=np.array([1, 0, None, 1, 0], dtype=object),
    )
    kinds = [v.kind for v in validate_table(table).violations]
    assert kinds == ["partial_labels"]


def test_duplicate_ids_and_bad_labels():
    table = ScoreTable(["a", "a"], ["A", "A"], np.zeros((2, 2)), labels=np.array([0, 2]))
    kinds = sorted(v.kind for v in validate_table(table).violations)
    assert kinds == ["bad_label", "duplicate_item", "duplicate_system"]
    with pytest.raises(InvalidTableError):
        check_table(table)


def test_shape_mismatch_rejected_at_construction():
    with pytest.raises(ValueError):
        ScoreTable(["a"], ["A", "B"], np.zeros((1, 3)))


def test_table_is_immutable():
    t = make_table([[0.1, 0.2]])
    with pytest.raises(ValueError):
        t.scores[0, 0] = 1.0


def test_select_projects_in_subset_order():
    t = make_table(np.arange(8.0).reshape(2, 4), labels=[1, 0])
    ab = select_systems(t, ["A", "B"])
    assert ab.system_ids == ("A", "B")
    np.testing.assert_array_equal(ab.scores, [[0, 1], [4, 5]])
    da = select_systems(t, ["D", "A"])
    assert da.system_ids == ("D", "A")
    np.testing.assert_array_equal(da.scores, [[3, 0], [7, 4]])
    np.testing.assert_array_equal(da.labels, [1, 0])
    assert da.item_ids == t.item_ids


def test_select_unknown_system():
    t = make_table([[0.1, 0.2]])
    with pytest.raises(UnknownSystemError, match="unknown system E"):
        select_systems(t, ["A", "E"])


def test_select_all_is_identity():
    t = make_table(np.random.default_rng(0).random((6, 3)), labels=[0, 1] * 3)
    assert select_systems(t, t.system_ids) == t


def test_generated_tables_validate():
    train, test = generate(SynthConfig(n_items=50, t_systems=3, seed=7))
    assert validate_table(train).ok and validate_table(test).ok


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(subset=("A",), method="asc"),
        dict(subset=("A", "A"), method="asc"),
        dict(subset=("A", "B"), method="nope"),
        dict(subset=("A", "B"), method="asc", threshold=1.5),
        dict(subset=("A", "B"), method="arc", positive_prior=1.0),
    ],
)
def test_fusion_spec_rejects(kwargs):
    with pytest.raises(ConfigError):
        FusionSpec(**kwargs)


def test_fusion_spec_transductive_flag():
    assert FusionSpec(("A", "B"), Method.WCDS_SC, Split.TEST).transductive
    assert not FusionSpec(("A", "B"), Method.WCDS_SC, Split.TRAIN).transductive
    assert not FusionSpec(("A", "B"), Method.ASC, Split.TEST).transductive
