import itertools
import math
import warnings

import numpy as np
import pytest

from cfafusion.core import Split
from cfafusion.diversity import (
    DegenerateDiversityWarning,
    DiversityMatrix,
    WeightKind,
    cognitive_diversity,
    diversity_matrix,
    diversity_strength,
    table_diversity,
)
from cfafusion.ranking import rsc_profile

from conftest import make_table


def _cd_by_hand(a, b):
    fa, fb = sorted(a, reverse=True), sorted(b, reverse=True)
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(fa, fb)) / len(fa))


def test_identical_profiles_have_zero_cd():
    p = rsc_profile([0.3, 0.9, 0.1])
    assert cognitive_diversity(p, p) == 0.0


def test_cd_hand_example():
    # squared differences 0.04 + 0 + 0.04 over three ranks
    assert cognitive_diversity([1.0, 0.5, 0.0], [0.8, 0.5, 0.2]) == pytest.approx(0.16329931618554522, abs=1e-12)


def test_cd_unit_separation():
    assert cognitive_diversity([1, 1, 1], [0, 0, 0]) == 1.0


def test_cd_length_mismatch():
    with pytest.raises(ValueError):
        cognitive_diversity([1.0, 0.0], [1.0])


def test_two_system_matrix():
    a, b = rsc_profile([0.1, 0.8], "A"), rsc_profile([0.5, 0.4], "B")
    m = diversity_matrix([a, b])
    c = cognitive_diversity(a, b)
    np.testing.assert_array_equal(m.entries, [[0, c], [c, 0]])
    assert m.system_ids == ("A", "B")


def test_identical_profiles_give_zero_matrix():
    p = [rsc_profile([0.2, 0.4, 0.6], s) for s in "ABC"]
    assert not diversity_matrix(p).entries.any()


def test_matrix_matches_pairwise_recomputation():
    rng = np.random.default_rng(11)
    cols = rng.random((9, 3))
    m = table_diversity(make_table(cols, split=Split.TEST))
    assert m.source_split is Split.TEST
    for j, k in itertools.product(range(3), repeat=2):
        expected = 0.0 if j == k else _cd_by_hand(cols[:, j], cols[:, k])
        assert abs(m.entries[j, k] - expected) < 1e-12


def test_ds_mean_of_row():
    m = DiversityMatrix(("A", "B", "C"), np.array([[0, 0.2, 0.4], [0.2, 0, 0.6], [0.4, 0.6, 0]]))
    ds = diversity_strength(m)
    assert ds.kind is WeightKind.DIVERSITY_STRENGTH
    np.testing.assert_allclose(ds.weights, [0.3, 0.4, 0.5], atol=1e-15)


def test_ds_two_systems_equals_cd():
    m = DiversityMatrix(("A", "B"), np.array([[0, 0.25], [0.25, 0]]))
    np.testing.assert_array_equal(diversity_strength(m).weights, [0.25, 0.25])


def test_ds_all_identical_falls_back_to_equal_weights():
    m = DiversityMatrix(("A", "B", "C"), np.zeros((3, 3)))
    with pytest.warns(DegenerateDiversityWarning):
        ds = diversity_strength(m)
    assert ds.degenerate and ds.kind is WeightKind.EQUAL
    np.testing.assert_array_equal(ds.weights, [1, 1, 1])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        diversity_strength(m, warn=False)


def test_submatrix():
    m = DiversityMatrix(("A", "B", "C"), np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0.0]]))
    np.testing.assert_array_equal(m.submatrix(["C", "A"]).entries, [[0, 2], [2, 0]])
