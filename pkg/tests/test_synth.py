import numpy as np
import pytest

from cfafusion.core import validate_table
from cfafusion.diversity import cognitive_diversity
from cfafusion.evaluate import classify_by_threshold, compute_metrics
from cfafusion.exceptions import ConfigError
from cfafusion.ingest import format_score_file, min_max_apply, min_max_fit
from cfafusion.ranking import rsc_profile
from cfafusion.synth import SynthConfig, dump_config, generate, generate_disjoint_error_fixture, parse_config


def test_same_seed_same_bytes():
    a = generate(SynthConfig(seed=42, n_items=200))
    b = generate(SynthConfig(seed=42, n_items=200))
    assert [format_score_file(t) for t in a] == [format_score_file(t) for t in b]
    c = generate(SynthConfig(seed=43, n_items=200))
    assert format_score_file(a[0]) != format_score_file(c[0])


def test_accuracy_targets_hit():
    cfg = SynthConfig(n_items=1000, t_systems=4, seed=9, accuracy=(0.95, 0.6, 0.75, 0.88))
    for table in generate(cfg):
        for j, target in enumerate(cfg.accuracy):
            acc = compute_metrics(classify_by_threshold(table.scores[:, j]), table.labels).accuracy
            assert abs(acc - target) <= 0.03


def test_perfect_accuracy_target():
    train, test = generate(SynthConfig(n_items=500, t_systems=2, accuracy=(1.0, 1.0), sharpness=(0.3, 5.0)))
    for t in (train, test):
        for j in range(2):
            assert np.all((t.scores[:, j] >= 0.5) == (t.labels == 1))


def test_sharpness_steepens_profile():
    cfg = SynthConfig(n_items=1000, t_systems=3, accuracy=(0.9,) * 3, sharpness=(0.5, 1.0, 4.0), seed=1)
    train, test = generate(cfg)
    norm = min_max_apply(test, min_max_fit(train))
    # mean distance from 0.5 grows with sharpness
    spread = [np.mean(np.abs(norm.scores[:, j] - 0.5)) for j in range(3)]
    assert spread[0] < spread[1] < spread[2]
    assert cognitive_diversity(rsc_profile(norm.scores[:, 0]), rsc_profile(norm.scores[:, 2])) > 0


def test_positive_fraction_exact():
    train, _ = generate(SynthConfig(n_items=101, positive_fraction=0.3))
    assert int(train.labels.sum()) == 30
    assert validate_table(train).ok


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(t_systems=2, accuracy=(0.9,)),
        dict(accuracy=(0.0, 0.9, 0.9, 0.9)),
        dict(sharpness=(1.0, -1.0, 1.0, 1.0)),
        dict(positive_fraction=1.0),
        dict(n_items=0),
        dict(seed=-1),
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        SynthConfig(**kwargs)


def test_config_text_roundtrip():
    cfg = SynthConfig(seed=5, n_items=30, t_systems=2, accuracy=(0.8, 0.7))
    assert SynthConfig(**parse_config(dump_config(cfg))) == cfg


def test_config_parse_errors():
    with pytest.raises(ConfigError):
        parse_config("seed 4")
    with pytest.raises(ConfigError):
        parse_config("colour = red")
    with pytest.raises(ConfigError):
        parse_config("seed = four")


def test_disjoint_fixture_structure():
    t = generate_disjoint_error_fixture(6)
    for j in range(3):
        pred = classify_by_threshold(t.scores[:, j])
        wrong = np.flatnonzero(pred != t.labels)
        assert wrong.tolist() == [2 * j, 2 * j + 1]
    with pytest.raises(ConfigError):
        generate_disjoint_error_fixture(7)
