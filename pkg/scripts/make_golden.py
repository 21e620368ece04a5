"""Regenerate the committed golden fixture under tests/data/golden/.

Every expected output is produced by the straight-line oracle, not by the
vectorized code paths, so the golden tests compare two independent
implementations.

    python scripts/make_golden.py
"""

from pathlib import Path

from cfafusion.core import FusionSpec
from cfafusion.ingest import write_score_file
from cfafusion.oracle import oracle_diversity, oracle_fuse, oracle_sweep
from cfafusion.synth import SynthConfig, generate, load_config

ROOT = Path(__file__).resolve().parents[1] / "tests" / "data" / "golden"


def _write(name, lines):
    (ROOT / name).write_text("\n".join(lines) + "\n", encoding="utf-8")


def main():
    cfg = SynthConfig(**load_config(ROOT / "synth_seed42.cfg"))
    train, test = generate(cfg)
    write_score_file(train, ROOT / "train.csv")
    write_score_file(test, ROOT / "test.csv")
    (ROOT / "report.csv").write_text(oracle_sweep(train, test), encoding="utf-8")

    ids, matrix, ds = oracle_diversity(train)
    _write("diversity_train.csv", ["system," + ",".join(ids)] + [
        sid + "," + ",".join("%.6f" % v for v in row) for sid, row in zip(ids, matrix)
    ])
    _write("ds_train.csv", ["system,diversity_strength"] + ["%s,%.6f" % (s, v) for s, v in zip(ids, ds)])

    res = oracle_fuse(train, test, FusionSpec(("A", "B", "D"), "wcds-sc", "test"))
    rows = ["item_id,label,fused_value,prediction"]
    for item, lab, v, p in zip(test.item_ids, test.labels.tolist(), res.values, res.predictions):
        rows.append(f"{item},{lab},{v!r},{p}")
    _write("predictions_ABD_wcds-sc_test.csv", rows)


if __name__ == "__main__":
    main()
