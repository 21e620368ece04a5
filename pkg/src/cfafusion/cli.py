"""Command-line entry point: ``cfafusion <command> [flags]``.

Exit codes: 0 success, 2 malformed input file, 3 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from .core import FusionSpec, Method, RCWeighting, ScoreTable, Split, TiePolicy, check_table, select_systems
from .diversity import diversity_strength, table_diversity
from .exceptions import ConfigError, InvalidTableError, ParseError
from .fusion import SweepConfig, estimate_prior, format_report, fuse_tables, single_system_reports, sweep
from .ingest import min_max_apply, min_max_fit, read_score_file, write_score_file
from .ranking import rsc_plot_data
from .svg import render_rsc_chart
from .synth import SynthConfig, dump_config, generate, load_config

EXIT_INPUT = 2
EXIT_CONFIG = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _system_list(value: str) -> tuple[str, ...]:
    ids = tuple(s.strip() for s in value.split(",") if s.strip())
    if not ids:
        raise argparse.ArgumentTypeError("expected a comma-separated list of system ids")
    return ids


def _float_list(value: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from None


def _unit_interval(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return x


def _u64(value: str) -> int:
    try:
        x = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if not 0 <= x < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return x


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load(path: str, split: Split) -> ScoreTable:
    return check_table(read_score_file(path, split))


def _pick(table: ScoreTable, systems) -> ScoreTable:
    return table if systems is None else select_systems(table, systems)


def _csv_float(x: float) -> str:
    return f"{x:.6f}"


def cmd_diversity(args) -> int:
    split = Split(args.split)
    path = args.train if split is Split.TRAIN else args.test
    if path is None:
        raise ConfigError(f"--split {split.value} needs --{split.value}")
    table = _pick(_load(path, split), args.systems)
    ref = table if args.train is None else _pick(_load(args.train, Split.TRAIN), table.system_ids)
    if table.n_systems < 2:
        raise ConfigError("diversity needs at least 2 systems")
    norm = min_max_apply(table, min_max_fit(ref))
    matrix = table_diversity(norm)
    ds = diversity_strength(matrix, warn=False)

    lines = ["system," + ",".join(matrix.system_ids)]
    for sid, row in zip(matrix.system_ids, matrix.entries.tolist()):
        lines.append(sid + "," + ",".join(map(_csv_float, row)))
    matrix_csv = "\n".join(lines) + "\n"
    ds_lines = ["system,diversity_strength"]
    ds_lines += [f"{sid},{_csv_float(w)}" for sid, w in zip(ds.system_ids, ds.weights.tolist())]
    ds_csv = "\n".join(ds_lines) + "\n"
    if ds.degenerate:
        print("warning: all RSC profiles coincide; diversity strength falls back to equal weights", file=sys.stderr)

    _write(args.out, matrix_csv)
    if args.ds_out:
        _write(args.ds_out, ds_csv)
    else:
        if args.out in (None, "-"):
            sys.stdout.write("\n")
        sys.stdout.write(ds_csv)
    return 0


def cmd_fuse(args) -> int:
    if args.systems is None:
        raise ConfigError("--systems is required for fuse")
    train = _load(args.train, Split.TRAIN)
    test = _load(args.test, Split.TEST)
    method = Method(args.method)
    prior = None
    if method.is_rank:
        if train.labels is None:
            raise ConfigError("rank combinations need a labeled training file to estimate the positive prior")
        prior = estimate_prior(train.labels)
    spec = FusionSpec(args.systems, method, args.weight_split, args.threshold, prior)
    outcome = fuse_tables(
        train,
        test,
        spec,
        rc_weighting=args.rc_weighting,
        tie_policy=args.tie_policy,
        evaluate=not args.no_eval,
        optimize_threshold=args.optimize_threshold,
    )

    rows = ["item_id,label,fused_value,prediction"]
    labels = test.labels.tolist() if test.labels is not None else [None] * test.n_items
    for item, lab, v, p in zip(test.item_ids, labels, outcome.fused.values.tolist(), outcome.predictions.tolist()):
        rows.append(f"{item},{'' if lab is None else int(lab)},{v!r},{int(p)}")
    _write(args.out, "\n".join(rows) + "\n")

    if outcome.report is not None:
        doc = outcome.report.as_dict()
        doc.update(
            rc_weighting=args.rc_weighting if method.is_rank else None,
            tie_policy=args.tie_policy if method.is_rank else None,
            threshold=outcome.threshold,
            positive_prior=outcome.positive_prior,
        )
        for key in ("accuracy", "precision", "recall", "f1"):
            doc[key] = round(doc[key], 6)
        text = json.dumps(doc, indent=2) + "\n"
        if args.metrics_out:
            _write(args.metrics_out, text)
        elif args.out not in (None, "-"):
            sys.stdout.write(text)
    return 0


def _sweep_config(args) -> SweepConfig:
    return SweepConfig(
        threshold=args.threshold,
        rc_weighting=RCWeighting(args.rc_weighting),
        tie_policy=TiePolicy(args.tie_policy),
        systems=args.systems,
    )


def cmd_sweep(args) -> int:
    train = _load(args.train, Split.TRAIN)
    test = _load(args.test, Split.TEST)
    cfg = _sweep_config(args)
    if len(cfg.systems or train.system_ids) < 2:
        raise ConfigError("sweep needs at least 2 systems")
    _write(args.out, format_report(sweep(train, test, cfg)))
    return 0


def cmd_eval(args) -> int:
    train = _load(args.train, Split.TRAIN)
    test = _load(args.test, Split.TEST)
    rows = single_system_reports(train, test, _sweep_config(args))
    rows.sort(key=lambda r: -r.metrics.accuracy)
    _write(args.out, format_report(rows))
    return 0


def cmd_rsc(args) -> int:
    if args.test is None and args.train is None:
        raise ConfigError("rsc needs --test or --train")
    if args.test is not None:
        table = _pick(_load(args.test, Split.TEST), args.systems)
    else:
        table = _pick(_load(args.train, Split.TRAIN), args.systems)
    ref = table if args.train is None else _pick(_load(args.train, Split.TRAIN), table.system_ids)
    series = rsc_plot_data(min_max_apply(table, min_max_fit(ref)))
    ids = list(series)
    lines = ["rank," + ",".join(ids)]
    for i in range(table.n_items):
        lines.append(f"{i + 1}," + ",".join(repr(series[s][i][1]) for s in ids))
    _write(args.out, "\n".join(lines) + "\n")
    if args.svg:
        _write(args.svg, render_rsc_chart(series))
    return 0


def cmd_synth(args) -> int:
    fields = load_config(args.config) if args.config else {}
    overrides = {
        "seed": args.seed,
        "t_systems": args.systems,
        "n_items": args.items,
        "accuracy": args.accuracy,
        "sharpness": args.sharpness,
        "positive_fraction": args.positive_fraction,
    }
    fields.update({k: v for k, v in overrides.items() if v is not None})
    cfg = SynthConfig(**fields)
    train, test = generate(cfg)
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    write_score_file(train, os.path.join(out_dir, "train.csv"))
    write_score_file(test, os.path.join(out_dir, "test.csv"))
    sys.stdout.write(dump_config(cfg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfafusion", description="Combinatorial fusion analysis for classifier scores.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def files(p, train_required=True, test_required=True):
        p.add_argument("--train", required=train_required, help="training score CSV")
        p.add_argument("--test", required=test_required, help="test score CSV")
        p.add_argument("--systems", type=_system_list, help="comma-separated system ids (default: all)")

    def fusion_flags(p):
        p.add_argument("--threshold", type=_unit_interval, default=0.5)
        p.add_argument("--rc-weighting", choices=[r.value for r in RCWeighting], default="reciprocal")
        p.add_argument("--tie-policy", choices=[t.value for t in TiePolicy], default="ordinal")

    p = sub.add_parser("diversity", help="cognitive diversity matrix and diversity strength")
    files(p, train_required=False, test_required=False)
    p.add_argument("--split", choices=["train", "test"], default="train", help="which file's RSC profiles to compare")
    p.add_argument("--out", help="matrix CSV path (default: stdout)")
    p.add_argument("--ds-out", help="diversity strength CSV path")
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("fuse", help="fuse one subset with one method")
    files(p)
    p.add_argument("--method", choices=[m.value for m in Method], default="wcds-sc")
    p.add_argument("--weight-split", choices=["train", "test"], default="train")
    fusion_flags(p)
    p.add_argument("--optimize-threshold", action="store_true", help="fit the SC threshold on training accuracy")
    p.add_argument("--no-eval", action="store_true", help="write predictions only")
    p.add_argument("--out", help="predictions CSV path (default: stdout)")
    p.add_argument("--metrics-out", help="metrics JSON path")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("sweep", help="every subset under every method variant")
    files(p)
    fusion_flags(p)
    p.add_argument("--out", help="report CSV path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval", help="single-system metrics on the test file")
    files(p)
    fusion_flags(p)
    p.add_argument("--out", help="report CSV path (default: stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("rsc", help="rank-score series per system")
    files(p, train_required=False, test_required=False)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--svg", help="also write an SVG line chart here")
    p.set_defaults(func=cmd_rsc)

    p = sub.add_parser("synth", help="generate seeded synthetic train/test score files")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--seed", type=_u64)
    p.add_argument("--systems", type=int, help="number of systems")
    p.add_argument("--items", type=int, help="items per split")
    p.add_argument("--accuracy", type=_float_list)
    p.add_argument("--sharpness", type=_float_list)
    p.add_argument("--positive-fraction", type=float)
    p.add_argument("--out", help="output directory (default: .)")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except (ParseError, InvalidTableError) as exc:
        print(f"cfafusion: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"cfafusion: cannot read or write file: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, ValueError) as exc:
        print(f"cfafusion: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
