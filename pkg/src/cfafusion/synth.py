"""Seeded synthetic scoring systems for tests, fixtures and demos.

Random numbers come from NumPy's PCG64 bit generator and only its uniform
doubles are used, so a given seed yields the same files on every platform.
Each system errs on an exact, randomly chosen set of items, so its accuracy
at threshold 0.5 equals the target up to rounding to a whole item count.
The sharpness parameter shapes how far scores sit from 0.5: ``1`` spreads
margins uniformly (a straight RSC line), larger values push scores towards
0 and 1 (a steep sigmoid-like RSC), values below 1 bunch them near 0.5.
"""

from __future__ import annotations

import math
import string
from dataclasses import asdict, dataclass, field
from os import PathLike

import numpy as np

from .core import ScoreTable, Split
from .exceptions import ConfigError

__all__ = [
    "SynthConfig",
    "generate",
    "generate_disjoint_error_fixture",
    "load_config",
    "dump_config",
]

_DEFAULT_ACCURACY = (0.95, 0.83, 0.85, 0.86)
_DEFAULT_SHARPNESS = (6.0, 1.0, 1.5, 2.0)
# Smallest margin from 0.5, keeps "wrong side" scores strictly wrong.
_MIN_MARGIN = 1e-6


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _system_names(t: int) -> tuple[str, ...]:
    if t <= 26:
        return tuple(string.ascii_uppercase[:t])
    return tuple(f"S{j + 1}" for j in range(t))


@dataclass(frozen=True)
class SynthConfig:
    n_items: int = 1000
    t_systems: int = 4
    seed: int = 42
    accuracy: tuple[float, ...] = ()
    sharpness: tuple[float, ...] = ()
    positive_fraction: float = 0.5
    system_ids: tuple[str, ...] = field(default=())

    def __post_init__(self):
        t = self.t_systems
        if t < 1:
            raise ConfigError("t_systems must be at least 1")
        if self.n_items < 1:
            raise ConfigError("n_items must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        acc = tuple(self.accuracy) or tuple(_DEFAULT_ACCURACY[j % 4] for j in range(t))
        sharp = tuple(self.sharpness) or tuple(_DEFAULT_SHARPNESS[j % 4] for j in range(t))
        ids = tuple(self.system_ids) or _system_names(t)
        for name, seq in (("accuracy", acc), ("sharpness", sharp), ("system_ids", ids)):
            if len(seq) != t:
                raise ConfigError(f"{name} has {len(seq)} entries for {t} systems")
        if any(not 0.0 < a <= 1.0 for a in acc):
            raise ConfigError("accuracy targets must lie in (0, 1]")
        if any(not (s > 0 and math.isfinite(s)) for s in sharp):
            raise ConfigError("sharpness must be positive and finite")
        if not 0.0 < self.positive_fraction < 1.0:
            raise ConfigError("positive_fraction must lie in (0, 1)")
        if len(set(ids)) != t:
            raise ConfigError("system_ids must be distinct")
        object.__setattr__(self, "accuracy", tuple(float(a) for a in acc))
        object.__setattr__(self, "sharpness", tuple(float(s) for s in sharp))
        object.__setattr__(self, "system_ids", ids)


def _first_k(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Boolean mask selecting exactly k of n items uniformly at random."""
    order = np.argsort(rng.random(n), kind="stable")
    mask = np.zeros(n, dtype=bool)
    mask[order[:k]] = True
    return mask


def _split(rng: np.random.Generator, cfg: SynthConfig, split: Split) -> ScoreTable:
    n = cfg.n_items
    labels = _first_k(rng, n, _round_half_up(n * cfg.positive_fraction))
    cols = []
    for acc, sharp in zip(cfg.accuracy, cfg.sharpness):
        wrong = _first_k(rng, n, _round_half_up(n * (1.0 - acc)))
        u = rng.random(n)
        margin = 0.5 * (_MIN_MARGIN + (1.0 - _MIN_MARGIN) * (1.0 - u) ** (1.0 / sharp))
        says_positive = labels != wrong
        cols.append(np.where(says_positive, 0.5 + margin, 0.5 - margin))
    return ScoreTable(
        item_ids=[f"{split.value}-{i + 1:06d}" for i in range(n)],
        system_ids=cfg.system_ids,
        scores=np.column_stack(cols),
        labels=labels.astype(np.int8),
        split=split,
    )


def generate(config: SynthConfig) -> tuple[ScoreTable, ScoreTable]:
    """Labeled (train, test) tables; train is drawn first from the seeded stream."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    train = _split(rng, config, Split.TRAIN)
    test = _split(rng, config, Split.TEST)
    return train, test


def generate_disjoint_error_fixture(n: int) -> ScoreTable:
    """Three systems whose errors fall on disjoint thirds of the items.

    Labels alternate 1, 0, 1, ... . System j is wrong exactly on the j-th
    third, where its score sits 0.1 past 0.5 on the wrong side; everywhere
    else it sits 0.4 past 0.5 on the right side. Every system therefore has
    accuracy 2/3 while the plain average is right on every item.
    """
    if n < 3 or n % 3:
        raise ConfigError(f"n must be a positive multiple of 3, got {n}")
    third = n // 3
    labels = np.arange(n) % 2
    scores = np.empty((n, 3))
    for j in range(3):
        wrong = (np.arange(n) // third) == j
        sign = np.where(labels == 1, 1.0, -1.0)
        scores[:, j] = np.where(wrong, 0.5 - 0.1 * sign, 0.5 + 0.4 * sign)
    return ScoreTable(
        item_ids=[f"d{i + 1:06d}" for i in range(n)],
        system_ids=("A", "B", "C"),
        scores=scores,
        labels=labels.astype(np.int8),
        split=Split.TEST,
    )


_LIST_KEYS = {"accuracy": float, "sharpness": float, "system_ids": str}
_SCALAR_KEYS = {"n_items": int, "t_systems": int, "seed": int, "positive_fraction": float}


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments allowed) into config fields."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ConfigError(f"config line {lineno}: expected key = value")
        try:
            if key in _LIST_KEYS:
                out[key] = tuple(_LIST_KEYS[key](v.strip()) for v in value.split(",") if v.strip())
            elif key in _SCALAR_KEYS:
                out[key] = _SCALAR_KEYS[key](value)
            else:
                raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"config line {lineno}: bad value for {key}: {value!r}") from None
    return out


def load_config(path: str | PathLike) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(config: SynthConfig) -> str:
    lines = []
    for key, value in asdict(config).items():
        if isinstance(value, tuple):
            value = ",".join(map(str, value))
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
