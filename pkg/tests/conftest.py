from pathlib import Path

import numpy as np
import pytest

from cfafusion.core import ScoreTable, Split

GOLDEN = Path(__file__).parent / "data" / "golden"

# Filled by test_acceptance.py, printed once at the end of the session.
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0].lstrip("AC"))):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def golden_dir():
    return GOLDEN


def make_table(scores, labels=None, systems=None, split=Split.TEST, normalized=False, ids=None):
    scores = np.asarray(scores, dtype=float)
    if scores.ndim == 1:
        scores = scores[:, None]
    n, t = scores.shape
    return ScoreTable(
        item_ids=ids or [f"i{k}" for k in range(n)],
        system_ids=systems or [chr(ord("A") + j) for j in range(t)],
        scores=scores,
        labels=None if labels is None else np.asarray(labels, dtype=np.int8),
        split=split,
        normalized=normalized,
    )
