import os
from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).parent / "data"

_ACCEPTANCE_LINES: list[str] = []


def nidd_path() -> Path | None:
    """Nidd exceedance file: ``$WEIBULLTAIL_NIDD`` or ``tests/data/nidd.txt``."""
    env = os.environ.get("WEIBULLTAIL_NIDD")
    candidates = [Path(env)] if env else []
    candidates.append(DATA_DIR / "nidd.txt")
    for p in candidates:
        if p.is_file():
            return p
    return None


@pytest.fixture
def acceptance_report():
    def record(name: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  [{detail}]"
        _ACCEPTANCE_LINES.append(line)
        return ok

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
