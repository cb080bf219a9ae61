import json
from pathlib import Path

import pytest

from lilperm.lil import ExperimentConfig, run_path

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def residual_pilot():
    return json.loads((FIXTURES / "residual_pilot.json").read_text())


@pytest.fixture(scope="session")
def verification_paths(residual_pilot):
    """One nested path per verification seed on the frozen grid."""
    dims = tuple(residual_pilot["dims"])
    lo, hi = residual_pilot["verify_seeds"]
    return {s: run_path(ExperimentConfig(s, residual_pilot["p"], dims)) for s in range(lo, hi)}


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for one acceptance criterion, then assert it."""

    def check(number: int, title: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
