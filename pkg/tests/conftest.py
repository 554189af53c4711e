from __future__ import annotations

import json
from pathlib import Path

import mpmath
import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


def mp_mittag_leffler(alpha, beta, z, dps=200):
    """Independent reference: the power series in mpmath, summed to far below double precision."""
    with mpmath.workdps(dps):
        a, b, z = mpmath.mpf(alpha), mpmath.mpf(beta), mpmath.mpf(z)
        s = mpmath.mpf(0)
        tiny = mpmath.mpf(10) ** (-(dps - 50))
        k = 0
        while True:
            term = z**k * mpmath.rgamma(a * k + b)
            s += term
            if k >= 500 and abs(term) < tiny:
                return float(s)
            k += 1


def rel_err(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)


ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number, passed, detail):
    """Store the one-line verdict of an acceptance criterion for the terminal summary."""
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
