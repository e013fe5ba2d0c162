"""Shared fixtures, plus the per-criterion acceptance summary.

Acceptance tests carry ``@pytest.mark.criterion("C07")``; at the end of the
run one PASS/FAIL line is printed for every criterion seen.
"""

from __future__ import annotations

import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

_RESULTS: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    crit = _CRITERIA.get(report.nodeid)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _RESULTS.setdefault(crit, []).append(report.outcome == "passed")


_CRITERIA: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            _CRITERIA[item.nodeid] = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_RESULTS):
        outcomes = _RESULTS[crit]
        verdict = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {crit} {verdict} ({sum(outcomes)}/{len(outcomes)} tests)")


@contextmanager
def time_limit(seconds: float):
    """Fail the enclosing test if the block takes longer than ``seconds``."""
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, f"took {elapsed:.2f} s, limit {seconds} s"


@pytest.fixture
def timer():
    return time_limit


@pytest.fixture
def cli_run(tmp_path):
    """Run the command line in a subprocess; returns ``CompletedProcess``."""
    import subprocess

    def run(*args, input_bytes: bytes | None = None):
        return subprocess.run(
            [sys.executable, "-m", "l0calc", *map(str, args)],
            capture_output=True,
            input=input_bytes,
            cwd=tmp_path,
            timeout=300,
        )

    return run


@pytest.fixture
def workdir(tmp_path) -> Path:
    return tmp_path
