"""Shared fixtures and reporting for the test suite."""

from __future__ import annotations

import pathlib

import pytest
from hypothesis import settings

from circuitpack.devices import (
    calibration_27q,
    calibration_127q,
    coupling_map_27q,
    coupling_map_127q,
)

settings.register_profile("ci", derandomize=True, max_examples=50)
settings.load_profile("ci")

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def map27():
    return coupling_map_27q()


@pytest.fixture(scope="session")
def cal27():
    return calibration_27q()


@pytest.fixture(scope="session")
def map127():
    return coupling_map_127q()


@pytest.fixture(scope="session")
def cal127():
    return calibration_127q()


# One summary line per acceptance check, printed after the run.
ACCEPTANCE_LABELS = {
    "test_overlap_matches_exhaustive_reference": (1, "buffered overlap agrees with all-pairs reference"),
    "test_boundary_check_query_count": (2, "boundary check needs 4 distance queries, naive needs 104"),
    "test_worked_example_graph_and_clique": (3, "worked compatibility example reproduces pinned weights"),
    "test_exact_solver_matches_exhaustive": (4, "branch-and-bound matches exhaustive optimum"),
    "test_desk_scale_schedules": (5, "bundled device fixtures give the expected batch shapes"),
    "test_schedule_invariants_random": (6, "random schedules satisfy every batch invariant"),
    "test_marginalization_properties": (7, "marginal counts conserve shots and recover products"),
    "test_cli_output_deterministic": (8, "CLI schedule output is byte-identical across runs"),
}

_acceptance_results = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name in ACCEPTANCE_LABELS:
        _acceptance_results[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, (num, label) in sorted(ACCEPTANCE_LABELS.items(), key=lambda kv: kv[1][0]):
        outcome = _acceptance_results.get(name)
        if outcome is None:
            continue
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status} - {label}")
