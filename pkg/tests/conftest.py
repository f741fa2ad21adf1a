from __future__ import annotations

from pathlib import Path

import pytest

from mixedsurf.cover import GeneratingVector
from mixedsurf.groups import FiniteGroup, build_group, load_group_file
from mixedsurf.mixed import build_mixed_datum
from mixedsurf.scenario import data_dir

GROUPS = data_dir() / "groups"
SCENARIOS = data_dir() / "scenarios"

CASE1A_GV = ["g2*g5*g6*g7*g8", "g1*g3*g7", "g2*g3*g4*g5*g8", "g1*g2*g5*g6*g8", "g2*g4*g5*g6"]
CASE1B_GV = ["g1*g2*g3*g5*g6*g7*g8", "g3*g5*g6", "g3*g6", "g2*g4*g5*g6*g7", "g1*g3*g4*g5"]

_cache: dict[str, FiniteGroup] = {}
_criteria: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    """Remember one acceptance line; printed at the end of the run."""
    _criteria[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_criteria):
            terminalreporter.write_line(_criteria[n])


def fixture_group(name: str) -> FiniteGroup:
    if name not in _cache:
        _cache[name] = load_group_file(GROUPS / name)
    return _cache[name]


def s3() -> FiniteGroup:
    return build_group([[1, 0, 2], [1, 2, 0]], names=["a", "b"], name="S3")


def case1_datum(which: str = "a"):
    G = fixture_group("sg256_47930.grp" if which == "a" else "sg256_45303.grp")
    words = CASE1A_GV if which == "a" else CASE1B_GV
    V = GeneratingVector.from_words(G, "[0;2^5]", words)
    return build_mixed_datum(G, words, None, V)


@pytest.fixture(scope="session")
def case1a():
    return case1_datum("a")


@pytest.fixture(scope="session")
def case1b():
    return case1_datum("b")


@pytest.fixture(scope="session")
def suite_reports():
    from mixedsurf.cli import run_suite
    from mixedsurf.scenario import bundled_scenarios

    return run_suite(bundled_scenarios())


def scenario_path(name: str) -> Path:
    return SCENARIOS / f"{name}.yaml"
