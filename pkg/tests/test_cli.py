from collections import Counter

import pytest

from mixedsurf.cli import main, run_suite
from mixedsurf.pipeline import run_scenario
from mixedsurf.report import from_json, suite_text, to_json, to_text
from mixedsurf.scenario import ScenarioError, bundled_scenarios, format_branch, load_scenario, parse_branch

from conftest import scenario_path


def test_branch_shorthand():
    assert parse_branch("(3,-8)^3") == Counter({(3, -8): 3})
    assert parse_branch("(3,-8)^2, (2,-4)^2") == Counter({(3, -8): 2, (2, -4): 2})
    assert parse_branch("-") == Counter()
    assert format_branch(Counter({(2, -4): 1, (4, -12): 1})) == "(4,-12), (2,-4)"
    assert format_branch(Counter()) == "-"
    with pytest.raises(ScenarioError):
        parse_branch("(3,-8")


def _write(tmp_path, text, name="s.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


BASE = """\
name: tiny
group_file: z2.grp
mode: pinned
g0_generators: []
generating_vector:
  signature: "[2;-]"
  hyperbolic: [["1", "1"], ["1", "1"]]
"""


@pytest.mark.parametrize(
    "text, match",
    [
        ("- just a list\n", "mapping"),
        (BASE.replace("pinned", "sideways"), "unknown mode"),
        (BASE.replace("group_file: z2.grp\n", ""), "group_file"),
        (BASE.replace("z2.grp", "nowhere.grp"), "not found"),
        (BASE + "lift: maybe\n", "lift"),
        (BASE + "expected:\n  colour: blue\n", "unknown expected keys"),
        ("name: x\n  bad: [\n", "s.yaml"),
    ],
)
def test_scenario_errors(tmp_path, text, match):
    with pytest.raises(ScenarioError, match=match):
        load_scenario(_write(tmp_path, text))


def test_bad_word_is_an_error_report(tmp_path):
    p = _write(tmp_path, BASE.replace('["1", "1"], ["1", "1"]', '["g9", "1"], ["1", "1"]'))
    report = run_scenario(load_scenario(p))
    assert report["status"] == "error"
    assert "unknown generator 'g9'" in report["errors"][0]


def test_case1a_report_and_round_trip():
    report = run_scenario(scenario_path("case1a"))
    text = to_json(report)
    assert to_json(from_json(text)) == text
    entry = report["data"][0]
    assert entry["invariants"]["branch"] == "(3,-8)^3"
    assert entry["divisors"]["orbits_total"] == 18
    assert len(entry["divisors"]["exceptional"]) == 2
    assert report["status"] == "ok"
    rendered = to_text(report)
    assert "(3,-8)^3" in rendered and "K^2 of the minimal model: 4" in rendered


def test_minimal_rendering():
    report = run_scenario(scenario_path("symmetric-square-g3"))
    rendered = to_text(report)
    assert "(-1)-curves: none" in rendered
    assert "verdict: minimal" in rendered


def test_stages_stop_early():
    path = scenario_path("k2-7-z6")
    assert "invariants" not in run_scenario(path, stage="validate")["data"][0]
    inv = run_scenario(path, stage="invariants")["data"][0]
    assert "invariants" in inv and "lift" not in inv
    assert "divisors" not in run_scenario(path, stage="lift")["data"][0]


def test_failed_expectation_exit_code(tmp_path, capsys):
    p = _write(tmp_path, BASE + "expected:\n  K2: 99\n")
    assert main(["run", str(p)]) == 1
    out = capsys.readouterr().out
    assert "FAIL K2" in out


def test_exit_codes(tmp_path, capsys):
    assert main(["run", str(scenario_path("symmetric-square-g3"))]) == 0
    assert main(["validate", str(tmp_path / "missing.yaml")]) == 2
    bad = _write(tmp_path, BASE.replace('["1", "1"], ["1", "1"]', '["1", "1"]'))
    assert main(["run", str(bad)]) == 2
    capsys.readouterr()


def test_json_flag(capsys):
    assert main(["invariants", "--json", str(scenario_path("k2-8-z4"))]) == 0
    report = from_json(capsys.readouterr().out)
    assert report["data"][0]["invariants"]["K2"] == 8
    assert "timing_seconds" not in report


def test_search_limit_truncates(capsys):
    assert main(["validate", "--json", "--limit", "5", str(scenario_path("case2-48-38"))]) == 0
    report = from_json(capsys.readouterr().out)
    assert report["search"]["examined"] <= 5 and report["search"]["truncated"]


def test_suite_reports(suite_reports):
    assert [r["scenario"] for r in suite_reports] == sorted(r["scenario"] for r in suite_reports)
    assert len(suite_reports) == len(bundled_scenarios())
    bad = [(r["scenario"], [c for c in r["checks"] if not c["ok"]], r["errors"]) for r in suite_reports if r["status"] != "ok"]
    assert not bad
    text = suite_text(suite_reports)
    assert f"{len(suite_reports)} of {len(suite_reports)} scenarios ok" in text


def test_suite_is_deterministic(suite_reports):
    # second run of the whole suite, compared byte for byte
    again = run_suite(bundled_scenarios())
    assert [to_json(r) for r in again] == [to_json(r) for r in suite_reports]


def test_arithmetic_genus_nonnegative_in_suite(suite_reports):
    for r in suite_reports:
        for entry in r["data"]:
            for row in entry.get("divisors", {}).get("table", []):
                assert row["pa"] >= 0 and row["pa"] == 1 + (row["D2"] + row["KD"]) // 2
