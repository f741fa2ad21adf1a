"""Command line front end: ``mixedsurf <stage> SCENARIO`` and ``mixedsurf suite``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .pipeline import DEFAULT_LIMIT, STAGES, run_scenario
from .report import suite_text, to_json, to_text
from .scenario import ScenarioError, bundled_scenarios, load_scenario

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


def _exit_code(reports: list[dict]) -> int:
    if any(r["status"] == "error" for r in reports):
        return EXIT_ERROR
    if any(r["status"] == "failed" for r in reports):
        return EXIT_FAILED
    return EXIT_OK


def _run_one(args: tuple[str, str, int, bool]) -> dict:
    path, stage, limit, timing = args
    return run_scenario(path, stage=stage, limit=limit, timing=timing)


def run_suite(paths: list[Path], *, limit: int = DEFAULT_LIMIT, threads: int = 1, timing: bool = False) -> list[dict]:
    """Run every scenario through the full pipeline; reports come back sorted by scenario name."""
    jobs = [(str(p), "run", limit, timing) for p in paths]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_run_one, jobs))
    else:
        reports = [_run_one(j) for j in jobs]
    return sorted(reports, key=lambda r: r["scenario"])


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mixedsurf", description="Invariants and (-1)-curves of mixed quotients (C x C)/G.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report instead of tables")
    common.add_argument("--limit", type=_positive, default=DEFAULT_LIMIT, help="cap on candidates examined in search modes")
    common.add_argument("--threads", type=_positive, default=1, help="worker processes for the suite")
    common.add_argument("--timing", action="store_true", help="include wall clock time (breaks byte-identical output)")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check the scenario and build its datum",
        "invariants": "g(C), q, chi, K^2 and the branch locus",
        "lift": "search or verify the lifted group action",
        "divisors": "orbit divisors with D^2, K.D and arithmetic genus",
        "exceptional": "(-1)-curves and the minimal model verdict",
        "run": "full pipeline with the expected-block assertions",
    }
    for stage in STAGES:
        sp = sub.add_parser(stage, parents=[common], help=helps[stage])
        sp.add_argument("scenario", type=Path)
    sp = sub.add_parser("suite", parents=[common], help="run all bundled scenarios (or those given)")
    sp.add_argument("scenarios", type=Path, nargs="*", help="scenario files or directories")
    return p


def _collect(paths: list[Path]) -> list[Path]:
    if not paths:
        return bundled_scenarios()
    out = []
    for p in paths:
        out += sorted(p.glob("*.yaml")) if p.is_dir() else [p]
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "suite":
        try:
            paths = _collect(args.scenarios)
            for p in paths:
                load_scenario(p)
        except (OSError, ScenarioError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        reports = run_suite(paths, limit=args.limit, threads=args.threads, timing=args.timing)
        if args.json:
            sys.stdout.write(to_json({"schema": "mixedsurf.suite/1", "reports": reports}))
        else:
            sys.stdout.write(suite_text(reports))
        return _exit_code(reports)
    try:
        sc = load_scenario(args.scenario)
    except (OSError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = run_scenario(sc, stage=args.command, limit=args.limit, timing=args.timing)
    sys.stdout.write(to_json(report) if args.json else to_text(report))
    return _exit_code([report])


if __name__ == "__main__":
    sys.exit(main())
