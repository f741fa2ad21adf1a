"""Rendering reports as JSON or as plain-text tables."""

from __future__ import annotations

import json


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def from_json(text: str) -> dict:
    return json.loads(text)


def _table(headers: list[str], rows: list[list[object]]) -> list[str]:
    cells = [[str(c) for c in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()
    out = [line, "  ".join("-" * w for w in widths)]
    for r in cells:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return out


def summary_row(report: dict) -> list[object] | None:
    """One line in the layout K^2 | Id(G) | Id(G0) | g(C) | Type | Branch Locus."""
    if not report.get("data") or "invariants" not in report["data"][0]:
        return None
    entry = report["data"][0]
    inv, datum = entry["invariants"], entry["datum"]
    meta = report.get("metadata", {})
    return [
        inv["K2"],
        meta.get("id_G", "?"),
        meta.get("id_G0", "?"),
        inv["genus_C"],
        datum["signature"],
        inv["branch"],
    ]


SUMMARY_HEADERS = ["K^2", "Id(G)", "Id(G0)", "g(C)", "Type", "Branch Locus"]


def to_text(report: dict) -> str:
    lines = [f"scenario {report['scenario']} [{report['mode']}, stage {report['stage']}]: {report['status']}"]
    for err in report["errors"]:
        lines.append(f"  error: {err}")
    search = report.get("search")
    if search:
        trunc = f", truncated at {search['limit']}" if search["truncated"] else ""
        lines.append(
            f"search: {search['examined']} candidates examined, {search['free']} free,"
            f" {search['matching']} matching{trunc}"
        )
        for fam in search["families"]:
            line = f"  family G0#{fam['g0_candidate']}: g(C)={fam['genus_C']} K^2={fam['K2']} branch {fam['branch']}"
            line += f"  x{fam['count']}"
            if fam["tau_primes"]:
                line += "  tau' in {" + ", ".join(fam["tau_primes"]) + "}"
            lines.append(line)
    row = summary_row(report)
    if row is not None:
        lines.append("")
        lines += _table(SUMMARY_HEADERS, [row])
    for i, entry in enumerate(report["data"]):
        lines.append("")
        lines.append(f"datum {i}:")
        datum = entry["datum"]
        lines.append(f"  G = {datum['group']} (order {datum['order']}), G0 = <{', '.join(datum['g0_generators'])}>")
        lines.append(f"  tau' = {datum['tau_prime']}, V of type {datum['signature']}")
        for a, b in datum["hyperbolic"]:
            lines.append(f"    ({a}, {b})")
        if datum["branch"]:
            lines.append("    branch: " + ", ".join(datum["branch"]))
        inv = entry.get("invariants")
        if inv:
            lines.append(
                f"  g(C)={inv['genus_C']}  q={inv['q']}  pg={inv['pg']}  chi={inv['chi']}  K^2={inv['K2']}"
                f"  branch {inv['branch']}"
            )
        lift = entry.get("lift")
        if lift is not None:
            if "error" in lift:
                lines.append(f"  lift: {lift['error']}")
            else:
                lines.append(f"  lift: {lift['verified']} verified candidates")
                if lift["verified"]:
                    ex = lift["example"]
                    lines.append(f"    |H| = {ex['order']}, type {', '.join(lift['types'])}, W = ({', '.join(ex['W'])})")
                if "exceptional_histogram" in lift:
                    hist = ", ".join(f"{k}: {v}" for k, v in lift["exceptional_histogram"].items())
                    flag = "invariant" if lift["invariant"] else "NOT INVARIANT"
                    lines.append(f"    (-1)-curves per lift {{{hist}}} ({flag})")
                for p in lift.get("problems", []):
                    lines.append(f"    problem: {p}")
                if "note" in lift:
                    lines.append(f"    {lift['note']}")
        div = entry.get("divisors")
        if div:
            lines.append(
                f"  orbit divisors induced by {div['induced_by']}: {div['orbits_total']}"
                f" ({div['orbits_nonbranch']} non-branch, {div['orbits_branch']} branch)"
            )
            rows = [[r["rep"], r["n"], "yes" if r["branch"] else "", r["D2"], r["KD"], r["pa"]] for r in div["table"]]
            lines += ["    " + s for s in _table(["rep", "n", "branch", "D^2", "K.D", "pa"], rows)]
            if "minimal_model" in div:
                mm = div["minimal_model"]
                if div["exceptional"]:
                    reps = ", ".join(e["rep"] for e in div["exceptional"])
                    lines.append(f"  (-1)-curves: {reps}; disjoint: {'yes' if mm['disjoint'] else 'no'}")
                else:
                    lines.append("  (-1)-curves: none")
                k2 = mm["K2_min"] if mm["K2_min"] is not None else mm["K2_min_range"]
                lines.append(f"  verdict: {mm['verdict']}; K^2 of the minimal model: {k2}")
    if report["checks"]:
        lines.append("")
        for c in report["checks"]:
            where = f" [datum {c['datum']}]" if "datum" in c else ""
            mark = "ok  " if c["ok"] else "FAIL"
            lines.append(f"  {mark} {c['key']}{where}: expected {c['expected']}, computed {c['computed']}")
    if "timing_seconds" in report:
        lines.append(f"time: {report['timing_seconds']} s")
    return "\n".join(lines) + "\n"


def suite_text(reports: list[dict]) -> str:
    rows = []
    for r in reports:
        row = summary_row(r) or ["?"] * len(SUMMARY_HEADERS)
        rows.append([r["scenario"], r["status"], *row])
    lines = _table(["scenario", "status", *SUMMARY_HEADERS], rows)
    bad = [r["scenario"] for r in reports if r["status"] != "ok"]
    lines.append("")
    lines.append(f"{len(reports) - len(bad)} of {len(reports)} scenarios ok" + (f"; failing: {', '.join(bad)}" if bad else ""))
    return "\n".join(lines) + "\n"
