"""Scenario pipeline: validate -> invariants -> lift -> divisors -> minimal model.

``run_scenario`` returns a plain, JSON-ready dict.  Everything in it is a
deterministic function of the scenario file and the package version; wall
clock timing is only added on request.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator

from .cover import (
    CoverData, CoverInconsistency, GeneratingVector, InadmissibleSignature, Signature, enumerate_generating_vectors,
)
from .divisors import IntersectionError, find_exceptional, minimal_model_report, orbit_divisors
from .groups import FiniteGroup, GroupError, GroupMap, group_signature, homomorphism_from_images, load_group_file
from .lifting import LiftCandidate, NoLiftRule, lifted_signature, search_lift, verify_lift_consistency
from .mixed import DatumError, InvariantError, MixedDatum, SurfaceInvariants, build_mixed_datum, surface_invariants
from .scenario import PinnedLift, Scenario, ScenarioError, format_branch, load_scenario, parse_branch

SCHEMA = "mixedsurf.report/1"
DEFAULT_LIMIT = 10**6

STAGES = ("validate", "invariants", "lift", "divisors", "exceptional", "run")

# keys of the expected block that select matching data in search modes
FILTER_KEYS = ("genus_C", "q", "chi", "K2", "branch")


@lru_cache(maxsize=None)
def _group(path: str) -> FiniteGroup:
    return load_group_file(path)


def _word(G: FiniteGroup, x: int) -> str:
    return str(G.word_for(x))


@dataclass
class _Trial:
    g0_index: int
    G0: FiniteGroup
    emb: GroupMap
    V: GeneratingVector  # over G0, or over G for pinned vectors
    tau_prime: int | None


def _g0_options(sc: Scenario, G: FiniteGroup) -> list[tuple[FiniteGroup, GroupMap]]:
    out = []
    for words in sc.g0_candidates:
        out.append(G.subgroup([G.element(w) for w in words]))
    return out


def _taus(sc: Scenario, G: FiniteGroup, emb: GroupMap) -> list[int | None]:
    if sc.searches_tau:
        return [x for x in G.elements if x not in emb.image]
    if sc.tau_prime is None:
        return [None]
    return [G.element(sc.tau_prime)]


def _trials(sc: Scenario, G: FiniteGroup) -> Iterator[_Trial]:
    for i, (G0, emb) in enumerate(_g0_options(sc, G)):
        taus = _taus(sc, G, emb)
        if sc.searches_vectors:
            vectors: Iterator[GeneratingVector] = enumerate_generating_vectors(G0, sc.signature)
        else:
            vectors = iter([GeneratingVector.from_words(G, sc.signature, sc.branch, sc.hyperbolic)])
        for V in vectors:
            for t in taus:
                yield _Trial(i, G0, emb, V, t)


def _invariant_key(inv: SurfaceInvariants) -> tuple:
    return (inv.genus_C, inv.q, inv.chi, inv.K2, tuple(sorted(inv.branch_multiset().items())))


def _matches(inv: SurfaceInvariants, expected: dict) -> bool:
    for key in FILTER_KEYS:
        if key not in expected:
            continue
        if key == "branch":
            if inv.branch_multiset() != parse_branch(str(expected["branch"])):
                return False
        elif getattr(inv, key) != expected[key]:
            return False
    return True


# ---------------------------------------------------------------------------
# report sections


def _datum_section(d: MixedDatum, g0_words: list[str]) -> dict:
    G = d.G
    emb = d.embedding
    V = d.V
    return {
        "group": G.name,
        "order": G.order,
        "g0_generators": g0_words,
        "g0_order": d.G0.order,
        "tau_prime": _word(G, d.tau_prime),
        "signature": str(V.signature),
        "hyperbolic": [[_word(G, emb(a)), _word(G, emb(b))] for a, b in V.hyperbolic],
        "branch": [_word(G, emb(h)) for h in V.branch],
    }


def _invariants_section(d: MixedDatum, inv: SurfaceInvariants) -> dict:
    G = d.G
    return {
        "genus_C": inv.genus_C,
        "q": inv.q,
        "pg": inv.pg,
        "chi": inv.chi,
        "K2": inv.K2,
        "pa_B_minus_1": inv.pa_B_minus_1,
        "branch": format_branch(inv.branch_multiset()),
        "branch_components": [
            {
                "rep": _word(G, b.rep),
                "class_size": b.class_size,
                "centralizer_size": b.centralizer_size,
                "genus": b.genus,
                "self_int": b.self_int,
            }
            for b in inv.branch
        ],
    }


def _namer(d: MixedDatum, cover: CoverData):
    if cover.group is d.G0:
        return lambda x: _word(d.G, d.embedding(x))
    return lambda x: _word(cover.group, x)


def _divisor_section(d: MixedDatum, cover: CoverData, with_exceptional: bool) -> dict:
    name = _namer(d, cover)
    divs = orbit_divisors(d, cover)
    out: dict = {
        "induced_by": "G0" if cover.group is d.G0 else "H",
        "orbits_total": len(divs),
        "orbits_nonbranch": sum(1 for D in divs if not D.is_branch),
        "orbits_branch": sum(1 for D in divs if D.is_branch),
        "table": [
            {"rep": name(D.rep), "n": D.n, "branch": D.is_branch, "D2": D.D2, "KD": D.KD, "pa": D.pa}
            for D in divs
        ],
    }
    if with_exceptional:
        found = find_exceptional(d, cover, divs)
        mm = minimal_model_report(d, cover, found)
        out["exceptional"] = [{"rep": name(D.rep), "n": D.n} for D in mm.found]
        out["exceptional_pairwise"] = [list(row) for row in mm.pairwise]
        out["minimal_model"] = {
            "bound": mm.bound,
            "found": len(mm.found),
            "disjoint": mm.disjoint,
            "K2_min": mm.K2_min,
            "K2_min_range": list(mm.K2_min_range) if mm.K2_min_range else None,
            "verdict": mm.verdict,
        }
    return out


def _pinned_candidate(p: PinnedLift, d: MixedDatum) -> LiftCandidate:
    H = _group(str(p.group_file))
    imgs = [H.element(w) for w in p.embedding_words]
    emb = homomorphism_from_images(d.G0, H, imgs, kind="embedding")
    lifted = lifted_signature(d.V.signature)
    W = GeneratingVector.from_words(H, lifted, p.vector_words)
    return LiftCandidate(H, emb, W, d.V.signature, lifted)


def _lift_candidates(sc: Scenario, d: MixedDatum) -> tuple[list[LiftCandidate], list[str]]:
    if isinstance(sc.lift, PinnedLift):
        cand = _pinned_candidate(sc.lift, d)
        problems = verify_lift_consistency(cand, d.V)
        cand.verified = not problems
        return ([cand] if cand.verified else []), problems
    return search_lift(d.G0, d.V), []


def _lift_section(sc: Scenario, d: MixedDatum, depth: int) -> tuple[dict, list[CoverData]]:
    try:
        cands, problems = _lift_candidates(sc, d)
    except NoLiftRule as exc:
        return {"error": str(exc), "verified": 0}, []
    sec: dict = {"verified": len(cands)}
    if problems:
        sec["problems"] = problems
    if not cands:
        return sec, []
    orders = sorted({c.H.order for c in cands})
    sec["orders"] = orders
    sec["types"] = sorted({str(c.lifted_sig) for c in cands})
    sec["group_classes"] = len({group_signature(c.H) for c in cands})
    first = cands[0]
    sec["example"] = {
        "H": first.H.name,
        "order": first.H.order,
        "W": [_word(first.H, h) for h in first.W.branch],
    }
    if depth >= STAGES.index("exceptional"):
        # every verified lift is analysed; the counts must not depend on the choice
        hist: Counter = Counter()
        k2min: Counter = Counter()
        for c in cands:
            found = find_exceptional(d, c.cover)
            hist[len(found)] += 1
            k2min[str(minimal_model_report(d, c.cover, found).K2_min)] += 1
        sec["exceptional_histogram"] = {str(k): v for k, v in sorted(hist.items())}
        sec["K2_min_histogram"] = dict(sorted(k2min.items()))
        sec["invariant"] = len(hist) == 1 and len(k2min) == 1
    return sec, [first.cover]


def _analyse(sc: Scenario, d: MixedDatum, inv: SurfaceInvariants, g0_words: list[str], depth: int) -> dict:
    entry = {"datum": _datum_section(d, g0_words), "invariants": _invariants_section(d, inv)}
    cover = d.cover0
    if sc.lift is not None and depth >= STAGES.index("lift"):
        entry["lift"], covers = _lift_section(sc, d, depth)
        if covers:
            cover = covers[0]
        elif depth >= STAGES.index("divisors"):
            entry["lift"]["note"] = "no verified lift; divisors induced by G0 only"
    if depth >= STAGES.index("divisors"):
        entry["divisors"] = _divisor_section(d, cover, depth >= STAGES.index("exceptional"))
    return entry


# ---------------------------------------------------------------------------
# assertions


def _computed(entry: dict, key: str):
    inv = entry["invariants"]
    div = entry.get("divisors", {})
    lift = entry.get("lift", {})
    if key in ("genus_C", "q", "chi", "K2", "branch"):
        return inv[key]
    if key in ("orbits_total", "orbits_nonbranch"):
        return div.get(key)
    if key == "exceptional":
        if lift.get("exceptional_histogram"):
            hist = lift["exceptional_histogram"]
            return int(next(iter(hist))) if len(hist) == 1 else "inconsistent " + str(hist)
        return len(div["exceptional"]) if "exceptional" in div else None
    if key == "K2_min":
        if lift.get("K2_min_histogram"):
            hist = lift["K2_min_histogram"]
            if len(hist) != 1:
                return "inconsistent " + str(hist)
            v = next(iter(hist))
            return None if v == "None" else int(v)
        return div.get("minimal_model", {}).get("K2_min")
    if key == "lift_order":
        orders = lift.get("orders") or []
        return orders[0] if len(orders) == 1 else (orders or None)
    if key == "lift_type":
        types = lift.get("types") or []
        return types[0] if len(types) == 1 else (types or None)
    raise KeyError(key)


def _same(key: str, expected, computed) -> bool:
    if key == "branch":
        return isinstance(computed, str) and parse_branch(computed) == parse_branch(str(expected))
    if key == "lift_type":
        return computed is not None and str(Signature.parse(str(expected))) == computed
    return expected == computed


def _checks(sc: Scenario, report: dict) -> list[dict]:
    out = []
    exp = sc.expected
    if sc.searches_vectors or sc.searches_tau:
        need = int(exp.get("min_matches", 1))
        got = report["search"]["matching"]
        out.append({"key": "min_matches", "expected": need, "computed": got, "ok": got >= need})
    for i, entry in enumerate(report["data"]):
        for key in sorted(exp):
            if key == "min_matches":
                continue
            val = _computed(entry, key)
            out.append(
                {"key": key, "datum": i, "expected": exp[key], "computed": val, "ok": _same(key, exp[key], val)}
            )
        lift = entry.get("lift", {})
        if lift.get("invariant") is False:
            out.append(
                {
                    "key": "lift_invariance",
                    "datum": i,
                    "expected": "same exceptional count on every verified lift",
                    "computed": lift.get("exceptional_histogram"),
                    "ok": False,
                }
            )
    return out


# ---------------------------------------------------------------------------
# driver


def run_scenario(
    scenario: Scenario | str | Path,
    *,
    stage: str = "run",
    limit: int = DEFAULT_LIMIT,
    timing: bool = False,
) -> dict:
    """Execute a scenario up to ``stage``; the report's ``status`` is ``ok``, ``failed`` or ``error``."""
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}")
    start = time.perf_counter()
    depth = STAGES.index(stage)
    sc = scenario if isinstance(scenario, Scenario) else load_scenario(scenario)
    report: dict = {
        "schema": SCHEMA,
        "scenario": sc.name,
        "description": sc.description,
        "mode": sc.mode,
        "stage": stage,
        "metadata": dict(sorted(sc.metadata.items())),
        "search": None,
        "data": [],
        "errors": [],
        "checks": [],
    }
    try:
        G = _group(str(sc.group_file))
        report["metadata"].setdefault("group", G.name)
        _execute(sc, G, report, depth, limit)
    except (
        ScenarioError, DatumError, GroupError, InvariantError, IntersectionError,
        InadmissibleSignature, CoverInconsistency,
    ) as exc:
        msg = str(exc)
        witnesses = getattr(exc, "witnesses", ())
        if witnesses:
            msg += " (witnesses: " + ", ".join(str(w) for w in witnesses) + ")"
        report["errors"].append(f"{type(exc).__name__}: {msg}")
    if depth == STAGES.index("run") and not report["errors"]:
        report["checks"] = _checks(sc, report)
    if report["errors"]:
        report["status"] = "error"
    elif any(not c["ok"] for c in report["checks"]):
        report["status"] = "failed"
    else:
        report["status"] = "ok"
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    return report


def _execute(sc: Scenario, G: FiniteGroup, report: dict, depth: int, limit: int) -> None:
    searching = sc.searches_vectors or sc.searches_tau
    filt = {k: sc.expected[k] for k in FILTER_KEYS if k in sc.expected}
    examined = free = 0
    truncated = False
    families: dict[tuple, dict] = {}
    picked: list[tuple[MixedDatum, SurfaceInvariants, list[str]]] = []
    for trial in _trials(sc, G):
        if examined >= limit:
            truncated = True
            break
        examined += 1
        g0_words = sc.g0_candidates[trial.g0_index]
        try:
            d = build_mixed_datum(G, trial.emb if trial.V.group is trial.G0 else g0_words, trial.tau_prime, trial.V)
        except DatumError:
            if not searching:
                raise
            continue
        free += 1
        if depth == 0:
            picked.append((d, None, g0_words))  # type: ignore[arg-type]
            if not searching:
                break
            continue
        inv = surface_invariants(d)
        if searching and not _matches(inv, filt):
            continue
        key = (trial.g0_index, _invariant_key(inv))
        fam = families.get(key)
        if fam is None:
            fam = families[key] = {
                "g0_candidate": trial.g0_index,
                "genus_C": inv.genus_C,
                "K2": inv.K2,
                "branch": format_branch(inv.branch_multiset()),
                "count": 0,
                "tau_primes": [],
            }
        fam["count"] += 1
        if sc.searches_tau and len(fam["tau_primes"]) < 64:
            fam["tau_primes"].append(_word(G, d.tau_prime))
        if fam["count"] <= sc.data_per_family:
            picked.append((d, inv, g0_words))
    if searching:
        report["search"] = {
            "limit": limit,
            "examined": examined,
            "free": free,
            "matching": sum(f["count"] for f in families.values()),
            "truncated": truncated,
            "families": list(families.values()),
        }
    for d, inv, g0_words in picked:
        if depth == 0:
            report["data"].append({"datum": _datum_section(d, g0_words), "valid": True})
        else:
            report["data"].append(_analyse(sc, d, inv, g0_words, depth))
