"""Scenario files: YAML documents describing one datum or one search."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .cover import Signature
from .groups import Word

MODES = ("pinned", "search-gv", "search-tau", "full-search")


class ScenarioError(ValueError):
    pass


def data_dir() -> Path:
    return Path(str(resources.files("mixedsurf") / "data"))


def bundled_scenarios() -> list[Path]:
    return sorted((data_dir() / "scenarios").glob("*.yaml"))


_BRANCH_RE = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)(?:\s*\^\s*(\d+))?")


def parse_branch(text: str) -> Counter:
    """``"(3,-8)^2, (2,-4)^2"`` -> Counter({(3,-8): 2, (2,-4): 2}); ``"-"`` or ``""`` is empty."""
    text = (text or "").strip()
    out: Counter = Counter()
    if text in ("", "-"):
        return out
    pos = 0
    for m in _BRANCH_RE.finditer(text):
        if text[pos:m.start()].strip(" ,"):
            raise ScenarioError(f"cannot parse branch locus {text!r}")
        out[(int(m.group(1)), int(m.group(2)))] += int(m.group(3) or 1)
        pos = m.end()
    if text[pos:].strip(" ,"):
        raise ScenarioError(f"cannot parse branch locus {text!r}")
    return out


def format_branch(ms: Counter) -> str:
    """Shorthand in decreasing genus order, e.g. ``(3,-8)^2, (2,-4)^2``; empty locus is ``-``."""
    if not ms:
        return "-"
    parts = []
    for (g, s), k in sorted(ms.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
        parts.append(f"({g},{s})" + (f"^{k}" if k > 1 else ""))
    return ", ".join(parts)


@dataclass
class PinnedLift:
    group_file: Path
    embedding_words: list[str]
    vector_words: list[str]


@dataclass
class Scenario:
    name: str
    path: Path
    group_file: Path
    mode: str = "pinned"
    description: str = ""
    metadata: dict[str, str] = field(default_factory=dict)
    g0_candidates: list[list[str]] = field(default_factory=list)
    tau_prime: str | None = None  # None: smallest element outside G0
    signature: Signature | None = None
    hyperbolic: list[list[str]] = field(default_factory=list)
    branch: list[str] = field(default_factory=list)
    lift: str | PinnedLift | None = None
    expected: dict[str, Any] = field(default_factory=dict)
    data_per_family: int = 1

    @property
    def searches_vectors(self) -> bool:
        return self.mode in ("search-gv", "full-search")

    @property
    def searches_tau(self) -> bool:
        return self.mode in ("search-tau", "full-search") or self.tau_prime == "search"


def _resolve(base: Path, name: str) -> Path:
    p = (base / name).resolve()
    if p.exists():
        return p
    bundled = data_dir() / "groups" / name
    if bundled.exists():
        return bundled
    raise ScenarioError(f"group file {name!r} not found next to the scenario or in the bundled fixtures")


_EXPECTED_KEYS = {
    "genus_C", "q", "chi", "K2", "branch", "orbits_total", "orbits_nonbranch", "exceptional",
    "K2_min", "lift_order", "lift_type", "min_matches",
}


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError(f"{path}: expected a mapping at top level")
    base = path.parent
    mode = raw.get("mode", "pinned")
    if mode not in MODES:
        raise ScenarioError(f"{path}: unknown mode {mode!r}")
    if "group_file" not in raw:
        raise ScenarioError(f"{path}: missing group_file")
    sc = Scenario(
        name=str(raw.get("name", path.stem)),
        path=path,
        group_file=_resolve(base, raw["group_file"]),
        mode=mode,
        description=str(raw.get("description", "")).strip(),
        metadata={str(k): str(v) for k, v in (raw.get("metadata") or {}).items()},
        data_per_family=int(raw.get("data_per_family", 1)),
    )
    if "g0_candidates" in raw:
        sc.g0_candidates = [[str(w) for w in c] for c in raw["g0_candidates"]]
    elif "g0_generators" in raw:
        sc.g0_candidates = [[str(w) for w in (raw["g0_generators"] or [])]]
    tau = raw.get("tau_prime")
    sc.tau_prime = None if tau is None else str(tau)
    gv = raw.get("generating_vector") or {}
    sig = gv.get("signature", raw.get("signature"))
    if sig is None:
        raise ScenarioError(f"{path}: a signature is required")
    sc.signature = Signature.parse(str(sig))
    sc.hyperbolic = [[str(d), str(e)] for d, e in (gv.get("hyperbolic") or [])]
    sc.branch = [str(h) for h in (gv.get("branch") or [])]
    if not sc.searches_vectors and not gv:
        raise ScenarioError(f"{path}: mode {mode} needs a generating_vector")
    if not sc.g0_candidates:
        if sc.searches_vectors:
            raise ScenarioError(f"{path}: search modes need g0_generators or g0_candidates")
        sc.g0_candidates = [sc.branch + [w for pair in sc.hyperbolic for w in pair]]
    lift = raw.get("lift")
    if lift in (None, "none", False):
        sc.lift = None
    elif lift == "auto":
        sc.lift = "auto"
    elif isinstance(lift, dict):
        sc.lift = PinnedLift(
            _resolve(base, lift["group_file"]),
            [str(w) for w in lift["embedding_words"]],
            [str(w) for w in lift["vector_words"]],
        )
    else:
        raise ScenarioError(f"{path}: lift must be 'auto', 'none' or a mapping")
    expected = raw.get("expected") or {}
    unknown = set(expected) - _EXPECTED_KEYS
    if unknown:
        raise ScenarioError(f"{path}: unknown expected keys {sorted(unknown)}")
    sc.expected = dict(expected)
    if "branch" in sc.expected:
        parse_branch(str(sc.expected["branch"]))
    # every word must at least be syntactically valid
    for w in [*sc.branch, *(x for p in sc.hyperbolic for x in p), *(x for c in sc.g0_candidates for x in c)]:
        Word.parse(w)
    return sc
