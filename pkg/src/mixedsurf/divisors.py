"""Orbit divisors on ``X = (C x C)/G`` induced by graphs of automorphisms in ``H >= G0``.

For ``f`` in ``H`` the graph ``Delta_f`` is moved by ``G`` as

    h (Delta_f)     = Delta_{phi(h) f h^-1}
    tau' h (Delta_f) = Delta_{tau h f^-1 phi(h^-1)}        (h in G0)

and two distinct graphs meet transversally in ``|Fix(f1^-1 f2)|`` points.
All numbers below are exact; anything non-integral raises.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cover import CoverData
from .mixed import MixedDatum, max_exceptional_bound, surface_invariants


class IntersectionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class OrbitDivisor:
    rep: int  # smallest element of the orbit, an element of H
    orbit: tuple[int, ...]
    is_branch: bool
    D2: int | None = None
    KD: int | None = None
    pa: int | None = None

    @property
    def n(self) -> int:
        return len(self.orbit)

    @property
    def is_exceptional(self) -> bool:
        return self.D2 == -1 and self.KD == -1


def _ramification_in_H(d: MixedDatum, cover: CoverData) -> frozenset[int]:
    return frozenset(cover.embed(x) for x in d.ramification)


def graph_actions(d: MixedDatum, cover: CoverData):
    """Pairs ``(left, right)`` for ``f -> left f right`` and ``f -> left f^-1 right``."""
    H = cover.group
    emb, phi = cover.embed, d.phi
    G0 = d.G0
    tau = emb(d.tau)
    plain = []
    twisted = []
    for h in G0.elements:
        hh = emb(h)
        plain.append((emb(phi(h)), H.inv[hh]))
        twisted.append((H.mul(tau, hh), emb(phi(G0.inv[h]))))
    return plain, twisted


def graph_orbit(d: MixedDatum, cover: CoverData, f: int, actions=None) -> OrbitDivisor:
    """Closure of ``{f}`` under the ``G``-action on graphs (intersections left unfilled)."""
    H = cover.group
    if not 0 <= f < H.order:
        raise ValueError(f"element {f} not in H")
    if cover.genus != d.genus_C:
        raise IntersectionError("cover genus differs from g(C) of the datum")
    plain, twisted = actions or graph_actions(d, cover)
    t, inv = H.table, H.inv
    seen = {f}
    queue = [f]
    for x in queue:
        xi = inv[x]
        for a, b in plain:
            y = t[t[a][x]][b]
            if y not in seen:
                seen.add(y)
                queue.append(y)
        for a, b in twisted:
            y = t[t[a][xi]][b]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    ram = _ramification_in_H(d, cover)
    inside = seen & ram
    if inside and inside != seen:
        raise IntersectionError("orbit mixes ramification and non-ramification graphs")
    orbit = tuple(sorted(seen))
    return OrbitDivisor(orbit[0], orbit, bool(inside))


def graph_orbits(d: MixedDatum, cover: CoverData) -> list[OrbitDivisor]:
    """Partition of ``H`` into graph orbits, by increasing representative."""
    acts = graph_actions(d, cover)
    remaining = set(cover.group.elements)
    out = []
    while remaining:
        D = graph_orbit(d, cover, min(remaining), acts)
        remaining -= set(D.orbit)
        out.append(D)
    return out


def graph_intersection(f1: int, f2: int, cover: CoverData) -> int:
    if f1 == f2:
        raise ValueError("a graph has no transversal self-intersection; use the closed formula")
    H = cover.group
    return cover.fixed_point_table[H.mul(H.inv[f1], f2)]


def _exact(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise IntersectionError(f"non-integral {what}: {x}")
    return int(x)


def _pair_sum(a: Sequence[int], b: Sequence[int], cover: CoverData) -> int:
    H = cover.group
    t, inv = H.table, H.inv
    fix = cover.fixed_point_table
    return sum(fix[t[inv[x]][y]] for x in a for y in b)


def fill_intersections(D: OrbitDivisor, d: MixedDatum, cover: CoverData) -> OrbitDivisor:
    H = cover.group
    t, inv = H.table, H.inv
    fix = cover.fixed_point_table
    g1 = cover.genus - 1
    n = D.n
    order = d.G.order
    orb = D.orbit
    s = sum(fix[t[inv[orb[i]]][orb[j]]] for i in range(n) for j in range(i + 1, n))
    if D.is_branch:
        D2 = Fraction(-8 * g1 * n + 8 * s, order)
        KD = Fraction(12 * g1 * n, order)
    else:
        ram = sorted(_ramification_in_H(d, cover))
        r = _pair_sum(orb, ram, cover)
        D2 = Fraction(-2 * g1 * n + 2 * s, order)
        KD = Fraction(4 * g1 * n - r, order)
    d2 = _exact(D2, "D^2")
    kd = _exact(KD, "K.D")
    pa = _exact(1 + Fraction(d2 + kd, 2), "arithmetic genus")
    if pa < 0:
        raise IntersectionError(f"negative arithmetic genus {pa}")
    return dataclasses.replace(D, D2=d2, KD=kd, pa=pa)


def divisor_pair_intersection(D: OrbitDivisor, E: OrbitDivisor, d: MixedDatum, cover: CoverData) -> int:
    if D.rep == E.rep:
        raise ValueError("orbit divisors must be distinct")
    if D.is_branch and E.is_branch:
        return 0
    alpha = 2 if D.is_branch != E.is_branch else 1
    return _exact(Fraction(alpha * _pair_sum(D.orbit, E.orbit, cover), d.G.order), "D.D'")


def orbit_divisors(d: MixedDatum, cover: CoverData | None = None) -> list[OrbitDivisor]:
    """All orbit divisors induced by ``H`` with their intersection numbers."""
    cover = cover or d.cover0
    return [fill_intersections(D, d, cover) for D in graph_orbits(d, cover)]


def find_exceptional(
    d: MixedDatum, cover: CoverData | None = None, divisors: list[OrbitDivisor] | None = None
) -> list[OrbitDivisor]:
    """Non-branch orbit divisors with ``D^2 = K.D = -1``.

    Branch curves are skipped: their genus ``2(g(C)-1)/|Z(g)| + 1`` is positive.
    """
    cover = cover or d.cover0
    if divisors is None:
        divisors = orbit_divisors(d, cover)
    found = [D for D in divisors if not D.is_branch and D.is_exceptional]
    K2 = surface_invariants(d).K2
    if 1 <= K2 <= 8 and len(found) > max_exceptional_bound(K2):
        raise IntersectionError(
            f"{len(found)} (-1)-curves exceed the bound {max_exceptional_bound(K2)} for K^2 = {K2}"
        )
    return found


@dataclass(frozen=True)
class MinimalModelReport:
    K2: int
    found: tuple[OrbitDivisor, ...]
    bound: int | None
    pairwise: tuple[tuple[int, ...], ...]
    disjoint: bool
    K2_min: int | None
    K2_min_range: tuple[int, int] | None
    verdict: str


def minimal_model_report(
    d: MixedDatum, cover: CoverData | None = None, found: Sequence[OrbitDivisor] | None = None
) -> MinimalModelReport:
    cover = cover or d.cover0
    if found is None:
        found = find_exceptional(d, cover)
    found = tuple(found)
    K2 = surface_invariants(d).K2
    pairwise = tuple(
        tuple(0 if i == j else divisor_pair_intersection(a, b, d, cover) for j, b in enumerate(found))
        for i, a in enumerate(found)
    )
    disjoint = all(pairwise[i][j] == 0 for i in range(len(found)) for j in range(len(found)) if i != j)
    bound = max_exceptional_bound(K2) if 1 <= K2 <= 8 else None
    K2_min = None
    rng = None
    if bound is None:
        verdict = "undetermined: no contraction bound for this K^2"
    elif not disjoint:
        verdict = "undetermined: exceptional curves meet"
    elif len(found) == bound:
        K2_min = K2 + len(found)
        verdict = "minimal" if not found else f"not minimal: contract {len(found)}"
    else:
        rng = (K2 + len(found), K2 + bound)
        verdict = f"undetermined: found {len(found)} of at most {bound}"
    return MinimalModelReport(K2, found, bound, pairwise, disjoint, K2_min, rng, verdict)
