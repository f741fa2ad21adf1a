"""Literal port of the reference ``CountingIntersections`` script.

Kept deliberately naive (it rebuilds each conjugate set for every ``g``) so it
stays independent of the tabulated counts in :mod:`mixedsurf.cover`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .groups import FiniteGroup


def counting_intersections(f: int, seq: Sequence[int], H: FiniteGroup) -> Fraction:
    """Number of fixed points of ``f`` on ``C``, given the branch entries ``seq`` of a vector for ``H``."""
    total = Fraction(0)
    for h in seq:
        c = 0
        K = H.subgroup_generated([h])
        for g in H.elements:
            if f in {H.mul(g, k, H.inv[g]) for k in K}:
                c += 1
        total += Fraction(c, len(K))
    return total


def script_orbit_curves(G: FiniteGroup, gv: Sequence[int], genus_minus_1: int) -> tuple[list[frozenset[int]], list[int]]:
    """Literal port of the reference orbit loop over ``G0 \\ R``.

    Returns the non-branch orbits (as sets of elements of ``G``) in discovery
    order and the indices of those with ``D^2 = K.D = -1``.  Elements stay in
    ``G``; ``G0`` is the subgroup generated by ``gv``.
    """
    G0 = G.subgroup_generated(gv)
    t = min(x for x in G.elements if x not in G0)
    ti = G.inv[t]
    O2 = {x for x in G.elements if x not in G0 and G.element_order(x) == 2}
    R = {G.mul(t, x) for x in O2}
    H0, emb = G.subgroup(list(gv))
    seq = [emb.preimage(x) for x in gv]

    def count(x: int) -> Fraction:
        return counting_intersections(emb.preimage(x), seq, H0)

    curves = []
    P = set(G0) - R
    while P:
        f = min(P)
        fi = G.inv[f]
        gamma = {G.mul(t, h, ti, f, G.inv[h]) for h in G0}
        gamma |= {G.mul(t, t, h, fi, t, G.inv[h], ti) for h in G0}
        curves.append(frozenset(gamma))
        P -= gamma
    exceptional = []
    for a, gamma in enumerate(curves):
        n = len(gamma)
        self_int = Fraction(-2 * n * genus_minus_1)
        gk = Fraction(4 * n * genus_minus_1)
        for g1 in gamma:
            g1i = G.inv[g1]
            for g2 in gamma - {g1}:
                self_int += count(G.mul(g1i, g2))
            for r in R:
                gk -= count(G.mul(g1i, r))
        if self_int / G.order == -1 and gk / G.order == -1:
            exceptional.append(a)
    return curves, exceptional
