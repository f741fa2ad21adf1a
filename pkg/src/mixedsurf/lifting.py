"""Degree-2 extensions ``H = G0 x| Z2`` acting on the same curve ``C``.

When ``C/G0`` is an elliptic curve with two branch points of equal index, or
an unbranched genus-2 quotient, the natural involution of ``C/G0`` lifts to
``C``.  We realize the lift combinatorially: build split extensions from
involutory automorphisms of ``G0`` and search for generating vectors of the
lifted type whose restriction to ``G0`` reproduces the fixed-point profile of
the original cover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cover import CoverData, GeneratingVector, Signature, hurwitz_genus, stabilizer_set
from .groups import FiniteGroup, GroupMap, involutory_automorphisms, semidirect_z2


class NoLiftRule(ValueError):
    pass


def lifted_signature(sig: Signature | str) -> Signature:
    sig = Signature.parse(sig)
    if sig.g_prime == 1 and sig.r == 2 and sig.periods[0] == sig.periods[1]:
        return Signature(0, (2, 2, 2, 2, sig.periods[0]))
    if sig.g_prime == 2 and sig.r == 0:
        return Signature(0, (2,) * 6)
    raise NoLiftRule(f"no lift rule for signature {sig}")


@dataclass(eq=False)
class LiftCandidate:
    H: FiniteGroup
    embedding: GroupMap  # G0 -> H
    W: GeneratingVector
    source_sig: Signature
    lifted_sig: Signature
    psi: GroupMap | None = None
    verified: bool = False
    cover: CoverData = field(init=False)

    def __post_init__(self):
        self.cover = CoverData(self.H, self.W, self.embedding)


def verify_lift_consistency(cand: LiftCandidate, V: GeneratingVector) -> list[str]:
    """Mismatches between the ``G0``-action seen through ``(H, W)`` and through ``V`` (empty means consistent)."""
    H, emb, W = cand.H, cand.embedding, cand.W
    G0 = V.group
    problems = []
    if emb.source is not G0 or emb.target is not H:
        return ["embedding does not map G0 into H"]
    if H.order != 2 * G0.order:
        problems.append(f"|H| = {H.order}, expected {2 * G0.order}")
    g0 = emb.image
    if cand.source_sig.g_prime == 1:
        free = W.branch[:-1]
        if W.branch and W.branch[-1] != emb(V.branch[0]):
            problems.append("final entry of W is not the first branch entry of V")
    else:
        free = W.branch
    inside = [i + 1 for i, h in enumerate(free) if h in g0 or H.element_order(h) != 2]
    if inside:
        problems.append(f"entries {inside} of W are not involutions outside G0")
    if problems:
        return problems
    bad = W.violations()
    if bad:
        return [f"W invalid: {b}" for b in bad]
    if hurwitz_genus(H.order, W.signature) != hurwitz_genus(G0.order, V.signature):
        return ["genus of C not preserved"]
    sigma_w = stabilizer_set(W) & g0
    sigma_v = frozenset(emb(x) for x in stabilizer_set(V))
    if sigma_w != sigma_v:
        problems.append(f"stabilizer sets differ on G0 ({len(sigma_w)} vs {len(sigma_v)} elements)")
    base = CoverData(G0, V)
    for f in range(1, G0.order):
        a = cand.cover.fixed_point_table[emb(f)]
        b = base.fixed_point_table[f]
        if a != b:
            problems.append(f"|Fix| of G0 element {f}: {a} via W, {b} via V")
    return problems


def _involutory_classes(G0: FiniteGroup) -> list[GroupMap]:
    """Involutory automorphisms up to ``psi ~ c_x o psi`` with ``x psi(x) = 1``.

    Both give split extensions that are isomorphic by a map fixing ``G0``.
    """
    psis = involutory_automorphisms(G0)
    seen: set[tuple[int, ...]] = set()
    out = []
    for psi in psis:
        if psi.table in seen:
            continue
        out.append(psi)
        p = psi.table
        for x in G0.elements:
            if G0.mul(x, p[x]) == 0:
                xi = G0.inv[x]
                seen.add(tuple(G0.mul(x, p[h], xi) for h in G0.elements))
    return out


def _search_vectors(
    H: FiniteGroup,
    emb: GroupMap,
    lifted: Signature,
    last: int | None,
    max_vectors: int | None,
) -> Iterable[GeneratingVector]:
    """Vectors of type ``lifted``: free order-2 entries from ``H \\ G0``, optional fixed final entry."""
    g0 = emb.image
    t, inv, orders = H.table, H.inv, H.orders
    outer = [x for x in H.elements if x not in g0 and orders[x] == 2]
    outer_set = set(outer)
    n_free = lifted.r - (1 if last is not None else 0)
    # first entry only up to conjugation by elements fixing the final entry
    fixer = [g for g in H.elements if last is None or t[g][last] == t[last][g]]
    firsts = []
    covered: set[int] = set()
    for x in outer:
        if x not in covered:
            firsts.append(x)
            covered |= {H.conjugate(x, g) for g in fixer}
    target = 0 if last is None else inv[last]  # product of the free entries
    seen_keys: set[tuple[int, ...]] = set()
    count = 0

    def rec(prefix: list[int], acc: int):
        nonlocal count
        k = len(prefix)
        if k == n_free - 1:
            x = t[inv[acc]][target]
            if x not in outer_set:
                return
            entries = prefix + [x]
            key = tuple(sorted(entries))
            if key in seen_keys:
                return
            branch = tuple(entries) + ((last,) if last is not None else ())
            if not H.generates(branch):
                return
            seen_keys.add(key)
            count += 1
            yield GeneratingVector(H, (), branch, lifted)
            return
        pool = firsts if k == 0 else outer
        for y in pool:
            yield from rec(prefix + [y], t[acc][y])
            if max_vectors is not None and count >= max_vectors:
                return

    yield from rec([], 0)


def search_lift(
    G0: FiniteGroup,
    V: GeneratingVector,
    extra_candidates: Sequence[tuple[FiniteGroup, GroupMap]] = (),
    *,
    max_vectors_per_group: int | None = None,
) -> list[LiftCandidate]:
    """Verified lifts of the involution of ``C/G0``, in canonical order."""
    if V.group is not G0:
        raise ValueError("V must be a generating vector for G0")
    lifted = lifted_signature(V.signature)
    groups: list[tuple[FiniteGroup, GroupMap, GroupMap | None]] = []
    for psi in _involutory_classes(G0):
        H, emb = semidirect_z2(G0, psi)
        groups.append((H, emb, psi))
    for H, emb in extra_candidates:
        groups.append((H, emb, None))
    out = []
    for H, emb, psi in groups:
        last = emb(V.branch[0]) if V.signature.g_prime == 1 else None
        for W in _search_vectors(H, emb, lifted, last, max_vectors_per_group):
            cand = LiftCandidate(H, emb, W, V.signature, lifted, psi)
            if not verify_lift_consistency(cand, V):
                cand.verified = True
                out.append(cand)
    return out
