"""Semi-isogenous mixed data ``(G, G0, tau', V)`` and the invariants of ``X = (C x C)/G``."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cover import CoverData, GeneratingVector, stabilizer_set
from .groups import FiniteGroup, GroupMap, Word


class DatumError(ValueError):
    """The data do not define a semi-isogenous mixed surface."""

    def __init__(self, message: str, witnesses: Sequence[int] = ()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class InvariantError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BranchComponent:
    rep: int  # element of O2 in G
    class_size: int
    centralizer_size: int
    genus: int
    self_int: int
    graph_rep: int  # tau' * rep, an element of G0


@dataclass(frozen=True)
class SurfaceInvariants:
    genus_C: int
    q: int
    chi: int
    K2: int
    branch: tuple[BranchComponent, ...]
    pa_B_minus_1: int

    @property
    def pg(self) -> int:
        return self.chi - 1 + self.q

    def branch_multiset(self) -> Counter:
        return Counter((b.genus, b.self_int) for b in self.branch)


@dataclass(eq=False)
class MixedDatum:
    G: FiniteGroup
    G0: FiniteGroup
    embedding: GroupMap  # G0 -> G
    tau_prime: int  # element of G outside G0
    V: GeneratingVector  # over G0
    tau: int = field(init=False)  # tau'^2, in G0
    phi: GroupMap = field(init=False)  # h -> tau' h tau'^-1 on G0
    cover0: CoverData = field(init=False)

    def __post_init__(self):
        G, emb = self.G, self.embedding
        t = self.tau_prime
        self.tau = emb.preimage(G.mul(t, t))
        table = tuple(emb.preimage(G.conjugate(emb(h), t)) for h in self.G0.elements)
        self.phi = GroupMap(self.G0, self.G0, table, kind="automorphism")
        self.cover0 = CoverData(self.G0, self.V)

    @property
    def genus_C(self) -> int:
        return self.cover0.genus

    @cached_property
    def g0_in_G(self) -> frozenset[int]:
        return self.embedding.image

    @cached_property
    def o2(self) -> frozenset[int]:
        return o2_set(self)

    @cached_property
    def ramification(self) -> tuple[int, ...]:
        return ramification_reps(self)


def _resolve_g0(G: FiniteGroup, g0_generators) -> tuple[FiniteGroup, GroupMap]:
    if isinstance(g0_generators, GroupMap):
        if g0_generators.target is not G:
            raise DatumError("G0 embedding does not land in G")
        return g0_generators.source, g0_generators
    gens = [G.element(x) for x in g0_generators]
    return G.subgroup(gens)


def build_mixed_datum(
    G: FiniteGroup,
    g0_generators: Sequence[Word | str | int] | GroupMap,
    tau_prime: Word | str | int | None,
    V: GeneratingVector,
) -> MixedDatum:
    """Assemble and validate a datum.

    ``g0_generators`` is either a list of elements/words of ``G`` or an already
    built embedding ``G0 -> G``.  ``V`` may live in ``G`` (entries inside
    ``G0``) or in ``G0`` itself.  ``tau_prime=None`` picks the smallest element
    of ``G`` outside ``G0``.
    """
    G0, emb = _resolve_g0(G, g0_generators)
    if 2 * G0.order != G.order:
        raise DatumError(f"[G : G0] = {Fraction(G.order, G0.order)}, expected 2")
    g0_set = emb.image
    if tau_prime is None:
        t = min(x for x in G.elements if x not in g0_set)
    else:
        t = G.element(tau_prime)
    if t in g0_set:
        raise DatumError("tau' lies in G0: the action is not mixed", [t])
    for x in G0.generators.values():
        if G.conjugate(emb(x), t) not in g0_set:
            raise DatumError("G0 is not normalized by tau'", [emb(x)])
    if V.group is G:
        outside = [x for x in V.entries if x not in g0_set]
        if outside:
            raise DatumError("generating vector entries outside G0", outside)
        V = GeneratingVector(
            G0,
            tuple((emb.preimage(d), emb.preimage(e)) for d, e in V.hyperbolic),
            tuple(emb.preimage(h) for h in V.branch),
            V.signature,
        )
    elif V.group is not G0:
        raise DatumError("generating vector belongs to neither G nor G0")
    problems = V.violations()
    if problems:
        raise DatumError("V is not a generating vector for G0: " + "; ".join(problems))
    d = MixedDatum(G, G0, emb, t, V)
    witness = check_free(d)
    if witness is not None:
        raise DatumError("G0 does not act freely: Sigma_V meets phi(Sigma_V)", [emb(witness)])
    return d


def check_free(d: MixedDatum) -> int | None:
    """``None`` if ``Sigma_V`` and ``phi(Sigma_V)`` meet only in 1, else a nontrivial common element.

    Witnesses are searched branch entry by branch entry (powers, then
    conjugates), so with ``phi = id`` the witness is ``h_1``.
    """
    sigma = stabilizer_set(d.V)
    common = sigma & frozenset(d.phi(x) for x in sigma)
    if common == {0}:
        return None
    G0 = d.G0
    for h in d.V.branch:
        for k in G0.cyclic_subgroup(h)[1:]:
            if k in common:
                return k
            hits = sorted(G0.conjugacy_class(k) & common)
            if hits:
                return hits[0]
    raise InvariantError("common stabilizer outside the conjugates of the branch entries")


def o2_set(d: MixedDatum) -> frozenset[int]:
    G = d.G
    g0 = d.g0_in_G
    return frozenset(x for x in G.elements if x not in g0 and G.element_order(x) == 2)


def ramification_reps(d: MixedDatum) -> tuple[int, ...]:
    """Sorted ``{tau' g : g in O2}`` as elements of ``G0``."""
    G = d.G
    out = []
    for g in d.o2:
        x = G.mul(d.tau_prime, g)
        if x not in d.g0_in_G:
            raise InvariantError("tau' g escaped G0")
        out.append(d.embedding.preimage(x))
    if len(set(out)) != len(out):
        raise InvariantError("distinct elements of O2 gave the same graph")
    return tuple(sorted(out))


def branch_components(d: MixedDatum) -> tuple[BranchComponent, ...]:
    from .divisors import fill_intersections, graph_actions, graph_orbit

    G = d.G
    acts = graph_actions(d, d.cover0) if d.o2 else None
    seen: set[int] = set()
    comps = []
    for g in sorted(d.o2):
        if g in seen:
            continue
        cls = G.conjugacy_class(g)
        seen |= cls
        zsize = G.order // len(cls)
        genus = Fraction(2 * (d.genus_C - 1), zsize) + 1
        if genus.denominator != 1:
            raise InvariantError(f"non-integral branch genus {genus}")
        graph = d.embedding.preimage(G.mul(d.tau_prime, g))
        D = fill_intersections(graph_orbit(d, d.cover0, graph, acts), d, d.cover0)
        if not D.is_branch or D.n != len(cls):
            raise InvariantError("branch orbit does not match the conjugacy class")
        if D.pa != genus:
            raise InvariantError(f"adjunction genus {D.pa} differs from centralizer genus {genus}")
        comps.append(BranchComponent(g, len(cls), zsize, int(genus), D.D2, graph))
    return tuple(comps)


def surface_invariants(d: MixedDatum) -> SurfaceInvariants:
    branch = branch_components(d)
    pa_minus_1 = sum(b.genus - 1 for b in branch)
    chi = Fraction((d.genus_C - 1) ** 2, d.G.order) - Fraction(pa_minus_1, 2)
    if chi.denominator != 1:
        raise InvariantError(f"non-integral chi = {chi}")
    K2 = 8 * chi - pa_minus_1
    return SurfaceInvariants(
        genus_C=d.genus_C,
        q=d.V.signature.g_prime,
        chi=int(chi),
        K2=int(K2),
        branch=branch,
        pa_B_minus_1=pa_minus_1,
    )


_BOUND = {8: 0, 7: 0, 6: 0, 5: 1, 4: 1, 3: 2, 2: 2, 1: 3}


def max_exceptional_bound(K2: int) -> int:
    """Maximal number of (-1)-curves contracted to reach the minimal model."""
    try:
        return _BOUND[K2]
    except KeyError:
        raise ValueError(f"bound only known for 1 <= K^2 <= 8, got {K2}") from None
