"""Random small groups and data shared by the property tests and the acceptance fuzz."""

from __future__ import annotations

import functools
import random

from mixedsurf.cover import CoverData, GeneratingVector, InadmissibleSignature, Signature, enumerate_generating_vectors
from mixedsurf.groups import FiniteGroup, GroupTooLarge, build_group, group_signature, load_group_file
from mixedsurf.mixed import DatumError, MixedDatum, build_mixed_datum
from mixedsurf.scenario import data_dir

MAX_ORDER = 64
BRANCHED_TYPES = ("[1;2^2]", "[0;2^4]")
GROUPS = data_dir() / "groups"
_FIXTURES = sorted(p.name for p in GROUPS.glob("sg*.grp"))


@functools.lru_cache(maxsize=None)
def _fixture(name: str) -> FiniteGroup:
    return load_group_file(GROUPS / name)


def _random_perm(rng: random.Random, n: int) -> list[int]:
    pts = rng.sample(range(n), rng.randint(2, n))
    img = pts[:]
    rng.shuffle(img)
    p = list(range(n))
    for x, y in zip(pts, img):
        p[x] = y
    return p


def random_perm_group(rng: random.Random, max_order: int = MAX_ORDER) -> FiniteGroup | None:
    """Either a few random permutations of up to 9 points, or a random subgroup of a bundled fixture."""
    if rng.random() < 0.5:
        n = rng.randint(3, 9)
        gens = [_random_perm(rng, n) for _ in range(rng.randint(1, 3))]
    else:
        big = _fixture(rng.choice(_FIXTURES))
        gens = [big.element_labels[rng.randrange(1, big.order)] for _ in range(rng.randint(1, 3))]
    n = len(gens[0])
    gens = [g for g in gens if list(g) != list(range(n))]
    if not gens:
        return None
    try:
        return build_group(gens, cap=max_order)
    except GroupTooLarge:
        return None


def branched_vector(H: FiniteGroup) -> GeneratingVector | None:
    """``(x_1, ..., x_k, (x_1 ... x_k)^-1)`` from the named generators, dropping a trivial tail."""
    gens = list(H.generators.values())
    last = H.inv[H.mul(*gens)] if len(gens) > 1 else H.inv[gens[0]]
    branch = gens + ([last] if last != 0 else [])
    if len(branch) < 2:
        return None
    sig = Signature(0, tuple(H.element_order(h) for h in branch))
    # keep entries aligned with the sorted periods
    branch.sort(key=H.element_order)
    return GeneratingVector(H, (), tuple(branch), sig)


def unbranched_vector(H: FiniteGroup) -> GeneratingVector:
    """Type ``[k+1;-]`` with pairs ``(x, 1)`` and one extra trivial pair."""
    pairs = tuple((x, 0) for x in H.generators.values()) + ((0, 0),)
    return GeneratingVector(H, pairs, (), Signature(len(pairs)))


def cover_for(H: FiniteGroup) -> CoverData:
    V = branched_vector(H)
    if V is None or not V.is_valid():
        V = unbranched_vector(H)
    return CoverData(H, V)


def odd_permutation_datum(G: FiniteGroup, branched: bool = True) -> MixedDatum | None:
    """``G0 = G`` intersected with the alternating group, ``tau'`` the first odd element."""
    labels = G.element_labels
    if not labels:
        return None

    def sign(p) -> int:
        seen, s = set(), 0
        for i in range(len(p)):
            j, length = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                length += 1
            if length:
                s += length - 1
        return s % 2

    even = [x for x in G.elements if sign(labels[x]) == 0]
    if len(even) * 2 != G.order or len(even) < 2:
        return None
    G0, emb = G.subgroup(G.minimal_generators(even))
    if branched:
        for sig in BRANCHED_TYPES:
            try:
                for V in enumerate_generating_vectors(G0, sig, limit=200):
                    try:
                        return build_mixed_datum(G, emb, None, V)
                    except DatumError:
                        continue
            except InadmissibleSignature:
                continue
    try:
        return build_mixed_datum(G, emb, None, unbranched_vector(G0))
    except DatumError:
        return None


def distinct_key(G: FiniteGroup) -> tuple:
    return (G.order, group_signature(G))

