"""Generating vectors and Galois covers ``C -> C/H``."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .groups import FiniteGroup, GroupMap, Word


class InadmissibleSignature(ValueError):
    pass


class CoverInconsistency(ArithmeticError):
    """A rational quantity that must be integral came out fractional."""


# ---------------------------------------------------------------------------
# signatures

_SIG_RE = re.compile(r"^\s*\[\s*(\d+)\s*;(.*)\]\s*$")


@dataclass(frozen=True)
class Signature:
    g_prime: int
    periods: tuple[int, ...] = ()

    def __post_init__(self):
        if self.g_prime < 0:
            raise InadmissibleSignature("quotient genus must be >= 0")
        if any(m < 2 for m in self.periods):
            raise InadmissibleSignature(f"periods must be >= 2: {self.periods}")
        object.__setattr__(self, "periods", tuple(sorted(self.periods)))

    @classmethod
    def parse(cls, text: str | "Signature") -> "Signature":
        """Accepts ``[1;2,2]``, ``[0; 2^5]``, ``[3;-]`` and ``[2;]``."""
        if isinstance(text, Signature):
            return text
        m = _SIG_RE.match(text)
        if m is None:
            raise InadmissibleSignature(f"cannot parse signature {text!r}")
        g = int(m.group(1))
        body = m.group(2).strip()
        periods: list[int] = []
        if body not in ("", "-"):
            for tok in body.split(","):
                tok = tok.strip()
                base, _, power = tok.partition("^")
                periods.extend([int(base)] * (int(power) if power else 1))
        return cls(g, tuple(periods))

    @property
    def r(self) -> int:
        return len(self.periods)

    def __str__(self) -> str:
        if not self.periods:
            return f"[{self.g_prime};-]"
        parts = []
        for m, grp in itertools.groupby(self.periods):
            k = len(list(grp))
            parts.append(f"{m}^{k}" if k > 1 else str(m))
        return f"[{self.g_prime};{','.join(parts)}]"


def hurwitz_genus(order: int, sig: Signature | str) -> int:
    """Genus ``g`` with ``2g - 2 = |H| (2g' - 2 + sum (m_i - 1)/m_i)``."""
    sig = Signature.parse(sig)
    if order < 1:
        raise InadmissibleSignature("group order must be positive")
    rhs = order * (2 * sig.g_prime - 2 + sum((Fraction(m - 1, m) for m in sig.periods), Fraction(0)))
    g = (rhs + 2) / 2
    if g.denominator != 1 or g < 0:
        raise InadmissibleSignature(f"inadmissible signature {sig} for order {order}: genus {g}")
    return int(g)


# ---------------------------------------------------------------------------
# generating vectors


@dataclass(frozen=True, eq=False)
class GeneratingVector:
    group: FiniteGroup
    hyperbolic: tuple[tuple[int, int], ...]
    branch: tuple[int, ...]
    signature: Signature

    @classmethod
    def from_words(
        cls,
        group: FiniteGroup,
        signature: Signature | str,
        branch: Sequence[str | Word | int] = (),
        hyperbolic: Sequence[Sequence[str | Word | int]] = (),
    ) -> "GeneratingVector":
        return cls(
            group,
            tuple((group.element(d), group.element(e)) for d, e in hyperbolic),
            tuple(group.element(h) for h in branch),
            Signature.parse(signature),
        )

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for pair in self.hyperbolic for x in pair) + self.branch

    def product(self) -> int:
        G = self.group
        acc = 0
        for d, e in self.hyperbolic:
            acc = G.mul(acc, G.commutator(d, e))
        for h in self.branch:
            acc = G.mul(acc, h)
        return acc

    def violations(self) -> list[str]:
        """Every violated clause of the definition, one message each (empty means valid)."""
        G = self.group
        out = []
        if len(self.hyperbolic) != self.signature.g_prime:
            out.append(f"expected {self.signature.g_prime} hyperbolic pairs, got {len(self.hyperbolic)}")
        if len(self.branch) != self.signature.r:
            out.append(f"expected {self.signature.r} branch entries, got {len(self.branch)}")
        if self.product() != 0:
            out.append("product relation fails: prod [d_i,e_i] * h_1 ... h_r != 1")
        orders = sorted(G.element_order(h) for h in self.branch)
        if orders != list(self.signature.periods):
            out.append(f"branch entry orders {orders} do not match periods {list(self.signature.periods)}")
        if not G.generates(self.entries):
            out.append(
                f"entries generate a subgroup of order {len(G.subgroup_generated(self.entries))}, not {G.order}"
            )
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def mapped(self, f: GroupMap) -> "GeneratingVector":
        """The image vector under a homomorphism (e.g. an embedding or automorphism)."""
        return GeneratingVector(
            f.target,
            tuple((f(d), f(e)) for d, e in self.hyperbolic),
            tuple(f(h) for h in self.branch),
            self.signature,
        )

    def describe(self) -> dict:
        G = self.group
        return {
            "signature": str(self.signature),
            "hyperbolic": [[G.label(d), G.label(e)] for d, e in self.hyperbolic],
            "branch": [G.label(h) for h in self.branch],
        }


def validate_generating_vector(V: GeneratingVector) -> list[str]:
    return V.violations()


def stabilizer_set(V: GeneratingVector) -> frozenset[int]:
    """Elements of ``H`` with a fixed point on ``C``: all conjugates of powers of the branch entries."""
    G = V.group
    out = {0}
    for h in V.branch:
        for k in G.cyclic_subgroup(h):
            out |= G.conjugacy_class(k)
    return frozenset(out)


# ---------------------------------------------------------------------------
# covers


@dataclass(eq=False)
class CoverData:
    """A Galois cover ``C -> C/H`` given by ``(H, W)``.

    ``embedding`` maps a designated subgroup (normally ``G0``) into ``H``; it is
    ``None`` when ``H`` is that subgroup itself.
    """

    group: FiniteGroup
    vector: GeneratingVector
    embedding: GroupMap | None = None
    genus: int = field(init=False)

    def __post_init__(self):
        if self.vector.group is not self.group:
            raise ValueError("generating vector lives in a different group")
        self.genus = hurwitz_genus(self.group.order, self.vector.signature)

    @cached_property
    def fixed_point_table(self) -> tuple[int, ...]:
        """``|Fix(f)|`` for every ``f`` in ``H``; entry 0 (the identity) is set to 0."""
        G = self.group
        t, inv = G.table, G.inv
        # sum_j (1/m_j) #{g : f in g K_j g^-1}, over the common denominator L
        L = math.lcm(*self.vector.signature.periods) if self.vector.branch else 1
        total = [0] * G.order
        for h in self.vector.branch:
            K = G.cyclic_subgroup(h)
            w = L // len(K)
            for g in G.elements:
                row, gi = t[g], inv[g]
                for k in K:
                    total[t[row[k]][gi]] += w
        out = [0] * G.order
        for f in range(1, G.order):
            if total[f] % L:
                raise CoverInconsistency(f"non-integral fixed point count {Fraction(total[f], L)} for element {f}")
            out[f] = total[f] // L
        return tuple(out)

    def fixed_point_count(self, f: int) -> int:
        return fixed_point_count(f, self)

    @cached_property
    def stabilizers(self) -> frozenset[int]:
        return stabilizer_set(self.vector)

    def embed(self, x: int) -> int:
        return x if self.embedding is None else self.embedding(x)


def fixed_point_count(f: int, cover: CoverData) -> int:
    """Number of points of ``C`` fixed by ``f != 1``."""
    if f == 0:
        raise ValueError("count undefined for identity")
    if not 0 <= f < cover.group.order:
        raise ValueError(f"element {f} not in the cover group")
    return cover.fixed_point_table[f]


# ---------------------------------------------------------------------------
# enumeration


def enumerate_generating_vectors(
    H: FiniteGroup, sig: Signature | str, limit: int | None = None
) -> Iterator[GeneratingVector]:
    """Yield generating vectors of the given type in a deterministic order.

    Entries are tried in increasing element index; the last branch entry is
    solved from the product relation (or, when ``r = 0``, the relation is
    checked directly).  Vectors are not reduced modulo Hurwitz moves or
    automorphisms of ``H``.
    """
    sig = Signature.parse(sig)
    hurwitz_genus(H.order, sig)
    if limit is not None and limit <= 0:
        return
    t, inv, orders = H.table, H.inv, H.orders
    elems = list(H.elements)
    of_order = {m: [x for x in elems if orders[x] == m] for m in set(sig.periods)}
    periods = sig.periods
    r = len(periods)
    count = 0
    for hyp in itertools.product(elems, repeat=2 * sig.g_prime):
        acc = 0
        pairs = []
        for i in range(sig.g_prime):
            d, e = hyp[2 * i], hyp[2 * i + 1]
            acc = t[acc][H.commutator(d, e)]
            pairs.append((d, e))
        pairs_t = tuple(pairs)
        if r == 0:
            if acc != 0 or not H.generates(hyp):
                continue
            yield GeneratingVector(H, pairs_t, (), sig)
            count += 1
            if limit is not None and count >= limit:
                return
            continue
        for head in itertools.product(*(of_order[m] for m in periods[:-1])):
            p = acc
            for h in head:
                p = t[p][h]
            last = inv[p]
            if orders[last] != periods[-1]:
                continue
            branch = head + (last,)
            if not H.generates(hyp + branch):
                continue
            yield GeneratingVector(H, pairs_t, branch, sig)
            count += 1
            if limit is not None and count >= limit:
                return
