"""Finite groups materialized as Cayley tables.

Elements are the integers ``0 .. order-1`` with ``0`` the identity.  Products
follow the right-action convention used by GAP and Magma: for permutations,
``p^(x*y) = (p^x)^y``, i.e. ``x`` is applied first.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

DEFAULT_ELEMENT_CAP = 10_000


class GroupError(ValueError):
    pass


class GroupTooLarge(GroupError):
    pass


# ---------------------------------------------------------------------------
# words

_FACTOR_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\^\s*([+-]?\d+))?\s*$")
_IDENTITY_WORDS = {"", "1", "id", "e", "()"}


@dataclass(frozen=True)
class Word:
    """A product of named generators raised to integer powers."""

    factors: tuple[tuple[str, int], ...] = ()

    @classmethod
    def parse(cls, text: str | "Word") -> "Word":
        if isinstance(text, Word):
            return text
        text = text.strip()
        if text in _IDENTITY_WORDS:
            return cls(())
        factors = []
        for part in text.split("*"):
            m = _FACTOR_RE.match(part)
            if m is None:
                raise GroupError(f"cannot parse word factor {part!r} in {text!r}")
            name, exp = m.group(1), m.group(2)
            factors.append((name, int(exp) if exp is not None else 1))
        return cls(tuple(factors))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(n if e == 1 else f"{n}^{e}" for n, e in self.factors)


# ---------------------------------------------------------------------------
# permutations


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse ``(1 2 3)(4 5)`` (1-based points) into a 0-based image tuple."""
    images = list(range(degree))
    text = text.strip()
    if text.replace(" ", "") == "()":
        return tuple(images)
    seen: set[int] = set()
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(tok) - 1 for tok in cyc.replace(",", " ").split()]
        for p in pts:
            if not 0 <= p < degree:
                raise GroupError(f"point {p + 1} outside 1..{degree}")
            if p in seen:
                raise GroupError(f"point {p + 1} repeated in {text!r}")
            seen.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise GroupError(f"malformed cycle notation {text!r}")
    return tuple(images)


def format_cycles(perm: Sequence[int]) -> str:
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        p = perm[start]
        while p != start:
            cyc.append(p)
            seen.add(p)
            p = perm[p]
        out.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(out) or "()"


# ---------------------------------------------------------------------------
# the group


class FiniteGroup:
    """A finite group given by its full multiplication table."""

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        generators: Mapping[str, int],
        *,
        element_labels: Sequence[object] | None = None,
        name: str = "",
        metadata: Mapping[str, str] | None = None,
        check: bool = True,
    ):
        self.table: list[list[int]] = [list(row) for row in table]
        self.order = len(self.table)
        self.generators: dict[str, int] = dict(generators)
        self.element_labels = list(element_labels) if element_labels is not None else None
        self.name = name
        self.metadata = dict(metadata or {})
        if check:
            self._check_table()
        self.inv = [row.index(0) for row in self.table]
        self._orders: list[int] | None = None
        self._words: dict[int, tuple[tuple[str, int], ...]] | None = None
        self._classes: dict[int, frozenset[int]] = {}
        if check and len(self.subgroup_generated(self.generators.values())) != self.order:
            raise GroupError("named generators do not generate the group")

    def _check_table(self) -> None:
        n = self.order
        if n == 0:
            raise GroupError("empty group")
        full = set(range(n))
        if self.table[0] != list(range(n)) or [row[0] for row in self.table] != list(range(n)):
            raise GroupError("element 0 is not the identity")
        for row in self.table:
            if len(row) != n or set(row) != full:
                raise GroupError("multiplication table row is not a permutation")
        for j in range(n):
            if {self.table[i][j] for i in range(n)} != full:
                raise GroupError("multiplication table column is not a permutation")

    def __repr__(self) -> str:
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def identity(self) -> int:
        return 0

    # arithmetic -----------------------------------------------------------

    def mul(self, *xs: int) -> int:
        t = self.table
        acc = 0
        for x in xs:
            acc = t[acc][x]
        return acc

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv[x], -k
        acc, base = 0, x
        while k:
            if k & 1:
                acc = self.table[acc][base]
            base = self.table[base][base]
            k >>= 1
        return acc

    def conjugate(self, x: int, g: int) -> int:
        """Return ``g x g^-1``."""
        t = self.table
        return t[t[g][x]][self.inv[g]]

    def commutator(self, a: int, b: int) -> int:
        """Return ``[a, b] = a b a^-1 b^-1``."""
        t, inv = self.table, self.inv
        return t[t[t[a][b]][inv[a]]][inv[b]]

    @property
    def orders(self) -> list[int]:
        if self._orders is None:
            orders = [0] * self.order
            t = self.table
            for x in range(self.order):
                k, y = 1, x
                while y != 0:
                    y = t[y][x]
                    k += 1
                orders[x] = k
            self._orders = orders
        return self._orders

    def element_order(self, x: int) -> int:
        return self.orders[x]

    def cyclic_subgroup(self, x: int) -> list[int]:
        out = [0]
        y = x
        while y != 0:
            out.append(y)
            y = self.table[y][x]
        return out

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    # subsets ----------------------------------------------------------------

    def conjugacy_class(self, x: int) -> frozenset[int]:
        cl = self._classes.get(x)
        if cl is None:
            t, inv = self.table, self.inv
            cl = frozenset(t[t[g][x]][inv[g]] for g in self.elements)
            for y in cl:
                self._classes[y] = cl
        return cl

    def centralizer(self, x: int) -> frozenset[int]:
        t = self.table
        return frozenset(g for g in self.elements if t[g][x] == t[x][g])

    def conjugacy_classes(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        classes = []
        for x in self.elements:
            if x not in seen:
                cl = self.conjugacy_class(x)
                seen |= cl
                classes.append(cl)
        return classes

    def subgroup_generated(self, elems: Iterable[int]) -> frozenset[int]:
        gens = [g for g in dict.fromkeys(elems) if g != 0]
        t = self.table
        seen = {0}
        queue = [0]
        for x in queue:
            row = t[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def generates(self, elems: Iterable[int]) -> bool:
        return len(self.subgroup_generated(elems)) == self.order

    def minimal_generators(self, elems: Iterable[int] | None = None) -> list[int]:
        """Greedy irredundant generating list drawn from ``elems`` (default: named generators)."""
        pool = list(self.generators.values()) if elems is None else list(elems)
        chosen: list[int] = []
        current = frozenset([0])
        for g in pool:
            if g not in current:
                chosen.append(g)
                current = self.subgroup_generated(chosen)
        for g in list(chosen):
            rest = [h for h in chosen if h != g]
            if len(self.subgroup_generated(rest)) == len(current):
                chosen = rest
        return chosen

    # words ------------------------------------------------------------------

    def evaluate_word(self, word: Word | str) -> int:
        word = Word.parse(word)
        acc = 0
        for name, exp in word.factors:
            try:
                g = self.generators[name]
            except KeyError:
                raise GroupError(f"unknown generator {name!r} in {self.name or 'group'}") from None
            acc = self.table[acc][self.power(g, exp)]
        return acc

    def element(self, x: int | Word | str) -> int:
        if isinstance(x, int):
            if not 0 <= x < self.order:
                raise GroupError(f"element index {x} out of range")
            return x
        return self.evaluate_word(x)

    def label(self, x: int) -> str:
        if self.element_labels is not None:
            lab = self.element_labels[x]
            return format_cycles(lab) if isinstance(lab, tuple) else str(lab)
        return f"#{x}"

    def word_for(self, x: int) -> Word:
        """A short positive word for ``x`` in the named generators.

        When every element is a product ``g1^e1 * g2^e2 * ...`` in generator
        order (as for polycyclic presentations) that collected form is used,
        preferring small exponents; otherwise a shortest word by BFS.
        """
        if self._words is None:
            self._words = self._collected_words() or self._bfs_words()
        return Word(self._words[x])

    def _collected_words(self, budget: int = 64) -> dict[int, tuple[tuple[str, int], ...]] | None:
        gens = list(self.generators.items())
        ranges = [range(self.element_order(g)) for _, g in gens]
        if math.prod(len(r) for r in ranges) > budget * self.order:
            return None
        best: dict[int, tuple] = {}
        for exps in itertools.product(*ranges):
            y = 0
            for (_, g), e in zip(gens, exps):
                for _ in range(e):
                    y = self.table[y][g]
            key = (max(exps, default=0), sum(exps), exps)
            if y not in best or key < best[y]:
                best[y] = key
        if len(best) != self.order:
            return None
        return {
            y: tuple((nm, e) for (nm, _), e in zip(gens, exps) if e)
            for y, (*_, exps) in best.items()
        }

    def _bfs_words(self) -> dict[int, tuple[tuple[str, int], ...]]:
        words: dict[int, tuple[str, ...]] = {0: ()}
        queue = [0]
        gens = list(self.generators.items())
        for y in queue:
            for nm, g in gens:
                z = self.table[y][g]
                if z not in words:
                    words[z] = words[y] + (nm,)
                    queue.append(z)
        out = {}
        for y, names in words.items():
            factors: list[tuple[str, int]] = []
            for nm in names:
                if factors and factors[-1][0] == nm:
                    factors[-1] = (nm, factors[-1][1] + 1)
                else:
                    factors.append((nm, 1))
            out[y] = tuple(factors)
        return out

    # sanity -----------------------------------------------------------------

    def check_associativity(self, samples: int = 1000, seed: int = 0) -> bool:
        rng = random.Random(seed)
        t = self.table
        n = self.order
        for _ in range(samples):
            x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if t[t[x][y]][z] != t[x][t[y][z]]:
                return False
        return True

    # derived groups ---------------------------------------------------------

    def subgroup(self, gens: Iterable[int], names: Sequence[str] | None = None) -> tuple["FiniteGroup", "GroupMap"]:
        """Materialize ``<gens>`` as its own group, with the embedding into ``self``.

        Elements are ordered breadth-first from the identity using ``gens`` in order.
        """
        gens = list(gens)
        if names is None:
            names = [f"s{i + 1}" for i in range(len(gens))]
        t = self.table
        elems = [0]
        index = {0: 0}
        for x in elems:
            for g in gens:
                y = t[x][g]
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
        table = [[index[t[a][b]] for b in elems] for a in elems]
        labels = None
        if self.element_labels is not None:
            labels = [self.element_labels[a] for a in elems]
        sub = FiniteGroup(
            table,
            {nm: index[g] for nm, g in zip(names, gens)},
            element_labels=labels,
            name=f"subgroup of {self.name}" if self.name else "subgroup",
            check=False,
        )
        emb = GroupMap(sub, self, tuple(elems), kind="embedding")
        return sub, emb


def build_group(
    perm_generators: Sequence[Sequence[int]] | Mapping[str, Sequence[int]],
    *,
    names: Sequence[str] | None = None,
    cap: int = DEFAULT_ELEMENT_CAP,
    name: str = "",
    metadata: Mapping[str, str] | None = None,
) -> FiniteGroup:
    """Close a set of permutations (0-based image tuples) into a Cayley table.

    Elements are enumerated breadth-first from the identity, applying the
    generators in their given order.
    """
    if isinstance(perm_generators, Mapping):
        names = list(perm_generators)
        perms = [tuple(p) for p in perm_generators.values()]
    else:
        perms = [tuple(p) for p in perm_generators]
        if names is None:
            names = [f"g{i + 1}" for i in range(len(perms))]
    if len(names) != len(perms):
        raise GroupError("one name per generator required")
    degree = max((len(p) for p in perms), default=0)
    for p in perms:
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise GroupError(f"not a permutation of {degree} points: {p}")

    def compose(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(y[i] for i in x)

    identity = tuple(range(degree))
    elems = [identity]
    index = {identity: 0}
    for x in elems:
        for p in perms:
            y = compose(x, p)
            if y not in index:
                if len(elems) >= cap:
                    raise GroupTooLarge(f"group too large: closure exceeds {cap} elements")
                index[y] = len(elems)
                elems.append(y)
    n = len(elems)
    table = [[index[compose(a, b)] for b in elems] for a in elems] if n else []
    gen_idx = {nm: index[p] for nm, p in zip(names, perms)}
    return FiniteGroup(table, gen_idx, element_labels=elems, name=name, metadata=metadata, check=True)


def load_group_file(path: str | Path, *, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteGroup:
    """Read the line-based group format.

    ``# key: value`` comment lines become metadata; ``degree N`` is required,
    ``order M`` is optional and asserted; each ``gK = (a b)(c d)`` line adds a
    generator.
    """
    path = Path(path)
    degree = None
    order = None
    gens: dict[str, str] = {}
    metadata: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if ":" in body:
                key, _, value = body.partition(":")
                metadata[key.strip()] = value.strip()
            continue
        if line.startswith("degree"):
            degree = int(line.split()[1])
        elif line.startswith("order"):
            order = int(line.split()[1])
        elif "=" in line:
            nm, _, cyc = line.partition("=")
            gens[nm.strip()] = cyc.strip()
        else:
            raise GroupError(f"{path}:{lineno}: cannot parse {raw!r}")
    if degree is None:
        raise GroupError(f"{path}: missing 'degree' header")
    perms = {nm: parse_cycles(c, degree) for nm, c in gens.items()}
    G = build_group(perms, cap=cap, name=metadata.get("name", path.stem), metadata=metadata)
    if order is not None and G.order != order:
        raise GroupError(f"{path}: declared order {order}, closure has {G.order}")
    return G


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class GroupMap:
    """A homomorphism tabulated on every source element."""

    source: FiniteGroup
    target: FiniteGroup
    table: tuple[int, ...]
    kind: str = "homomorphism"
    _inverse: dict[int, int] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.table) != self.source.order:
            raise GroupError("map table has wrong length")
        if self.table[0] != 0:
            raise GroupError("map does not send identity to identity")
        s, t = self.source.table, self.target.table
        m = self.table
        gens = list(self.source.generators.values()) or list(self.source.elements)
        for x in self.source.elements:
            for g in gens:
                if m[s[x][g]] != t[m[x]][m[g]]:
                    raise GroupError("map does not respect multiplication")
        if self.kind in ("embedding", "automorphism") and len(set(m)) != len(m):
            raise GroupError(f"{self.kind} is not injective")
        if self.kind == "automorphism" and self.source is not self.target:
            raise GroupError("automorphism must map a group to itself")
        object.__setattr__(self, "_inverse", {y: x for x, y in enumerate(m)})

    def __call__(self, x: int) -> int:
        return self.table[x]

    @property
    def images(self) -> dict[str, int]:
        return {nm: self.table[g] for nm, g in self.source.generators.items()}

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.table)

    def preimage(self, y: int) -> int:
        """Inverse lookup for injective maps; raises if ``y`` is not in the image."""
        try:
            return self._inverse[y]
        except KeyError:
            raise GroupError(f"element {y} is not in the image") from None

    def compose(self, other: "GroupMap") -> "GroupMap":
        """``self`` after ``other``."""
        kind = "automorphism" if self.kind == other.kind == "automorphism" else "homomorphism"
        return GroupMap(other.source, self.target, tuple(self.table[y] for y in other.table), kind=kind)

    def is_identity(self) -> bool:
        return self.source is self.target and all(self.table[x] == x for x in self.source.elements)


def extend_homomorphism(
    source: FiniteGroup, target: FiniteGroup, gens: Sequence[int], images: Sequence[int]
) -> dict[int, int] | None:
    """Extend ``gens[i] -> images[i]`` to ``<gens>``; ``None`` if no homomorphism exists."""
    s, t = source.table, target.table
    img = {0: 0}
    queue = [0]
    pairs = list(zip(gens, images))
    for x in queue:
        ix = img[x]
        for g, y in pairs:
            z = s[x][g]
            w = t[ix][y]
            prev = img.get(z)
            if prev is None:
                img[z] = w
                queue.append(z)
            elif prev != w:
                return None
    return img


def homomorphism_from_images(
    source: FiniteGroup, target: FiniteGroup, images: Mapping[str, int] | Sequence[int], kind: str = "homomorphism"
) -> GroupMap:
    names = list(source.generators)
    if isinstance(images, Mapping):
        imgs = [images[nm] for nm in names]
    else:
        imgs = list(images)
    ext = extend_homomorphism(source, target, [source.generators[nm] for nm in names], imgs)
    if ext is None or len(ext) != source.order:
        raise GroupError("generator images do not define a homomorphism")
    return GroupMap(source, target, tuple(ext[x] for x in source.elements), kind=kind)


def involutory_automorphisms(H0: FiniteGroup) -> list[GroupMap]:
    """All automorphisms ``psi`` of ``H0`` with ``psi o psi = id`` (identity included).

    Backtracking over images of an irredundant generating list: each image has
    the generator's order, and every partial assignment must extend to a
    homomorphism of the subgroup generated so far.
    """
    gens = H0.minimal_generators()
    orders = H0.orders
    by_order: dict[int, list[int]] = {}
    for x in H0.elements:
        by_order.setdefault(orders[x], []).append(x)
    found: list[GroupMap] = []

    def rec(k: int, imgs: list[int]) -> None:
        if k == len(gens):
            ext = extend_homomorphism(H0, H0, gens, imgs)
            if ext is None or len(set(ext.values())) != H0.order:
                return
            table = tuple(ext[x] for x in H0.elements)
            if all(table[table[g]] == g for g in gens):
                found.append(GroupMap(H0, H0, table, kind="automorphism"))
            return
        for y in by_order[orders[gens[k]]]:
            cand = imgs + [y]
            ext = extend_homomorphism(H0, H0, gens[: k + 1], cand)
            if ext is None:
                continue
            # injectivity on the partial subgroup
            if len(set(ext.values())) != len(ext):
                continue
            rec(k + 1, cand)

    rec(0, [])
    found.sort(key=lambda m: m.table)
    return found


def semidirect_z2(H0: FiniteGroup, psi: GroupMap) -> tuple[FiniteGroup, GroupMap]:
    """``H0 x| Z2`` on pairs ``(h, e)`` stored at index ``h + e*|H0|``.

    ``(h, e)(h', e') = (h * psi^e(h'), e + e')``.  Returns the group and the
    embedding ``h -> (h, 0)``.
    """
    if psi.source is not H0 or psi.target is not H0:
        raise GroupError("psi must be an automorphism of H0")
    n = H0.order
    p = psi.table
    if any(p[p[x]] != x for x in H0.elements):
        raise GroupError("psi is not involutory")
    t = H0.table
    table = []
    for e in (0, 1):
        for h in range(n):
            row = []
            for e2 in (0, 1):
                for h2 in range(n):
                    k = t[h][p[h2] if e else h2]
                    row.append(k + ((e + e2) % 2) * n)
            table.append(row)
    gens = dict(H0.generators)
    gens["t"] = n
    name = f"{H0.name} x| Z2" if H0.name else "semidirect product"
    H = FiniteGroup(table, gens, name=name, check=False)
    emb = GroupMap(H0, H, tuple(range(n)), kind="embedding")
    return H, emb


def group_signature(G: FiniteGroup) -> tuple:
    """Cheap isomorphism-invariant fingerprint: sorted (element order, class size) pairs."""
    orders = G.orders
    return tuple(sorted((orders[min(c)], len(c)) for c in G.conjugacy_classes()))
