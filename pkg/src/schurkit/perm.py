"""Permutations and permutation groups with a Schreier-Sims stabilizer chain.

Points are ``0..n-1``. Permutations act on the right: ``x^(ab) = (x^a)^b``,
so ``(a * b).images[x] == b.images[a.images[x]]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

DEGREE_CAP = 10_000


class Perm:
    """A permutation of ``{0..n-1}`` stored as an image array."""

    __slots__ = ("images", "_key")

    def __init__(self, images: Sequence[int] | np.ndarray, check: bool = True):
        arr = np.asarray(images, dtype=np.int64)
        if check:
            n = len(arr)
            if arr.ndim != 1 or n and not np.array_equal(np.sort(arr), np.arange(n)):
                raise ValueError(f"not a permutation: {list(arr)}")
        arr.setflags(write=False)
        self.images = arr
        self._key = None

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(np.arange(n), check=False)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Perm:
        img = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < n:
                    raise ValueError(f"point {x} out of range for degree {n}")
                if x in seen:
                    raise ValueError(f"point {x} repeated in cycles")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(img, check=False)

    @property
    def degree(self) -> int:
        return len(self.images)

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.images.tobytes()
        return self._key

    def __hash__(self) -> int:
        return hash(self.key())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.key() == other.key()

    def __mul__(self, other: Perm) -> Perm:
        return compose(self, other)

    def __invert__(self) -> Perm:
        return self.inverse()

    def __pow__(self, k: int) -> Perm:
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def inverse(self) -> Perm:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self.images))
        return Perm(inv, check=False)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(len(self.images))))

    def order(self) -> int:
        out = 1
        for c in self.cycles():
            out = out * len(c) // np.gcd(out, len(c))
        return int(out)

    def support(self) -> list[int]:
        return [int(x) for x in np.nonzero(self.images != np.arange(len(self.images)))[0]]

    def cycles(self, include_fixed: bool = False) -> list[list[int]]:
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for x in range(self.degree):
            if seen[x]:
                continue
            cyc = [x]
            seen[x] = True
            y = int(self.images[x])
            while y != x:
                cyc.append(y)
                seen[y] = True
                y = int(self.images[y])
            if len(cyc) > 1 or include_fixed:
                out.append(cyc)
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles(include_fixed=True)))

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return f"Perm(id, n={self.degree})"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + f", n={self.degree})"


def compose(a: Perm, b: Perm) -> Perm:
    """Return ``a`` followed by ``b``."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    return Perm(b.images[a.images], check=False)


@dataclass
class _Level:
    point: int
    gens: list[Perm]
    # transversal[y] maps the base point to y
    transversal: dict[int, Perm] = field(default_factory=dict)


class StabilizerChain:
    """Base, strong generators and transversals built by deterministic Schreier-Sims."""

    def __init__(self, degree: int, gens: Sequence[Perm], base_hint: Sequence[int] = ()):
        self.degree = degree
        self.levels: list[_Level] = []
        self._build([g for g in gens if not g.is_identity()], list(base_hint))

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.transversal)
        return out

    def _orbit(self, lv: _Level) -> None:
        n = self.degree
        ident = Perm.identity(n)
        trans = {lv.point: ident}
        queue = [lv.point]
        for y in queue:
            uy = trans[y]
            for g in lv.gens:
                z = int(g.images[y])
                if z not in trans:
                    trans[z] = uy * g
                    queue.append(z)
        lv.transversal = trans

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        """Strip ``g`` through the chain; returns residue and the level where it stopped."""
        h = g
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            y = int(h.images[lv.point])
            u = lv.transversal.get(y)
            if u is None:
                return h, i
            h = h * u.inverse()
        return h, len(self.levels)

    def contains(self, g: Perm) -> bool:
        if g.degree != self.degree:
            return False
        h, _ = self.sift(g)
        return h.is_identity()

    def _build(self, gens: list[Perm], base_hint: list[int]) -> None:
        base: list[int] = []
        for b in base_hint:
            if b not in base:
                base.append(b)
        for g in gens:
            if all(g.images[b] == b for b in base):
                base.append(g.support()[0])
        strong = list(gens)

        def level_gens(i: int) -> list[Perm]:
            fixed = base[:i]
            return [s for s in strong if all(s.images[b] == b for b in fixed)]

        self.levels = [_Level(b, level_gens(i)) for i, b in enumerate(base)]
        for lv in self.levels:
            self._orbit(lv)

        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            restart = False
            for y, uy in list(lv.transversal.items()):
                for s in lv.gens:
                    z = int(s.images[y])
                    sg = uy * s * lv.transversal[z].inverse()
                    if sg.is_identity():
                        continue
                    h, j = self.sift(sg, i + 1)
                    if h.is_identity():
                        continue
                    strong.append(h)
                    if j == len(self.levels):
                        pt = h.support()[0]
                        base.append(pt)
                        self.levels.append(_Level(pt, []))
                    for lvl in range(j + 1):
                        self.levels[lvl].gens = level_gens(lvl)
                        self._orbit(self.levels[lvl])
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1
        # drop trivial trailing levels (hint points that turned out redundant)
        self.levels = [lv for lv in self.levels if len(lv.transversal) > 1]

    def elements(self) -> Iterator[Perm]:
        """Enumerate every group element (product of one transversal element per level)."""
        n = self.degree
        trans = [list(lv.transversal.values()) for lv in reversed(self.levels)]
        for combo in itertools.product(*trans):
            g = Perm.identity(n)
            for t in combo:
                g = g * t
            yield g


class PermGroup:
    """A permutation group given by generators; the stabilizer chain is built on demand."""

    def __init__(self, degree: int, generators: Iterable[Perm], base_hint: Sequence[int] = ()):
        if degree > DEGREE_CAP:
            raise ValueError(f"degree {degree} exceeds cap {DEGREE_CAP}")
        gens = list(generators)
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"generator degree {g.degree} != {degree}")
        self.degree = degree
        self.generators = gens
        self._base_hint = tuple(base_hint)
        self._chain: StabilizerChain | None = None

    @classmethod
    def symmetric(cls, n: int) -> PermGroup:
        gens = []
        if n >= 2:
            gens.append(Perm.from_cycles(n, [[0, 1]]))
        if n >= 3:
            gens.append(Perm.from_cycles(n, [list(range(n))]))
        return cls(n, gens)

    @classmethod
    def alternating(cls, n: int) -> PermGroup:
        gens = [Perm.from_cycles(n, [[0, 1, i]]) for i in range(2, n)]
        return cls(n, gens)

    @classmethod
    def cyclic(cls, n: int) -> PermGroup:
        return cls(n, [Perm.from_cycles(n, [list(range(n))])] if n > 1 else [])

    @classmethod
    def dihedral(cls, n: int) -> PermGroup:
        """Dihedral group of order ``2n`` acting on the n-gon."""
        rot = Perm.from_cycles(n, [list(range(n))]) if n > 1 else Perm.identity(n)
        refl = Perm([(-i) % n for i in range(n)])
        return cls(n, [rot, refl])

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.degree, self.generators, self._base_hint)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def __len__(self) -> int:
        return self.order()

    def __contains__(self, g: Perm) -> bool:
        return self.chain.contains(g)

    def contains(self, g: Perm) -> bool:
        return self.chain.contains(g)

    def elements(self) -> Iterator[Perm]:
        return self.chain.elements()

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(other.contains(g) for g in self.generators)

    def orbits(self, seeds: Iterable[int] | None = None) -> list[list[int]]:
        return orbits(self.degree, self.generators, seeds)

    def orbit(self, x: int) -> list[int]:
        return orbits(self.degree, self.generators, [x])[0]

    def point_stabilizer(self, x: int) -> PermGroup:
        return point_stabilizer(self, x)

    def is_transitive(self) -> bool:
        return is_transitive(self)

    def is_regular(self) -> bool:
        return is_regular(self)

    def rank(self) -> int:
        return rank_on_pairs(self)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"


def stabilizer_chain(group: PermGroup) -> StabilizerChain:
    return group.chain


def orbits(degree: int, gens: Sequence[Perm], seeds: Iterable[int] | None = None) -> list[list[int]]:
    """Orbits of ``<gens>`` containing the seed points (all points by default), each sorted."""
    parent = list(range(degree))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        img = g.images
        for x in range(degree):
            rx, ry = find(x), find(int(img[x]))
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, list[int]] = {}
    for x in range(degree):
        groups.setdefault(find(x), []).append(x)
    result = sorted(groups.values())
    if seeds is None:
        return result
    wanted = {find(x) for x in seeds}
    return [o for o in result if find(o[0]) in wanted]


def point_stabilizer(group: PermGroup, x: int) -> PermGroup:
    """Return ``G_x`` via a chain whose first base point is ``x``."""
    chain = StabilizerChain(group.degree, group.generators, base_hint=[x])
    if chain.levels and chain.levels[0].point == x:
        gens = [g for g in _strong_gens(chain) if g.images[x] == x]
        rest = chain.levels[1:]
    else:
        gens = _strong_gens(chain)
        rest = chain.levels
    sub = PermGroup(group.degree, gens)
    sub._chain = _subchain(group.degree, rest)
    return sub


def _strong_gens(chain: StabilizerChain) -> list[Perm]:
    seen: dict[bytes, Perm] = {}
    for lv in chain.levels:
        for g in lv.gens:
            seen.setdefault(g.key(), g)
    return list(seen.values())


def _subchain(degree: int, levels: list[_Level]) -> StabilizerChain:
    ch = StabilizerChain.__new__(StabilizerChain)
    ch.degree = degree
    ch.levels = list(levels)
    return ch


def is_transitive(group: PermGroup) -> bool:
    return len(group.orbits()) == 1


def is_regular(group: PermGroup) -> bool:
    return is_transitive(group) and group.order() == group.degree


def pair_orbits(group: PermGroup) -> np.ndarray:
    """Label each ordered pair by its orbit under the componentwise action.

    Labels are numbered in order of the smallest pair (row-major) in each orbit.
    """
    n = group.degree
    parent = np.arange(n * n)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for g in group.generators:
        img = g.images
        targets = (img[:, None] * n + img[None, :]).ravel()
        for src in range(n * n):
            a, b = find(src), find(int(targets[src]))
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    roots = np.array([find(i) for i in range(n * n)])
    _, labels = np.unique(roots, return_inverse=True)
    return labels.reshape(n, n)


def rank_on_pairs(group: PermGroup) -> int:
    return int(pair_orbits(group).max()) + 1


def regular_representation(G, side: str = "right") -> PermGroup:
    """``G_right`` (x -> x*g) or ``G_left`` (x -> g^-1 * x) on the elements of a FiniteGroup."""
    n = G.order
    if side == "right":
        gens = [Perm(G.mul[:, g], check=False) for g in G.generators()]
    elif side == "left":
        gens = [Perm(G.mul[G.inv[g], :], check=False) for g in G.generators()]
    else:
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    return PermGroup(n, gens)


def element_perm(G, g: int, side: str = "right") -> Perm:
    if side == "right":
        return Perm(G.mul[:, g], check=False)
    return Perm(G.mul[G.inv[g], :], check=False)


def coset_action(G, H: Iterable[int]) -> PermGroup:
    """Action of ``G`` on right cosets ``Hx`` by right multiplication.

    Cosets are numbered by their smallest element, in increasing order.
    """
    H = sorted(set(int(h) for h in H))
    if not G.is_subgroup(H):
        raise ValueError("H is not a subgroup")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if coset_of[x] < 0:
            idx = len(reps)
            reps.append(x)
            coset_of[G.mul[H, x]] = idx
    m = len(reps)
    gens = []
    for g in G.generators():
        gens.append(Perm([coset_of[G.mul[r, g]] for r in reps], check=False))
    return PermGroup(m, gens)


def wreath_imprimitive(bottom: PermGroup, top: PermGroup) -> PermGroup:
    """Imprimitive wreath product ``bottom wr top``; point ``(b, i)`` is ``b*n_bottom + i``."""
    nb, nt = bottom.degree, top.degree
    n = nb * nt
    gens = []
    for g in bottom.generators:
        img = np.arange(n)
        img[:nb] = g.images
        gens.append(Perm(img, check=False))
    for t in top.generators:
        img = (t.images[:, None] * nb + np.arange(nb)[None, :]).ravel()
        gens.append(Perm(img, check=False))
    # bottom copies in every block, so intransitive tops are handled too
    for b in range(1, nt):
        for g in bottom.generators:
            img = np.arange(n)
            img[b * nb:(b + 1) * nb] = g.images + b * nb
            gens.append(Perm(img, check=False))
    return PermGroup(n, gens)


def generated_elements(degree: int, gens: Sequence[Perm], limit: int | None = None) -> list[Perm]:
    """Closure of ``gens`` by BFS; stops early once more than ``limit`` elements are found."""
    ident = Perm.identity(degree)
    seen = {ident.key(): ident}
    queue = [ident]
    for x in queue:
        for g in gens:
            y = x * g
            if y.key() not in seen:
                seen[y.key()] = y
                queue.append(y)
                if limit is not None and len(seen) > limit:
                    return queue
    return queue
