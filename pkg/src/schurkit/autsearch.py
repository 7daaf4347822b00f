"""Automorphisms of colorings of ``Omega x Omega`` by individualization-refinement.

The engine works on any square integer coloring whose transpose color is a
function of the color (true for schemes and for the design colorings built in
:mod:`schurkit.designs`); the diagonal colors act as the initial vertex coloring.

Search outline: follow the first path (individualize the smallest point of the
smallest non-singleton cell, ties by cell label) to a discrete leaf; then, level
by level from the bottom, test every point of the target cell that is not yet
known to be in the base point's orbit by exhaustively searching its subtree for a
leaf equivalent to the first leaf. The orbit sizes found give the group order and
the search data is a stabilizer chain.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._rows import rerank_rows
from .perm import Perm, PermGroup, StabilizerChain, _Level, orbits
from .scheme import AssociationScheme, algebraic_automorphisms, orbital_scheme

NODE_CAP = 10_000_000


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass
class SearchStats:
    nodes: int = 0
    refinements: int = 0
    generators: int = 0
    wall_time: float = 0.0


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def add_perm(self, g: Perm) -> None:
        for x, y in enumerate(g.images.tolist()):
            self.union(x, y)


def _rerank(keys: np.ndarray) -> np.ndarray:
    return rerank_rows(keys)[0]


class _Refiner:
    """Equitable refinement of a vertex partition against an edge coloring."""

    def __init__(self, color: np.ndarray, stats: SearchStats):
        self.C = np.asarray(color, dtype=np.int64)
        self.n = self.C.shape[0]
        self.r = int(self.C.max()) + 1 if self.n else 1
        self.stats = stats
        tr = np.full(self.r, -1, dtype=np.int64)
        tr[self.C.ravel()] = self.C.T.ravel()
        # column counts are only needed if the transpose color is not determined
        self.need_cols = not np.array_equal(tr[self.C], self.C.T)

    def initial(self) -> np.ndarray:
        return _rerank(np.diag(self.C)[:, None])

    def refine(self, labels: np.ndarray) -> tuple[np.ndarray, tuple]:
        n, r, C = self.n, self.r, self.C
        trace = []
        k = int(labels.max()) + 1
        while True:
            self.stats.refinements += 1
            K = k * r
            idx = labels[None, :] * r + C
            flat = (np.arange(n)[:, None] * K + idx).ravel()
            counts = np.bincount(flat, minlength=n * K).reshape(n, K)
            parts = [labels[:, None], counts]
            if self.need_cols:
                idx_t = labels[None, :] * r + C.T
                flat_t = (np.arange(n)[:, None] * K + idx_t).ravel()
                parts.append(np.bincount(flat_t, minlength=n * K).reshape(n, K))
            keys = np.concatenate(parts, axis=1)
            new, uniq = rerank_rows(keys)
            trace.append(hash(tuple(uniq)))
            k_new = len(uniq)
            labels = new
            if k_new == k:
                break
            k = k_new
        return labels, tuple(trace)

    @staticmethod
    def individualize(labels: np.ndarray, v: int) -> np.ndarray:
        key = labels * 2 + 1
        key[v] -= 1
        return _rerank(key[:, None])

    @staticmethod
    def target_cell(labels: np.ndarray) -> list[int] | None:
        counts = np.bincount(labels)
        nontriv = np.nonzero(counts > 1)[0]
        if len(nontriv) == 0:
            return None
        sizes = counts[nontriv]
        cell = int(nontriv[np.argmin(sizes)])  # argmin keeps the smallest label on ties
        return [int(x) for x in np.nonzero(labels == cell)[0]]


@dataclass
class _Node:
    labels: np.ndarray
    trace: tuple
    cell: list[int] | None
    chosen: int = -1


@dataclass
class AutResult:
    group: PermGroup
    base: list[int]
    orbit_sizes: list[int]
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def order(self) -> int:
        out = 1
        for s in self.orbit_sizes:
            out *= s
        return out


class _Engine:
    def __init__(self, color: np.ndarray, node_cap: int = NODE_CAP):
        self.stats = SearchStats()
        self.ref = _Refiner(color, self.stats)
        self.C = self.ref.C
        self.n = self.ref.n
        self.node_cap = node_cap

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.stats.nodes > self.node_cap:
            raise SearchBudgetExceeded(f"search exceeded {self.node_cap} nodes")

    def first_path(self) -> tuple[list[_Node], np.ndarray]:
        labels, trace = self.ref.refine(self.ref.initial())
        path = []
        while True:
            self._tick()
            cell = self.ref.target_cell(labels)
            node = _Node(labels, trace, cell)
            path.append(node)
            if cell is None:
                return path, labels
            node.chosen = cell[0]
            labels, trace = self.ref.refine(self.ref.individualize(labels, cell[0]))

    def leaf_map(self, leaf0: np.ndarray, leaf: np.ndarray) -> np.ndarray:
        inv = np.empty(self.n, dtype=np.int64)
        inv[leaf] = np.arange(self.n)
        return inv[leaf0]

    def subtree(self, path: list[_Node], depth: int, labels: np.ndarray, v: int,
                leaf0: np.ndarray, target: np.ndarray) -> np.ndarray | None:
        """Search below ``labels`` with ``v`` individualized for a leaf matching ``leaf0``.

        ``target`` is the coloring the image must carry: ``target[g(x), g(y)] == C[x, y]``.
        """
        self._tick()
        labels, trace = self.ref.refine(self.ref.individualize(labels, v))
        expect = path[depth + 1]
        if trace != expect.trace:
            return None
        cell = self.ref.target_cell(labels)
        if cell is None:
            gamma = self.leaf_map(leaf0, labels)
            if np.array_equal(target[np.ix_(gamma, gamma)], self.C):
                return gamma
            return None
        if expect.cell is None or len(cell) != len(expect.cell):
            return None
        for w in cell:
            found = self.subtree(path, depth + 1, labels, w, leaf0, target)
            if found is not None:
                return found
        return None

    def automorphisms(self) -> AutResult:
        t0 = time.perf_counter()
        path, leaf0 = self.first_path()
        depth = len(path) - 1
        base = [node.chosen for node in path[:-1]]
        gens: list[Perm] = []
        gen_level: list[int] = []
        orbit_sizes = [1] * depth
        for i in range(depth - 1, -1, -1):
            node = path[i]
            uf = _UnionFind(self.n)
            for g, lvl in zip(gens, gen_level):
                if lvl >= i:
                    uf.add_perm(g)
            b = node.chosen
            failed: list[int] = []
            for v in node.cell:
                if v == b or uf.find(v) == uf.find(b):
                    continue
                if any(uf.find(v) == uf.find(f) for f in failed):
                    continue
                gamma = self.subtree(path, i, node.labels, v, leaf0, self.C)
                if gamma is None:
                    failed.append(v)
                    continue
                g = Perm(gamma, check=False)
                gens.append(g)
                gen_level.append(i)
                uf.add_perm(g)
            orbit_sizes[i] = sum(1 for v in node.cell if uf.find(v) == uf.find(b))
        self.stats.generators = len(gens)
        self.stats.wall_time = time.perf_counter() - t0
        group = PermGroup(self.n, gens)
        group._chain = _chain_from_search(self.n, base, gens, gen_level, orbit_sizes)
        return AutResult(group, base, orbit_sizes, self.stats)

    def isomorphism_to(self, target: np.ndarray) -> np.ndarray | None:
        """An isomorphism ``g`` with ``target[g(x), g(y)] == C[x, y]``, or None."""
        path, leaf0 = self.first_path()
        other = _Engine(target, self.node_cap)
        other.stats = self.stats
        other.ref.stats = self.stats
        labels, trace = other.ref.refine(other.ref.initial())
        if trace != path[0].trace:
            return None
        return other._iso_below(path, 0, labels, leaf0, self.C)

    def _iso_below(self, path, depth, labels, leaf0, source) -> np.ndarray | None:
        cell = self.ref.target_cell(labels)
        expect = path[depth]
        if cell is None:
            if expect.cell is not None:
                return None
            gamma = self.leaf_map(leaf0, labels)
            if np.array_equal(self.C[np.ix_(gamma, gamma)], source):
                return gamma
            return None
        if expect.cell is None or len(cell) != len(expect.cell):
            return None
        for w in cell:
            self._tick()
            lab, trace = self.ref.refine(self.ref.individualize(labels, w))
            if trace != path[depth + 1].trace:
                continue
            found = self._iso_below(path, depth + 1, lab, leaf0, source)
            if found is not None:
                return found
        return None


def _chain_from_search(n: int, base: list[int], gens: list[Perm], gen_level: list[int],
                       orbit_sizes: list[int]) -> StabilizerChain:
    chain = StabilizerChain.__new__(StabilizerChain)
    chain.degree = n
    levels = []
    for i, b in enumerate(base):
        lg = [g for g, lvl in zip(gens, gen_level) if lvl >= i]
        lv = _Level(b, lg)
        chain._orbit(lv)
        if len(lv.transversal) != orbit_sizes[i]:
            raise AssertionError("search orbit does not match generator orbit")
        if len(lv.transversal) > 1:
            levels.append(lv)
    chain.levels = levels
    return chain


def _as_color(X) -> np.ndarray:
    return X.color if isinstance(X, AssociationScheme) else np.asarray(X, dtype=np.int64)


def automorphism_search(X, node_cap: int = NODE_CAP) -> AutResult:
    """Full automorphism search with base, orbit sizes and statistics."""
    return _Engine(_as_color(X), node_cap).automorphisms()


def aut_scheme(X, node_cap: int = NODE_CAP) -> PermGroup:
    """``aut(X)``: permutations preserving every color."""
    return automorphism_search(X, node_cap).group


def isomorphism(X, Y, node_cap: int = NODE_CAP) -> Perm | None:
    """A permutation ``g`` with ``Y[g(x), g(y)] == X[x, y]``, or None."""
    cx, cy = _as_color(X), _as_color(Y)
    if cx.shape != cy.shape:
        return None
    gamma = _Engine(cx, node_cap).isomorphism_to(cy)
    return None if gamma is None else Perm(gamma, check=False)


@dataclass
class ColorAutGroup:
    """Color-permuting automorphisms: ``c(x^g, y^g) = pi_g(c(x, y))``."""

    group: PermGroup
    scheme: AssociationScheme
    aut_order: int
    color_group_order: int

    def color_action(self, g: Perm) -> np.ndarray:
        X = self.scheme
        pi = np.full(X.rank, -1, dtype=np.int64)
        img = g.images
        pi[X.color.ravel()] = X.color[img[:, None], img[None, :]].ravel()
        return pi


def caut_scheme(X: AssociationScheme, node_cap: int = NODE_CAP) -> ColorAutGroup:
    aut = automorphism_search(X, node_cap)
    gens = list(aut.group.generators)
    realized = {tuple(range(X.rank))}
    failed: list[tuple[int, ...]] = []
    for pi in algebraic_automorphisms(X):
        key = tuple(int(c) for c in pi)
        if key in realized:
            continue
        if any(_compose_colors(key, r) in realized for r in failed):
            continue
        pinv = np.empty_like(pi)
        pinv[pi] = np.arange(len(pi))
        target = pinv[X.color]
        gamma = _Engine(X.color, node_cap).isomorphism_to(target)
        if gamma is None:
            failed.append(_inverse_colors(key))
            continue
        gens.append(Perm(gamma, check=False))
        realized = _color_closure(realized | {key})
    group = PermGroup(X.n, gens, base_hint=aut.base)
    return ColorAutGroup(group, X, aut.order, len(realized))


def _compose_colors(a: tuple, b: tuple) -> tuple:
    return tuple(b[x] for x in a)


def _inverse_colors(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _color_closure(gens: set) -> set:
    out = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = _compose_colors(a, b)
                if c not in out:
                    out.add(c)
                    nxt.append(c)
        frontier = nxt
    return out


def normalizer_in_sym(delta: PermGroup, element_cap: int = 2_000_000,
                      node_cap: int = NODE_CAP) -> PermGroup:
    """``N_Sym(Omega)(delta)`` for transitive ``delta``.

    Normalizing elements permute the 2-orbits of ``delta``, so the normalizer lies in
    the color-permuting automorphism group of ``inv(delta)``; it is cut out there by
    testing conjugated generators for membership.
    """
    if delta.degree > 100:
        raise ValueError("normalizer_in_sym is capped at degree 100")
    if not delta.is_transitive():
        raise ValueError("delta must be transitive")
    X = orbital_scheme(delta)
    C = caut_scheme(X, node_cap).group
    if C.order() > element_cap:
        raise SearchBudgetExceeded(f"ambient group of order {C.order()} exceeds element cap")
    gens = list(delta.generators)
    N = PermGroup(delta.degree, gens)
    for g in C.elements():
        if N.contains(g):
            continue
        ginv = g.inverse()
        if all(delta.contains(ginv * d * g) for d in delta.generators):
            gens.append(g)
            N = PermGroup(delta.degree, gens)
    return N


@dataclass
class RegularEmbedding:
    """An injective hom ``G -> Gamma`` with regular image; ``perms[x]`` is the image of ``x``."""

    group: object
    perms: list[Perm]

    def subgroup(self) -> PermGroup:
        return PermGroup(self.perms[0].degree, [self.perms[g] for g in self.group.generators()])


def find_regular_subgroup(gamma: PermGroup, G, element_cap: int = 2_000_000) -> RegularEmbedding | None:
    """A regular subgroup of ``gamma`` isomorphic to the FiniteGroup ``G``, or None."""
    n = gamma.degree
    if n != G.order:
        raise ValueError(f"degree {n} differs from |G| = {G.order}")
    if gamma.order() > element_cap:
        raise SearchBudgetExceeded(f"group of order {gamma.order()} exceeds element cap")
    gens = G.generators()
    orders = G.element_orders()
    pool: dict[int, list[Perm]] = {}
    wanted = {int(orders[g]) for g in gens}
    for p in gamma.elements():
        ct = p.cycle_type()
        if ct and ct[0] == ct[-1] and ct[0] in wanted:
            pool.setdefault(ct[0], []).append(p)
    cands = [pool.get(int(orders[g]), []) for g in gens]
    if not all(cands):
        return None
    first = _class_representatives(gamma, cands[0])

    def extend(k: int, imgs: list[Perm]) -> list[Perm] | None:
        phi: list[Perm | None] = [None] * G.order
        phi[0] = Perm.identity(n)
        hit = {0: 0}  # point 0 image -> element
        queue = [0]
        for x in queue:
            for g, h in zip(gens[:k], imgs):
                y = int(G.mul[x, g])
                w = phi[x] * h
                if phi[y] is None:
                    pt = int(w.images[0])
                    if pt in hit:
                        return None
                    hit[pt] = y
                    phi[y] = w
                    queue.append(y)
                elif phi[y] != w:
                    return None
        return phi

    def rec(k: int, imgs: list[Perm]) -> list[Perm] | None:
        if k == len(gens):
            phi = extend(k, imgs)
            return phi if phi is not None and all(p is not None for p in phi) else None
        for h in (first if k == 0 else cands[k]):
            imgs.append(h)
            if extend(k + 1, imgs) is not None:
                res = rec(k + 1, imgs)
                if res is not None:
                    return res
            imgs.pop()
        return None

    phi = rec(0, [])
    if phi is None:
        return None
    return RegularEmbedding(G, phi)


def _class_representatives(gamma: PermGroup, elems: list[Perm]) -> list[Perm]:
    """One element per ``gamma``-conjugacy class meeting ``elems``."""
    remaining = {p.key(): p for p in elems}
    reps = []
    for p in elems:
        if p.key() not in remaining:
            continue
        reps.append(p)
        cls = {p.key(): p}
        frontier = [p]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gamma.generators:
                    y = s.inverse() * x * s
                    if y.key() not in cls:
                        cls[y.key()] = y
                        nxt.append(y)
            frontier = nxt
        for k in cls:
            remaining.pop(k, None)
    return reps


def pair_set_orbits(group: PermGroup, pairs: Iterable[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Orbits of ``group`` on an invariant set of ordered pairs (componentwise action)."""
    pairs = sorted(set((int(a), int(b)) for a, b in pairs))
    index = {p: i for i, p in enumerate(pairs)}
    uf = _UnionFind(len(pairs))
    for g in group.generators:
        img = g.images
        for (a, b), i in index.items():
            j = index.get((int(img[a]), int(img[b])))
            if j is None:
                raise ValueError("pair set is not invariant under the group")
            uf.union(i, j)
    out: dict[int, list] = {}
    for p, i in index.items():
        out.setdefault(uf.find(i), []).append(p)
    return sorted(out.values())


def flag_orbit_count(group: PermGroup, flags: Iterable[tuple[int, int]]) -> int:
    return len(pair_set_orbits(group, flags))


def is_2transitive_on(group: PermGroup, points: Sequence[int] | None = None) -> bool:
    """2-transitivity on an invariant point set (all points by default)."""
    pts = list(range(group.degree)) if points is None else list(points)
    if len(pts) < 2:
        return True
    ptset = set(pts)
    orbs = [o for o in orbits(group.degree, group.generators) if o[0] in ptset]
    if len(orbs) != 1 or set(orbs[0]) != ptset:
        return False
    pairs = [(a, b) for a in pts for b in pts if a != b]
    return flag_orbit_count(group, pairs) == 1
