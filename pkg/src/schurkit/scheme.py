"""Association schemes as colorings of ``Omega x Omega``.

Colors are kept in canonical order: 0 is the diagonal, the others are sorted by
(valency, first cell in row-major order). Two schemes with the same partition of
pairs therefore have identical color arrays.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .perm import PermGroup, pair_orbits


class SchemeError(ValueError):
    pass


@dataclass
class Violation:
    """Why a coloring (or group partition) fails to be a scheme (or S-ring)."""

    reason: str
    witness: tuple = ()

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"{self.reason} {self.witness}" if self.witness else self.reason


def canonical_colors(color: np.ndarray) -> np.ndarray:
    """Relabel so the diagonal is 0 and other colors follow (valency, first cell)."""
    color = np.asarray(color, dtype=np.int64)
    n = color.shape[0]
    flat = color.ravel()
    labels, first, inverse, counts = np.unique(flat, return_index=True, return_inverse=True,
                                               return_counts=True)
    diag_labels = set(np.unique(np.diag(color)).tolist())
    keys = []
    for li, lab in enumerate(labels):
        keys.append((0 if lab in diag_labels else 1, int(counts[li]), int(first[li])))
    order = sorted(range(len(labels)), key=lambda li: keys[li])
    newlab = np.empty(len(labels), dtype=np.int64)
    newlab[order] = np.arange(len(labels))
    return newlab[inverse].reshape(n, n)


class AssociationScheme:
    """A homogeneous association scheme on ``n`` points.

    Built from any integer coloring; colors are canonicalized and the scheme axioms
    are checked unless ``check=False``.
    """

    def __init__(self, color: np.ndarray, check: bool = True, name: str = ""):
        color = canonical_colors(np.asarray(color))
        self.color = color
        self.color.setflags(write=False)
        self.n = color.shape[0]
        self.rank = int(color.max()) + 1 if self.n else 0
        self.name = name
        self._p: np.ndarray | None = None
        tr = np.full(self.rank, -1, dtype=np.int64)
        tr[color.ravel()] = color.T.ravel()
        self.transpose = tr
        if check:
            bad = validate_coloring(color)
            if bad is not None:
                raise SchemeError(f"not an association scheme: {bad}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AssociationScheme) and np.array_equal(self.color, other.color)

    def __hash__(self) -> int:
        return hash(self.color.tobytes())

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"AssociationScheme(n={self.n}, rank={self.rank}{tag})"

    @property
    def valencies(self) -> np.ndarray:
        return np.bincount(self.color[0], minlength=self.rank)

    def adjacency(self, i: int) -> np.ndarray:
        return (self.color == i).astype(np.int64)

    def intersection_numbers(self) -> np.ndarray:
        """``p[i, j, k] = |{z : c(x,z)=i, c(z,y)=j}|`` for any ``(x,y)`` of color ``k``."""
        if self._p is None:
            self._p = _intersection_numbers(self.color, self.rank)
        return self._p

    def is_symmetric_color(self, i: int) -> bool:
        return self.transpose[i] == i

    def is_fusion_of(self, finer: AssociationScheme) -> bool:
        """True if every color class of ``finer`` lies inside one color class of ``self``."""
        return coloring_coarsens(self.color, finer.color)

    def to_text(self, header: bool = True) -> str:
        rows = [" ".join(map(str, r)) for r in self.color.tolist()]
        return ("\n".join([str(self.n)] + rows) if header else "\n".join(rows)) + "\n"


def coloring_coarsens(coarse: np.ndarray, fine: np.ndarray) -> bool:
    """True if each class of ``fine`` is contained in a class of ``coarse``."""
    f, c = fine.ravel(), coarse.ravel()
    rep = np.full(int(f.max()) + 1, -1, dtype=np.int64)
    rep[f] = c
    return bool(np.array_equal(rep[f], c))


def _pair_counts(color: np.ndarray, x: int, rank: int) -> np.ndarray:
    """``out[y, i*rank + j] = |{z : c(x,z)=i, c(z,y)=j}|``."""
    n = color.shape[0]
    keys = color[x][:, None] * rank + color  # indexed [z, y]
    flat = (np.arange(n)[None, :] * (rank * rank) + keys).ravel()
    return np.bincount(flat, minlength=n * rank * rank).reshape(n, rank * rank)


def _intersection_numbers(color: np.ndarray, rank: int) -> np.ndarray:
    out = np.zeros((rank, rank, rank), dtype=np.int64)
    for k, (x, y) in enumerate(_color_representatives(color, rank)):
        out[:, :, k] = _pair_counts(color, x, rank)[y].reshape(rank, rank)
    return out


def _color_representatives(color: np.ndarray, rank: int) -> list[tuple[int, int]]:
    flat = color.ravel()
    _, first = np.unique(flat, return_index=True)
    n = color.shape[0]
    return [(int(f // n), int(f % n)) for f in first[:rank]]


def validate_coloring(color: np.ndarray) -> Violation | None:
    """Check the scheme axioms; returns the first violation found or None."""
    color = np.asarray(color, dtype=np.int64)
    n = color.shape[0]
    if color.ndim != 2 or color.shape != (n, n):
        return Violation("coloring is not square")
    if n == 0:
        return None
    diag = np.diag(color)
    if (diag != diag[0]).any():
        x = int(np.nonzero(diag != diag[0])[0][0])
        return Violation("diagonal is not monochrome", (x,))
    d = diag[0]
    off = color.copy()
    np.fill_diagonal(off, -1)
    if (off == d).any():
        x, y = map(int, np.argwhere(off == d)[0])
        return Violation("diagonal color appears off the diagonal", (x, y))
    labels = np.unique(color)
    remap = np.searchsorted(labels, color)
    rank = len(labels)
    tr = np.full(rank, -1, dtype=np.int64)
    flat, flat_t = remap.ravel(), remap.T.ravel()
    tr[flat] = flat_t
    if not np.array_equal(tr[flat], flat_t):
        bad = int(np.nonzero(tr[flat] != flat_t)[0][0])
        return Violation("transpose of a color is not a color", (bad // n, bad % n))
    ref = np.full((rank, rank * rank), -1, dtype=np.int64)
    ref_cell: dict[int, tuple[int, int]] = {}
    for x in range(n):
        counts = _pair_counts(remap, x, rank)
        for y in range(n):
            k = int(remap[x, y])
            if k not in ref_cell:
                ref_cell[k] = (x, y)
                ref[k] = counts[y]
        mism = (counts != ref[remap[x]]).any(axis=1)
        if mism.any():
            y = int(np.nonzero(mism)[0][0])
            k = int(remap[x, y])
            ij = int(np.nonzero(counts[y] != ref[k])[0][0])
            return Violation("intersection number not constant",
                             (ij // rank, ij % rank, k, ref_cell[k], (x, y)))
    return None


def validate(X: AssociationScheme) -> Violation | None:
    return validate_coloring(X.color)


def orbital_scheme(group: PermGroup) -> AssociationScheme:
    """``inv(G)``: colors are the orbits of a transitive group on ordered pairs."""
    if not group.is_transitive():
        raise SchemeError("orbital scheme needs a transitive group")
    return AssociationScheme(pair_orbits(group), check=False)


def trivial_scheme(n: int) -> AssociationScheme:
    """The rank-2 scheme (rank 1 when ``n == 1``)."""
    return AssociationScheme(1 - np.eye(n, dtype=np.int64), check=False)


def fusion(X: AssociationScheme, pi: Iterable[Iterable[int]]) -> AssociationScheme | Violation:
    """Merge nonreflexive colors along the classes of ``pi``.

    Colors not mentioned stay as singletons. Returns the fused scheme, or a
    :class:`Violation` if the merged coloring is not a scheme.
    """
    classes = [sorted(set(int(c) for c in cls)) for cls in pi]
    mapping = np.arange(X.rank)
    seen: set[int] = set()
    for cls in classes:
        for c in cls:
            if c == 0 or not 0 < c < X.rank:
                raise SchemeError(f"invalid color {c} in partition")
            if c in seen:
                raise SchemeError(f"color {c} in two classes")
            seen.add(c)
        mapping[cls] = min(cls)
    for cls in classes:
        img = set(X.transpose[cls].tolist())
        if set(mapping[list(img)].tolist()) != {min(cls)} or len(img) != len(cls):
            raise SchemeError(f"partition is not closed under transposition at {cls}")
    merged = mapping[X.color]
    bad = validate_coloring(merged)
    if bad is not None:
        return bad
    return AssociationScheme(merged, check=False)


def wreath(bottom: AssociationScheme, top: AssociationScheme) -> AssociationScheme:
    """Wreath product; point ``(b, i)`` is ``b * bottom.n + i``."""
    nb, nt = bottom.n, top.n
    b = np.arange(nb * nt) // nb
    i = np.arange(nb * nt) % nb
    same = b[:, None] == b[None, :]
    inner = bottom.color[i[:, None], i[None, :]]
    outer = bottom.rank - 1 + top.color[b[:, None], b[None, :]]
    return AssociationScheme(np.where(same, inner, outer), check=False)


def class_scheme(G) -> AssociationScheme:
    """Cayley scheme whose basic sets are the conjugacy classes of ``G``."""
    cls_of = np.empty(G.order, dtype=np.int64)
    for idx, cls in enumerate(G.conjugacy_classes()):
        cls_of[cls] = idx
    return cayley_coloring(G, cls_of)


def cayley_coloring(G, class_of: np.ndarray, check: bool = False) -> AssociationScheme:
    """Color ``(g, h)`` by the class of ``g h^-1`` (so ``X = {g : (g, e) in R}``)."""
    ghinv = G.mul[np.arange(G.order)[:, None], G.inv[None, :]]
    return AssociationScheme(np.asarray(class_of)[ghinv], check=check)


# ---------------------------------------------------------------------------
# structural predicates used to label colors


def color_graph_components(X: AssociationScheme, colors: Iterable[int]) -> list[list[int]]:
    adj = np.isin(X.color, list(colors))
    adj = adj | adj.T
    n = X.n
    seen = np.zeros(n, dtype=bool)
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        for x in comp:
            for y in np.nonzero(adj[x] & ~seen)[0]:
                seen[y] = True
                comp.append(int(y))
        comps.append(sorted(comp))
    return comps


def is_clique_union(X: AssociationScheme, i: int) -> bool:
    """Color ``i`` is symmetric and its graph is a disjoint union of complete graphs."""
    if not X.is_symmetric_color(i):
        return False
    adj = X.color == i
    for comp in color_graph_components(X, [i]):
        sub = adj[np.ix_(comp, comp)]
        if sub.sum() != len(comp) * (len(comp) - 1):
            return False
    return True


def is_connected_graph(X: AssociationScheme, i: int) -> bool:
    """Color ``i`` is symmetric and forms a connected simple graph."""
    return X.is_symmetric_color(i) and len(color_graph_components(X, [i])) == 1


@dataclass(frozen=True)
class Pred:
    """A named constraint on a labeling ``lab`` (position -> color)."""

    name: str
    test: Callable[[AssociationScheme, Sequence[int]], bool]

    def __call__(self, X, lab) -> bool:
        return self.test(X, lab)


def clique_union(pos: int, negate: bool = False) -> Pred:
    return Pred(("not " if negate else "") + f"clique_union({pos})",
                lambda X, lab: is_clique_union(X, lab[pos]) != negate)


def connected(pos: int, negate: bool = False) -> Pred:
    return Pred(("not " if negate else "") + f"connected({pos})",
                lambda X, lab: is_connected_graph(X, lab[pos]) != negate)


def transpose_pair(a: int, b: int) -> Pred:
    return Pred(f"transpose({a},{b})", lambda X, lab: X.transpose[lab[a]] == lab[b])


def parse_pred(text: str) -> Pred:
    """``clique:2``, ``!clique:3``, ``connected:2``, ``pair:4-5`` (1-based positions)."""
    text = text.strip()
    neg = text.startswith("!")
    body = text[1:] if neg else text
    kind, _, arg = body.partition(":")
    if kind == "clique":
        return clique_union(int(arg), neg)
    if kind == "connected":
        return connected(int(arg), neg)
    if kind == "pair" and not neg:
        a, b = arg.split("-")
        return transpose_pair(int(a), int(b))
    raise SchemeError(f"unknown predicate {text!r}")


def select_colors_by_valency(X: AssociationScheme, pattern: Sequence[int],
                             preds: Sequence[Pred] = (),
                             up_to: Sequence[Sequence[int]] | None = None) -> list[int]:
    """Label nonreflexive colors ``1..k`` to match a valency pattern.

    Returns ``lab`` with ``lab[0] = 0`` and ``lab[i]`` the color playing the role of
    ``R_i``. Ties are resolved by ``preds``. If several labelings survive, they must
    all induce the same color partition from ``up_to`` (a partition of ``1..k``), in
    which case the lexicographically first labeling is returned.
    """
    pattern = [int(v) for v in pattern]
    val = X.valencies
    if len(pattern) != X.rank - 1:
        raise SchemeError(f"pattern has {len(pattern)} entries, scheme has {X.rank - 1} nonreflexive colors")
    if sorted(pattern) != sorted(val[1:].tolist()):
        raise SchemeError(f"valency multiset {sorted(val[1:].tolist())} does not match {sorted(pattern)}")
    slots: dict[int, list[int]] = {}
    for pos, v in enumerate(pattern, start=1):
        slots.setdefault(v, []).append(pos)
    groups = []
    for v, positions in sorted(slots.items()):
        colors = [c for c in range(1, X.rank) if val[c] == v]
        groups.append((positions, colors))
    found = []
    for choice in itertools.product(*[itertools.permutations(cols) for _, cols in groups]):
        lab = [0] * (len(pattern) + 1)
        for (positions, _), perm in zip(groups, choice):
            for pos, c in zip(positions, perm):
                lab[pos] = c
        if all(p(X, lab) for p in preds):
            found.append(lab)
    if not found:
        raise SchemeError("no labeling satisfies the constraints")
    found.sort()
    if len(found) > 1:
        if up_to is None:
            raise SchemeError(f"{len(found)} labelings satisfy the constraints; add discriminators")
        keys = {_induced_partition(lab, up_to) for lab in found}
        if len(keys) > 1:
            raise SchemeError("surviving labelings induce different color partitions")
    return found[0]


def _induced_partition(lab: Sequence[int], pi: Sequence[Sequence[int]]) -> frozenset:
    return frozenset(frozenset(lab[i] for i in cls) for cls in pi)


# ---------------------------------------------------------------------------
# conjugacy-class fusions


@dataclass
class Rank4Fusion:
    cells: list[list[int]]  # each cell is a list of conjugacy-class indices
    sizes: list[int]
    scheme: AssociationScheme
    equals_class_partition: bool


def rank4_size_respecting_fusions(G) -> list[Rank4Fusion]:
    """Rank-4 fusions of the class scheme that coarsen the partition by class size."""
    classes = G.conjugacy_classes()
    by_size: dict[int, list[int]] = {}
    for idx, cls in enumerate(classes):
        if idx:
            by_size.setdefault(len(cls), []).append(idx)
    cells = [by_size[s] for s in sorted(by_size)]
    cls_of = np.empty(G.order, dtype=np.int64)
    for idx, cls in enumerate(classes):
        cls_of[cls] = idx
    out = []
    for blocks in _set_partitions(list(range(len(cells)))):
        if len(blocks) != 3:
            continue
        merged = [sorted(c for b in blk for c in cells[b]) for blk in blocks]
        label = np.zeros(len(classes), dtype=np.int64)
        for t, m in enumerate(merged, start=1):
            label[m] = t
        # inverse closure
        inv_cls = cls_of[G.inv[[cls[0] for cls in classes]]]
        if not np.array_equal(label[inv_cls], label):
            continue
        coloring = label[cls_of][G.mul[np.arange(G.order)[:, None], G.inv[None, :]]]
        if validate_coloring(coloring) is not None:
            continue
        X = AssociationScheme(coloring, check=False)
        out.append(Rank4Fusion(merged, [sum(len(classes[c]) for c in m) for m in merged], X,
                               len(classes) == 4))
    out.sort(key=lambda f: f.cells)
    return out


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def algebraic_automorphisms(X: AssociationScheme) -> list[np.ndarray]:
    """Color permutations fixing 0 and preserving all intersection numbers."""
    p = X.intersection_numbers()
    r = X.rank
    val = X.valencies
    out = []
    perm = np.full(r, -1, dtype=np.int64)
    perm[0] = 0
    used = np.zeros(r, dtype=bool)
    used[0] = True

    def consistent(c: int) -> bool:
        assigned = np.nonzero(perm >= 0)[0]
        sub = np.ix_(assigned, assigned, assigned)
        img = np.ix_(perm[assigned], perm[assigned], perm[assigned])
        return bool(np.array_equal(p[sub], p[img]))

    def rec(c: int) -> None:
        if c == r:
            out.append(perm.copy())
            return
        for d in range(1, r):
            if used[d] or val[d] != val[c]:
                continue
            perm[c] = d
            used[d] = True
            if consistent(c):
                rec(c + 1)
            used[d] = False
            perm[c] = -1

    rec(1)
    return out
