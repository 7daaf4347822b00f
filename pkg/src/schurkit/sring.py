"""S-rings over finite groups, their Cayley schemes, and the schurity test.

An S-ring is stored by its basic sets (lists of element indices). The class
containing the identity comes first; otherwise the order given is kept so that
callers can address named classes. Equality ignores class order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .autsearch import NODE_CAP, aut_scheme
from .groups import FiniteGroup
from .perm import Perm, PermGroup, element_perm, orbits, pair_orbits, point_stabilizer
from .scheme import AssociationScheme, SchemeError, Violation, cayley_coloring


class SRingError(ValueError):
    pass


def _inverse_left_table(G: FiniteGroup) -> np.ndarray:
    """``L[x, z] = x^-1 z`` so that the coefficient of ``z`` in ``X Y`` is ``sum_x X[x] Y[L[x, z]]``."""
    return G.mul[G.inv[:, None], np.arange(G.order)[None, :]]


def product_coefficients(G: FiniteGroup, U: np.ndarray) -> np.ndarray:
    """``out[i, j, z]`` = coefficient of ``z`` in ``U_i U_j`` for 0/1 (or integer) rows ``U``."""
    L = _inverse_left_table(G)
    k, n = U.shape
    right = U[:, L].transpose(1, 0, 2).reshape(n, k * n)  # [x, (j, z)]
    return (U @ right).reshape(k, k, n)


@dataclass(eq=False)
class SRing:
    group: FiniteGroup
    classes: list[list[int]]
    _const: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.classes = [sorted(int(x) for x in c) for c in self.classes]
        if self.classes and self.classes[0] != [0]:
            self.classes.sort(key=lambda c: (0 not in c, c[0] if c else -1))
        cls_of = np.full(self.group.order, -1, dtype=np.int64)
        for i, c in enumerate(self.classes):
            cls_of[c] = i
        self.class_of = cls_of

    @property
    def rank(self) -> int:
        return len(self.classes)

    def key(self) -> tuple:
        return tuple(sorted(tuple(c) for c in self.classes))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SRing) or self.key() != other.key():
            return False
        return self.group is other.group or np.array_equal(self.group.mul, other.group.mul)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"SRing(|G|={self.group.order}, rank={self.rank}, sizes={[len(c) for c in self.classes]})"

    def indicator(self) -> np.ndarray:
        U = np.zeros((self.rank, self.group.order), dtype=np.int64)
        for i, c in enumerate(self.classes):
            U[i, c] = 1
        return U

    def structure_constants(self) -> np.ndarray:
        """``c[i, j, k]``: coefficient of each element of class ``k`` in ``X_i X_j``.

        Read at the smallest element of class ``k``; meaningful for a valid S-ring.
        """
        if self._const is None:
            coef = product_coefficients(self.group, self.indicator())
            reps = [c[0] for c in self.classes]
            self._const = coef[:, :, reps]
        return self._const

    def product(self, i: int, j: int) -> dict[int, int]:
        """``X_i X_j`` as ``{class index: coefficient}`` over the nonzero terms."""
        row = self.structure_constants()[i, j]
        return {k: int(v) for k, v in enumerate(row) if v}

    def index_of(self, elements) -> int:
        s = sorted(int(x) for x in elements)
        for i, c in enumerate(self.classes):
            if c == s:
                return i
        raise KeyError("not a basic set")


def validate_sring(A: SRing) -> Violation | None:
    G = A.group
    n = G.order
    seen = np.zeros(n, dtype=np.int64)
    for c in A.classes:
        if not c:
            return Violation("empty class", ())
        seen[c] += 1
    if not np.all(seen == 1):
        x = int(np.nonzero(seen != 1)[0][0])
        return Violation("classes do not partition the group", (x,))
    if [0] not in A.classes:
        return Violation("identity is not a singleton class", ())
    cls_of = A.class_of
    for i, c in enumerate(A.classes):
        inv_cls = set(cls_of[G.inv[c]].tolist())
        if len(inv_cls) != 1:
            return Violation("class inverse is not a class", (i,))
        j = inv_cls.pop()
        if len(A.classes[j]) != len(c):
            return Violation("class inverse is not a class", (i, j))
    coef = product_coefficients(G, A.indicator())
    for k, c in enumerate(A.classes):
        block = coef[:, :, c]
        bad = np.nonzero((block != block[:, :, :1]).any(axis=2))
        if len(bad[0]):
            i, j = int(bad[0][0]), int(bad[1][0])
            return Violation("product coefficient not constant on a class", (i, j, k))
    return None


def sring_from_partition(G: FiniteGroup, classes, check: bool = True) -> SRing:
    A = SRing(G, [list(c) for c in classes])
    if check:
        bad = validate_sring(A)
        if bad is not None:
            raise SRingError(f"not an S-ring: {bad}")
    return A


def group_ring(G: FiniteGroup) -> SRing:
    return SRing(G, [[x] for x in range(G.order)])


def trivial_sring(G: FiniteGroup) -> SRing:
    return SRing(G, [[0], list(range(1, G.order))] if G.order > 1 else [[0]])


def contains_right_regular(gamma: PermGroup, G: FiniteGroup) -> bool:
    return all(gamma.contains(element_perm(G, g)) for g in G.generators())


def sring_from_action(gamma: PermGroup, G: FiniteGroup, check: bool = True) -> SRing:
    """``A(gamma, G)``: basic sets are the orbits of the stabilizer of the identity."""
    if gamma.degree != G.order:
        raise SRingError("degree differs from |G|")
    if not contains_right_regular(gamma, G):
        raise SRingError("the group does not contain G_right")
    stab = point_stabilizer(gamma, 0)
    return sring_from_partition(G, orbits(G.order, stab.generators), check=check)


def to_cayley_scheme(A: SRing, check: bool = True) -> AssociationScheme:
    """``X(A)``: color of ``(g, h)`` is the basic set of ``g h^-1``."""
    return cayley_coloring(A.group, A.class_of, check=check)


def from_cayley_scheme(X: AssociationScheme, G: FiniteGroup) -> SRing:
    if X.n != G.order:
        raise SRingError("scheme size differs from |G|")
    for g in G.generators():
        r = G.mul[:, g]
        if not np.array_equal(X.color[np.ix_(r, r)], X.color):
            raise SRingError("scheme is not invariant under G_right")
    col = X.color[:, 0]
    classes: dict[int, list[int]] = {}
    for x in range(G.order):
        classes.setdefault(int(col[x]), []).append(x)
    return SRing(G, [classes[c] for c in sorted(classes)])


@dataclass
class SchurityVerdict:
    """Outcome of comparing ``X(A)`` with ``inv(aut(X(A)))``.

    ``split`` (non-schurian only) is a color of ``X`` together with two pairs of that
    color lying in different 2-orbits of the automorphism group.
    """

    schurian: bool
    aut: PermGroup
    scheme: AssociationScheme
    orbital_rank: int
    split: tuple | None = None

    @property
    def aut_order(self) -> int:
        return self.aut.order()

    def __str__(self) -> str:
        tag = "schurian" if self.schurian else "non-schurian"
        return f"{tag} (rank {self.scheme.rank}, orbital rank {self.orbital_rank}, |aut| = {self.aut_order})"


def scheme_schurity(X: AssociationScheme, node_cap: int = NODE_CAP) -> SchurityVerdict:
    """A scheme is schurian iff it equals the orbital scheme of its automorphism group."""
    gamma = aut_scheme(X, node_cap)
    orb = pair_orbits(gamma)
    orank = int(orb.max()) + 1
    if orank == X.rank:
        return SchurityVerdict(True, gamma, X, orank)
    # some color is a union of several 2-orbits
    for c in range(X.rank):
        cells = np.argwhere(X.color == c)
        labs = orb[cells[:, 0], cells[:, 1]]
        other = np.nonzero(labs != labs[0])[0]
        if len(other):
            a = tuple(int(v) for v in cells[0])
            b = tuple(int(v) for v in cells[other[0]])
            return SchurityVerdict(False, gamma, X, orank, (c, a, b))
    raise AssertionError("orbital rank differs but no color splits")


def is_schurian(A: SRing, node_cap: int = NODE_CAP) -> SchurityVerdict:
    return scheme_schurity(to_cayley_scheme(A), node_cap)


def difference_set_sring(ds) -> SRing:
    """``A(D, H)`` over ``H : <g>`` (``g`` inverting ``H``).

    Classes in order: ``{e}``, ``H \\ {e}``, ``Dg``, ``(H \\ D)g``.
    """
    from .designs import is_difference_set
    from .groups import generalized_dihedral

    H = ds.group
    chk = is_difference_set(H, ds.elements)
    if isinstance(chk, Violation):
        raise SRingError(f"not a difference set: {chk}")
    n = H.order
    D = sorted(ds.elements)
    if not 0 < len(D) < n:
        raise SRingError("difference set must be proper and nonempty")
    G = generalized_dihedral(H)
    g = n  # the element (0, g)
    Dset = set(D)
    classes = [
        [0],
        list(range(1, n)),
        [int(G.mul[d, g]) for d in D],
        [int(G.mul[h, g]) for h in range(n) if h not in Dset],
    ]
    return sring_from_partition(G, classes)


def difference_set_identities(A: SRing, ds) -> dict[str, tuple[dict, dict]]:
    """Computed vs expected products of the rank-4 difference-set S-ring.

    Classes are indexed 0: e, 1: A, 2: X, 3: Y as built by :func:`difference_set_sring`.
    ``X Y = D H - D D^-1 = kH - (ke + lam A) = (k - lam) A``.
    """
    n, k, lam = ds.n, ds.k, ds.lam
    expected = {
        "A*A": {0: n - 1, 1: n - 2},
        "A*X": {2: k - 1, 3: k},
        "A*Y": {2: n - k, 3: n - k - 1},
        "X*Y": {1: k - lam},
    }
    pairs = {"A*A": (1, 1), "A*X": (1, 2), "A*Y": (1, 3), "X*Y": (2, 3)}
    out = {}
    for name, (i, j) in pairs.items():
        exp = {c: v for c, v in expected[name].items() if v}
        out[name] = (A.product(i, j), exp)
    return out


def wreath_sring(G: FiniteGroup, N, A_N: SRing, A_Q: SRing, proj: np.ndarray, embed: np.ndarray) -> SRing:
    """Wreath product ``A_N wr A_Q`` over ``G`` for a normal subgroup ``N``.

    ``A_N`` lives on the subgroup table with embedding ``embed`` (index -> G element);
    ``A_Q`` lives on ``G/N`` with projection ``proj``. Basic sets: those of ``A_N``
    inside ``N``, and full preimages of the non-identity basic sets of ``A_Q``.
    """
    N = sorted(int(x) for x in N)
    if sorted(int(x) for x in embed) != N:
        raise SRingError("embedding does not match N")
    if A_N.group.order * A_Q.group.order != G.order:
        raise SRingError("|N| * |G/N| must equal |G|")
    classes = [[int(embed[x]) for x in c] for c in A_N.classes]
    for c in A_Q.classes:
        if c == [0]:
            continue
        cset = set(c)
        classes.append([x for x in range(G.order) if int(proj[x]) in cset])
    return sring_from_partition(G, classes)


def relabel_sring(A: SRing, perm) -> SRing:
    """Transport along a relabeling of the group (``perm[old] = new``)."""
    perm = np.asarray(perm)
    G2 = A.group.relabel(perm)
    return SRing(G2, [[int(perm[x]) for x in c] for c in A.classes])
