"""Difference sets, their symmetric designs, and design automorphisms.

A design developed from ``D`` in ``H`` has points ``H`` and blocks ``D h``
(indexed by ``h``); point ``x`` lies on block ``h`` iff ``x h^-1`` is in ``D``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autsearch import AutResult, NODE_CAP, automorphism_search, flag_orbit_count, is_2transitive_on
from .fields import field, prime_power
from .groups import FiniteGroup, GroupError, additive_group, cyclic
from .scheme import Violation

SINGER_CAP = 512
DESIGN_POINT_CAP = 64


@dataclass(frozen=True)
class DifferenceSet:
    group: FiniteGroup
    elements: tuple[int, ...]
    n: int
    k: int
    lam: int
    name: str = ""

    @property
    def params(self) -> tuple[int, int, int]:
        return self.n, self.k, self.lam

    def complement(self) -> DifferenceSet:
        rest = tuple(x for x in range(self.n) if x not in set(self.elements))
        res = is_difference_set(self.group, rest)
        if isinstance(res, Violation):
            raise ValueError(f"complement is not a difference set: {res}")
        return DifferenceSet(self.group, rest, res.n, res.k, res.lam, f"{self.name}'")


def is_difference_set(H: FiniteGroup, D) -> DifferenceSet | Violation:
    """Check that every non-identity element is ``d1 d2^-1`` in exactly ``lam`` ways."""
    if not H.is_abelian():
        raise GroupError("difference sets are taken in abelian groups")
    D = tuple(sorted(set(int(x) for x in D)))
    n, k = H.order, len(D)
    if n < 2:
        return Violation("group too small", ())
    idx = np.array(D, dtype=np.int64)
    diffs = H.mul[idx[:, None], H.inv[idx][None, :]] if k else np.zeros((0, 0), dtype=np.int64)
    counts = np.bincount(diffs.ravel(), minlength=n)
    lam = int(counts[1]) if n > 1 else 0
    bad = np.nonzero(counts[1:] != lam)[0]
    if len(bad):
        h = int(bad[0]) + 1
        return Violation("difference counts differ", (1, lam, h, int(counts[h])))
    return DifferenceSet(H, D, n, k, lam)


def paley_difference_set(q: int) -> DifferenceSet:
    """Nonzero squares of ``GF(q)``, ``q = 3 mod 4``, in the additive group."""
    if prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    if q % 4 != 3:
        raise ValueError("the Paley construction needs q = 3 (mod 4)")
    F = field(q)
    H = additive_group(q)
    res = is_difference_set(H, F.squares())
    if isinstance(res, Violation):
        raise AssertionError(f"squares of GF({q}) failed: {res}")
    return DifferenceSet(H, res.elements, res.n, res.k, res.lam, f"paley{q}")


def singer_params(q: int, d: int) -> tuple[int, int, int]:
    return ((q**(d + 1) - 1) // (q - 1), (q**d - 1) // (q - 1), (q**(d - 1) - 1) // (q - 1))


def singer_difference_set(q: int, d: int) -> DifferenceSet:
    """Hyperplane of ``PG(d, q)`` in the cyclic group generated by a Singer cycle.

    Points are ``w^i`` modulo ``GF(q)^*`` for a primitive ``w`` of ``GF(q^(d+1))``;
    the hyperplane is the kernel of the trace to ``GF(q)``.
    """
    pk = prime_power(q)
    if pk is None:
        raise ValueError(f"{q} is not a prime power")
    if d < 2:
        raise ValueError("d must be at least 2")
    n, k, lam = singer_params(q, d)
    if n > SINGER_CAP:
        raise ValueError(f"n = {n} exceeds the cap {SINGER_CAP}")
    F = field(q ** (d + 1))
    w = F.primitive
    D = []
    for i in range(n):
        x = F.pow(w, i)
        tr, y = 0, x
        for _ in range(d + 1):
            tr = F.add(tr, y)
            y = F.pow(y, q)
        if tr == 0:
            D.append(i)
    res = is_difference_set(cyclic(n), D)
    if isinstance(res, Violation) or res.params != (n, k, lam):
        raise AssertionError(f"Singer construction failed for q={q}, d={d}")
    return DifferenceSet(res.group, res.elements, n, k, lam, f"singer{q},{d}")


@dataclass
class Design:
    """Incidence structure with ``incidence[x, b]`` true when point ``x`` is on block ``b``."""

    incidence: np.ndarray

    @property
    def n_points(self) -> int:
        return self.incidence.shape[0]

    @property
    def n_blocks(self) -> int:
        return self.incidence.shape[1]

    def flags(self) -> list[tuple[int, int]]:
        return [(int(x), int(b)) for x, b in np.argwhere(self.incidence)]

    def antiflags(self) -> list[tuple[int, int]]:
        return [(int(x), int(b)) for x, b in np.argwhere(~self.incidence)]

    def parameters(self) -> tuple[int, int, int] | None:
        """``(v, k, lam)`` if this is a symmetric 2-design, else None."""
        inc = self.incidence.astype(np.int64)
        v = self.n_points
        if self.n_blocks != v:
            return None
        r = inc.sum(axis=1)
        ks = inc.sum(axis=0)
        if len(set(r.tolist())) != 1 or len(set(ks.tolist())) != 1 or r[0] != ks[0]:
            return None
        meet = inc @ inc.T
        off = meet[~np.eye(v, dtype=bool)]
        if v > 1 and len(set(off.tolist())) != 1:
            return None
        return v, int(r[0]), int(off[0]) if v > 1 else 0


def dev(ds: DifferenceSet) -> Design:
    H = ds.group
    inD = np.zeros(H.order, dtype=bool)
    inD[list(ds.elements)] = True
    # x on block h iff x h^-1 in D
    q = H.mul[np.arange(H.order)[:, None], H.inv[None, :]]
    return Design(inD[q])


def design_coloring(B: Design) -> np.ndarray:
    """Coloring of points + blocks; bipartition and incidence are encoded in both directions."""
    v, b = B.n_points, B.n_blocks
    n = v + b
    C = np.empty((n, n), dtype=np.int64)
    C[:v, :v] = 2
    C[v:, v:] = 3
    inc = B.incidence
    C[:v, v:] = np.where(inc, 4, 6)
    C[v:, :v] = np.where(inc.T, 5, 7)
    C[np.arange(v), np.arange(v)] = 0
    C[np.arange(v, n), np.arange(v, n)] = 1
    return C


def design_automorphisms(B: Design, node_cap: int = NODE_CAP) -> AutResult:
    """Automorphisms acting on points ``0..v-1`` and blocks ``v..v+b-1``."""
    if B.n_points > DESIGN_POINT_CAP:
        raise ValueError(f"{B.n_points} points exceeds the cap {DESIGN_POINT_CAP}")
    return automorphism_search(design_coloring(B), node_cap)


@dataclass
class TransitivityProfile:
    two_transitive: bool
    flag_transitive: bool
    antiflag_transitive: bool
    aut_order: int
    flag_orbits: int
    antiflag_orbits: int

    @property
    def all(self) -> bool:
        return self.two_transitive and self.flag_transitive and self.antiflag_transitive


def transitivity_profile(B: Design, node_cap: int = NODE_CAP) -> TransitivityProfile:
    res = design_automorphisms(B, node_cap)
    gamma = res.group
    v = B.n_points
    flags = [(x, v + b) for x, b in B.flags()]
    anti = [(x, v + b) for x, b in B.antiflags()]
    fo = flag_orbit_count(gamma, flags) if flags else 0
    ao = flag_orbit_count(gamma, anti) if anti else 0
    return TransitivityProfile(
        two_transitive=is_2transitive_on(gamma, range(v)),
        flag_transitive=fo == 1,
        antiflag_transitive=ao == 1,
        aut_order=res.order,
        flag_orbits=fo,
        antiflag_orbits=ao,
    )
