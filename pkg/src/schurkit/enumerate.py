"""Exhaustive enumeration of S-rings over small groups.

The search assigns elements to basic sets one at a time. The next element ``g``
is the first unassigned one in the order (element order, index); its basic set
is chosen inside the class of ``g`` in the S-ring closure of what has been fixed
so far, since any S-ring containing the chosen sets refines that closure. A branch
dies as soon as the closure splits a chosen set. Every S-ring has exactly one
branch (its own basic sets, in this element order), so results are duplicate-free.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._rows import rerank_rows
from .groups import FiniteGroup
from .sring import SRing, is_schurian, product_coefficients

ENUM_ORDER_CAP = 32
BRUTE_ORDER_CAP = 8


class EnumerationBudgetExceeded(RuntimeError):
    """Raised when the node or time budget runs out; ``partial`` holds what was found."""

    def __init__(self, msg: str, partial: list):
        super().__init__(msg)
        self.partial = partial


def _rerank(keys: np.ndarray) -> np.ndarray:
    return rerank_rows(keys)[0]


def _symmetrize(G: FiniteGroup, labels: np.ndarray) -> np.ndarray:
    """Coarsest common refinement with its inverse image, with ``e`` split off."""
    is_e = (np.arange(G.order) == 0).astype(np.int64)
    return _rerank(np.stack([1 - is_e, labels, labels[G.inv]], axis=1))


def closure_labels(G: FiniteGroup, labels: np.ndarray) -> np.ndarray:
    """Labels of the S-ring closure of the partition given by ``labels``."""
    lab = _symmetrize(G, np.asarray(labels, dtype=np.int64))
    k = int(lab.max()) + 1
    while True:
        U = np.zeros((k, G.order), dtype=np.int64)
        U[lab, np.arange(G.order)] = 1
        coef = product_coefficients(G, U).reshape(k * k, G.order)
        new = _symmetrize(G, _rerank(np.concatenate([lab[:, None], coef.T], axis=1)))
        k_new = int(new.max()) + 1
        lab = new
        if k_new == k:
            return lab
        k = k_new


def _classes_from_labels(labels: np.ndarray) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for x, c in enumerate(labels.tolist()):
        out.setdefault(c, []).append(x)
    return [out[c] for c in sorted(out, key=lambda c: out[c][0])]


def sring_closure(G: FiniteGroup, seed) -> SRing:
    """Smallest S-ring whose module contains the sums of the seed classes."""
    labels = np.zeros(G.order, dtype=np.int64)
    for i, c in enumerate(seed):
        labels[list(c)] = i
    return SRing(G, _classes_from_labels(closure_labels(G, labels)))


def processing_order(G: FiniteGroup) -> list[int]:
    orders = G.element_orders()
    return sorted(range(G.order), key=lambda x: (int(orders[x]), x))


@dataclass
class EnumStats:
    nodes: int = 0
    closures: int = 0
    wall_time: float = 0.0


def _candidate_sets(G: FiniteGroup, g: int, pool: list[int]):
    """Basic-set candidates containing ``g`` drawn from ``pool`` (which contains ``g``).

    Yields ``(X, extra)`` where ``extra`` is ``X^-1`` when it is a different set.
    """
    inv = G.inv
    ginv = int(inv[g])
    pairs = []
    seen = {g, ginv}
    for x in pool:
        if x in seen:
            continue
        xi = int(inv[x])
        seen.add(x)
        seen.add(xi)
        pairs.append((x, xi))
    pool_set = set(pool)
    # inverse-closed X: a union of inverse pairs containing {g, g^-1}
    if ginv in pool_set:
        closed_pairs = [p for p in pairs if p[1] in pool_set]
        for r in range(len(closed_pairs) + 1):
            for sub in itertools.combinations(closed_pairs, r):
                X = {g, ginv}
                for a, b in sub:
                    X.add(a)
                    X.add(b)
                yield sorted(X), None
    # X disjoint from X^-1: at most one element from each chosen pair, g itself included
    if ginv != g:
        options = []
        for a, b in pairs:
            if a == b:
                continue
            opts = [y for y in (a, b) if y in pool_set]
            if opts:
                options.append([None] + opts)
        for picks in itertools.product(*options):
            X = [g] + [y for y in picks if y is not None]
            Xi = sorted(int(inv[x]) for x in X)
            yield sorted(X), Xi


def enumerate_srings(G: FiniteGroup, node_budget: int = 5_000_000, time_budget: float | None = None,
                     order_cap: int = ENUM_ORDER_CAP, progress: Callable[[EnumStats, int], None] | None = None,
                     stats: EnumStats | None = None) -> list[SRing]:
    """All S-rings over ``G``, sorted by (rank, canonical key)."""
    if G.order > order_cap:
        raise ValueError(f"|G| = {G.order} exceeds the enumeration cap {order_cap}")
    st = stats if stats is not None else EnumStats()
    t0 = time.perf_counter()
    porder = processing_order(G)
    found: list[SRing] = []

    def budget_check():
        st.nodes += 1
        if st.nodes > node_budget:
            raise EnumerationBudgetExceeded(f"node budget {node_budget} exhausted", found)
        if time_budget is not None and time.perf_counter() - t0 > time_budget:
            raise EnumerationBudgetExceeded(f"time budget {time_budget}s exhausted", found)
        if progress is not None and st.nodes % 1000 == 0:
            progress(st, len(found))

    def rec(chosen: list[list[int]], labels: np.ndarray, assigned: np.ndarray):
        budget_check()
        free = [x for x in porder if not assigned[x]]
        if not free:
            found.append(SRing(G, [list(c) for c in chosen]))
            return
        g = free[0]
        pool = [x for x in range(G.order) if labels[x] == labels[g]]
        for X, Xi in _candidate_sets(G, g, pool):
            new_chosen = chosen + [X] + ([Xi] if Xi is not None else [])
            seed = np.full(G.order, len(new_chosen), dtype=np.int64)
            for i, c in enumerate(new_chosen):
                seed[c] = i
            st.closures += 1
            # any S-ring containing the new sets refines the parent closure
            lab = closure_labels(G, _rerank(np.stack([labels, seed], axis=1)))
            if any(len(set(lab[c].tolist())) > 1 for c in new_chosen):
                continue
            asg = assigned.copy()
            for c in new_chosen[len(chosen):]:
                asg[c] = True
            rec(new_chosen, lab, asg)

    assigned = np.zeros(G.order, dtype=bool)
    assigned[0] = True
    start = closure_labels(G, np.where(np.arange(G.order) == 0, 0, 1))
    rec([[0]], start, assigned)
    st.wall_time = time.perf_counter() - t0
    found.sort(key=lambda A: (A.rank, A.key()))
    return found


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _closed_by_brute_force(G: FiniteGroup, classes: list[list[int]]) -> bool:
    """Direct check: inverse-closure and constant product coefficients, no shared machinery."""
    cls_of = {}
    for i, c in enumerate(classes):
        for x in c:
            cls_of[x] = i
    mul = G.mul.tolist()
    inv = G.inv.tolist()
    for c in classes:
        if len({cls_of[inv[x]] for x in c}) != 1:
            return False
    for a in classes:
        for b in classes:
            counts = [0] * G.order
            for x in a:
                for y in b:
                    counts[mul[x][y]] += 1
            for c in classes:
                if len({counts[z] for z in c}) != 1:
                    return False
    return True


def brute_force_srings(G: FiniteGroup) -> list[SRing]:
    """Filter every partition of ``G \\ {e}`` (plus ``{e}``); only for ``|G| <= 8``."""
    if G.order > BRUTE_ORDER_CAP:
        raise ValueError(f"|G| = {G.order} exceeds the brute-force cap {BRUTE_ORDER_CAP}")
    out = []
    for part in _set_partitions(list(range(1, G.order))):
        classes = [[0]] + [sorted(c) for c in part]
        if _closed_by_brute_force(G, classes):
            out.append(SRing(G, classes))
    out.sort(key=lambda A: (A.rank, A.key()))
    return out


@dataclass
class CensusRow:
    rank: int
    schurian: bool
    aut_order: int
    classes: list[list[int]]


@dataclass
class Census:
    group: FiniteGroup
    rows: list[CensusRow]

    @property
    def is_schur(self) -> bool:
        return all(r.schurian for r in self.rows)

    @property
    def non_schurian(self) -> list[CensusRow]:
        return [r for r in self.rows if not r.schurian]


def schurity_census(G: FiniteGroup, srings: list[SRing] | None = None, **kwargs) -> Census:
    if srings is None:
        srings = enumerate_srings(G, **kwargs)
    rows = []
    for A in srings:
        v = is_schurian(A)
        rows.append(CensusRow(A.rank, v.schurian, v.aut_order, [list(c) for c in A.classes]))
    return Census(G, rows)
