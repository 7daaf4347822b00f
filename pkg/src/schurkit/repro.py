"""Recipes that rebuild the published tables and witness schemes.

Each recipe returns plain rows (dicts) so the CLI, the tests and the acceptance
suite all consume the same computation.
"""
from __future__ import annotations

import csv
import functools
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import groups as gr
from .autsearch import aut_scheme, find_regular_subgroup, normalizer_in_sym
from .designs import dev, paley_difference_set, singer_difference_set, transitivity_profile
from .io import CATALOGUE, parse_group_spec, parse_permgroup_file, parse_scheme_file, read_text
from .perm import Perm, PermGroup, pair_orbits
from .scheme import (AssociationScheme, Violation, fusion, orbital_scheme, parse_pred,
                     rank4_size_respecting_fusions, select_colors_by_valency)
from .sring import (difference_set_identities, difference_set_sring, is_schurian,
                    scheme_schurity, validate_sring)

FIXTURES_ENV = "SCHURKIT_FIXTURES"

Progress = Callable[[str], None]


def _quiet(msg: str) -> None:
    pass


def _pmap(fn, items: list, jobs: int = 1) -> list:
    """``[fn(x) for x in items]``, optionally across worker processes; order is preserved."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def fixtures_dir(override: str | os.PathLike | None = None) -> Path:
    """Explicit path, else ``$SCHURKIT_FIXTURES``, else the bundled fixtures."""
    if override:
        return Path(override)
    env = os.environ.get(FIXTURES_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data" / "fixtures"


# ---------------------------------------------------------------------------
# dihedral difference-set S-rings


def paley_row(p: int) -> dict:
    ds = paley_difference_set(p)
    A = difference_set_sring(ds)
    v = is_schurian(A)
    return {
        "p": p, "group": f"D{2 * p}", "n": ds.n, "k": ds.k, "lambda": ds.lam,
        "rank": A.rank, "orbital_rank": v.orbital_rank, "aut_order": v.aut_order,
        "verdict": "schurian" if v.schurian else "non-schurian",
    }


def paley_verdicts(primes=(7, 11, 19, 23), progress: Progress = _quiet, jobs: int = 1) -> list[dict]:
    t0 = time.perf_counter()
    rows = _pmap(paley_row, list(primes), jobs)
    for r in rows:
        progress(f"p={r['p']}: {r['verdict']} (|aut| = {r['aut_order']})")
    progress(f"done in {time.perf_counter() - t0:.2f}s")
    return rows


def standard_difference_sets():
    """Paley sets for q in {7, 11, 19, 23} and Singer sets for (q, d) in {(2,2), (2,3), (3,2)}."""
    out = [(f"paley:{q}", paley_difference_set(q)) for q in (7, 11, 19, 23)]
    out += [(f"singer:{q},{d}", singer_difference_set(q, d)) for q, d in ((2, 2), (2, 3), (3, 2))]
    return out


def diffset_row(item, with_profile: bool = True, max_profile_n: int = 40) -> dict:
    name, ds = item
    A = difference_set_sring(ds)
    ok = validate_sring(A) is None
    ids = difference_set_identities(A, ds)
    v = is_schurian(A)
    row = {"set": name, "n": ds.n, "k": ds.k, "lambda": ds.lam, "valid": ok,
           "identities": all(got == exp for got, exp in ids.values()),
           "schurian": v.schurian}
    if with_profile and ds.n <= max_profile_n:
        prof = transitivity_profile(dev(ds))
        row.update(two_transitive=prof.two_transitive, flag_transitive=prof.flag_transitive,
                   antiflag_transitive=prof.antiflag_transitive,
                   design_aut_order=prof.aut_order)
    return row


def diffset_rows(sets=None, with_profile: bool = True, max_profile_n: int = 40,
                 jobs: int = 1) -> list[dict]:
    items = list(sets if sets is not None else standard_difference_sets())
    fn = functools.partial(diffset_row, with_profile=with_profile, max_profile_n=max_profile_n)
    return _pmap(fn, items, jobs)


# ---------------------------------------------------------------------------
# small-group table of non-schurian schemes


@dataclass
class SmallSchemeEntry:
    group: str
    scheme: str
    rank: int
    orbital_rank: int
    file: str


def load_small_scheme_manifest(directory: Path) -> list[SmallSchemeEntry]:
    path = directory / "small_schemes" / "manifest.tsv"
    out = []
    with open(path, encoding="utf-8") as fh:
        for row in csv.DictReader((ln for ln in fh if not ln.startswith("#")), delimiter="\t"):
            out.append(SmallSchemeEntry(row["group"], row["scheme"], int(row["rank"]),
                                   int(row["orbital_rank"]), row["file"]))
    return out


def small_scheme_row(entry: SmallSchemeEntry, directory: Path) -> dict:
    e = entry
    row = {"G": f"[{e.group}]", "X": f"[{e.scheme}]", "rk_X_expected": e.rank,
           "rk_Gamma_expected": e.orbital_rank}
    path = directory / "small_schemes" / e.file if e.file else None
    if path is None or not path.exists():
        row.update(status="skipped: fixture missing")
        return row
    X = parse_scheme_file(read_text(path), name=e.scheme)
    gamma = aut_scheme(X)
    orank = int(pair_orbits(gamma).max()) + 1
    G = CATALOGUE[e.group]() if e.group in CATALOGUE else None
    emb = find_regular_subgroup(gamma, G) if G is not None else None
    ok = X.rank == e.rank and orank == e.orbital_rank and emb is not None
    row.update(rk_X=X.rank, rk_Gamma=orank, aut_order=gamma.order(),
               regular_subgroup=emb is not None, status="ok" if ok else "mismatch")
    return row


def small_scheme_rows(directory=None, progress: Progress = _quiet, jobs: int = 1) -> list[dict]:
    """One row per table entry; rows whose scheme file is absent are marked skipped."""
    d = fixtures_dir(directory)
    entries = load_small_scheme_manifest(d)
    t0 = time.perf_counter()
    rows = _pmap(functools.partial(small_scheme_row, directory=d), entries, jobs)
    for r in rows:
        progress(f"{r['G']} {r['X']}: {r['status']}")
    progress(f"done in {time.perf_counter() - t0:.2f}s")
    return rows


# ---------------------------------------------------------------------------
# E_{2^k} : C_p subgroups of GL_k(2)


def _mult_order(base: int, p: int) -> int:
    x, m = base % p, 1
    while x != 1:
        x = x * base % p
        m += 1
    return m


def _root_of_unity_matrix(p: int, m: int) -> np.ndarray:
    """``m x m`` matrix over GF(2) of multiplication by an element of order ``p`` in GF(2^m)."""
    from .fields import field

    F = field(2**m)
    z = F.pow(F.primitive, (2**m - 1) // p)
    M = np.zeros((m, m), dtype=np.int64)
    for j in range(m):
        img = F.mul(z, 1 << j)
        for i in range(m):
            M[i, j] = (img >> i) & 1
    return M


def _gl2_element(k: int, p: int, fixed: int) -> np.ndarray:
    """Block-diagonal element of order ``p`` in GL_k(2) with a ``fixed``-dimensional fixed space."""
    m = _mult_order(2, p)
    blocks = (k - fixed) // m
    M = np.zeros((k, k), dtype=np.int64)
    pos = 0
    for _ in range(blocks):
        M[pos:pos + m, pos:pos + m] = _root_of_unity_matrix(p, m)
        pos += m
    for i in range(pos, k):
        M[i, i] = 1
    return M


def _vector_action(M: np.ndarray) -> list[int]:
    k = M.shape[0]
    out = []
    for v in range(2**k):
        bits = np.array([(v >> i) & 1 for i in range(k)])
        w = (M @ bits) % 2
        out.append(int(sum(int(b) << i for i, b in enumerate(w))))
    return out


def gl2_subgroup_rows(kmin: int = 3, kmax: int = 5, check_iso: bool = True,
                progress: Progress = _quiet) -> list[dict]:
    """All ``(k, p, c)`` with ``x`` of odd prime order ``p`` in GL_k(2), ``c = |C_P(x)|``.

    ``K`` is ``[P, x]<x>``, extended by one fixed vector when ``[P, x]<x>`` is ``A4``;
    its isomorphism type is confirmed against an independent constructor.
    """
    from .fields import factorize

    named = {
        "A4xC2": lambda: gr.direct_product(gr.alternating_group(4), gr.cyclic(2)),
        "E8:C7": lambda: gr.frobenius_field(2, 3, 7),
        "E16:C3": lambda: gr.frobenius_field(2, 4, 3),
        "E16:C5": lambda: gr.frobenius_field(2, 4, 5),
        "E32:C31": lambda: gr.frobenius_field(2, 5, 31),
    }
    reasons = {"A4xC2": "small_schemes", "E8:C7": "witness e8c7", "E16:C3": "witness e16c3",
               "E16:C5": "witness e16c5", "E32:C31": ""}
    rows = []
    for k in range(kmin, kmax + 1):
        gl_order = 1
        for i in range(k):
            gl_order *= 2**k - 2**i
        primes = sorted(p for p in factorize(gl_order) if p > 2)
        for p in primes:
            m = _mult_order(2, p)
            for fixed in range(k - m, -1, -m):
                M = _gl2_element(k, p, fixed)
                P = gr.elementary_abelian(2, k)
                act = _vector_action(M)
                G = gr.semidirect(P, gr.cyclic(p), gr.cyclic_action(P, p, act))
                x = P.order  # the element (0, 1)
                c = sum(1 for v in range(P.order) if G.conj(v, x) == v)
                moved = [G.mul[G.inv[v], G.conj(v, x)] for v in range(P.order)]  # [v, x]
                comm = gr.subgroup_generated(G, moved)
                single = (k - fixed) == m
                name = "A4xC2" if (p == 3 and single) else f"E{2**(k - fixed)}:C{p}"
                seeds = list(comm) + [x]
                if name == "A4xC2":
                    fixed_vec = next(v for v in range(1, P.order) if G.conj(v, x) == v)
                    seeds.append(fixed_vec)
                K_elems = gr.subgroup_generated(G, seeds)
                K, _ = gr.induced_subgroup(G, K_elems)
                iso = None
                if check_iso and name in named and K.order <= 128:
                    iso = gr.is_isomorphic(K, named[name]()) is not None
                rows.append({"k": k, "p": p, "c": c, "K": name, "order_K": K.order,
                             "K_verified": iso, "reason": reasons.get(name, "")})
                progress(f"k={k} p={p} c={c} K={name}")
    return rows


# ---------------------------------------------------------------------------
# non-schurian fusions from explicit permutation groups


@dataclass
class WitnessRecipe:
    name: str
    group: str  # catalogue id of the group the scheme lives over
    delta_file: str  # generators of the starting group, 1-based cycles
    delta_order: int
    gamma: str  # "normalizer", "normal:C4xC2", "self", "intermediate:<rank>"
    pattern: list[int]
    preds: list[str]
    pi: list[list[int]]
    note: str = ""


def load_witness_manifest(directory: Path) -> list[WitnessRecipe]:
    with open(directory / "witnesses" / "manifest.json", encoding="utf-8") as fh:
        data = json.load(fh)
    return [WitnessRecipe(**r) for r in data["recipes"]]


def _normal_quotient_subgroup(N: PermGroup, D: PermGroup, target: gr.FiniteGroup) -> list[PermGroup]:
    """Groups ``D <= Gamma <= N`` with ``Gamma/D`` normal in ``N/D`` and isomorphic to ``target``."""
    NG, elems = gr.group_from_perms(N)
    index = {p.key(): i for i, p in enumerate(elems)}
    Q, proj = gr.quotient(NG, [index[p.key()] for p in D.elements()])
    size = target.order
    found: list[frozenset] = []
    gens_seen: set[frozenset] = set()
    for a in range(Q.order):
        for b in range(a, Q.order):
            S = frozenset(gr.subgroup_generated(Q, [a, b]))
            if len(S) != size or S in gens_seen:
                continue
            gens_seen.add(S)
            if not Q.is_normal(list(S)):
                continue
            sub, _ = gr.induced_subgroup(Q, S)
            if gr.is_isomorphic(sub, target) is not None:
                found.append(S)
    out = []
    for S in found:
        reps = [elems[i] for i in range(NG.order) if int(proj[i]) in S]
        out.append(PermGroup(N.degree, list(D.generators) + reps))
    return out


def _intermediate_groups(N: PermGroup, D: PermGroup) -> list[PermGroup]:
    """Groups ``<D, g>`` for ``g`` in ``N``, strictly between ``D`` and ``N``, one per subgroup."""
    out, seen = [], set()
    for g in N.elements():
        if D.contains(g):
            continue
        H = PermGroup(N.degree, list(D.generators) + [g])
        if H.order() == N.order():
            continue
        key = H.order(), frozenset(p.key() for p in H.elements())
        if key not in seen:
            seen.add(key)
            out.append(H)
    return out


def run_witness(recipe: WitnessRecipe, directory=None, progress: Progress = _quiet) -> dict:
    d = fixtures_dir(directory)
    row = {"witness": recipe.name, "group": f"[{recipe.group}]"}
    path = d / "witnesses" / recipe.delta_file
    if not path.exists():
        row["status"] = "skipped: fixture missing"
        progress(f"{recipe.name}: skipped, no fixture {recipe.delta_file}")
        return row
    t0 = time.perf_counter()
    D = parse_permgroup_file(read_text(path))
    row["delta_order"] = D.order()
    if D.order() != recipe.delta_order:
        row["status"] = f"fixture order {D.order()} != {recipe.delta_order}"
        return row
    kind, _, arg = recipe.gamma.partition(":")
    if kind == "self":
        gamma = D
    elif kind == "normalizer":
        gamma = normalizer_in_sym(D)
    elif kind == "normal":
        cands = _normal_quotient_subgroup(normalizer_in_sym(D), D, parse_group_spec(arg))
        if len(cands) != 1:
            row["status"] = f"expected a unique normal subgroup, found {len(cands)}"
            return row
        gamma = cands[0]
    elif kind == "intermediate":
        want = int(arg)
        N = normalizer_in_sym(D)
        cands = [H for H in _intermediate_groups(N, D) if orbital_scheme(H).rank == want]
        if not cands:
            row["status"] = f"no intermediate group of rank {want}"
            return row
        gamma = cands[0]
    else:
        raise ValueError(f"unknown gamma recipe {recipe.gamma!r}")
    progress(f"{recipe.name}: |Gamma| = {gamma.order()}")
    X = orbital_scheme(gamma)
    row.update(gamma_order=gamma.order(), rank_inv_gamma=X.rank,
               valencies=[int(v) for v in X.valencies])
    lab = select_colors_by_valency(X, recipe.pattern, [parse_pred(p) for p in recipe.preds],
                                   up_to=recipe.pi)
    pi = [[lab[i] for i in cls] for cls in recipe.pi if len(cls) > 1]
    F = fusion(X, pi)
    if isinstance(F, Violation):
        row.update(status=f"fusion is not a scheme: {F}")
        return row
    v = scheme_schurity(F)
    G = parse_group_spec(f"sg:{recipe.group}")
    row.update(fused_rank=F.rank, aut_order=v.aut_order, aut_equals_gamma=v.aut_order == gamma.order(),
               verdict="schurian" if v.schurian else "non-schurian",
               fusion_of_inv_delta=F.is_fusion_of(orbital_scheme(D)))
    if F.n == G.order:
        row["regular_subgroup"] = find_regular_subgroup(v.aut, G) is not None
    row["status"] = "ok" if not v.schurian else "schurian (unexpected)"
    progress(f"{recipe.name}: {row['verdict']} ({time.perf_counter() - t0:.1f}s)")
    return row


def witness_rows(directory=None, progress: Progress = _quiet, jobs: int = 1) -> list[dict]:
    d = fixtures_dir(directory)
    recipes = load_witness_manifest(d)
    if jobs <= 1:
        return [run_witness(r, d, progress) for r in recipes]
    rows = _pmap(functools.partial(run_witness, directory=d), recipes, jobs)
    for r in rows:
        progress(f"{r['witness']}: {r['status']}")
    return rows


# ---------------------------------------------------------------------------
# rank-4 fusions of PSL_2(q) class schemes


def psl2_report(q: int = 7) -> list[dict]:
    G = gr.psl2(q)
    classes = G.conjugacy_classes()
    rows = []
    for f in rank4_size_respecting_fusions(G):
        rows.append({
            "q": q,
            "cells": "|".join(",".join(str(c) for c in cell) for cell in f.cells),
            "class_sizes": "|".join(",".join(str(len(classes[c])) for c in cell) for cell in f.cells),
            "sizes": f.sizes,
            "equals_class_partition": f.equals_class_partition,
        })
    return rows
