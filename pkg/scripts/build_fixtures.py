"""Regenerate the bundled fixtures under src/schurkit/data/fixtures.

Table rows: for each order-16/18 row the scheme is chosen among Cayley schemes
over the row's first group. The rank-3 entry is the Shrikhande graph scheme.
The others are the first non-schurian S-rings (in enumeration order) whose
scheme rank and automorphism-group rank match the row.

Witness rows: generators of coset actions that can be built from named groups.
"""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from schurkit import groups as gr
from schurkit.enumerate import enumerate_srings
from schurkit.io import CATALOGUE, emit_permgroup, emit_scheme
from schurkit.perm import coset_action
from schurkit.scheme import cayley_coloring
from schurkit.sring import is_schurian, to_cayley_scheme

ROOT = Path(__file__).resolve().parents[1] / "src" / "schurkit" / "data" / "fixtures"

# (group, scheme id, rank, rank of the automorphism group, file or "")
TABLE = [
    ("16,3", "16,59", 6, 7), ("16,4", "16,94", 7, 10), ("16,6", "16,6", 3, 4),
    ("16,8", "16,6", 3, 4), ("16,9", "16,59", 6, 7), ("16,11", "16,6", 3, 4),
    ("16,12", "16,59", 6, 7), ("18,3", "18,41", 6, 8), ("18,4", "18,41", 6, 8),
    ("24,1", "24,191", 7, 24), ("24,3", "24,308", 8, 9), ("24,4", "24,304", 8, 14),
    ("24,5", "24,299", 8, 14), ("24,7", "24,304", 8, 14), ("24,8", "24,299", 8, 14),
    ("24,10", "24,304", 8, 14), ("24,11", "24,308", 8, 9), ("24,12", "24,17", 4, 6),
    ("24,13", "24,106", 6, 12), ("24,14", "24,299", 8, 14), ("27,3", "27,382", 4, 6),
    ("27,4", "27,382", 4, 6),
]


def shrikhande():
    G = gr.direct_product(gr.cyclic(4), gr.cyclic(4))  # (a, b) at b*4 + a
    conn = {(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)}
    cls = np.array([0 if x == 0 else (1 if (x % 4, x // 4) in conn else 2) for x in range(16)])
    return cayley_coloring(G, cls, check=True)


def first_nonschurian(group_id: str, rank: int, orank: int):
    G = CATALOGUE[group_id]()
    for A in enumerate_srings(G):
        if A.rank != rank:
            continue
        v = is_schurian(A)
        if not v.schurian and v.orbital_rank == orank:
            return to_cayley_scheme(A)
    raise RuntimeError(f"no candidate over [{group_id}]")


def build_small_schemes() -> None:
    out = ROOT / "small_schemes"
    out.mkdir(parents=True, exist_ok=True)
    made = {}
    for group, scheme, rank, orank in TABLE:
        if scheme in made or group[:2] not in ("16", "18"):
            continue
        X = shrikhande() if scheme == "16,6" else first_nonschurian(group, rank, orank)
        name = f"scheme_{scheme.replace(',', '_')}.txt"
        head = (f"# reconstructed entry [{scheme}]: rank {X.rank}, built over [{group}]\n")
        (out / name).write_text(head + emit_scheme(X), encoding="utf-8")
        made[scheme] = name
        print(f"wrote {name}", file=sys.stderr)
    lines = ["group\tscheme\trank\torbital_rank\tfile"]
    for group, scheme, rank, orank in TABLE:
        lines.append(f"{group}\t{scheme}\t{rank}\t{orank}\t{made.get(scheme, '')}")
    (out / "manifest.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_witnesses() -> None:
    out = ROOT / "witnesses"
    out.mkdir(parents=True, exist_ok=True)
    A5 = gr.alternating_group(5)
    h = A5.elements.index((1, 0, 3, 2, 4))  # (1,2)(3,4)
    (out / "a5_cosets_30.txt").write_text(
        "# A5 on the right cosets of <(1,2)(3,4)>\n" + emit_permgroup(coset_action(A5, [0, h])),
        encoding="utf-8")
    G = gr.frobenius_field(2, 4, 5)
    t = int(np.nonzero(G.element_orders() == 2)[0][0])
    (out / "e16c5_cosets_40.txt").write_text(
        "# E16:C5 on the right cosets of a subgroup of order 2\n"
        + emit_permgroup(coset_action(G, [0, t])), encoding="utf-8")


if __name__ == "__main__":
    build_small_schemes()
    build_witnesses()
