"""Text formats: scheme matrices, permutation-group generators, difference sets,
group specs, group tables, and result tables.

External point indices in permutation files are 1-based; everything internal is
0-based. Lines starting with ``#`` and blank lines are ignored everywhere.
"""
from __future__ import annotations

import json
import re
from typing import Iterable, Sequence

import numpy as np

from . import groups as gr
from .designs import DifferenceSet, is_difference_set
from .perm import Perm, PermGroup
from .scheme import AssociationScheme, SchemeError, Violation, validate_coloring


class ParseError(ValueError):
    pass


def _content_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# schemes


def parse_color_matrix(text: str) -> np.ndarray:
    """Square integer matrix, with or without a leading size line."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty scheme file")
    rows = []
    for i, line in enumerate(lines):
        try:
            rows.append([int(t) for t in line.replace(",", " ").split()])
        except ValueError:
            raise ParseError(f"line {i + 1}: non-integer entry in {line!r}") from None
    if len(rows[0]) == 1 and len(rows) == rows[0][0] + 1:
        n = rows[0][0]
        rows = rows[1:]
    else:
        n = len(rows)
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ParseError(f"row {i + 1} has {len(r)} entries, expected {n}")
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}")
    mat = np.array(rows, dtype=np.int64).reshape(n, n)
    if (mat < 0).any():
        raise ParseError("colors must be non-negative")
    return mat


def parse_scheme_file(text: str, name: str = "") -> AssociationScheme:
    mat = parse_color_matrix(text)
    if len(set(np.diag(mat).tolist())) != 1:
        raise SchemeError("diagonal is not monochrome")
    bad = validate_coloring(mat)
    if bad is not None:
        raise SchemeError(f"not an association scheme: {bad}")
    return AssociationScheme(mat, check=False, name=name)


def emit_scheme(X: AssociationScheme, header: bool = True) -> str:
    width = len(str(X.rank - 1))
    lines = [str(X.n)] if header else []
    for row in X.color:
        lines.append(" ".join(str(int(c)).rjust(width) for c in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# permutation groups

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_perm(line: str, degree: int) -> Perm:
    """A generator in cycle notation ``(1,2,3)(4,5)`` or as a 1-based image list."""
    s = line.strip()
    if s.startswith("("):
        if _CYCLE.sub("", s).strip():
            raise ParseError(f"malformed cycles: {line!r}")
        cycles = []
        for body in _CYCLE.findall(s):
            body = body.strip()
            if not body:
                continue
            try:
                pts = [int(t) for t in re.split(r"[,\s]+", body) if t]
            except ValueError:
                raise ParseError(f"malformed cycle ({body})") from None
            for p in pts:
                if not 1 <= p <= degree:
                    raise ParseError(f"point {p} out of range 1..{degree}")
            if len(set(pts)) != len(pts):
                raise ParseError(f"repeated point in cycle ({body})")
            cycles.append([p - 1 for p in pts])
        try:
            return Perm.from_cycles(degree, cycles)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    try:
        imgs = [int(t) for t in re.split(r"[,\s\[\]]+", s) if t]
    except ValueError:
        raise ParseError(f"malformed image list: {line!r}") from None
    if len(imgs) != degree:
        raise ParseError(f"image list has {len(imgs)} entries, expected {degree}")
    for p in imgs:
        if not 1 <= p <= degree:
            raise ParseError(f"point {p} out of range 1..{degree}")
    try:
        return Perm([p - 1 for p in imgs])
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_permgroup_file(text: str) -> PermGroup:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty group file")
    try:
        degree = int(lines[0])
    except ValueError:
        raise ParseError(f"first line must be the degree, got {lines[0]!r}") from None
    if degree < 1:
        raise ParseError("degree must be positive")
    gens = [parse_perm(line, degree) for line in lines[1:]]
    return PermGroup(degree, gens)


def emit_permgroup(group: PermGroup) -> str:
    lines = [str(group.degree)]
    for g in group.generators:
        cyc = g.cycles()
        lines.append("".join("(" + ",".join(str(p + 1) for p in c) + ")" for c in cyc) or "()")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# groups by name

# catalogue tags for the small groups that have a constructor here
CATALOGUE = {
    "16,3": lambda: gr.sg16_3(),
    "16,4": lambda: gr.metacyclic(4, 4, 3, label="C4:C4"),
    "16,6": lambda: gr.modular_M(2, 4),
    "16,8": lambda: gr.semidihedral(16),
    "16,9": lambda: gr.quaternion_generalized(16),
    "16,11": lambda: gr.direct_product(gr.cyclic(2), gr.dihedral(8), label="C2xD8"),
    "16,12": lambda: gr.direct_product(gr.cyclic(2), gr.quaternion_generalized(8), label="C2xQ8"),
    "16,13": lambda: gr.g16(),
    "18,3": lambda: gr.direct_product(gr.cyclic(3), gr.dihedral(6), label="C3xS3"),
    "18,4": lambda: gr.generalized_dihedral(gr.elementary_abelian(3, 2)),
    "24,13": lambda: gr.direct_product(gr.alternating_group(4), gr.cyclic(2), label="A4xC2"),
    "48,50": lambda: gr.frobenius_field(2, 4, 3),
    "56,11": lambda: gr.frobenius_field(2, 3, 7),
    "60,5": lambda: gr.alternating_group(5),
    "80,49": lambda: gr.frobenius_field(2, 4, 5),
}


def _ints(arg: str) -> list[int]:
    try:
        return [int(t) for t in arg.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"expected integers, got {arg!r}") from None


def parse_group_spec(spec: str) -> gr.FiniteGroup:
    """Build a group from a short spec such as ``cyclic:12``, ``psl2:7`` or ``c2 x d8``.

    Forms: ``cyclic:n`` (``c:n``, ``cN``), ``dihedral:2n`` (``d:2n``, ``dN``), ``e:p,k``
    (``eN`` for a prime power N), ``gdihedral:<spec>``, ``frobenius:p,k,m``, ``psl2:q``,
    ``g16``, ``m:p,k``, ``sd:2^k``, ``q:2^k``, ``sym:n``, ``alt:n``, ``sg:n,i`` for the
    catalogue, and ``A x B`` for direct products.
    """
    s = spec.strip()
    if " x " in s:
        parts = [parse_group_spec(p) for p in s.split(" x ")]
        out = parts[0]
        for p in parts[1:]:
            out = gr.direct_product(out, p)
        return out
    low = s.lower()
    m = re.fullmatch(r"([a-z]+)(\d+)", low)
    if m and ":" not in low and low not in ("g16",):
        head, num = m.group(1), int(m.group(2))
        short = {"c": "cyclic", "d": "dihedral", "q": "q", "sd": "sd", "e": "e", "s": "sym", "a": "alt"}
        if head in short:
            if head == "e":
                from .fields import prime_power
                pk = prime_power(num)
                if pk is None:
                    raise ParseError(f"E{num}: not a prime power")
                return gr.elementary_abelian(*pk)
            return parse_group_spec(f"{short[head]}:{num}")
    name, _, arg = low.partition(":")
    if name in ("cyclic", "c"):
        return gr.cyclic(_ints(arg)[0])
    if name in ("dihedral", "d"):
        return gr.dihedral(_ints(arg)[0])
    if name in ("e", "elementary"):
        p, k = _ints(arg)
        return gr.elementary_abelian(p, k)
    if name in ("gdihedral", "gd"):
        return gr.generalized_dihedral(parse_group_spec(arg))
    if name in ("frobenius", "frob"):
        p, k, mm = _ints(arg)
        return gr.frobenius_field(p, k, mm)
    if name == "psl2":
        return gr.psl2(_ints(arg)[0])
    if name == "g16":
        return gr.g16()
    if name in ("m", "modular"):
        p, k = _ints(arg)
        return gr.modular_M(p, k)
    if name in ("sd", "semidihedral"):
        return gr.semidihedral(_ints(arg)[0])
    if name in ("q", "quaternion"):
        return gr.quaternion_generalized(_ints(arg)[0])
    if name in ("sym", "s"):
        return gr.symmetric_group(_ints(arg)[0])
    if name in ("alt", "a"):
        return gr.alternating_group(_ints(arg)[0])
    if name == "sg":
        key = ",".join(str(v) for v in _ints(arg))
        if key not in CATALOGUE:
            raise ParseError(f"no constructor for catalogue id [{key}]")
        G = CATALOGUE[key]()
        G.label = f"SG({key})"
        return G
    raise ParseError(f"unknown group spec {spec!r}")


def parse_group_table(text: str) -> gr.FiniteGroup:
    """Cayley table: optional order line, then rows of 0-based products (0 = identity)."""
    return gr.FiniteGroup(parse_color_matrix(text))


def emit_group_table(G: gr.FiniteGroup) -> str:
    width = len(str(G.order - 1))
    lines = [str(G.order)] + [" ".join(str(int(v)).rjust(width) for v in row) for row in G.mul]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# difference sets and partitions


def parse_diffset_file(text: str) -> DifferenceSet:
    """First line: group spec (abelian); second line: 0-based element indices."""
    lines = _content_lines(text)
    if len(lines) != 2:
        raise ParseError("difference-set file needs a group line and an element line")
    H = parse_group_spec(lines[0])
    D = _ints(lines[1].replace(" ", ","))
    for x in D:
        if not 0 <= x < H.order:
            raise ParseError(f"element {x} out of range")
    res = is_difference_set(H, D)
    if isinstance(res, Violation):
        raise ParseError(f"not a difference set: {res}")
    return res


def parse_partition(text: str) -> list[list[int]]:
    """Classes separated by ``|`` or newlines, elements by commas or spaces."""
    body = "|".join(_content_lines(text)) if "\n" in text else text
    classes = []
    for part in body.split("|"):
        part = part.strip()
        if part:
            classes.append(_ints(part.replace(" ", ",")))
    return classes


# ---------------------------------------------------------------------------
# result tables


def emit_table(rows: Sequence[dict], fmt: str = "tsv", columns: Sequence[str] | None = None) -> str:
    """Rows as TSV or JSON; column order is ``columns`` or first-seen key order."""
    if columns is None:
        columns = []
        for r in rows:
            for k in r:
                if k not in columns:
                    columns.append(k)
    columns = list(columns)
    if fmt == "json":
        data = [{c: r.get(c) for c in columns} for r in rows]
        return json.dumps({"columns": columns, "rows": data}, indent=1, sort_keys=False) + "\n"
    if fmt != "tsv":
        raise ValueError(f"unknown format {fmt!r}")
    lines = ["\t".join(columns)]
    for r in rows:
        lines.append("\t".join(_cell(r.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return ",".join(_cell(x) for x in v)
    return str(v)


def read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def iter_fixture_files(directory, suffix: str) -> Iterable[str]:
    import os

    if not os.path.isdir(directory):
        return []
    return sorted(f for f in os.listdir(directory) if f.endswith(suffix))
