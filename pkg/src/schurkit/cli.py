"""Command-line front end: ``schurkit <command> ...``.

Exit codes: 0 success, 1 when ``--expect`` is given and the verdict differs, 2 on
errors (bad input, failed parse, exhausted budget). Results go to stdout as TSV or
JSON; progress goes to stderr. Flags can also be read from a file with ``@flags.txt``
(one flag or value per line).
"""
from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from . import groups as gr
from .autsearch import SearchBudgetExceeded, automorphism_search
from .designs import dev, paley_difference_set, singer_difference_set, transitivity_profile
from .enumerate import EnumerationBudgetExceeded, EnumStats, enumerate_srings, schurity_census
from .io import (ParseError, emit_group_table, emit_scheme, emit_table, parse_diffset_file,
                 parse_group_spec, parse_group_table, parse_partition, parse_permgroup_file,
                 parse_scheme_file, read_text)
from .perm import PermGroup, coset_action, pair_orbits, regular_representation
from .scheme import SchemeError, Violation, fusion, orbital_scheme, parse_pred, select_colors_by_valency, wreath
from .sring import (SRingError, difference_set_identities, difference_set_sring, is_schurian,
                    scheme_schurity, sring_from_partition, validate_sring)
from . import repro


class CliError(Exception):
    pass


class _Ctx:
    def __init__(self, args):
        self.args = args
        self.quiet = getattr(args, "quiet", False)

    def progress(self, msg: str) -> None:
        if not self.quiet:
            print(msg, file=sys.stderr, flush=True)

    def emit(self, rows, columns=None) -> None:
        sys.stdout.write(emit_table(rows, self.args.format, columns))

    def verdict(self, got: str) -> int:
        want = getattr(self.args, "expect", None)
        if want is None:
            return 0
        if got != want:
            self.progress(f"expected {want}, got {got}")
            return 1
        return 0


def _ints_csv(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}") from None


def _load_group(args) -> gr.FiniteGroup:
    if getattr(args, "group_table", None):
        return parse_group_table(read_text(args.group_table))
    if getattr(args, "group", None):
        return parse_group_spec(args.group)
    raise CliError("give --group <spec> or --group-table <file>")


# ---------------------------------------------------------------------------
# group


def cmd_group_build(ctx: _Ctx) -> int:
    a = ctx.args
    G = parse_group_spec(a.spec)
    if a.table:
        sys.stdout.write(emit_group_table(G))
        return 0
    orders = G.element_orders()
    ctx.emit([{
        "spec": a.spec, "label": G.label, "order": G.order, "abelian": G.is_abelian(),
        "exponent": G.exponent(), "center": len(G.center()),
        "classes": len(G.conjugacy_classes()), "involutions": int((orders == 2).sum()),
    }])
    return 0


# ---------------------------------------------------------------------------
# scheme


def _action_group(args) -> PermGroup:
    if args.group_file:
        return parse_permgroup_file(read_text(args.group_file))
    G = _load_group(args)
    if args.action:
        kind, _, arg = args.action.partition(":")
        if kind != "coset":
            raise CliError(f"unknown action {args.action!r}; use coset:<generator indices>")
        H = gr.subgroup_generated(G, _ints_csv(arg))
        return coset_action(G, H)
    return regular_representation(G)


def cmd_scheme_inv(ctx: _Ctx) -> int:
    a = ctx.args
    gamma = _action_group(a)
    X = orbital_scheme(gamma)
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(emit_scheme(X))
    ctx.emit([{"degree": X.n, "group_order": gamma.order(), "rank": X.rank,
               "valencies": [int(v) for v in X.valencies]}])
    return 0


def cmd_scheme_fuse(ctx: _Ctx) -> int:
    a = ctx.args
    X = parse_scheme_file(read_text(a.scheme))
    pi = parse_partition(a.pi)
    if a.by_valency:
        lab = select_colors_by_valency(X, _ints_csv(a.by_valency), [parse_pred(p) for p in a.pred], up_to=pi)
        ctx.progress("labeling: " + " ".join(f"R{i}=color {c}" for i, c in enumerate(lab) if i))
        pi = [[lab[i] for i in cls] for cls in pi]
    F = fusion(X, [c for c in pi if len(c) > 1])
    if isinstance(F, Violation):
        ctx.emit([{"rank": None, "scheme": False, "violation": str(F)}])
        return 1 if a.expect else 0
    row = {"rank": F.rank, "scheme": True, "valencies": [int(v) for v in F.valencies]}
    if a.schurity:
        v = scheme_schurity(F)
        row.update(aut_order=v.aut_order, orbital_rank=v.orbital_rank,
                   verdict="schurian" if v.schurian else "non-schurian")
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(emit_scheme(F))
    ctx.emit([row])
    if a.expect and "verdict" in row:
        return ctx.verdict(row["verdict"])
    return 0


def cmd_scheme_wreath(ctx: _Ctx) -> int:
    a = ctx.args
    W = wreath(parse_scheme_file(read_text(a.bottom)), parse_scheme_file(read_text(a.top)))
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(emit_scheme(W))
        ctx.emit([{"n": W.n, "rank": W.rank, "valencies": [int(v) for v in W.valencies]}])
    else:
        sys.stdout.write(emit_scheme(W))
    return 0


# ---------------------------------------------------------------------------
# aut


def cmd_aut(ctx: _Ctx) -> int:
    a = ctx.args
    X = parse_scheme_file(read_text(a.scheme))
    t0 = time.perf_counter()
    res = automorphism_search(X.color, a.node_cap)
    ctx.progress(f"search: {res.stats.nodes} nodes, {time.perf_counter() - t0:.2f}s")
    orank = int(pair_orbits(res.group).max()) + 1
    verdict = "schurian" if orank == X.rank else "non-schurian"
    ctx.emit([{"n": X.n, "rank": X.rank, "aut_order": res.order, "orbital_rank": orank,
               "verdict": verdict}])
    return ctx.verdict(verdict)


# ---------------------------------------------------------------------------
# sring


def cmd_sring_schurian(ctx: _Ctx) -> int:
    a = ctx.args
    G = _load_group(a)
    text = read_text(a.partition) if os.path.exists(a.partition) else a.partition
    A = sring_from_partition(G, parse_partition(text))
    v = is_schurian(A, a.node_cap)
    verdict = "schurian" if v.schurian else "non-schurian"
    ctx.emit([{"group": G.label or a.group, "rank": A.rank, "orbital_rank": v.orbital_rank,
               "aut_order": v.aut_order, "verdict": verdict}])
    return ctx.verdict(verdict)


def _diffset_from_args(a):
    if a.file:
        return parse_diffset_file(read_text(a.file))
    if a.singer:
        q, d = _ints_csv(a.singer)
        return singer_difference_set(q, d)
    if a.q:
        return paley_difference_set(a.q)
    raise CliError("give --q, --singer q,d or --file")


def cmd_sring_diffset(ctx: _Ctx) -> int:
    a = ctx.args
    ds = _diffset_from_args(a)
    A = difference_set_sring(ds)
    bad = validate_sring(A)
    if bad is not None:
        raise CliError(f"difference-set partition is not an S-ring: {bad}")
    ids = difference_set_identities(A, ds)
    v = is_schurian(A, a.node_cap)
    verdict = "schurian" if v.schurian else "non-schurian"
    ctx.emit([{"n": ds.n, "k": ds.k, "lambda": ds.lam, "group": f"gdihedral order {2 * ds.n}",
               "rank": A.rank, "identities": all(g == e for g, e in ids.values()),
               "orbital_rank": v.orbital_rank, "aut_order": v.aut_order, "verdict": verdict}])
    return ctx.verdict(verdict)


# ---------------------------------------------------------------------------
# design


def cmd_design_check(ctx: _Ctx) -> int:
    a = ctx.args
    ds = _diffset_from_args(a)
    B = dev(ds)
    params = B.parameters()
    prof = transitivity_profile(B, a.node_cap)
    ctx.emit([{"v": params[0] if params else None, "k": params[1] if params else None,
               "lambda": params[2] if params else None, "aut_order": prof.aut_order,
               "two_transitive": prof.two_transitive, "flag_transitive": prof.flag_transitive,
               "antiflag_transitive": prof.antiflag_transitive,
               "flag_orbits": prof.flag_orbits, "antiflag_orbits": prof.antiflag_orbits}])
    return ctx.verdict("transitive" if prof.all else "not-transitive")


# ---------------------------------------------------------------------------
# enumerate


def cmd_enumerate(ctx: _Ctx) -> int:
    a = ctx.args
    G = _load_group(a)
    st = EnumStats()

    def report(stats: EnumStats, found: int) -> None:
        ctx.progress(f"nodes {stats.nodes}, closures {stats.closures}, found {found}")

    srings = enumerate_srings(G, node_budget=a.node_budget, time_budget=a.time_budget,
                              progress=report, stats=st)
    ctx.progress(f"{len(srings)} S-rings, {st.nodes} nodes, {st.wall_time:.2f}s")
    label = G.label or a.group
    if not a.census:
        ctx.emit([{"group": label, "rank": A.rank,
                   "classes": "|".join(",".join(map(str, c)) for c in A.classes)} for A in srings])
        return 0
    census = schurity_census(G, srings)
    ctx.emit([{"group": label, "rank": r.rank, "verdict": "schurian" if r.schurian else "non-schurian",
               "aut_order": r.aut_order} for r in census.rows],
             columns=["group", "rank", "verdict", "aut_order"])
    ctx.progress(f"{len(census.non_schurian)} non-schurian of {len(census.rows)}")
    return ctx.verdict("schur" if census.is_schur else "non-schur")


# ---------------------------------------------------------------------------
# repro


def _all_ok(rows, key="status") -> str:
    live = [r for r in rows if not str(r.get(key, "")).startswith("skipped")]
    return "ok" if all(r.get(key) == "ok" for r in live) else "mismatch"


def cmd_repro(ctx: _Ctx) -> int:
    a = ctx.args
    what = a.what
    if what == "paley":
        rows = repro.paley_verdicts(progress=ctx.progress, jobs=a.jobs)
        claimed = {p: ("schurian" if p <= 11 else "non-schurian") for p in (7, 11, 19, 23)}
        status = "ok" if all(r["verdict"] == claimed[r["p"]] for r in rows) else "mismatch"
    elif what == "small-schemes":
        rows = repro.small_scheme_rows(a.fixtures, progress=ctx.progress, jobs=a.jobs)
        skipped = [r for r in rows if r["status"].startswith("skipped")]
        if skipped:
            ctx.progress(f"{len(skipped)} of {len(rows)} rows skipped: no fixture file")
        status = _all_ok(rows)
    elif what == "gl2-subgroups":
        rows = repro.gl2_subgroup_rows(progress=ctx.progress)
        status = "ok" if all(r["K_verified"] is not False for r in rows) else "mismatch"
    elif what == "witnesses":
        rows = repro.witness_rows(a.fixtures, progress=ctx.progress, jobs=a.jobs)
        status = _all_ok(rows)
    elif what == "diffsets":
        rows = repro.diffset_rows(jobs=a.jobs)
        status = "ok" if all(r["valid"] and r["identities"] for r in rows) else "mismatch"
    elif what == "psl2":
        rows = repro.psl2_report(a.q)
        status = "ok"
    else:  # argparse restricts the choices
        raise CliError(f"unknown recipe {what}")
    ctx.emit(rows)
    if a.expect and status != "ok":
        ctx.progress(f"repro {what}: {status}")
        return 1
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["tsv", "json"], default="tsv")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent cases")
    common.add_argument("--quiet", action="store_true", help="no progress on stderr")
    common.add_argument("--node-cap", type=int, default=10_000_000, help="search-node budget")

    p = argparse.ArgumentParser(prog="schurkit", fromfile_prefix_chars="@",
                                description="Schur rings, association schemes and schurity tests.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def group_opts(q):
        q.add_argument("--group", help="group spec, e.g. cyclic:12, gdihedral:e9, sg:16,11")
        q.add_argument("--group-table", help="Cayley table file (0-based, identity 0)")

    g = sub.add_parser("group", help="group constructors").add_subparsers(dest="sub", required=True)
    b = g.add_parser("build", parents=[common], help="build a group and print invariants")
    b.add_argument("spec")
    b.add_argument("--table", action="store_true", help="print the Cayley table instead")
    b.set_defaults(fn=cmd_group_build)

    s = sub.add_parser("scheme", help="association schemes").add_subparsers(dest="sub", required=True)
    si = s.add_parser("inv", parents=[common], help="orbital scheme of a permutation group")
    group_opts(si)
    si.add_argument("--group-file", help="permutation generators (degree line, then cycles)")
    si.add_argument("--action", help="coset:<element indices generating H>")
    si.add_argument("--out", help="write the scheme matrix here")
    si.set_defaults(fn=cmd_scheme_inv)
    sf = s.add_parser("fuse", parents=[common], help="merge colors of a scheme")
    sf.add_argument("--scheme", required=True)
    sf.add_argument("--pi", required=True, help='partition of colors, e.g. "1,3|2|4,5|6,7"')
    sf.add_argument("--by-valency", help="valency pattern naming colors 1..k; --pi then refers to these names")
    sf.add_argument("--pred", action="append", default=[], help="labeling constraint, e.g. clique:2, !clique:3, pair:4-5")
    sf.add_argument("--schurity", action="store_true", help="also test the fusion for schurity")
    sf.add_argument("--expect", choices=["schurian", "non-schurian"])
    sf.add_argument("--out")
    sf.set_defaults(fn=cmd_scheme_fuse)
    sw = s.add_parser("wreath", parents=[common], help="wreath product of two schemes")
    sw.add_argument("--bottom", required=True)
    sw.add_argument("--top", required=True)
    sw.add_argument("--out")
    sw.set_defaults(fn=cmd_scheme_wreath)

    au = sub.add_parser("aut", parents=[common], help="automorphism group and schurity of a scheme")
    au.add_argument("--scheme", required=True)
    au.add_argument("--expect", choices=["schurian", "non-schurian"])
    au.set_defaults(fn=cmd_aut)

    r = sub.add_parser("sring", help="Schur rings").add_subparsers(dest="sub", required=True)
    rs = r.add_parser("schurian", parents=[common], help="schurity of an S-ring given by a partition")
    group_opts(rs)
    rs.add_argument("--partition", required=True, help='classes such as "0|1,3|2", or a file holding them')
    rs.add_argument("--expect", choices=["schurian", "non-schurian"])
    rs.set_defaults(fn=cmd_sring_schurian)
    rd = r.add_parser("diffset", parents=[common], help="rank-4 S-ring of a difference set")

    def ds_opts(q):
        q.add_argument("--q", type=int, help="Paley difference set in GF(q), q = 3 mod 4")
        q.add_argument("--singer", help="Singer difference set, q,d")
        q.add_argument("--file", help="difference-set file (group spec line, element line)")

    ds_opts(rd)
    rd.add_argument("--expect", choices=["schurian", "non-schurian"])
    rd.set_defaults(fn=cmd_sring_diffset)

    d = sub.add_parser("design", help="symmetric designs").add_subparsers(dest="sub", required=True)
    dc = d.add_parser("check", parents=[common], help="parameters and transitivity of dev(D)")
    ds_opts(dc)
    dc.add_argument("--expect", choices=["transitive", "not-transitive"])
    dc.set_defaults(fn=cmd_design_check)

    e = sub.add_parser("enumerate", parents=[common], help="all S-rings over a small group")
    group_opts(e)
    e.add_argument("--census", action="store_true", help="add a schurity verdict per S-ring")
    e.add_argument("--node-budget", type=int, default=5_000_000)
    e.add_argument("--time-budget", type=float)
    e.add_argument("--expect", choices=["schur", "non-schur"])
    e.set_defaults(fn=cmd_enumerate)

    rp = sub.add_parser("repro", parents=[common], help="rebuild a published table")
    rp.add_argument("what", choices=["paley", "small-schemes", "gl2-subgroups", "witnesses", "diffsets", "psl2"])
    rp.add_argument("--fixtures", help=f"fixtures directory (default ${repro.FIXTURES_ENV} or bundled)")
    rp.add_argument("--q", type=int, default=7, help="field size for psl2")
    rp.add_argument("--expect", action="store_true", help="exit 1 unless every row matches")
    rp.set_defaults(fn=cmd_repro)
    return p


_USER_ERRORS = (CliError, ParseError, SchemeError, SRingError, gr.GroupError, OSError,
                SearchBudgetExceeded, EnumerationBudgetExceeded, ValueError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ctx = _Ctx(args)
    try:
        return args.fn(ctx)
    except _USER_ERRORS as exc:
        print(f"schurkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
