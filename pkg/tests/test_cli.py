import json
import subprocess
import sys

import pytest

from schurkit.cli import main
from schurkit.io import emit_scheme, parse_scheme_file
from schurkit.scheme import trivial_scheme


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(out):
    lines = out.strip().splitlines()
    head = lines[0].split("\t")
    return [dict(zip(head, ln.split("\t"))) for ln in lines[1:]]


def test_repro_paley(capsys):
    code, out, err = run(capsys, "repro", "paley", "--expect")
    assert code == 0
    verdicts = [(r["p"], r["verdict"]) for r in rows(out)]
    assert verdicts == [("7", "schurian"), ("11", "schurian"), ("19", "non-schurian"), ("23", "non-schurian")]
    assert "p=19" in err


def test_design_check_fano(capsys):
    code, out, _ = run(capsys, "design", "check", "--q", "7", "--expect", "transitive")
    r = rows(out)[0]
    assert code == 0 and (r["v"], r["k"], r["lambda"]) == ("7", "3", "1")
    assert r["two_transitive"] == r["flag_transitive"] == r["antiflag_transitive"] == "yes"


def test_design_check_singer_expect_fails(capsys):
    code, out, _ = run(capsys, "design", "check", "--singer", "2,3", "--expect", "not-transitive")
    assert code == 1


def test_enumerate_c4_census(capsys):
    code, out, _ = run(capsys, "enumerate", "--group", "c4", "--census", "--expect", "schur", "--quiet")
    r = rows(out)
    assert code == 0 and len(r) == 3 and all(x["verdict"] == "schurian" for x in r)
    assert list(r[0]) == ["group", "rank", "verdict", "aut_order"]


def test_enumerate_lists_classes(capsys):
    code, out, _ = run(capsys, "enumerate", "--group", "c5", "--quiet")
    assert code == 0 and [x["classes"] for x in rows(out)][0] == "0|1,2,3,4"


def test_sring_diffset_verdicts(capsys):
    assert run(capsys, "sring", "diffset", "--q", "19", "--expect", "non-schurian")[0] == 0
    code, out, _ = run(capsys, "sring", "diffset", "--q", "7", "--expect", "non-schurian")
    assert code == 1 and rows(out)[0]["verdict"] == "schurian"
    code, out, _ = run(capsys, "sring", "diffset", "--singer", "3,2")
    assert code == 0 and rows(out)[0]["identities"] == "yes"


def test_sring_schurian_from_partition(capsys, tmp_path):
    part = tmp_path / "p.txt"
    part.write_text("0|2|1,3\n")
    code, out, _ = run(capsys, "sring", "schurian", "--group", "c4", "--partition", str(part),
                       "--expect", "schurian")
    assert code == 0 and rows(out)[0]["rank"] == "3"
    part.write_text("0|1|2,3\n")
    assert run(capsys, "sring", "schurian", "--group", "c4", "--partition", str(part))[0] == 2


def test_sring_schurian_inline_partition(capsys):
    code, out, _ = run(capsys, "sring", "schurian", "--group", "c6", "--partition", "0|3|1,5|2,4",
                       "--expect", "schurian")
    assert code == 0 and rows(out)[0]["rank"] == "4"


def test_group_build(capsys):
    code, out, _ = run(capsys, "group", "build", "gdihedral:e9")
    r = rows(out)[0]
    assert code == 0 and r["order"] == "18" and r["exponent"] == "6"
    code, out, _ = run(capsys, "group", "build", "c3", "--table")
    assert out.splitlines()[0] == "3"
    assert run(capsys, "group", "build", "bogus:1")[0] == 2


def test_scheme_inv_fuse_aut(capsys, tmp_path):
    path = tmp_path / "d7.txt"
    code, out, _ = run(capsys, "scheme", "inv", "--group", "dihedral:14", "--action", "coset:7",
                       "--out", str(path))
    r = rows(out)[0]
    assert code == 0 and r["degree"] == "7" and r["rank"] == "4"
    code, out, _ = run(capsys, "aut", "--scheme", str(path), "--expect", "schurian")
    assert code == 0 and rows(out)[0]["aut_order"] == "14"
    code, out, _ = run(capsys, "scheme", "fuse", "--scheme", str(path), "--pi", "1,2,3", "--schurity")
    assert code == 0 and rows(out)[0]["rank"] == "2"
    code, out, _ = run(capsys, "scheme", "fuse", "--scheme", str(path), "--pi", "1,2")
    assert code == 0 and rows(out)[0]["scheme"] == "no"


def test_scheme_inv_from_group_file(capsys, tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("5\n(1,2,3,4,5)\n(2,5)(3,4)\n")
    code, out, _ = run(capsys, "scheme", "inv", "--group-file", str(f))
    assert code == 0 and rows(out)[0]["valencies"] == "1,2,2"


def test_scheme_fuse_by_valency(capsys, tmp_path):
    f = tmp_path / "w.txt"
    from schurkit.scheme import wreath
    f.write_text(emit_scheme(wreath(trivial_scheme(3), trivial_scheme(2))))
    code, out, err = run(capsys, "scheme", "fuse", "--scheme", str(f), "--pi", "1,2",
                         "--by-valency", "2,3", "--pred", "clique:1")
    assert code == 0 and rows(out)[0]["rank"] == "2" and "R1=color 1" in err


def test_scheme_wreath(capsys, tmp_path):
    a, b, out_path = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "w.txt"
    a.write_text(emit_scheme(trivial_scheme(2)))
    b.write_text(emit_scheme(trivial_scheme(3)))
    code, out, _ = run(capsys, "scheme", "wreath", "--bottom", str(a), "--top", str(b))
    assert code == 0 and parse_scheme_file(out).rank == 3
    code, out, _ = run(capsys, "scheme", "wreath", "--bottom", str(a), "--top", str(b), "--out", str(out_path))
    assert rows(out)[0]["n"] == "6" and parse_scheme_file(out_path.read_text()).n == 6


def test_aut_errors(capsys, tmp_path):
    assert run(capsys, "aut", "--scheme", str(tmp_path / "missing.txt"))[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2\n1 0 1\n2 1 0\n")
    code, _, err = run(capsys, "aut", "--scheme", str(bad))
    assert code == 2 and "intersection" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["repro", "nothing"])
    assert exc.value.code == 2


def test_json_format(capsys):
    code, out, _ = run(capsys, "repro", "psl2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["rows"][0]["q"] == 7


def test_flags_from_file(capsys, tmp_path):
    f = tmp_path / "flags.txt"
    f.write_text("design\ncheck\n--q\n11\n")
    code, out, _ = run(capsys, f"@{f}")
    assert code == 0 and rows(out)[0]["v"] == "11"


def test_fixtures_env_and_skips(capsys, tmp_path, monkeypatch):
    (tmp_path / "small_schemes").mkdir()
    (tmp_path / "small_schemes" / "manifest.tsv").write_text("group\tscheme\trank\torbital_rank\tfile\n16,6\t16,6\t3\t4\tnone.txt\n")
    monkeypatch.setenv("SCHURKIT_FIXTURES", str(tmp_path))
    code, out, err = run(capsys, "repro", "small-schemes", "--expect")
    assert code == 0 and rows(out)[0]["status"] == "skipped: fixture missing"
    assert "1 of 1 rows skipped" in err


@pytest.mark.parametrize("what", ["gl2-subgroups", "paley", "psl2"])
def test_repro_is_byte_deterministic(capsys, what):
    _, first, _ = run(capsys, "repro", what, "--quiet")
    _, second, _ = run(capsys, "repro", what, "--quiet")
    assert first == second and first


def test_jobs_give_same_output(capsys):
    _, serial, _ = run(capsys, "repro", "diffsets", "--quiet")
    _, parallel, _ = run(capsys, "repro", "diffsets", "--quiet", "--jobs", "2")
    assert serial == parallel


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "schurkit", "design", "check", "--q", "7", "--quiet"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("v\tk\tlambda")
