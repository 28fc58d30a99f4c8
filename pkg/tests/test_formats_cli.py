import json

import pytest

from spclat.cli import main
from spclat.errors import CycleDetected, DuplicateLabel, PosetSyntaxError, UnknownLabel
from spclat.fixtures import NAMES, fixture_path, fixture_text
from spclat.formats import (
    document_from_json,
    parse_document,
    parse_poset,
    to_dot,
    to_json,
    write_poset,
)
from spclat.poset import Poset, is_isomorphic
from spclat.star import compute_star


@pytest.fixture
def files(tmp_path):
    out = {}
    for name in NAMES:
        path = tmp_path / f"{name}.poset"
        path.write_text(fixture_text(name))
        out[name] = str(path)
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("0 1\n", PosetSyntaxError, 1),
        ("[elements]\n0 1\n[bogus]\n", PosetSyntaxError, 3),
        ("[elements]\na a\n", DuplicateLabel, 2),
        ("[elements]\na b\n[covers]\na z\n", UnknownLabel, 4),
        ("[elements]\na b\n[covers]\na\n", PosetSyntaxError, 4),
        ("[elements]\na b-c\n", PosetSyntaxError, 2),
        ("[elements]\na b\n[star]\nb b\nb\n", PosetSyntaxError, 5),
    ],
)
def test_parse_errors_report_lines(text, exc, line):
    with pytest.raises(exc) as e:
        parse_document(text)
    assert e.value.line == line
    assert str(e.value).startswith(f"line {line}:")


def test_missing_elements_and_cycles():
    with pytest.raises(PosetSyntaxError):
        parse_document("# nothing\n")
    with pytest.raises(CycleDetected):
        parse_document("[elements]\na b c\n[covers]\na b\nb c\nc a\n")


def test_star_section_is_kept(n5):
    doc = parse_document(fixture_text("n5"))
    assert doc.star == n5.star


def test_text_round_trip():
    for name in ("n5", "fig2", "nonstrong"):
        p = parse_poset(fixture_text(name))
        s = compute_star(p)
        again = parse_document(write_poset(p, s.star))
        assert again.poset == p and again.star == s.star


def test_json_round_trip():
    for name in ("n5", "fig2"):
        p = parse_poset(fixture_text(name))
        s = compute_star(p)
        doc = document_from_json(to_json(p, s.star))
        assert doc.poset == p and doc.star == s.star
    with pytest.raises(PosetSyntaxError):
        document_from_json("{not json")


@pytest.mark.parametrize("name, nodes, edges", [("n5", 5, 5), ("fig2", 7, 9), (None, 1, 0)])
def test_dot_counts(name, nodes, edges):
    p = parse_poset(fixture_text(name)) if name else Poset.chain(1)
    dot = to_dot(p)
    assert dot.count("->") == edges
    assert sum(1 for ln in dot.splitlines() if ln.strip().endswith('";') and "->" not in ln) == nodes


def test_cli_check(capsys, files):
    code, out, _ = run(capsys, "check", files["n5"])
    assert code == 0
    assert "property\tlattice\tyes" in out and "property\tdistributive\tno" in out
    assert out.rstrip().endswith("result\tPASS")
    code, out, _ = run(capsys, "check", files["fig2"])
    assert code == 0 and "property\tlattice\tno" in out


def test_cli_check_failures(capsys, files, tmp_path):
    code, out, _ = run(capsys, "check", files["bowtie"])
    assert code == 1 and "witness=" in out
    # not being strong is a property, not a failed check
    code, out, _ = run(capsys, "check", files["nonstrong"])
    assert code == 0 and "property\tstrong\tno" in out
    bad = tmp_path / "pinned.poset"
    bad.write_text(fixture_text("n5").replace("b 1 b 1 1", "1 1 b 1 1"))
    code, out, _ = run(capsys, "check", bad)
    assert code == 1 and "star-table-pin\tFAIL\t1 mismatches\twitness=(a,0,1,b)" in out


def test_cli_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.poset"
    bad.write_text("[elements]\na b\n[covers]\na z\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "line 4" in err
    code, _, _ = run(capsys, "filters", tmp_path / "missing.poset")
    assert code == 2
    cyc = tmp_path / "cyc.poset"
    cyc.write_text("[elements]\na b\n[covers]\na b\nb a\n")
    assert run(capsys, "check", cyc)[0] == 2


def test_cli_filters(capsys, files):
    code, out, _ = run(capsys, "filters", files["fig2"], "--exhaustive")
    assert code == 0
    assert "count\tfilters\t6" in out
    assert "filter\tF({d,e})\t{d,e,1}\tclosed=no" in out
    assert "exhaustive=up-set-scan\tPASS" in out
    code, out, _ = run(capsys, "filters", files["n5"], "--literal")
    assert code == 0 and "count\tfilters\t4" in out
    code, _, err = run(capsys, "filters", files["fig2"], "--sig", "lattice")
    assert code == 1 and "lattice" in err


def test_cli_congruences(capsys, files):
    code, out, _ = run(capsys, "congruences", files["n5"], "--sig", "poset")
    assert code == 0
    assert "count\tcongruences\t3" in out
    assert "open-question\tsignatures-coincide\tyes" in out
    code, out, _ = run(capsys, "congruences", files["nonstrong"])
    assert code == 1 and "(ii) lifting" in out


def test_cli_quotient(capsys, files, tmp_path):
    code, out, _ = run(capsys, "quotient", files["fig2"], "--kernel", "d,e")
    assert code == 0
    assert "quotient\tn=5" in out and "isomorphic-to-N5\tyes" in out
    assert "## quotient.poset" in out
    code, out, _ = run(capsys, "quotient", files["n5"], "--kernel", "a", "--output-dir", tmp_path / "q")
    assert code == 0
    q = parse_poset((tmp_path / "q" / "n5-quotient.poset").read_text())
    assert is_isomorphic(q, Poset.chain(2))
    assert (tmp_path / "q" / "n5-quotient.dot").exists()
    code, out, _ = run(capsys, "quotient", files["n5"], "--kernel", "1")
    assert code == 0 and "quotient\tn=5" in out
    assert run(capsys, "quotient", files["n5"], "--kernel", "zz")[0] == 1


def test_cli_json_report(capsys, files):
    code, out, _ = run(capsys, "check", files["n5"], "--json", "--timings")
    d = json.loads(out)
    assert code == 0 and d["result"] == "PASS"
    assert d["structure"]["n"] == 5
    assert d["timings_ms"]


def test_cli_no_top(capsys, tmp_path):
    f = tmp_path / "anti.poset"
    f.write_text("[elements]\na b\n")
    assert run(capsys, "check", f)[0] == 0
    code, out, _ = run(capsys, "filters", f)
    assert code == 1 and "greatest-element\tFAIL" in out


def test_cli_plots(capsys, files, tmp_path):
    plots = tmp_path / "plots"
    code, out, _ = run(capsys, "quotient", files["fig2"], "--kernel", "d,e", "--plot-dir", plots)
    assert code == 0
    names = sorted(p.name for p in plots.iterdir())
    assert names == ["fig2-hasse.png", "fig2-quotient.png"]
    assert all((plots / n).read_bytes()[:4] == b"\x89PNG" for n in names)
    run(capsys, "filters", files["fig2"], "--plot-dir", plots)
    assert (plots / "fig2-filters.png").exists()


def test_cli_generate(capsys, tmp_path):
    a = run(capsys, "generate", "--seed", 1, "--n", 5, "--require", "strong")
    b = run(capsys, "generate", "--seed", 1, "--n", 5, "--require", "strong")
    assert a == b and a[0] == 0
    p = parse_poset(a[1])
    assert p.n == 5 and compute_star(p).strong
    out = tmp_path / "g.poset"
    assert run(capsys, "generate", "--seed", 3, "--n", 4, "-o", out)[0] == 0
    assert parse_poset(out.read_text()).n == 4


def test_cli_size_guard(capsys, monkeypatch):
    assert run(capsys, "generate", "--seed", 0, "--n", 30)[0] == 3
    monkeypatch.setenv("SPC_SIZE_GUARD", "30")
    assert run(capsys, "generate", "--seed", 0, "--n", 30)[0] == 0


def test_cli_export(capsys, files):
    code, out, _ = run(capsys, "export", files["n5"], "--format", "dot")
    assert code == 0 and out.count("->") == 5
    code, out, _ = run(capsys, "export", files["fig2"], "--format", "json", "--include", "star,filters")
    d = json.loads(out)
    assert code == 0 and len(d["filters"]) == 6 and len(d["star"]) == 7
    assert run(capsys, "export", files["bowtie"], "--format", "json", "--include", "star")[0] == 1
    assert run(capsys, "export", files["n5"], "--format", "json", "--include", "nope")[0] == 1


def test_fixture_paths_exist():
    for name in NAMES:
        assert fixture_path(name).is_file()
