import json

import pytest

from phylotri import formats
from phylotri.cli import bench_markdown, main, run_bench
from phylotri.oracles import verify_perfect_phylogeny
from phylotri.reductions import reduce_tcmis_to_tmg
from phylotri.zipper import build_zipper_gadget, read_gadget_offset

C4_ALT = "graph tcg 4 2\nvertex 0 0\nvertex 1 1\nvertex 2 0\nvertex 3 1\n" \
         "edge 0 1\nedge 1 2\nedge 2 3\nedge 3 0\n"
TINY = "tcmis 1 2\nclass 0 0 2\nclass 0 1 2\nedge 0 0 0 0 1 1\n"


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return put


def test_solve_alternating_square_unsat(files, capsys):
    assert main(["solve", "tcg", files("c4.cg", C4_ALT)]) == 20
    assert capsys.readouterr().out.startswith("UNSAT")


def test_solve_single_species(files, capsys):
    path = files("one.pp", "pp 1 2\nspecies x 0 1\n")
    assert main(["solve", "pp", path, "--json"]) == 10
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "SAT" and report["witness"] == path + ".phylo"
    tree = formats.parse_phylogeny(open(report["witness"]).read())
    assert verify_perfect_phylogeny(formats.parse_pp(open(path).read()), tree)


def test_solve_gadget_tmg(files, tmp_path):
    gd = build_zipper_gadget(2, 1)
    path = files("g.cg", formats.format_graph(gd.graph))
    out = str(tmp_path / "g.fill")
    assert main(["solve", "tmg", path, "--witness", "fill", "--out", out, "--quiet"]) == 10
    fill = formats.parse_fill(open(out).read())
    assert read_gadget_offset(gd, fill) in (0, 1)
    assert main(["solve", "tmg", path, "--no-memo", "--quiet", "--out", out]) == 10


def test_solve_kind_mismatch_is_error(files):
    assert main(["solve", "tmg", files("c4.cg", C4_ALT), "--quiet"]) == 1


def test_solve_parse_error_names_line(files, capsys):
    assert main(["solve", "tcg", files("bad.cg", "graph tcg 1 1\nvertex 0 0\nedge 0 0\n")]) == 1
    assert "line 3" in capsys.readouterr().out


def test_solve_timeout(files):
    lines = ["graph tcg 30 5"] + [f"vertex {v} {v % 5}" for v in range(30)]
    lines += [f"edge {v} {(v + 1) % 30}" for v in range(30)]
    assert main(["solve", "tcg", files("t.cg", "\n".join(lines)), "--timeout-ms", "0", "--quiet"]) == 30


def test_reduce_tcmis_reports_palette(files, tmp_path, capsys):
    out = str(tmp_path / "tiny.cg")
    assert main(["reduce", "tcmis-to-tmg", files("tiny.tcmis", TINY), out]) == 0
    text = capsys.readouterr().out
    assert "colors allocated: 99 (49k+1 with k=2)" in text
    g, annots = formats.parse_graph(open(out).read())
    assert g == reduce_tcmis_to_tmg(formats.parse_tcmis(TINY))[0]
    assert any(a.startswith("gadget 0.0 n=") for a in annots)


def test_reduce_tmg_and_pp(files, tmp_path, capsys):
    gd = build_zipper_gadget(1, 0)
    assert main(["reduce", "tmg-to-tcg", files("g.cg", formats.format_graph(gd.graph)),
                 str(tmp_path / "x.cg")]) == 0
    assert f"bound n*k = {gd.graph.n * 7}" in capsys.readouterr().out
    assert main(["reduce", "pp-to-tcg", files("x.pp", "pp 2 3\nspecies a 0 0 0\nspecies b 1 0 1\n"),
                 str(tmp_path / "y.cg")]) == 0
    assert "colors: 3 (genes: 3)" in capsys.readouterr().out


def test_gadget_command(tmp_path, capsys):
    out, fill, dot = (str(tmp_path / n) for n in ("g.cg", "g.fill", "g.dot"))
    assert main(["gadget", "2", "1", "--offset", "0", "--dot", dot, "--out", out, "--fill-out", fill]) == 0
    assert "18 fill edges, verifier OK" in capsys.readouterr().out
    assert open(dot).read().count("color=red") == 18
    g, annots = formats.parse_graph(open(out).read())
    assert annots[0].startswith("gadget 0 n=2 s=1 head=0 tail=8")
    assert main(["gadget", "1", "0", "--out", out]) == 0
    assert formats.parse_graph(open(out).read())[0].n == 9
    assert main(["gadget", "3", "2", "--offset", "2", "--out", out]) == 0
    assert main(["gadget", "1", "1", "--offset", "3", "--out", out]) == 1


def test_verify_commands(files, tmp_path, capsys):
    inst = files("tiny.tcmis", TINY)
    sol = files("tiny.sol", "choose 0 0 0\nchoose 0 1 0\n")
    graph, td = str(tmp_path / "r.cg"), str(tmp_path / "r.td")
    assert main(["tcmis-witness", inst, sol, "--out", td, "--graph-out", graph]) == 0
    assert main(["verify", "td", graph, td]) == 0
    assert capsys.readouterr().out.strip().endswith("OK")
    got = str(tmp_path / "back.sol")
    assert main(["tcmis-extract", inst, td, "--out", got]) == 0
    assert open(got).read() == open(sol).read()
    assert main(["verify", "tcmis", inst, sol]) == 0
    bad = files("bad.sol", "choose 0 0 0\nchoose 0 1 1\n")
    assert main(["verify", "tcmis", inst, bad]) == 2
    assert "both endpoints chosen" in capsys.readouterr().out


def test_verify_td_names_missing_edge(files, capsys):
    g = files("p.cg", "graph tcg 3 2\nvertex 0 0\nvertex 1 1\nvertex 2 0\nedge 0 1\nedge 1 2\n")
    td = files("p.td", "td 2 3\nbag 0 0 1\nbag 1 2\ntedge 0 1\n")
    assert main(["verify", "td", g, td]) == 2
    assert "FAIL: edge 1-2 is in no bag" in capsys.readouterr().out


def test_verify_phylogeny_names_variant(files, capsys):
    pp = files("x.pp", "pp 3 2\nspecies a 0 0\nspecies b 0 1\nspecies c 1 1\n")
    tree = files("x.phylo", "phylo 3 2\nnode 0 0 0\nnode 1 1 1\nnode 2 0 1\ntedge 0 1\n"
                 .replace("tedge", "treeedge") + "treeedge 1 2\n")
    assert main(["verify", "pp", pp, tree]) == 2
    assert "gene 0 variant 0 is not connected" in capsys.readouterr().out


def test_oracle_commands(files, capsys):
    assert main(["oracle", "tcg", files("c4.cg", C4_ALT), "--quiet"]) == 20
    assert main(["oracle", "tcmis", files("tiny.tcmis", TINY), "--quiet"]) == 10
    assert main(["oracle", "pp", files("x.pp", "pp 2 2\nspecies a 0 0\nspecies b 1 1\n"), "--quiet"]) == 10
    gd = build_zipper_gadget(1, 1)
    assert main(["oracle", "count", files("g.cg", formats.format_graph(gd.graph))]) == 10
    assert "triangulations: 2" in capsys.readouterr().out


def test_bench_deterministic(capsys):
    rows1 = run_bench([2, 3], [10, 20], seed=4, reps=3)
    rows2 = run_bench([2, 3], [10, 20], seed=4, reps=3)
    strip = [{k: v for k, v in r.items() if not k.endswith("_ms")} for r in rows1]
    assert strip == [{k: v for k, v in r.items() if not k.endswith("_ms")} for r in rows2]
    assert len(rows1) == 4 and all(r["status"] == "done" for r in rows1)
    assert main(["bench", "--genes", "2", "--species", "5", "--reps", "2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["rows"][0]["genes"] == 2


def test_bench_budget_flags_partial():
    rows = run_bench([2, 3], [10], seed=0, reps=1, budget_s=0.0)
    assert any(r["status"] != "done" for r in rows)
    assert "partial table" in bench_markdown(rows)


def test_seed_from_environment(monkeypatch, files, capsys):
    monkeypatch.setenv("PHYLOTRI_SEED", "17")
    assert main(["solve", "tcg", files("c4.cg", C4_ALT), "--json"]) == 20
    assert json.loads(capsys.readouterr().out)["seed"] == 17
