import json
from fractions import Fraction

import pytest

from covisit import GridSpec, Hypergraph, build_visit_log, load_hypergraph, save_hypergraph
from covisit.cli import hypergraph_filename, main
from covisit.ingest import read_records

from conftest import TOY_CSV, SIX_NODE_EDGES, loc


@pytest.fixture
def toy_csv(tmp_path):
    path = tmp_path / "toy.csv"
    path.write_text(TOY_CSV)
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_build_toy_map(toy_csv, tmp_path):
    out = tmp_path / "out"
    rc = run("build", "--input", toy_csv, "--grid", "6x6", "--scale", 2, "--delta-t", 1,
             "--min-sup", 0.5, "--threads", 1, "--out", out, "--dump-transactions")
    assert rc == 0
    hg = load_hypergraph(out / hypergraph_filename(1, 0.5))
    (edge,) = hg.edges
    assert edge.items == (loc(4), loc(5))
    assert Fraction(edge.count, hg.n_transactions) == Fraction(2, 3)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["transactions"]["1"]["M"] == 3
    assert manifest["hypergraphs"][0]["threshold"] == 2
    assert len(manifest["config_hash"]) == 64
    assert (out / "transactions_dt1.txt").read_text() == "0 1 3 4\n3 4 5 6\n3 7\n"


def test_build_default_grid_produces_nine_files(tmp_path, toy_csv):
    # nine days of identical behaviour so every default window fits
    lines = TOY_CSV.splitlines()
    rows = [lines[0]] + [r.replace(",0,", f",{d},", 1) for d in range(9) for r in lines[1:]]
    src = tmp_path / "nine.csv"
    src.write_text("\n".join(rows) + "\n")
    out = tmp_path / "out"
    assert run("build", "--input", src, "--grid", "6x6", "--scale", 2, "--threads", 1, "--out", out) == 0
    assert len(list(out.glob("*.hg"))) == 9


def test_build_errors(toy_csv, tmp_path):
    out = tmp_path / "o"
    assert run("build", "--input", toy_csv, "--grid", "6x6", "--scale", 2, "--days", "3..3", "--out", out) == 1
    assert run("build", "--input", toy_csv, "--grid", "6x6", "--scale", 2, "--delta-t", 3, "--out", out) == 1
    assert run("build", "--input", tmp_path / "missing.csv", "--grid", "6x6", "--out", out) == 2
    assert run("build", "--input", toy_csv, "--grid", "4x4", "--scale", 2, "--out", out) == 2
    assert run("build", "--input", toy_csv, "--min-sup", "1.5", "--out", out) == 1
    assert run("build", "--input", toy_csv, "--grid", "six", "--out", out) == 1


def test_usage_error_exit_code(capsys):
    assert main(["frobnicate"]) == 1
    assert main(["build"]) == 1
    assert main(["--version"]) == 0
    assert "usage" in capsys.readouterr().err


@pytest.fixture
def six_node_file(tmp_path):
    path = tmp_path / "six_node.hg"
    save_hypergraph(Hypergraph.from_edges(list(SIX_NODE_EDGES.values()), 6, 1), path)
    return path


def test_analyze_six_node(six_node_file, tmp_path):
    out = tmp_path / "report"
    assert run("analyze", six_node_file, "--grid", "6x1", "--scale", 1, "--out", out) == 0
    d = out / "six_node"
    assert (d / "sizes.csv").read_text() == "size,count\n2,3\n3,2\n"
    assert (d / "heatmap.csv").read_text() == "2,3,1,2,3,1\n"
    assert (d / "ccdf.csv").read_text().splitlines()[2] == "1,1.0"
    cheb = json.loads((d / "chebyshev.json").read_text())
    assert cheb["max_chebyshev"] == 4 and cheb["per_size"] == {"2": 1, "3": 4}
    fits = json.loads((d / "fits.json").read_text())
    assert "error" in fits and fits["max_degree"] == 3
    assert not (d / "poi_fit.json").exists()


def test_analyze_k_uniform_and_poi(six_node_file, tmp_path):
    poi = tmp_path / "poi.csv"
    poi.write_text("x,y,category,count\n" + "".join(f"{x},0,1,{c}\n" for x, c in enumerate([4, 9, 1, 4, 9, 1])))
    out = tmp_path / "report"
    assert run("analyze", six_node_file, "--grid", "6x1", "--scale", 1, "--k-uniform", 3, "--poi", poi, "--out", out) == 0
    d = out / "six_node"
    assert (d / "sizes.csv").read_text() == "size,count\n3,2\n"
    fit = json.loads((d / "poi_fit.json").read_text())
    assert fit["n"] == 5 and "b" in fit


def test_analyze_edgeless(tmp_path):
    path = tmp_path / "empty.hg"
    save_hypergraph(Hypergraph([], 3, 2), path)
    out = tmp_path / "r"
    assert run("analyze", path, "--out", out) == 0
    assert (out / "empty" / "sizes.csv").read_text() == "size,count\n"
    assert (out / "empty" / "heatmap.csv").read_text() == "0,0,0\n0,0,0\n"
    assert json.loads((out / "empty" / "chebyshev.json").read_text())["max_chebyshev"] is None


def test_analyze_missing_file(tmp_path, capsys):
    assert run("analyze", tmp_path / "nope.hg", "--out", tmp_path / "r") == 2
    assert "nope.hg" in capsys.readouterr().err


def _synth_spec(tmp_path, seed=1):
    spec = {
        "seed": seed,
        "grid": {"raw_width": 50, "raw_height": 50, "scale": 10},
        "n_individuals": 150,
        "n_days": 10,
        "background_rate": 1.0,
        "planted_groups": [{"locations": [[0, 0], [4, 4], [2, 1]], "adoption": 0.4, "visit_prob": 0.9}],
    }
    path = tmp_path / f"spec{seed}.json"
    path.write_text(json.dumps(spec))
    return path


def test_synth_deterministic_and_round_trip(tmp_path):
    spec = _synth_spec(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("synth", spec, "--out", a) == 0
    assert run("synth", spec, "--out", b) == 0
    for name in ("trajectories.csv", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    manifest = json.loads((a / "manifest.json").read_text())
    assert len(manifest["planted_groups"]) == 1
    grid = GridSpec(50, 50, 10)
    log = build_visit_log(read_records(a / "trajectories.csv", grid), grid, (0, 10))
    from covisit.synthetic import generate, spec_from_dict

    assert log == generate(spec_from_dict(json.loads(spec.read_text()))).visit_log
    assert run("synth", spec, "--seed", 2, "--out", tmp_path / "c") == 0
    assert (tmp_path / "c" / "trajectories.csv").read_bytes() != (a / "trajectories.csv").read_bytes()


def test_synth_invalid_spec(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"seed": 1, "grid": {"raw_width": 5, "raw_height": 5}, "n_individuals": 3, "n_days": 2,
                               "planted_groups": [{"locations": [[0, 0]], "adoption": 3, "visit_prob": 0.1}]}))
    assert run("synth", bad, "--out", tmp_path / "o") == 2
    assert "planted_groups[0].adoption" in capsys.readouterr().err
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run("synth", broken, "--out", tmp_path / "o") == 2


def test_compare(tmp_path):
    spec = _synth_spec(tmp_path)
    data = tmp_path / "data"
    run("synth", spec, "--out", data)
    out = tmp_path / "cmp"
    rc = run("compare", "--input", data / "trajectories.csv", "--grid", "50x50", "--phase", "regular=0..6",
             "--phase", "emergency=6..10", "--delta-t", "1,3", "--min-sup", "0.1", "--threads", 1, "--out", out)
    assert rc == 0
    report = json.loads((out / "comparison.json").read_text())
    assert [c["delta_t"] for c in report["cells"]] == [1, 3]
    assert set(report["cells"][0]["phases"]) == {"regular", "emergency"}


def test_compare_errors(tmp_path):
    spec = _synth_spec(tmp_path)
    data = tmp_path / "data"
    run("synth", spec, "--out", data)
    base = ["compare", "--input", data / "trajectories.csv", "--grid", "50x50", "--out", tmp_path / "c"]
    assert run(*base, "--phase", "a=0..6", "--phase", "b=5..10") == 1
    assert run(*base, "--phase", "a=0..6", "--phase", "b=6..10", "--delta-t", 7) == 1
    assert run(*base, "--phase", "a=0..6") == 1
