import json

import pytest

from decwvc.cli import EXIT_INVALID_COVER, EXIT_INVALID_INPUT, EXIT_OK, main
from decwvc.graph import load_graph


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    code = main([
        "generate", "--topology", "random", "--nodes", "64", "--avg-degree", "5",
        "--weights", "uniform", "--seed", "3", "--out", str(path),
    ])
    assert code == EXIT_OK
    return path


def test_generate(graph_file):
    g = load_graph(graph_file)
    assert g.order == 64
    assert all(20 <= w <= 100 for w in g.weights)


def test_generate_rejects_bad_degree(tmp_path, capsys):
    code = main([
        "generate", "--topology", "scalefree", "--nodes", "10", "--avg-degree", "12",
        "--out", str(tmp_path / "x.txt"),
    ])
    assert code == EXIT_INVALID_INPUT
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("baseline", [None, "greedy"])
def test_solve(graph_file, tmp_path, baseline):
    out = tmp_path / "report.json"
    argv = ["solve", "--graph", str(graph_file), "--rule", "safe", "--out", str(out)]
    if baseline:
        argv += ["--baseline", baseline]
    assert main(argv) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["valid"] is True
    assert report["rounds"] == report["selection_rounds"] + 1
    assert report["mpn"] == report["total_messages"] / 64
    if baseline:
        assert report["baseline"]["solver"] == "greedy"


def test_solve_exact_baseline(tmp_path):
    g = tmp_path / "p.txt"
    g.write_text("3 2\n10\n1\n10\n1 2\n2 3\n")
    out = tmp_path / "r.json"
    assert main(["solve", "--graph", str(g), "--rule", "paper", "--baseline", "exact",
                 "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["cover"] == [2]
    assert report["baseline"]["cover"] == [2] and report["baseline"]["exact"] is True


def test_solve_exact_too_large(graph_file, tmp_path):
    assert main(["solve", "--graph", str(graph_file), "--rule", "safe", "--baseline", "exact",
                 "--out", str(tmp_path / "r.json")]) == EXIT_INVALID_INPUT


def test_solve_malformed_graph(tmp_path):
    g = tmp_path / "bad.txt"
    g.write_text("3 1\n1\n1\n1\n1 4\n")
    assert main(["solve", "--graph", str(g), "--rule", "safe"]) == EXIT_INVALID_INPUT


def test_validate(tmp_path):
    g = tmp_path / "tri.txt"
    g.write_text("3 3\n20\n30\n40\n1 2\n1 3\n2 3\n")
    good = tmp_path / "good.txt"
    good.write_text("1\n2\n")
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n")
    junk = tmp_path / "junk.txt"
    junk.write_text("one\n")
    outside = tmp_path / "outside.txt"
    outside.write_text("1\n9\n")
    assert main(["validate", "--graph", str(g), "--cover", str(good)]) == EXIT_OK
    assert main(["validate", "--graph", str(g), "--cover", str(bad)]) == EXIT_INVALID_COVER
    assert main(["validate", "--graph", str(g), "--cover", str(junk)]) == EXIT_INVALID_INPUT
    assert main(["validate", "--graph", str(g), "--cover", str(outside)]) == EXIT_INVALID_INPUT
    assert main(["validate", "--graph", str(tmp_path / "nope.txt"),
                 "--cover", str(good)]) == EXIT_INVALID_INPUT


def test_experiment(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text("topologies = random, scalefree\norders = 64\ndegrees = 5\n"
                      "distributions = uniform\nrepetitions = 2\nbase_seed = 7\n")
    csv_a, csv_b, js = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "a.json"
    assert main(["experiment", "--config", str(config), "--out-csv", str(csv_a),
                 "--out-json", str(js)]) == EXIT_OK
    assert main(["experiment", "--config", str(config), "--out-csv", str(csv_b)]) == EXIT_OK
    assert csv_a.read_bytes() == csv_b.read_bytes()
    assert len(csv_a.read_text().splitlines()) == 3
    assert len(json.loads(js.read_text())) == 2


def test_experiment_bad_config(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text("repetitions = zero\n")
    assert main(["experiment", "--config", str(config),
                 "--out-csv", str(tmp_path / "a.csv")]) == EXIT_INVALID_INPUT


def test_module_entry_point(graph_file):
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "decwvc", "solve", "--graph", str(graph_file), "--rule", "safe"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["valid"] is True
