"""End-to-end command line tests, run in-process through main()."""

import csv
import json
import sys

import pytest

from curvprune.cli import main


def run_cli(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# -- generate ---------------------------------------------------------------------

def test_generate_ws_writes_ten_files_of_64_edges(tmp_path):
    assert run_cli("generate", "--model", "ws", "--n", 32, "--k", 4,
                   "--p", 0.75, "--seeds", 10, "--out", tmp_path) == 0
    files = sorted(tmp_path.glob("ws_n32_seed*.json"))
    assert len(files) == 10
    for path in files:
        graph = json.loads(path.read_text())
        assert len(graph["edges"]) == 64


def test_generate_complete_er_graph(tmp_path):
    assert run_cli("generate", "--model", "er", "--p", 1.0, "--out", tmp_path) == 0
    graph = json.loads((tmp_path / "er_n32_seed0.json").read_text())
    assert len(graph["edges"]) == 496


def test_generate_ba_edge_count(tmp_path):
    assert run_cli("generate", "--model", "ba", "--out", tmp_path) == 0
    graph = json.loads((tmp_path / "ba_n32_seed0.json").read_text())
    assert len(graph["edges"]) == 135  # m(n - m) for m=5, n=32


def test_generate_is_idempotent(tmp_path):
    run_cli("generate", "--model", "er", "--out", tmp_path)
    first = (tmp_path / "er_n32_seed0.json").read_bytes()
    run_cli("generate", "--model", "er", "--out", tmp_path)
    assert (tmp_path / "er_n32_seed0.json").read_bytes() == first


def test_generate_rejects_bad_seed_count(tmp_path, capsys):
    assert run_cli("generate", "--model", "er", "--seeds", 0, "--out", tmp_path) == 2
    assert "configuration error" in capsys.readouterr().err


# -- rank -------------------------------------------------------------------------

@pytest.fixture()
def graph_file(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text(json.dumps({
        "kind": "ER", "n": 3, "nodes": [0, 1, 2], "edges": [[0, 1], [1, 2]],
    }))
    return path


def test_rank_path_graph_to_stdout(graph_file, capsys):
    assert run_cli("rank", graph_file, "--measure", "frc") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "edge_u,edge_v,measure,score,rank"
    assert lines[1] == "0,1,FRC,1.0,1"  # 4 - deg(0) - deg(1) on the path
    assert len(lines) == 3


def test_rank_to_file(graph_file, tmp_path):
    out = tmp_path / "scores.csv"
    assert run_cli("rank", graph_file, "--measure", "ebc", "--out", out) == 0
    rows = read_csv(out)
    assert rows[0] == ["edge_u", "edge_v", "measure", "score", "rank"]
    assert [r[2] for r in rows[1:]] == ["EBC", "EBC"]


def test_rank_missing_file_is_io_error(tmp_path, capsys):
    assert run_cli("rank", tmp_path / "absent.json", "--measure", "frc") == 4
    assert "I/O error" in capsys.readouterr().err


# -- prune ------------------------------------------------------------------------

PRUNE_ARGS = ("prune", "--model", "er", "--n", 12, "--p", 0.35,
              "--seeds", "2", "--measure", "orc")


def test_prune_writes_report_files(tmp_path):
    out = tmp_path / "run"
    assert run_cli(*PRUNE_ARGS, "--out", out) == 0
    report = json.loads((out / "report.json").read_text())
    assert [run["seed"] for run in report["runs"]] == [0, 1]
    assert report["config"]["measure"] == "ORC"
    rows = read_csv(out / "report.csv")
    assert len(rows) == 3


def test_prune_rerun_is_byte_identical(tmp_path):
    first_dir, second_dir = tmp_path / "a", tmp_path / "b"
    run_cli(*PRUNE_ARGS, "--out", first_dir)
    run_cli(*PRUNE_ARGS, "--out", second_dir)
    assert (first_dir / "report.json").read_bytes() == (second_dir / "report.json").read_bytes()


def test_prune_parallel_matches_serial(tmp_path):
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    run_cli(*PRUNE_ARGS, "--seeds", "3", "--out", serial)
    run_cli(*PRUNE_ARGS, "--seeds", "3", "--jobs", 3, "--out", parallel)
    assert (serial / "report.json").read_bytes() == (parallel / "report.json").read_bytes()


def test_prune_always_passing_surrogate_lands_on_max_fraction(tmp_path):
    out = tmp_path / "run"
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "generator": {"kind": "ER", "n": 12, "p": 0.35},
        "measure": "FRC",
        "seeds": [0],
        "evaluator": {"kind": "surrogate", "tau": 0},
    }))
    assert run_cli("prune", "--config", config, "--out", out) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["runs"][0]["prune"]["best_fraction"] == 96.875


def test_prune_flags_override_config_file(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "generator": {"kind": "ER", "n": 12, "p": 0.2},
        "measure": "FRC",
        "seeds": [0, 1, 2],
        "depth": 5,
    }))
    out = tmp_path / "run"
    assert run_cli("prune", "--config", config, "--p", 0.4, "--seeds", "7,9",
                   "--measure", "ebc", "--depth", 3, "--out", out) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["generator"]["p"] == 0.4
    assert report["config"]["seeds"] == [7, 9]
    assert report["config"]["measure"] == "EBC"
    assert report["config"]["depth"] == 3


def test_prune_model_switch_drops_foreign_family_params(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "generator": {"kind": "WS", "n": 12, "k": 4, "p": 0.75},
        "measure": "FRC",
        "seeds": [0],
    }))
    out = tmp_path / "run"
    assert run_cli("prune", "--config", config, "--model", "ba", "--out", out) == 0
    report = json.loads((out / "report.json").read_text())
    generator = report["config"]["generator"]
    assert generator["kind"] == "BA" and generator["m"] == 5
    assert "k" not in generator and "p" not in generator


def test_prune_seed_count_expands_to_range(tmp_path):
    out = tmp_path / "run"
    assert run_cli("prune", "--model", "er", "--n", 12, "--seeds", "3",
                   "--depth", 1, "--out", out) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["seeds"] == [0, 1, 2]


def test_prune_external_adapter_round_trips_recorded_counts(tmp_path):
    adapter = tmp_path / "adapter.py"
    adapter.write_text(
        "import json, sys\n"
        "for line in sys.stdin:\n"
        "    json.loads(line)\n"
        "    print(json.dumps({'tp': 90, 'tn': 2929, 'fp': 71, 'fn': 10}), flush=True)\n"
    )
    out = tmp_path / "run"
    assert run_cli("prune", "--model", "er", "--n", 12, "--seeds", "1",
                   "--evaluator", "external",
                   "--external-cmd", f"{sys.executable} {adapter}",
                   "--out", out) == 0
    report = json.loads((out / "report.json").read_text())
    counts = report["runs"][0]["baseline"]["counts"]
    assert (counts["tp"], counts["tn"], counts["fp"], counts["fn"]) == (90, 2929, 71, 10)


def test_prune_broken_adapter_exits_3_with_diagnostics(tmp_path, capsys):
    adapter = tmp_path / "adapter.py"
    adapter.write_text(
        "import sys\n"
        "for line in sys.stdin:\n"
        "    print('loss=0.3 acc=0.9', flush=True)\n"
    )
    code = run_cli("prune", "--model", "er", "--n", 12, "--seeds", "1",
                   "--external-cmd", f"{sys.executable} {adapter}",
                   "--out", tmp_path / "run")
    assert code == 3
    err = capsys.readouterr().err
    assert "evaluator error" in err and "loss=0.3" in err


def test_prune_config_errors_exit_2(tmp_path, capsys):
    assert run_cli("prune", "--seeds", "2", "--out", tmp_path / "x") == 2
    assert "generator family" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("prune", "--config", bad, "--out", tmp_path / "y") == 2
    assert run_cli("prune", "--model", "er", "--seeds", "nope",
                   "--out", tmp_path / "z") == 2
    assert run_cli("prune", "--model", "er", "--evaluator", "external",
                   "--out", tmp_path / "w") == 2


def test_prune_unwritable_output_exits_4(tmp_path, capsys):
    code = run_cli("prune", "--model", "er", "--n", 12, "--seeds", "1",
                   "--depth", 1, "--out", "/dev/null/sub")
    assert code == 4
    assert "I/O error" in capsys.readouterr().err


# -- report -----------------------------------------------------------------------

def test_report_aggregates_two_experiments(tmp_path):
    for i, measure in enumerate(("frc", "orc")):
        run_cli("prune", "--model", "er", "--n", 12, "--p", 0.35, "--seeds", "2",
                "--measure", measure, "--out", tmp_path / f"run{i}")
    out = tmp_path / "summary"
    assert run_cli("report", tmp_path / "run0" / "report.json",
                   tmp_path / "run1" / "report.json", "--out", out) == 0
    rows = read_csv(out / "summary.csv")
    assert len(rows) == 3
    assert {r[1] for r in rows[1:]} == {"FRC", "ORC"}
    assert (out / "boxplot_quantiles.csv").exists()
    assert (out / "fraction_compression.csv").exists()


def test_report_rejects_non_report_json(tmp_path, capsys):
    bogus = tmp_path / "report.json"
    bogus.write_text(json.dumps({"hello": 1}))
    assert run_cli("report", bogus, "--out", tmp_path / "out") == 2
    assert "configuration error" in capsys.readouterr().err
