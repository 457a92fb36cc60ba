"""Command-line behavior: artifacts, config layering, exit codes."""

import json

import pytest

from spinvar.cli import SCENARIOS, build_parser, main

SUMMARY_KEYS = {
    "problem", "n_qubits", "ansatz", "optimizer", "iters", "seed", "shots",
    "noise", "final_energy", "best_energy", "exact_energy", "cut_value",
    "bitstring", "energy_convention", "converged", "wall_time_s", "tool_version",
}


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_exact_ground_summary(tmp_path):
    out = tmp_path / "run"
    assert main(["mgm-ground", "--n", "4", "--method", "exact", "--out", str(out)]) == 0
    summary = read_json(out / "summary.json")
    assert set(summary) == SUMMARY_KEYS
    assert summary["exact_energy"] == pytest.approx(-4.1)
    assert summary["problem"]["name"] == "mgm"


def test_small_n_rejected(tmp_path, capsys):
    assert main(["mgm-ground", "--n", "3", "--method", "exact",
                 "--out", str(tmp_path)]) == 2
    assert "n must be >= 4" in capsys.readouterr().err


def test_vqe_artifacts(tmp_path):
    out = tmp_path / "vqe"
    args = ["mgm-ground", "--n", "4", "--method", "vqe", "--reps", "1",
            "--optimizer", "grad", "--iters", "5", "--seed", "2", "--out", str(out)]
    assert main(args) == 0
    lines = (out / "trace.csv").read_text().splitlines()
    assert lines[0] == "iteration,cumulative_evaluations,objective_value,best_objective"
    evals = [int(line.split(",")[1]) for line in lines[1:]]
    assert evals == sorted(evals)
    summary = read_json(out / "summary.json")
    assert set(summary) == SUMMARY_KEYS
    assert summary["ansatz"]["family"] == "efficient_su2"
    assert summary["optimizer"]["name"] == "grad"
    assert summary["iters"] == 5
    svg = (out / "convergence.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_reruns_are_byte_identical(tmp_path):
    args = ["mgm-ground", "--n", "4", "--method", "vqe", "--reps", "1",
            "--optimizer", "spsa", "--iters", "10", "--noise", "on",
            "--shots", "128", "--seed", "5"]
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(args + ["--out", str(out)]) == 0
        outs.append(out)
    assert (outs[0] / "trace.csv").read_bytes() == (outs[1] / "trace.csv").read_bytes()
    a, b = (read_json(out / "summary.json") for out in outs)
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert a == b


def test_noise_requires_shots(tmp_path, capsys):
    rc = main(["mgm-ground", "--n", "4", "--method", "vqe", "--iters", "2",
               "--noise", "on", "--out", str(tmp_path / "x")])
    assert rc == 2
    assert "shots" in capsys.readouterr().err


def test_doubled_energy_reporting(tmp_path):
    out = tmp_path / "doubled"
    assert main(["mgm-ground", "--n", "4", "--method", "exact",
                 "--doubled-energies", "--out", str(out)]) == 0
    summary = read_json(out / "summary.json")
    assert summary["exact_energy"] == pytest.approx(-8.2)
    assert summary["energy_convention"] == "doubled"


def test_config_file_layering(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 4\nmethod = exact\n# a comment\n")
    out = tmp_path / "from-config"
    assert main(["mgm-ground", "--config", str(cfg), "--out", str(out)]) == 0
    assert read_json(out / "summary.json")["exact_energy"] == pytest.approx(-4.1)
    # explicit flag beats the file
    out2 = tmp_path / "override"
    assert main(["mgm-ground", "--config", str(cfg), "--n", "6", "--out", str(out2)]) == 0
    assert read_json(out2 / "summary.json")["n_qubits"] == 6


def test_config_rejects_unknown_and_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus = 1\n")
    assert main(["mgm-ground", "--config", str(bad)]) == 2
    assert "bogus" in capsys.readouterr().err
    bad.write_text("no equals sign\n")
    assert main(["mgm-ground", "--config", str(bad)]) == 2
    assert "key = value" in capsys.readouterr().err


def test_gap_scan_artifacts(tmp_path):
    out = tmp_path / "gaps"
    assert main(["mgm-gap", "--n-min", "4", "--n-max", "6", "--out", str(out)]) == 0
    lines = (out / "gaps.csv").read_text().splitlines()
    assert lines[0] == "n,E0,E1,gap,parity"
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == ["4", "5", "6"]
    assert rows[0][4] == "even" and rows[1][4] == "odd"
    assert float(rows[0][1]) == pytest.approx(-4.1)
    assert float(rows[1][3]) == pytest.approx(0.0, abs=1e-9)
    assert (out / "gaps.svg").exists()


def test_gap_scan_range_validation(tmp_path):
    assert main(["mgm-gap", "--n-min", "6", "--n-max", "5", "--out", str(tmp_path)]) == 2


def test_maxcut_bruteforce_single_edge(tmp_path):
    graph = tmp_path / "g.txt"
    graph.write_text("2\n0 1\n")
    out = tmp_path / "cut"
    assert main(["maxcut", "--graph", str(graph), "--method", "bruteforce",
                 "--out", str(out)]) == 0
    summary = read_json(out / "summary.json")
    assert summary["cut_value"] == 1.0
    assert summary["bitstring"] in ("01", "10")
    assert summary["exact_energy"] == -1.0


def test_maxcut_parse_error_names_line(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("3\n0 1\n0 nope\n")
    assert main(["maxcut", "--graph", str(graph), "--out", str(tmp_path / "x")]) == 2
    err = capsys.readouterr().err
    assert "line 3" in err


def test_maxcut_requires_one_source(tmp_path, capsys):
    assert main(["maxcut", "--out", str(tmp_path / "x")]) == 2
    assert main(["maxcut", "--graph", "a", "--random", "4", "0.5", "1",
                 "--out", str(tmp_path / "y")]) == 2


def test_maxcut_qaoa_small(tmp_path):
    out = tmp_path / "qaoa"
    assert main(["maxcut", "--random", "5", "0.6", "2", "--method", "qaoa",
                 "--reps", "2", "--iters", "10", "--seed", "1", "--out", str(out)]) == 0
    summary = read_json(out / "summary.json")
    assert summary["bitstring"] is not None
    assert summary["cut_value"] is not None
    assert summary["exact_energy"] is not None


def test_benchmark_unknown_scenario(capsys):
    assert main(["benchmark", "made-up-name"]) == 2
    assert "available" in capsys.readouterr().err


def test_benchmark_registry_contents():
    assert set(SCENARIOS) == {"noisy-4spin-spsa", "noisy-4spin-qnspsa", "8spin-qaoa-p16"}
    noisy = SCENARIOS["noisy-4spin-spsa"]
    assert noisy.iterations == 800 and noisy.shots == 1024 and noisy.noisy
    deep = SCENARIOS["8spin-qaoa-p16"]
    assert deep.qaoa_p == 16 and deep.iterations == 1300 and not deep.noisy


def test_runtime_failure_is_exit_three(tmp_path, capsys):
    # /dev/null is not a directory, so artifact writing must fail
    rc = main(["mgm-ground", "--n", "4", "--method", "exact",
               "--out", "/dev/null/run"])
    assert rc == 3
    assert capsys.readouterr().err.startswith("error:")


def test_parser_rejects_unknown_flags():
    with pytest.raises(SystemExit) as excinfo:
        build_parser().parse_args(["mgm-ground", "--bogus"])
    assert excinfo.value.code == 2
