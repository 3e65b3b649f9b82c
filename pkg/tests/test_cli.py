import json

import numpy as np
import pytest

from coupled_rwm.cli import main


def _read(path):
    return path.read_bytes()


def test_meet_row_counts_and_summary(tmp_path):
    out = tmp_path / "meet.csv"
    code = main(
        [
            "meet", "--dim", "2", "--proposal", "max-reflection",
            "--acceptance", "common", "--reps", "8", "--seed", "0",
            "--t-max", "10000", "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "dim,proposal,acceptance,replication,seed,tau,censored"
    assert len(lines) == 9
    summary = (tmp_path / "meet.summary.csv").read_text().splitlines()
    assert summary[0] == (
        "dim,proposal,acceptance,mean_tau,se_tau,median_tau,censored_count"
    )
    assert len(summary) == 2
    assert summary[1].startswith("2,max-reflection,common,")


def test_meet_rerun_and_threads_byte_identical(tmp_path):
    args = [
        "meet", "--dim", "2", "--proposal", "max-reflection,max-semi-independent",
        "--acceptance", "common,antithetic", "--reps", "55", "--seed", "1",
        "--t-max", "10000",
    ]
    paths = [tmp_path / f"m{i}.csv" for i in range(3)]
    assert main(args + ["--out", str(paths[0]), "--threads", "1"]) == 0
    assert main(args + ["--out", str(paths[1]), "--threads", "1"]) == 0
    assert main(args + ["--out", str(paths[2]), "--threads", "2"]) == 0
    assert _read(paths[0]) == _read(paths[1]) == _read(paths[2])
    summaries = [
        _read(tmp_path / f"m{i}.summary.csv") for i in range(3)
    ]
    assert summaries[0] == summaries[1] == summaries[2]


def test_meet_usage_errors(tmp_path):
    assert main(["meet", "--dim", "2", "--proposal", "max-reflection",
                 "--acceptance", "common", "--reps", "0"]) == 1
    assert main(["meet", "--proposal", "max-reflection",
                 "--acceptance", "common", "--reps", "2"]) == 1  # no dim
    assert main(["meet", "--dim", "2", "--proposal", "bogus",
                 "--acceptance", "common", "--reps", "2"]) == 1
    assert main(["meet", "--dim", "2", "--proposal", "max-reflection",
                 "--acceptance", "common", "--reps", "2", "--threads", "0"]) == 1


def test_trace_and_drift_csv(tmp_path):
    out = tmp_path / "trace.csv"
    code = main(
        [
            "trace", "--dim", "2", "--proposal", "max-reflection",
            "--acceptance", "common", "--reps", "5", "--horizon", "20",
            "--seed", "0", "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,mean_r,n_alive"
    assert len(lines) == 22

    out = tmp_path / "drift.csv"
    code = main(
        [
            "drift", "--dim", "2", "--proposal", "max-reflection",
            "--acceptance", "common", "--reps", "10",
            "--r-values", "0.5,1.0,2.0", "--seed", "0", "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "r,mean_drift,se,n"
    assert len(lines) == 4
    assert main(["drift", "--dim", "2", "--proposal", "max-reflection",
                 "--acceptance", "common", "--reps", "10"]) == 1  # no r values


def test_prob_rows_and_sandwich(tmp_path, capsys):
    assert main(["prob", "--r", "0", "--sd", "1"]) == 0
    line = capsys.readouterr().out.splitlines()[1].split()
    assert float(line[1]) == 1.0  # exact
    assert float(line[2]) == 1.0  # lower bound

    out = tmp_path / "prob.csv"
    assert main(["prob", "--sd", "0.7", "--r-max", "6", "--points", "40",
                 "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    assert len(rows) == 40
    for row in rows:
        r, exact, lower, markov, chernoff = (float(v) for v in row.split(","))
        assert lower - 1e-12 <= exact <= min(markov, chernoff) + 1e-12


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "dims": [2],
                "proposals": ["max-reflection"],
                "acceptances": ["common"],
                "replications": 4,
                "t_max": 10000,
                "base_seed": 0,
            }
        )
    )
    out1 = tmp_path / "a.csv"
    assert main(["meet", "--config", str(cfg), "--out", str(out1)]) == 0
    assert len(out1.read_text().splitlines()) == 5

    # flags override the config file
    out2 = tmp_path / "b.csv"
    assert main(["meet", "--config", str(cfg), "--reps", "2", "--out", str(out2)]) == 0
    assert len(out2.read_text().splitlines()) == 3

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"replication": 4}))
    assert main(["meet", "--config", str(bad)]) == 1

    assert main(["meet", "--config", str(tmp_path / "missing.json")]) == 1


def test_svg_outputs(tmp_path):
    svg = tmp_path / "p.svg"
    assert main(["prob", "--sd", "1", "--r-max", "4", "--points", "10",
                 "--svg", str(svg)]) == 0
    head = svg.read_text()[:200]
    assert "<svg" in head or head.startswith("<?xml")

    svg2 = tmp_path / "d.svg"
    assert main(["drift", "--dim", "2", "--proposal", "max-reflection",
                 "--acceptance", "common", "--reps", "5",
                 "--r-values", "0.5,1.5", "--svg", str(svg2)]) == 0
    assert svg2.exists()


def test_hybrid_cutoff_sweep(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["meet", "--dim", "3", "--proposal", "hybrid",
                 "--acceptance", "common", "--reps", "3", "--seed", "0",
                 "--t-max", "20000", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    assert len(rows) == 9  # default cutoffs 0.5, 1, 2
    labels = {row.split(",")[1] for row in rows}
    assert labels == {"hybrid@0.5", "hybrid@1", "hybrid@2"}

    out2 = tmp_path / "h1.csv"
    assert main(["meet", "--dim", "3", "--proposal", "hybrid",
                 "--acceptance", "common", "--reps", "3", "--seed", "0",
                 "--t-max", "20000", "--hybrid-cutoff", "1.5",
                 "--out", str(out2)]) == 0
    rows = out2.read_text().splitlines()[1:]
    assert len(rows) == 3
    assert all(row.split(",")[1] == "hybrid" for row in rows)

    # trace takes exactly one cutoff
    assert main(["trace", "--dim", "3", "--proposal", "hybrid",
                 "--acceptance", "common", "--reps", "2", "--horizon", "5",
                 "--hybrid-cutoff", "0.5,1"]) == 1


def test_validate_subcommand_filter():
    assert main(["validate", "--only", "bounds"]) == 0


def test_validate_names_failing_check(capsys, monkeypatch):
    from coupled_rwm import suites

    def broken(threads=1):
        return [suites.CheckResult("bounds", "sandwich-201pt-grid", False, "injected")]

    monkeypatch.setitem(suites.SUITES, "bounds", broken)
    assert main(["validate", "--only", "bounds"]) == 1
    out = capsys.readouterr().out
    assert "FAIL bounds: sandwich-201pt-grid" in out
    assert "bounds:sandwich-201pt-grid" in out
