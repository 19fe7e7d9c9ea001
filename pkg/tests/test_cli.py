import json
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from walkdisc import cli, predictor

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*args, env_extra=None):
    env = dict(os.environ, COLUMNS="80")
    env.update(env_extra or {})
    return subprocess.run([sys.executable, "-m", "walkdisc", *args], capture_output=True, text=True, env=env)


@pytest.mark.parametrize("command", ["main", "predict", "simulate", "table", "verify"])
def test_help_matches_golden(command):
    args = ["--help"] if command == "main" else [command, "--help"]
    res = run_cli(*args)
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / f"help_{command}.txt").read_text()


def test_predict_outputs(capsys):
    assert cli.main(["predict", "walk-p", "--p", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("0.47336955677")
    assert cli.main(["predict", "walk-asym", "--p", "2", "--digits", "6"]) == 0
    assert capsys.readouterr().out.startswith("0.433182 +/- ")
    assert cli.main(["predict", "disc-p2", "--p", "3"]) == 0
    assert capsys.readouterr().out.startswith("0.68176916425")
    assert cli.main(["predict", "rank", "--q", "2", "--k", "0", "--m", "1"]) == 0
    assert capsys.readouterr().out.startswith("0.577576")
    assert cli.main(["predict", "event", "--event", "W-trivial", "--p", "2"]) == 0
    assert capsys.readouterr().out.startswith("0.6291336")


def test_predict_global_disc():
    res = run_cli("predict", "disc-global", "--digits", "4")
    assert res.returncode == 0 and res.stdout.startswith("0.1686 +/- ")


@pytest.mark.parametrize(
    "args",
    [
        ["predict", "walk-p"],
        ["predict", "walk-p", "--p", "4"],
        ["predict", "disc-p2", "--p", "2"],
        ["predict", "nonsense"],
        ["simulate", "--p", "2"],
        ["simulate", "--n", "4"],
        ["simulate", "--n", "4", "--q", "2", "--vector", "ones"],
        ["simulate", "--n", "4", "--p", "4"],
        ["simulate", "--ensemble", "sym_truncated", "--n", "4", "--p", "2", "--beta", "1,0,1", "--event", "W-trivial"],
        ["table", "5"],
        ["verify", "everything"],
        [],
    ],
)
def test_usage_errors_exit_2(args):
    res = run_cli(*args)
    assert res.returncode == 2, res.stderr
    assert res.stderr


def test_smoke_simulation_is_fast_and_well_formed(capsys):
    t0 = time.perf_counter()
    assert cli.main(["simulate", "--n", "4", "--p", "2", "--samples", "100"]) == 0
    assert time.perf_counter() - t0 < 1.0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split(",")[0] == "table" and len(lines) == 2
    assert lines[1].startswith("sim,4,p=2,uniform,100,")


def test_simulate_is_reproducible_and_worker_independent(tmp_path):
    outs = []
    for workers in ("1", "2"):
        path = tmp_path / f"w{workers}.csv"
        args = ["simulate", "--n", "6", "--q", "9", "--samples", "3000", "--chunk-size", "500",
                "--workers", workers, "--out", str(path)]
        assert cli.main(args) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_simulate_config_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"ensemble": {"kind": "sym01_loops", "n": 5}, "statistic": "walk", "p": 3,
                               "vector": "ones", "samples": 200}))
    assert cli.main(["simulate", "--config", str(cfg), "--samples", "300", "--format", "json"]) == 0
    rec = json.loads(capsys.readouterr().out)[0]
    assert (rec["n"], rec["param"], rec["vector"], rec["N"]) == (5, "p=3", "ones", 300)


def test_simulate_event_and_rank(capsys):
    args = ["simulate", "--ensemble", "sym_truncated", "--n", "5", "--p", "3", "--beta", "0,1",
            "--event", "D-pair", "--samples", "500"]
    assert cli.main(args) == 0
    assert "D-pair;p=3;beta=x" in capsys.readouterr().out
    assert cli.main(["simulate", "--ensemble", "sym_Fq", "--n", "6", "--q", "4", "--k", "1", "--samples", "500"]) == 0
    assert ",q=4;k=1," in capsys.readouterr().out


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv(cli.WORKERS_ENV, "3")
    assert cli._default_workers() == 3
    monkeypatch.setenv(cli.WORKERS_ENV, "junk")
    assert cli._default_workers() == 1


def test_table_small_grid(capsys):
    assert cli.main(["table", "walk-indicator", "--sizes", "4,5", "--params", "2,3", "--samples", "200"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5
    assert all(l.startswith("walk-indicator,") and ",indicator:0," in l for l in lines[1:])


def test_verify_identities_passes(capsys):
    assert cli.main(["verify", "predictor-identities"]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("verify: pass")
    assert "FAIL" not in out


def test_verify_reports_failure_with_exit_1(monkeypatch, capsys):
    monkeypatch.setattr(predictor, "predictor_identities", lambda: [("broken", 1.0, 2.0)])
    assert cli.main(["verify", "predictor-identities"]) == 1
    out = capsys.readouterr().out
    assert "identity broken: FAIL" in out and out.rstrip().endswith("verify: FAIL")


def test_runtime_error_exit_1(monkeypatch, capsys):
    def boom(spec):
        raise RuntimeError("disk on fire")

    monkeypatch.setattr(cli, "simulate", boom)
    assert cli.main(["simulate", "--n", "4", "--p", "2", "--samples", "10"]) == 1
    assert "disk on fire" in capsys.readouterr().err
