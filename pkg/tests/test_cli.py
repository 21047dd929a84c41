import csv
import json
import subprocess
import sys

import pytest

from opforge import harness as hz
from opforge.cli import main
from opforge.operads import ass_operad
from opforge.seqcomp import ChainBase


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr()


def test_usage_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "experiment", "no-such-thing")[0] == 2
    assert run(capsys, "experiment", "gluing", "--trials", "0")[0] == 2
    assert run(capsys, "experiment", "chi-strong", "--field", "q")[0] == 2
    assert run(capsys, "experiment", "associahedron", "--field", "p:4")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "compute", "pushout")[0] == 2


def test_experiment_writes_json_and_csv(capsys, tmp_path):
    out = tmp_path / "assoc.json"
    rc, cap = run(capsys, "experiment", "associahedron", "--nmax", "4", "--out", str(out))
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "pass" and rep["total"] == 3
    assert rep["trials"][-1]["dims"] == {"0": 5, "1": 5, "2": 1}
    rows = list(csv.DictReader(out.with_suffix(".csv").open()))
    assert len(rows) == 3
    assert "3/3 pass" in cap.out


def test_reports_are_deterministic_up_to_timing(monkeypatch):
    monkeypatch.setenv("OPFORGE_THREADS", "1")
    cfg = hz.ExperimentConfig("gluing", seed=11, trials=3)
    a, b = hz.run_experiment(cfg), hz.run_experiment(cfg)
    a.pop("timing"), b.pop("timing")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("OPFORGE_THREADS", "1")
    assert hz.pool_size(50) == 1
    monkeypatch.setenv("OPFORGE_THREADS", "lots")
    with pytest.raises(hz.UsageError):
        hz.pool_size(5)
    monkeypatch.delenv("OPFORGE_THREADS")
    assert 1 <= hz.pool_size(3) <= 3


def test_failing_trial_exits_1(capsys, monkeypatch, tmp_path):
    name = "associahedron"
    cases, _, defaults, grammar = hz.EXPERIMENTS[name]
    monkeypatch.setitem(hz.EXPERIMENTS, name, (cases, lambda n, cfg: {"case": n, "pass": n != 3}, defaults, grammar))
    monkeypatch.setenv("OPFORGE_THREADS", "1")
    rc, cap = run(capsys, "experiment", name, "--nmax", "4", "--out", str(tmp_path / "r.json"))
    assert rc == 1 and "3\tFAIL" in cap.out


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_check_accepts_and_rejects(capsys, tmp_path):
    good = ass_operad(ChainBase(), 3).to_json()
    rc, cap = run(capsys, "check", write(tmp_path, "ass.json", good))
    assert rc == 0 and json.loads(cap.out)["kind"] == "operad"
    bad = dict(good, unit=["2"])
    rc, cap = run(capsys, "check", write(tmp_path, "bad.json", bad))
    assert rc == 1 and any(v.startswith("left unit") for v in json.loads(cap.out)["violations"])
    cx = {"field": "q", "window": [0, 2], "dims": {"0": 1, "1": 1, "2": 1}, "diff": {"1": ["1"], "2": ["1"]}}
    rc, cap = run(capsys, "check", write(tmp_path, "cx.json", cx))
    assert rc == 1 and json.loads(cap.out)["violations"] == ["d^2 != 0 in degree 2"]
    rc, _ = run(capsys, "check", write(tmp_path, "junk.json", {"hello": 1}))
    assert rc == 2


def test_compute_commands(capsys):
    rc, cap = run(capsys, "compute", "homology", "pentagon")
    assert rc == 0 and json.loads(cap.out)["homology"] == {"0": 1}
    rc, cap = run(capsys, "compute", "free-operad", "--nmax", "6")
    assert json.loads(cap.out)["dims"] == {"1": 1, "2": 1, "3": 2, "4": 5, "5": 14, "6": 42}
    rc, cap = run(capsys, "compute", "compose-product", "--nmax", "8")
    assert json.loads(cap.out)["dims"] == {str(n): 2 ** (n - 1) for n in range(1, 9)}
    assert run(capsys, "compute", "free-operad", "--generators", "1:0")[0] == 2


@pytest.mark.parametrize("preset", sorted(hz.PUSHOUT_PRESETS))
def test_pushout_presets_emit_a_consistent_ledger(capsys, preset):
    rc, cap = run(capsys, "compute", "pushout", "--preset", preset)
    assert rc == 0
    rows = list(csv.DictReader(cap.out.splitlines()))
    assert rows and set(rows[0]) >= {"layer", "cokernel_dims"}


def test_pushout_from_a_spec_file(capsys, tmp_path):
    spec = {"base": "ass", "arity_bound": 3,
            "cells": [{"arity": 2, "kind": "sphere-into-disk", "degree": 1, "attach": {"0:0": "1"}}]}
    rc, cap = run(capsys, "compute", "pushout", write(tmp_path, "spec.json", spec))
    assert rc == 0 and "total" in cap.out


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "opforge.cli", "compute", "homology", "associahedron:3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and '"0": 1' in r.stdout
