# The experiment harness and the JSON file formats used by `opforge check`.
import json
import tempfile
from pathlib import Path

from opforge import chaincat as ch
from opforge.harness import ExperimentConfig, check_object, emit_ledger, run_experiment, write_report
from opforge.operads import ass_operad
from opforge.seqcomp import ChainBase

# %% run a small experiment and write its report
rep = run_experiment(ExperimentConfig("gluing", seed=3, trials=5))
print(rep["experiment"], rep["passed"], "/", rep["total"], rep["verdict"])
out = Path(tempfile.mkdtemp()) / "gluing.json"
print("written to", write_report(rep, out))

# %% files: a complex with d^2 != 0 is caught, the associative operad passes
tmp = out.parent
bad = {"field": "q", "window": [0, 2], "dims": {"0": 1, "1": 1, "2": 1}, "diff": {"1": ["1"], "2": ["1"]}}
(tmp / "bad.json").write_text(json.dumps(bad))
(tmp / "ass.json").write_text(json.dumps(ass_operad(ChainBase(), 3).to_json()))
(tmp / "disk.json").write_text(json.dumps(ch.disk(2).to_json()))
for name in ("bad", "ass", "disk"):
    r = check_object(tmp / f"{name}.json")
    print(name, r["kind"], r["verdict"], r["violations"][:2])

# %% a pushout spec and its ledger as CSV
spec = {"base": "ass", "arity_bound": 3, "cells": [{"arity": 2, "kind": "sphere", "degree": 1}]}
text, ok = emit_ledger(spec)
print(text)
print("identity holds:", ok)
