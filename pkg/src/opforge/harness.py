"""Experiment orchestration, object validation and one-shot computations behind the CLI.

Every experiment is a list of independent cases (seeds or arities) evaluated by a pure
function; cases run in a process pool capped by ``OPFORGE_THREADS`` and the report is
assembled in case order, so a fixed config always yields the same report apart from
the ``timing`` block.
"""
from __future__ import annotations

import csv
import io
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from functools import lru_cache
from pathlib import Path

from . import chaincat as ch
from . import simpcat as sv
from .ainfinity import a_infinity_operad
from .algebras import (_parse_key, algebra_from_json, algebra_leftproperness_trial, algebra_pushout_along_free,
                       algebra_universal_property_trial, check_algebra_axioms,
                       rectification_check)
from .basechange import DoldKan, ScalarExtension, chi_report, invariance_experiment
from .cellular import CellOperad, pushout_along_free
from .exactla import GF, Field, Matrix, nullspace
from .operads import FreeOperad, ass_operad, check_operad_axioms, operad_from_json, uass_operad, unit_operad
from .seqcomp import ChainBase, Sequence, compose_product
from .trees import associahedron_dims
from .trials import gluing_trial, leftproperness_trial, random_cells, universal_property_trial

__all__ = [
    "UsageError", "ExperimentConfig", "EXPERIMENTS", "run_experiment", "write_report",
    "check_object", "emit_ledger",
    "pushout_from_spec", "compute_homology", "compute_free_operad", "compute_compose_product",
    "pool_size", "random_complex",
]


class UsageError(ValueError):
    """Bad command line, unknown experiment, infeasible bounds or unparsable input."""


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    seed: int = 42
    trials: int | None = None
    nmax: int | None = None
    tmax: int | None = None
    field: str | None = None
    out: str | None = None


def pool_size(n_cases: int) -> int:
    cap = os.environ.get("OPFORGE_THREADS")
    workers = os.cpu_count() or 1
    if cap:
        try:
            workers = min(workers, int(cap))
        except ValueError:
            raise UsageError(f"OPFORGE_THREADS={cap!r} is not an integer")
    return max(1, min(workers, n_cases))


def _field(tag: str) -> Field:
    try:
        return Field.from_tag(tag)
    except (ValueError, KeyError) as e:
        raise UsageError(f"bad field {tag!r}: {e}")


def _prime(cfg, default=3) -> int:
    if cfg.field.startswith("p:"):
        return int(cfg.field[2:])
    return default


# random instances ------------------------------------------------------------------------------

def random_complex(rng, field, top, max_dim=2) -> ch.ChainComplex:
    """A random complex in degrees ``0..top`` with ``d^2 = 0`` by construction."""
    dims = {k: rng.randint(0, max_dim) for k in range(top + 1)}
    diff = {}
    for k in range(1, top + 1):
        prev = diff.get(k - 1)
        if prev is None:
            basis = [{i: field.one} for i in range(dims[k - 1])]
        else:
            basis = nullspace(prev).columns()
        cols = []
        for _ in range(dims[k]):
            col = {}
            for b in basis:
                c = field(rng.choice([0, 0, 1, -1, 2]))
                for i, v in b.items():
                    w = field.add(col.get(i, field.zero), field.mul(c, v))
                    if field.is_zero(w):
                        col.pop(i, None)
                    else:
                        col[i] = w
            cols.append(col)
        diff[k] = Matrix.from_columns(field, dims[k - 1], cols)
    return ch.ChainComplex(field, (0, top), dims, diff)


def _random_cell_operad(rng, field, N=3, steps=2, max_size=3):
    O = CellOperad(unit_operad(ChainBase(field), N), (), name="random")
    descs = []
    for _ in range(steps):
        f, g, desc = random_cells(O, rng, arities=tuple(range(2, N + 1)), max_size=max_size)
        O, _, _ = pushout_along_free(O, f, g)
        descs.append(desc)
    return O, ";".join(d for d in descs if d)


@lru_cache(maxsize=None)
def _scalar_extension(p):
    return ScalarExtension(p)


@lru_cache(maxsize=None)
def _dold_kan(tag, s_max):
    return DoldKan(Field.from_tag(tag), s_max)


# cases ------------------------------------------------------------------------------------------

def _case_associahedron(n, cfg):
    A, _ = a_infinity_operad(n, _field(cfg.field))
    C = A.component(n)
    dims = {d: k for d, k in C.graded_dims().items() if k}
    oracle = associahedron_dims(n)
    hom = {d: k for d, k in ch.homology_dims(C).items() if k}
    ok = dims == oracle and hom == {0: 1}
    return {"case": n, "dims": _strkeys(dims), "tree_count": _strkeys(oracle), "homology": _strkeys(hom), "pass": ok}


def _case_lp_operads(seed, cfg):
    return leftproperness_trial(seed, cfg.nmax, _field(cfg.field))


def _case_lp_algebras(seed, cfg):
    wb = cfg.tmax
    O = ass_operad(ChainBase(_field(cfg.field)), max(wb, cfg.nmax))
    return algebra_leftproperness_trial(seed, O, wb)


def _case_gluing(seed, cfg):
    return gluing_trial(seed, cfg.nmax, _field(cfg.field))


def _chi_instance(seed, field, N):
    rng = random.Random(seed)
    if rng.random() < 0.25:
        O, _ = a_infinity_operad(N, field)
        return O, "A-inf"
    return _random_cell_operad(rng, field, N)


def _case_chi_strong(seed, cfg):
    p = _prime(cfg)
    adj = _scalar_extension(p)
    O, desc = _chi_instance(seed, GF(p), cfg.nmax)
    rep = chi_report(adj, O)
    rows = [{"n": r["n"], "invertible": r["invertible"], "weak_equivalence": r["weak_equivalence"]} for r in rep["per_arity"]]
    return {"seed": seed, "operad": desc, "per_arity": rows, "pass": all(r["invertible"] for r in rows)}


def _case_chi_dold_kan(seed, cfg):
    adj = _dold_kan(cfg.field, cfg.tmax)
    O, desc = _chi_instance(seed, adj.source.field, cfg.nmax)
    rep = chi_report(adj, O)
    rows = [{"n": r["n"], "invertible": r["invertible"], "weak_equivalence": r["weak_equivalence"]} for r in rep["per_arity"]]
    return {"seed": seed, "operad": desc, "per_arity": rows, "pass": all(r["weak_equivalence"] for r in rows)}


def _case_invariance(kind, cfg):
    if kind == "strong":
        adj, n = _scalar_extension(_prime(cfg)), cfg.nmax or 4
    else:
        adj, n = _dold_kan(cfg.field, cfg.tmax), cfg.nmax or 3
    rep = invariance_experiment(adj, n)
    for row in rep["per_arity"]:
        row["pass"] = row["iso"] and row["square_commutes"] and row.get("zero_to_zero", True)
    return {"case": kind, **rep, "pass": rep["verdict"] == "pass"}


def _case_rectification(seed, cfg):
    return rectification_check(seed, cfg.nmax, cfg.tmax)


def _is_iso(m) -> bool:
    return all(M.rows == M.cols and M.rank() == M.rows for M in m.comps.values())


def _case_dk_roundtrip(seed, cfg):
    rng = random.Random(seed)
    F = _field(cfg.field)
    top = cfg.nmax
    C1, C2 = random_complex(rng, F, top), random_complex(rng, F, top)
    G1, G2 = sv.gamma(C1, top), sv.gamma(C2, top)
    T = sv.sv_tensor(G1, G2)
    unit_ok = all(_is_iso(sv.dk_unit(C, top)) for C in (C1, C2))
    counit_ok = all(_is_iso(sv.dk_counit(X)) for X in (G1, T))
    ez, aw = sv.shuffle_map(G1, G2), sv.aw_map(G1, G2)
    awez = all((aw[n] @ ez[n]) == Matrix.identity(F, ez.source.dim(n)) for n in range(top + 1))
    maps_ok = not ez.commutation_violations() and not aw.commutation_violations()
    objects = [G1, G2, T, sv.gamma(sv.normalize(T), top)]
    identities = all(not X.identity_violations() for X in objects)
    d2 = all(not sv.normalize(X).d_squared_violations() for X in objects)
    ok = unit_ok and counit_ok and awez and maps_ok and identities and d2
    return {"seed": seed, "complexes": [_strkeys(C1.graded_dims()), _strkeys(C2.graded_dims())],
            "n_gamma_iso": unit_ok, "gamma_n_iso": counit_ok, "aw_ez_identity": awez, "chain_maps": maps_ok,
            "simplicial_identities": identities, "d_squared": d2, "pass": ok}


def _case_ledger_audit(seed, cfg):
    rng = random.Random(seed)
    F = _field(cfg.field)
    O, desc = _random_cell_operad(rng, F, cfg.nmax, steps=1, max_size=2)
    f, g, cdesc = random_cells(O, rng, arities=tuple(range(2, cfg.nmax + 1)))
    _, _, led = pushout_along_free(O, f, g)
    operad_identity = led.identity_holds()
    layers = led.verify_layers()
    up = universal_property_trial(seed, cfg.nmax, F)
    aup = algebra_universal_property_trial(seed, ass_operad(ChainBase(F), cfg.tmax), cfg.tmax)
    ok = operad_identity and layers and up["pass"] and aup["pass"]
    return {"seed": seed, "operad": desc, "cells": cdesc, "operad_ledger": operad_identity, "layer_pushouts": layers,
            "operad_mediator": up["pass"] and up["unique"], "algebra_mediator": aup["pass"] and aup["unique"], "pass": ok}


def _seeds(cfg):
    return [cfg.seed + i for i in range(cfg.trials)]


_GRAMMAR_OPERADS = (
    "weak equivalence phi: identity | trivial-cell inclusion | retraction of a trivial cell | q: A-inf -> Ass, "
    "on random cellular operads over the initial operad; cofibration: one or two cells of total size <= 2 in "
    "arities 2..N among free spheres, free disks and sphere-into-disk cells along random cycles; degrees in [0, 2]")
_GRAMMAR_CELLS = ("random cellular operads: two rounds of at most two cells of total size <= 3 in arities 2..N, "
                  "degrees in [0, 2], or A-inf(N) with probability 1/4")

# name -> (cases, case function, defaults, grammar)
EXPERIMENTS = {
    "associahedron": (lambda c: list(range(2, c.nmax + 1)), _case_associahedron, {"nmax": 6},
                      "A-inf(n) for n = 2..N against an independent planar-tree count"),
    "left-properness-operads": (_seeds, _case_lp_operads, {"trials": 100, "nmax": 3}, _GRAMMAR_OPERADS),
    "left-properness-algebras": (_seeds, _case_lp_algebras, {"trials": 100, "nmax": 3, "tmax": 3},
                                 "Ass-algebras over the initial algebra with one or two random cells; phi: identity | "
                                 "trivial-cell inclusion | retraction | rescaling of a free sphere; one more random "
                                 "cell pushed along phi; carriers truncated at weight T"),
    "gluing": (_seeds, _case_gluing, {"trials": 50, "nmax": 3},
               "P <- O -> Q with O cellular or A-inf, verticals adding a trivial cell D1 or D2 to O and Q; "
               "cells as in left-properness-operads"),
    "chi-strong": (_seeds, _case_chi_strong, {"trials": 20, "nmax": 3, "field": "p:3"}, _GRAMMAR_CELLS),
    "chi-dold-kan": (_seeds, _case_chi_dold_kan, {"trials": 20, "nmax": 3, "tmax": 3}, _GRAMMAR_CELLS),
    "invariance": (lambda c: ["strong", "dold-kan"], _case_invariance, {"tmax": 3},
                   "psi' : F^oper(A-inf) -> Ass for scalar extension (arities <= 4) and Dold-Kan (arities <= 3)"),
    "rectification": (_seeds, _case_rectification, {"trials": 30, "nmax": 3, "tmax": 3},
                      "cellular A-inf algebras with one to three cells of degree <= 1 over the initial algebra"),
    "dold-kan-roundtrip": (_seeds, _case_dk_roundtrip, {"trials": 20, "nmax": 4},
                           "pairs of random complexes in degrees 0..N with dims <= 2"),
    "ledger-audit": (_seeds, _case_ledger_audit, {"trials": 20, "nmax": 3, "tmax": 3},
                     "one random pushout per seed plus operad and algebra universal-property cocones"),
}


def _resolve(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.name not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {cfg.name!r}; choose from {', '.join(sorted(EXPERIMENTS))}")
    defaults = EXPERIMENTS[cfg.name][2]
    cfg = replace(cfg, **{k: v for k, v in defaults.items() if getattr(cfg, k) is None})
    if cfg.field is None:
        cfg = replace(cfg, field="q")
    for k in ("trials", "nmax", "tmax"):
        v = getattr(cfg, k)
        if v is not None and v <= 0:
            raise UsageError(f"--{k} must be positive")
    _field(cfg.field)
    if cfg.name == "chi-strong" and not cfg.field.startswith("p:"):
        raise UsageError("chi-strong needs a prime field, e.g. --field p:3")
    if cfg.name in ("associahedron", "left-properness-operads", "gluing", "chi-strong", "chi-dold-kan",
                    "rectification", "ledger-audit") and cfg.nmax < 2:
        raise UsageError(f"{cfg.name} needs --nmax >= 2")
    if cfg.name in ("chi-strong", "chi-dold-kan", "invariance") and cfg.nmax is not None and cfg.nmax > 5:
        raise UsageError(f"{cfg.name}: --nmax above 5 is beyond the desk-scale bounds")
    return cfg


def _run_case(args):
    fn, case, cfg = args
    return fn(case, cfg)


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Evaluate every case and assemble the report; the verdict is the conjunction."""
    cfg = _resolve(cfg)
    cases_fn, fn, _, grammar = EXPERIMENTS[cfg.name]
    cases = cases_fn(cfg)
    t0 = time.perf_counter()
    jobs = [(fn, c, cfg) for c in cases]
    workers = pool_size(len(jobs))
    if workers == 1:
        results = [_run_case(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_case, jobs))
    elapsed = time.perf_counter() - t0
    passed = sum(1 for r in results if r["pass"])
    return {"experiment": cfg.name, "config": asdict(cfg), "grammar": grammar, "trials": results,
            "passed": passed, "total": len(results), "verdict": "pass" if passed == len(results) else "fail",
            "timing": {"seconds": round(elapsed, 3), "workers": workers}}


def _flat(row):
    return {k: v for k, v in row.items() if isinstance(v, (bool, int, str, float))}


def write_report(report: dict, out: str | None):
    """JSON report at ``out`` and a CSV summary next to it (``.csv``)."""
    path = Path(out or f"reports/{report['experiment']}.json")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True, default=str) + "\n")
    rows = [_flat(r) for r in report["trials"]]
    fields = sorted({k for r in rows for k in r})
    with open(path.with_suffix(".csv"), "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    return path


def _nonzero(d):
    return {str(k): v for k, v in sorted(d.items()) if v}


def _strkeys(d):
    return {str(k): v for k, v in sorted(d.items())}


# JSON objects -----------------------------------------------------------------------------------

def _schema(obj) -> str:
    if not isinstance(obj, dict):
        raise UsageError("top-level JSON value must be an object")
    if "actions" in obj and "carrier" in obj:
        return "algebra"
    if "compositions" in obj and "components" in obj:
        return "operad"
    if "s_max" in obj and "levels" in obj:
        return "simplicial"
    if "window" in obj and "dims" in obj:
        return "complex"
    raise UsageError("schema mismatch: not a complex, simplicial object, operad or algebra")


def check_object(path) -> dict:
    """Parse a JSON object and run the invariant checker that matches its schema."""
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}")
    kind = _schema(obj)
    try:
        if kind == "complex":
            C = ch.ChainComplex.from_json(obj, check=False)
            bad = [f"d^2 != 0 in degree {d}" for d in C.d_squared_violations()]
        elif kind == "simplicial":
            X = sv.SimplicialVS.from_json(obj, check=False)
            bad = [f"simplicial identity {v}" for v in X.identity_violations()]
        elif kind == "operad":
            O = operad_from_json(obj)
            bad = _component_violations(O) + check_operad_axioms(O)
        else:
            a = algebra_from_json(obj)
            bad = _component_violations(a.operad) + check_algebra_axioms(a, max_checks=10 ** 6)
            if a.kind == "chain":
                bad += [f"carrier d^2 != 0 in degree {d}" for d in a.carrier().d_squared_violations()]
    except (KeyError, ValueError, TypeError, StopIteration) as e:
        raise UsageError(f"schema mismatch in {path}: {e}")
    return {"path": str(path), "kind": kind, "violations": bad, "verdict": "pass" if not bad else "fail"}


def _component_violations(O):
    bad = []
    for n in range(O.arity_bound + 1):
        C = O.component(n)
        if O.kind == "chain":
            bad += [f"arity {n}: d^2 != 0 in degree {d}" for d in C.d_squared_violations()]
        else:
            bad += [f"arity {n}: simplicial identity {v}" for v in C.identity_violations()]
    return bad


# computations ----------------------------------------------------------------------------------

def compute_homology(source) -> dict:
    """Homology dims of a complex, of the normalization of a simplicial object, or of an operad by arity.

    ``source`` is a path or ``pentagon`` / ``associahedron:<n>``.
    """
    if source == "pentagon" or str(source).startswith("associahedron:"):
        n = 4 if source == "pentagon" else int(str(source).split(":")[1])
        A, _ = a_infinity_operad(n)
        return {"object": f"A-inf({n})", "homology": _nonzero(ch.homology_dims(A.component(n)))}
    try:
        obj = json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {source}: {e}")
    kind = _schema(obj)
    if kind == "complex":
        return {"object": str(source), "homology": _nonzero(ch.homology_dims(ch.ChainComplex.from_json(obj)))}
    if kind == "simplicial":
        return {"object": str(source), "homology": _nonzero(ch.homology_dims(sv.normalize(sv.SimplicialVS.from_json(obj))))}
    if kind == "operad":
        O = operad_from_json(obj)
        return {"object": str(source), "homology": {str(n): _nonzero(O.base.homology(O.component(n))) for n in range(O.arity_bound + 1)}}
    raise UsageError("homology of an algebra: pass its carrier complex")


def _parse_generators(text, field):
    gens = {}
    for part in text.split(","):
        try:
            k, d = map(int, part.split(":"))
        except ValueError:
            raise UsageError(f"bad generator {part!r}; expected arity:degree")
        if k < 0 or d < 0:
            raise UsageError(f"bad generator {part!r}")
        gens.setdefault(k, {}).setdefault(d, 0)
        gens[k][d] += 1
    return gens


def compute_free_operad(generators="2:0", nmax=5, field="q", size_bound=None) -> dict:
    """Dims of the free operad on generators ``arity:degree,...``, arities 1..nmax."""
    F = _field(field)
    gens = _parse_generators(generators, F)
    base = ChainBase(F)
    top = max(max(d) for d in gens.values())
    comps = {k: ch.ChainComplex(F, (0, top), d) for k, d in gens.items() if k <= nmax}
    try:
        P = FreeOperad(Sequence(base, nmax, comps), size_bound=size_bound)
    except ValueError as e:
        raise UsageError(str(e))
    dims = {n: sum(len(ks) for ks in P.basis(n).values()) for n in range(1, nmax + 1)}
    graded = {n: _strkeys({d: len(ks) for d, ks in P.basis(n).items()}) for n in range(1, nmax + 1)}
    return {"generators": generators, "dims": _strkeys(dims), "graded": _strkeys(graded)}


_SEQUENCES = {"ass": ass_operad, "uass": uass_operad, "unit": unit_operad}


def compute_compose_product(left="ass", right="ass", nmax=5, field="q") -> dict:
    """Total dims of ``left o right`` for the named operads' underlying sequences."""
    if left not in _SEQUENCES or right not in _SEQUENCES:
        raise UsageError(f"operands must be among {sorted(_SEQUENCES)}")
    base = ChainBase(_field(field))
    u, v = _SEQUENCES[left](base, nmax).underlying(), _SEQUENCES[right](base, nmax).underlying()
    try:
        s = compose_product(u, v)
    except ValueError as e:
        raise UsageError(str(e))
    start = 0 if base.size(s[0]) else 1
    return {"product": f"{left} o {right}", "dims": _strkeys({n: base.size(s[n]) for n in range(start, nmax + 1)})}


# pushout specs -----------------------------------------------------------------------------------

PUSHOUT_PRESETS = {
    "free-binary": {"base": "initial", "arity_bound": 5, "cells": [{"arity": 2, "kind": "sphere", "degree": 0}]},
    "identity": {"base": "ass", "arity_bound": 4, "cells": [{"arity": 2, "kind": "identity", "degree": 0}]},
    "trivial-cell": {"base": "a-infinity", "arity_bound": 4,
                        "cells": [{"arity": 3, "kind": "disk", "degree": 2}]},
    "algebra-free": {"algebra": True, "base": "ass", "arity_bound": 3, "weight_bound": 3,
                     "cells": [{"kind": "sphere", "degree": 0}]},
}


def _base_for_spec(spec, F):
    N = int(spec.get("arity_bound", 3))
    name = spec.get("base", "initial")
    base = ChainBase(F)
    if name == "initial":
        return unit_operad(base, N)
    if name == "ass":
        return ass_operad(base, N)
    if name == "uass":
        return uass_operad(base, N)
    if name == "a-infinity":
        return a_infinity_operad(N, F)[0]
    raise UsageError(f"unknown base {name!r}")


def _spec_cell(cell, F, keys):
    kind, d = cell.get("kind", "sphere"), int(cell.get("degree", 0))
    if kind == "sphere":
        return ch.zero_into(ch.sphere(d, F)), (lambda idx, j: {})
    if kind == "disk":
        return ch.zero_into(ch.disk(d, F)), (lambda idx, j: {})
    if kind == "identity":
        S = ch.sphere(d, F)
        return S.identity(), (lambda idx, j: {})
    if kind == "sphere-into-disk":
        el = {}
        for k, v in cell.get("attach", {}).items():
            i, j = _parse_key(k)
            el[keys(i)[j]] = F.parse(str(v))
        return ch.sphere_into_disk(d, F), (lambda idx, j, el=el: el)
    raise UsageError(f"unknown cell kind {kind!r}")


def pushout_from_spec(spec: dict):
    """Attach the cells of a spec to its base; returns ``(result, ledger)``.

    Operad specs: ``{"base": initial|ass|uass|a-infinity, "arity_bound": N, "cells":
    [{"arity": k, "kind": sphere|disk|identity|sphere-into-disk, "degree": d, "attach":
    {"index:position": coefficient}}]}``. With ``"algebra": true`` the cells go onto the
    initial algebra over the base operad, truncated at ``weight_bound``.
    """
    F = _field(spec.get("field", "q"))
    O = _base_for_spec(spec, F)
    cells = spec.get("cells", [])
    if spec.get("algebra"):
        from .algebras import initial_algebra
        a = initial_algebra(O, int(spec.get("weight_bound", 3)))
        if len(cells) != 1:
            raise UsageError("algebra pushout specs take exactly one cell")
        f, g = _spec_cell(cells[0], F, lambda i: a.basis().get(i, []))
        b, _, led = algebra_pushout_along_free(a, f, g)
        return b, led
    f, g = {}, {}
    for cell in cells:
        k = int(cell["arity"])
        if k in f:
            raise UsageError(f"two cells in arity {k}; use separate pushouts")
        if k > O.arity_bound:
            raise UsageError(f"cell arity {k} exceeds arity_bound")
        f[k], g[k] = _spec_cell(cell, F, lambda i, k=k: O.basis(k).get(i, []))
    P, _, led = pushout_along_free(O, f, g)
    return P, led


def emit_ledger(spec: dict) -> tuple:
    """CSV text of the layer ledger of a pushout spec, and whether its identity holds."""
    _, led = pushout_from_spec(spec)
    rows = led.csv_rows()
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else ["arity", "layer", "tree", "cokernel_dims"],
                       lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue(), led.identity_holds()
