"""End-to-end acceptance checks; a summary line per check is printed after the run."""
import time
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

from opforge import chaincat as ch
from opforge.ainfinity import a_infinity_operad
from opforge.cellular import pushout_along_free
from opforge.exactla import QQ
from opforge.harness import ExperimentConfig, run_experiment
from opforge.operads import FreeOperad, ass_operad, unit_operad
from opforge.seqcomp import ChainBase, Sequence, compose_product


@lru_cache(maxsize=None)
def trees(n, v):
    """Planar trees with n leaves, v vertices, every arity >= 2."""
    if v == 0:
        return int(n == 1)
    return sum(forests(k, n, v - 1) for k in range(2, n + 1))


@lru_cache(maxsize=None)
def forests(k, n, v):
    if k == 0:
        return int(n == 0 and v == 0)
    return sum(trees(a, b) * forests(k - 1, n - a, v - b) for a in range(1, n + 1) for b in range(v + 1))


def kirkman_cayley(n, v):
    return Fraction(comb(n - 2, v - 1) * comb(n + v - 1, v - 1), v)


def experiment(name, **kw):
    rep = run_experiment(ExperimentConfig(name, **kw))
    return rep, f"{rep['passed']}/{rep['total']} in {rep['timing']['seconds']}s"


def test_associahedron_table(acceptance):
    t0 = time.perf_counter()
    rows, ok = [], True
    for n in range(2, 7):
        A, _ = a_infinity_operad(n)
        C = A.component(n)
        dims = {d: k for d, k in C.graded_dims().items() if k}
        counted = {n - v - 1: trees(n, v) for v in range(1, n)}
        closed = {n - v - 1: int(kirkman_cayley(n, v)) for v in range(1, n)}
        ok &= dims == counted == closed and ch.homology(C) == {0: 1}
        rows.append(f"n={n}:" + ",".join(str(dims[d]) for d in sorted(dims)))
    ok &= dims_ok(3, {0: 2, 1: 1}) and dims_ok(4, {0: 5, 1: 5, 2: 1})
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    acceptance(1, "associahedron table", ok, f"{' '.join(rows)}; H = k[0]; {elapsed:.1f}s")
    assert ok


def dims_ok(n, expected):
    A, _ = a_infinity_operad(n)
    return {d: k for d, k in A.component(n).graded_dims().items() if k} == expected


def test_free_operad_catalan_two_ways(acceptance):
    t0 = time.perf_counter()
    base = ChainBase(QQ)
    free = FreeOperad(Sequence(base, 6, {2: ch.sphere(0, QQ)}))
    P, _, led = pushout_along_free(unit_operad(base, 6), {2: ch.zero_into(ch.sphere(0, QQ))}, {2: lambda i, j: {}})
    by_trees = [sum(len(k) for k in free.basis(n).values()) for n in range(1, 7)]
    by_pushout = [sum(len(k) for k in P.basis(n).values()) for n in range(1, 7)]
    closed = [comb(2 * (n - 1), n - 1) // n for n in range(1, 7)]
    elapsed = time.perf_counter() - t0
    ok = by_trees == by_pushout == closed == [1, 1, 2, 5, 14, 42] and led.identity_holds() and elapsed < 30
    acceptance(2, "free-operad Catalan table", ok, f"trees {by_trees}, pushout {by_pushout}; {elapsed:.1f}s")
    assert ok


def test_composition_product_count(acceptance):
    base = ChainBase(QQ)
    A = ass_operad(base, 8).underlying()
    s = compose_product(A, A)
    got = [base.size(s[n]) for n in range(1, 9)]
    # one summand per way of cutting the n-1 gaps between n inputs
    oracle = [sum(1 for _ in product((0, 1), repeat=n - 1)) for n in range(1, 9)]
    ok = got == oracle == [2 ** (n - 1) for n in range(1, 9)]
    acceptance(3, "dim (Ass o Ass)(n) for n <= 8", ok, str(got))
    assert ok


def test_left_properness(acceptance):
    t0 = time.perf_counter()
    ops, d1 = experiment("left-properness-operads", trials=100, nmax=3)
    algs, d2 = experiment("left-properness-algebras", trials=100, nmax=3)
    elapsed = time.perf_counter() - t0
    ok = ops["verdict"] == algs["verdict"] == "pass" and ops["total"] >= 100 and algs["total"] >= 100 and elapsed < 300
    acceptance(4, "left properness", ok, f"operads {d1}, algebras {d2}")
    assert ok


def test_gluing(acceptance):
    rep, d = experiment("gluing", trials=50)
    ok = rep["verdict"] == "pass" and rep["total"] >= 50
    acceptance(5, "gluing lemma", ok, d)
    assert ok


def test_chi(acceptance):
    t0 = time.perf_counter()
    strong, d1 = experiment("chi-strong", field="p:3")
    dk, d2 = experiment("chi-dold-kan", nmax=3)
    elapsed = time.perf_counter() - t0
    ok = strong["verdict"] == dk["verdict"] == "pass" and elapsed < 300
    acceptance(6, "chi comparison", ok, f"strong invertible {d1}; Dold-Kan weak equivalence {d2}")
    assert ok


def test_rectification(acceptance):
    rep, d = experiment("rectification", nmax=3)
    ok = rep["verdict"] == "pass"
    acceptance(7, "rectification unit", ok, d)
    assert ok


def test_invariance(acceptance):
    rep, d = experiment("invariance")
    cases = {t["case"]: t for t in rep["trials"]}
    zero = all(t["per_arity"][0]["zero_to_zero"] for t in rep["trials"])
    ok = rep["verdict"] == "pass" and zero and set(cases) == {"strong", "dold-kan"}
    ok &= cases["strong"]["bounds"]["nmax"] >= 4 and cases["dold-kan"]["bounds"]["nmax"] >= 3
    acceptance(8, "invariance of psi'", ok, f"{d}; arity 0 is 0 -> 0: {zero}")
    assert ok


def test_dold_kan_suite(acceptance):
    t0 = time.perf_counter()
    rep, d = experiment("dold-kan-roundtrip", nmax=4)
    elapsed = time.perf_counter() - t0
    ok = rep["verdict"] == "pass" and elapsed < 60
    acceptance(9, "Dold-Kan structural suite", ok, f"s_max 4, {d}")
    assert ok


def test_ledger_identities(acceptance):
    rep, d = experiment("ledger-audit", trials=20)
    ok = rep["verdict"] == "pass" and rep["total"] >= 20
    ok &= all(t["operad_mediator"] and t["algebra_mediator"] for t in rep["trials"])
    acceptance(10, "pushout ledgers and unique mediators", ok, f"{d} random cocones")
    assert ok
