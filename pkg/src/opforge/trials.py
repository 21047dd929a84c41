"""Seeded random instances for the operad-level theorem checks.

Instance grammar (every trial records which branch it took):

* base operad ``O``: a random cellular operad over the initial operad, or ``A-inf``;
* weak equivalence ``phi: O -> P``: identity, a trivial-cell inclusion, a retraction
  killing a trivial cell, or ``q: A-inf -> Ass``;
* cofibration ``O -> Q``: one or two cells of total size <= 2 in arities 2..N, free
  spheres, free disks, or sphere-into-disk cells attached along random cycles.

Component dims stay small, degrees lie in [0, 2] and N <= 3 by default.
"""
from __future__ import annotations

import random

from . import chaincat as ch
from .ainfinity import a_infinity_operad
from .cellular import CellOperad, extend_morphism, mediator_is_unique, pushout_along_free
from .exactla import QQ, Matrix, nullspace, solve
from .operads import OperadMorphism, ass_operad, check_morphism, unit_operad
from .seqcomp import ChainBase

__all__ = [
    "random_cells", "pushout_of_morphism", "leftproperness_trial", "gluing_trial",
    "universal_property_trial", "random_cellular_operad", "random_weak_equivalence",
]


def _rand_coef(F, rng):
    return F(rng.choice([1, 1, 2, -1, 3, -2]))


def _random_cycle(O, k, d, rng):
    """A random nonzero cycle of degree ``d`` in ``O(k)``, or None."""
    F = O.field
    C = O.component(k)
    if not C.dim(d):
        return None
    Z = nullspace(C.d(d))
    if not Z.cols:
        return None
    vec = {}
    for j in range(Z.cols):
        if rng.random() < 0.7 or j == Z.cols - 1:
            c = _rand_coef(F, rng)
            for r, v in Z.column(j).items():
                w = F.add(vec.get(r, F.zero), F.mul(c, v))
                if F.is_zero(w):
                    vec.pop(r, None)
                else:
                    vec[r] = w
    if not vec:
        return None
    keys = O.basis(k)[d]
    return {keys[r]: v for r, v in vec.items()}


def random_cells(O, rng, arities=(2, 3), max_size=2, degrees=(0, 1, 2), allow_trivial=True):
    """Cells ``f[k]`` with attaching maps ``g[k]`` into ``O``; plus a text description."""
    F = O.field
    f, g, desc = {}, {}, []
    budget = max_size
    ks = [k for k in arities if k <= O.arity_bound]
    rng.shuffle(ks)
    for k in ks[: rng.choice([1, 2])]:
        if budget <= 0:
            break
        choices = ["sphere"]
        if budget >= 2:
            choices += ["attached", "attached"] + (["disk"] if allow_trivial else [])
        kind = rng.choice(choices)
        d = rng.choice(degrees)
        if kind == "attached":
            d = max(d, 1)
            z = _random_cycle(O, k, d - 1, rng)
            if z is None:
                kind = "sphere"
            else:
                f[k] = ch.sphere_into_disk(d, F)
                g[k] = (lambda idx, j, z=z: z)
                desc.append(f"S{d - 1}->D{d}@{k}")
                budget -= 2
                continue
        if kind == "disk":
            d = max(d, 1)
            f[k] = ch.zero_into(ch.disk(d, F))
            g[k] = (lambda idx, j: {})
            desc.append(f"0->D{d}@{k}")
            budget -= 2
            continue
        f[k] = ch.zero_into(ch.sphere(d, F))
        g[k] = (lambda idx, j: {})
        desc.append(f"0->S{d}@{k}")
        budget -= 1
    return f, g, ",".join(desc)


def random_cellular_operad(rng, N=3, field=QQ, steps=2):
    """A random cellular operad over the initial operad."""
    O = CellOperad(unit_operad(ChainBase(field), N), (), name="random")
    descs = []
    for _ in range(steps):
        f, g, desc = random_cells(O, rng, arities=tuple(range(2, N + 1)), allow_trivial=False)
        O, _, _ = pushout_along_free(O, f, g)
        descs.append(desc)
    return O, ";".join(descs)


def pushout_of_morphism(phi: OperadMorphism, f: dict, g: dict):
    """Push ``phi: O -> P`` along cells: ``Q = O + cells``, ``R = P + cells`` (via ``phi g``).

    Returns ``(Q, R, phi_prime, ledger_Q, ledger_R)`` with ``phi_prime: Q -> R``.
    """
    O, P = phi.source, phi.target
    Q, fq, led_q = pushout_along_free(O, f, g)
    g2 = {k: (lambda idx, j, gk=g[k], k=k: phi.apply(k, gk(idx, j))) for k in g}
    R, fr, led_r = pushout_along_free(P, f, g2)
    q_off = len(O.cells) if isinstance(O, CellOperad) else 0
    r_off = len(P.cells) if isinstance(P, CellOperad) else 0
    o_is_cell = isinstance(O, CellOperad)

    def base_img(n, key):
        el = O.from_base(n, key) if o_is_cell else {key: O.field.one}
        return fr.apply(n, phi.apply(n, el))

    base_map = OperadMorphism(Q.base_op, R, base_img, "base")
    images = {}
    for gid, k in Q.gens.items():
        if gid[0] < q_off:
            images[gid] = fr.apply(k, phi.apply(k, O.generator(gid)))
        else:
            images[gid] = R.generator((gid[0] - q_off + r_off, gid[1], gid[2]))
    return Q, R, extend_morphism(Q, base_map, images, R), led_q, led_r


def _trivial_cell_inclusion(O, rng):
    """``O -> O + (0 -> D^d)``: a trivial cofibration."""
    F = O.field
    k = rng.choice([a for a in (2, 3) if a <= O.arity_bound])
    d = rng.choice([1, 2])
    P, fprime, _ = pushout_along_free(O, {k: ch.zero_into(ch.disk(d, F))}, {k: lambda idx, j: {}})
    return fprime, P, f"trivial-cell D{d}@{k}"


def random_weak_equivalence(rng, N=3, field=QQ):
    """``(phi, description)`` with ``phi`` a weak equivalence of operads."""
    kind = rng.choice(["identity", "trivial-cell", "retraction", "a-infinity"])
    if kind == "a-infinity":
        A, q = a_infinity_operad(N, field)
        return q, "q: A-inf -> Ass"
    O, desc = random_cellular_operad(rng, N, field, steps=rng.choice([1, 2]))
    if kind == "identity":
        return OperadMorphism.identity(O), f"identity on [{desc}]"
    if kind == "trivial-cell":
        fprime, P, d2 = _trivial_cell_inclusion(O, rng)
        return fprime, f"{d2} on [{desc}]"
    # retraction: O + trivial cell -> O, killing the trivial cell
    fprime, P, d2 = _trivial_cell_inclusion(O, rng)
    base_map = OperadMorphism(P.base_op, O, O.from_base, "base")
    images = {gid: O.generator(gid) for gid in O.gens}
    return extend_morphism(P, base_map, images, O), f"retraction of {d2} on [{desc}]"


def leftproperness_trial(seed, N=3, field=QQ) -> dict:
    """One seeded instance: push a weak equivalence along a cofibration, test the result."""
    rng = random.Random(seed)
    phi, phi_desc = random_weak_equivalence(rng, N, field)
    f, g, cell_desc = random_cells(phi.source, rng, arities=tuple(range(2, N + 1)))
    Q, R, phi_prime, led_q, led_r = pushout_of_morphism(phi, f, g)
    ok_phi = phi.is_levelwise_weak_equivalence()
    ok = phi_prime.is_levelwise_weak_equivalence()
    ledger_ok = led_q.identity_holds() and led_r.identity_holds()
    morphism_ok = not check_morphism(phi_prime, max_checks=40, seed=seed)
    return {"seed": seed, "phi": phi_desc, "cells": cell_desc, "phi_is_we": ok_phi,
            "phi_prime_is_we": ok, "ledger": ledger_ok, "morphism": morphism_ok,
            "pass": ok_phi and ok and ledger_ok and morphism_ok}


def gluing_trial(seed, N=3, field=QQ) -> dict:
    """Two rows ``P <- O -> Q`` joined by levelwise weak equivalences; compare pushouts.

    Row one: ``O -> P`` is a cell attachment, ``h: O -> Q`` an operad map. Row two
    adds trivial cells to ``O`` and ``Q`` (sent to each other), and attaches the same
    cells. The induced map of pushouts must be a levelwise weak equivalence.
    """
    rng = random.Random(seed)
    F = field
    shape = rng.choice(["cellular", "a-infinity"])
    if shape == "a-infinity":
        O, h = a_infinity_operad(N, field)
        Qop = h.target
    else:
        O, _ = random_cellular_operad(rng, N, field, steps=1)
        f0, g0, _ = random_cells(O, rng, arities=tuple(range(2, N + 1)), allow_trivial=False)
        Qop, h, _ = pushout_along_free(O, f0, g0)
    f, g, cell_desc = random_cells(O, rng, arities=tuple(range(2, N + 1)))
    k = rng.choice([a for a in (2, 3) if a <= N])
    d = rng.choice([1, 2])
    triv_f, triv_g = {k: ch.zero_into(ch.disk(d, F))}, {k: lambda idx, j: {}}
    # verticals: O -> O', Q -> Q'
    O2, wo, _ = pushout_along_free(O, triv_f, triv_g)
    Q2, wq, _ = pushout_along_free(Qop, triv_f, triv_g)
    # h': O' -> Q' extends wq . h, trivial cell to trivial cell
    base_map = OperadMorphism(O2.base_op, Q2, lambda n, key: wq.apply(n, h.apply(n, O.from_base(n, key))), "base")
    images = {}
    o_cells = len(O.cells)
    q_cells = len(Q2.cells) - 1
    for gid, a in O2.gens.items():
        if gid[0] < o_cells:
            images[gid] = wq.apply(a, h.apply(a, O.generator(gid)))
        else:
            images[gid] = Q2.generator((q_cells, gid[1], gid[2]))
    h2 = extend_morphism(O2, base_map, images, Q2)
    # pushouts of both rows, computed as Q + cells and Q' + cells
    _, top, _, _, _ = pushout_of_morphism(h, f, g)
    g2 = {a: (lambda idx, j, ga=g[a], a=a: wo.apply(a, ga(idx, j))) for a in g}
    _, bottom, _, _, _ = pushout_of_morphism(h2, f, g2)
    # induced map: wq on Q, identity on the attached cells
    top_off = len(Qop.cells) if isinstance(Qop, CellOperad) else 0
    bot_off = len(Q2.cells)
    q_is_cell = isinstance(Qop, CellOperad)
    base2 = OperadMorphism(top.base_op, bottom,
                           lambda n, key: wq.apply(n, Qop.from_base(n, key) if q_is_cell else {key: F.one}), "base")
    imgs = {}
    for gid, a in top.gens.items():
        if gid[0] < top_off:
            imgs[gid] = wq.apply(a, Qop.generator(gid))
        else:
            imgs[gid] = bottom.generator((gid[0] - top_off + bot_off, gid[1], gid[2]))
    induced = extend_morphism(top, base2, imgs, bottom)
    verticals = all(m.is_levelwise_weak_equivalence() for m in (wo, wq))
    commutes = all(
        wq.apply(n, h.apply(n, {key: F.one})) == h2.apply(n, wo(n, key))
        for n in range(N + 1) for keys in O.basis(n).values() for key in keys)
    morphism_ok = not check_morphism(induced, max_checks=30, seed=seed)
    ok = induced.is_levelwise_weak_equivalence()
    return {"seed": seed, "shape": shape, "cells": cell_desc, "trivial": f"D{d}@{k}",
            "verticals_we": verticals, "square_commutes": commutes, "morphism": morphism_ok,
            "induced_is_we": ok, "pass": verticals and commutes and morphism_ok and ok}


def _cocone_on_cells(O, h, P, new, rng):
    """Random images of the new generators in Ass forming a cocone with ``h``, or None.

    Ass is concentrated in degree 0, so only degree-0 generators get (scalar) images
    and the chain condition says every degree-1 generator's boundary maps to zero.
    """
    F = P.field
    unknowns = [gid for gid in new if gid[1] == 0]
    col = {gid: j for j, gid in enumerate(unknowns)}
    rows, rhs = [], []
    for gid in new:
        if gid[1] != 1:
            continue
        cell = P.cells[gid[0]]
        u, coef = cell.decompose(0, cell.target.d(1).column(gid[2]))
        rows.append({col[(gid[0], 0, c)]: v for c, v in coef.items() if (gid[0], 0, c) in col})
        known = F.zero
        for r, v in u.items():
            known = F.add(known, F.mul(v, h.apply(cell.arity, cell.g(0, r)).get((0, 0), F.zero)))
        rhs.append(F.neg(known))
    if not unknowns:
        return None if any(not F.is_zero(v) for v in rhs) else {}
    A = Matrix(F, len(rows), len(unknowns), rows)
    x, null = solve(A, Matrix.from_columns(F, len(rows), [{i: v for i, v in enumerate(rhs) if not F.is_zero(v)}]))
    if x is None:
        return None
    sol = dict(x.column(0))
    for c in range(null.cols):
        lam = _rand_coef(F, rng)
        for j, v in null.column(c).items():
            sol[j] = F.add(sol.get(j, F.zero), F.mul(lam, v))
    images = {}
    for gid, j in col.items():
        val = sol.get(j, F.zero)
        images[gid] = {} if F.is_zero(val) else {(0, 0): val}
    return images


def universal_property_trial(seed, N=3, field=QQ, attempts=20) -> dict:
    """A random commuting cocone into Ass; the mediator must exist and be unique.

    ``P = O + cells``. The cocone is ``h: O -> Ass`` together with images of the cell
    generators solved so that they form a chain map agreeing with ``h g`` on the cell
    sources; a random point of the solution space is used. Cell draws that admit no
    cocone with this ``h`` are redrawn.
    """
    rng = random.Random(seed)
    F = field
    if rng.random() < 0.5:
        O, h = a_infinity_operad(N, field)
    else:
        O = CellOperad(unit_operad(ChainBase(field), N), (), name="I")
        ass = ass_operad(O.base, N)
        h = extend_morphism(O, OperadMorphism(O.base_op, ass, lambda n, key: {(0, 0): F.one}, "unit"), {}, ass)
    Ass = h.target
    for attempt in range(1, attempts + 1):
        f, g, desc = random_cells(O, rng, arities=tuple(range(2, N + 1)), degrees=(0, 1))
        P, fp, led = pushout_along_free(O, f, g)
        new = [gid for gid in P.gens if gid[0] >= len(O.cells)]
        images = _cocone_on_cells(O, h, P, new, rng)
        if images is not None:
            break
    else:
        return {"seed": seed, "pass": False, "reason": "no commuting cocone drawn"}
    for gid in O.gens:
        images[gid] = h.apply(O.gens[gid], O.generator(gid))
    base_map = OperadMorphism(P.base_op, Ass, lambda n, key: h.apply(n, O.from_base(n, key)), "base")
    m = extend_morphism(P, base_map, images, Ass)
    exists = not check_morphism(m)
    restricts = all(m.apply(n, fp(n, key)) == h(n, key) for n in range(N + 1) for ks in O.basis(n).values() for key in ks)
    on_cells = all(m.apply(P.gens[gid], P.generator(gid)) == images.get(gid, {}) for gid in new)
    unique = mediator_is_unique(P, m, new)
    ledger = led.identity_holds()
    return {"seed": seed, "cells": desc, "attempts": attempt, "exists": exists, "restricts": restricts,
            "on_cells": on_cells, "unique": unique, "ledger": ledger,
            "pass": exists and restricts and on_cells and unique and ledger}
