"""Algebras over an operad in the same base category.

Presented algebras are quasi-free: the carrier has basis the monomials
``(o; w_1 .. w_n)`` with ``o`` a basis key of ``O(n)`` and ``w_i`` generators coming
from cells ``U -> V``. The differential (or face maps) acts on ``o`` and on each
letter, where a letter's boundary is the image of its ``V``-boundary with the
``U``-part sent through the attaching map. Carriers are truncated at a total letter
weight; a generator's weight is that of its attaching image (at least 1), so the
truncation is a subcomplex.
"""
from __future__ import annotations

import random
from itertools import product
from math import comb

from . import chaincat as ch
from . import simpcat as sv
from .cellular import Cell, _op_matrix, _ops_of
from .exactla import Matrix, TruncationError, nullspace
from .operads import Operad, OperadMorphism, lin_add, lin_scale, op_target_index, operad_from_json, operators, plug_children

__all__ = [
    "OAlgebra", "CellAlgebra", "RestrictedAlgebra", "AlgebraMorphism", "free_algebra", "initial_algebra",
    "algebra_pushout_along_free", "restrict_along", "induce_along", "check_algebra_axioms",
    "AlgebraLedger", "algebra_leftproperness_trial", "algebra_mediator_is_unique", "extend_algebra_map",
    "algebra_universal_property_trial", "rectification_check", "TableAlgebra", "algebra_from_json",
]


class OAlgebra:
    """Interface: a carrier with basis keys ``(index, tag)`` and an action on keys."""

    operad: Operad = None
    n_max_action = 0

    @property
    def field(self):
        return self.operad.field

    @property
    def base(self):
        return self.operad.base

    @property
    def kind(self):
        return self.operad.kind

    def basis(self) -> dict:
        raise NotImplementedError

    def positions(self):
        cache = self.__dict__.setdefault("_pos", None)
        if cache is None:
            cache = {k: j for ks in self.basis().values() for j, k in enumerate(ks)}
            self._pos = cache
        return cache

    def act(self, n, okey, xs) -> dict:
        """``nu_n(o; x_1 .. x_n)`` on basis keys."""
        raise NotImplementedError

    def struct(self, key, op) -> dict:
        """Structure operator on a carrier basis key."""
        raise NotImplementedError

    def act_elems(self, n, oel: dict, xels: list) -> dict:
        F = self.field
        out = {}
        for ok, oc in oel.items():
            for combo in product(*[list(x.items()) for x in xels]):
                c = oc
                for _, v in combo:
                    c = F.mul(c, v)
                lin_add(F, out, self.act(n, ok, [k for k, _ in combo]), c)
        return out

    def vector(self, idx, elem: dict) -> dict:
        pos = self.positions()
        out = {}
        for k, c in elem.items():
            if k[0] != idx:
                raise ValueError("index mismatch")
            if k not in pos:
                raise TruncationError(f"{k!r} lies beyond the carrier truncation")
            out[pos[k]] = c
        return out

    def carrier(self):
        if getattr(self, "_carrier", None) is None:
            self._carrier = self._build_carrier()
        return self._carrier

    def _build_carrier(self):
        F = self.field
        B = self.basis()
        if self.kind == "chain":
            degs = sorted(B) or [0]
            lo, hi = min(degs + [0]), max(degs + [0])
            dims = {d: len(B.get(d, [])) for d in range(lo, hi + 1)}
            diff = {}
            for d in range(lo + 1, hi + 1):
                cols = [self.vector(d - 1, self.struct(k, "d")) for k in B.get(d, [])]
                diff[d] = Matrix.from_columns(F, dims[d - 1], cols)
            return ch.ChainComplex(F, (lo, hi), dims, diff)
        top = self.base.s_max
        levels = {s: len(B.get(s, [])) for s in range(top + 1)}
        faces, degens = {}, {}
        for s in range(top + 1):
            for op in operators(self.base, s):
                t = op_target_index(op, s)
                m = Matrix.from_columns(F, levels[t], [self.vector(t, self.struct(k, op)) for k in B.get(s, [])])
                (faces if op[0] == "d" else degens)[(s, op[1])] = m
        return sv.SimplicialVS(F, top, levels, faces, degens, check=False)

    def to_json(self) -> dict:
        """Carrier, operad and the action on all carrier tuples up to ``n_max_action``.

        Operad and carrier keys are written positionally as ``index:position``; tuples whose
        value lies beyond the carrier truncation are listed under ``undefined``.
        """
        F = self.field
        O = self.operad
        opos = {n: O.positions(n) for n in range(O.arity_bound + 1)}
        apos = self.positions()
        keys = self.all_keys()
        actions = []
        for n in range(min(self.n_max_action, O.arity_bound) + 1):
            for ok in O.all_keys(n):
                values, undefined = {}, []
                pool = keys if self.kind == "chain" else [x for x in keys if x[0] == ok[0]]
                for xs in product(pool, repeat=n):
                    tag = "|".join(_key_text((x[0], apos[x])) for x in xs)
                    try:
                        val = self.act(n, ok, list(xs))
                    except TruncationError:
                        undefined.append(tag)
                        continue
                    if val:
                        values[tag] = {_key_text((k[0], apos[k])): F.format(v) for k, v in val.items()}
                actions.append({"n": n, "op": _key_text((ok[0], opos[n][ok])), "values": values, "undefined": undefined})
        return {"base": self.kind, "operad": O.to_json(), "carrier": self.carrier().to_json(),
                "n_max_action": self.n_max_action, "actions": actions}

    def all_keys(self):
        return [k for i in sorted(self.basis()) for k in self.basis()[i]]


def _letters_degree(alg, letters):
    return sum(alg.letter_degree(w) for w in letters)


class CellAlgebra(OAlgebra):
    """Quasi-free ``O``-algebra on the generators of its cells, truncated at ``weight_bound``."""

    def __init__(self, operad: Operad, cells=(), weight_bound=None, name="algebra"):
        self.operad = operad
        self.cells = list(cells)
        self.name = name
        self.gens, self.weights = [], {}
        for c in self.cells:
            for gid in c.generators():
                self.gens.append(gid)
                self.weights[gid] = c.weight
        if weight_bound is None:
            weight_bound = operad.arity_bound
        self.weight_bound = weight_bound
        self.n_max_action = operad.arity_bound
        self._img = {}
        self._carrier = None

    def __repr__(self):
        return f"CellAlgebra({self.name}, cells={len(self.cells)}, weight<={self.weight_bound})"

    def letter_degree(self, gid):
        return gid[1] if self.kind == "chain" else 0

    def word_weight(self, letters):
        return sum(self.weights[w] for w in letters)

    def attach(self, f, g, name=None, weight=None) -> "CellAlgebra":
        """One more cell ``f: U -> V`` attached along ``g(idx, j) -> carrier element``.

        ``weight`` may raise the letters' weight above that of the attaching image,
        so that cells matched across a map get the same weight.
        """
        if self.kind == "chain":
            if not all(f[d].is_injective() for d in f.comps):
                raise ValueError("cell map is not injective")
        elif not f.is_levelwise_injective():
            raise ValueError("cell map is not injective")
        cell = Cell(len(self.cells), 1, f, g, self.kind)
        U = f.source
        w = 1
        for idx in _indices(U):
            for j in range(U.dim(idx)):
                for key in g(idx, j):
                    w = max(w, self.word_weight(key[1][1]))
        if weight is not None:
            if weight < w:
                raise ValueError(f"weight {weight} is below the attaching weight {w}")
            w = weight
        cell.weight = w
        out = CellAlgebra(self.operad, self.cells + [cell], self.weight_bound, name or self.name)
        out._check_attaching(cell, self)
        return out

    def _check_attaching(self, cell, prev):
        U = cell.source
        for idx in _indices(U):
            for j in range(U.dim(idx)):
                img = cell.g(idx, j)
                if any(k[0] != idx for k in img):
                    raise ValueError(f"attaching image leaves index {idx}")
                for op in _ops_of(U, idx):
                    lhs = {}
                    for k, c in img.items():
                        lin_add(self.field, lhs, prev.struct(k, op), c)
                    rhs = {}
                    for r, v in _op_matrix(U, idx, op).column(j).items():
                        lin_add(self.field, rhs, cell.g(op_target_index(op, idx), r), v)
                    if lhs != rhs:
                        raise ValueError(f"attaching map does not commute with {op} at index {idx}")

    # basis ----------------------------------------------------------------------------------
    def basis(self):
        if getattr(self, "_basis", None) is not None:
            return self._basis
        O = self.operad
        out = {}
        chain = self.kind == "chain"
        T = self.weight_bound
        for n in range(0, T + 1):
            words = [w for w in product(self.gens, repeat=n) if self.word_weight(w) <= T]
            if not words:
                continue
            if n > O.arity_bound:
                if O.bounded_support:
                    continue
                raise TruncationError(f"words of length {n} need operations of arity beyond {O.arity_bound}")
            for idx_o, okeys in sorted(O.basis(n).items()):
                for okey in okeys:
                    for w in words:
                        if chain:
                            idx = idx_o + _letters_degree(self, w)
                            out.setdefault(idx, []).append((idx, (okey, w)))
                        elif all(g[1] == idx_o for g in w):
                            out.setdefault(idx_o, []).append((idx_o, (okey, w)))
        self._basis = out
        return out

    def layer_of(self, key, cells):
        return sum(1 for w in key[1][1] if w[0] in cells)

    # structure ------------------------------------------------------------------------------
    def generator(self, gid) -> dict:
        O = self.operad
        uidx = 0 if self.kind == "chain" else gid[1]
        return {(gid[1], (uk, (gid,))): c for uk, c in O.unit(uidx).items()}

    def act(self, n, okey, xs):
        F = self.field
        O = self.operad
        chain = self.kind == "chain"
        kids, letters, sign = [], [], 0
        passed = 0
        for x in xs:
            ok, ws = x[1]
            if chain:
                sign += O.key_index(ok) * passed
                passed += _letters_degree(self, ws)
            kids.append(({ok: F.one}, len(ws)))
            letters.extend(ws)
        if self.word_weight(letters) > self.weight_bound:
            raise TruncationError("action leaves the weight truncation")
        val, _ = plug_children(O, {okey: F.one}, n, kids)
        if chain:
            idx = O.key_index(okey) + sum(x[0] for x in xs)
        else:
            idx = okey[0]
        c = F.neg(F.one) if sign % 2 else F.one
        return {(idx, (k, tuple(letters))): F.mul(c, v) for k, v in val.items()}

    def generator_image(self, gid, op):
        key = (gid, op)
        if key not in self._img:
            cell = self.cells[gid[0]]
            _, idx, j = gid
            col = _op_matrix(cell.target, idx, op).column(j)
            self._img[key] = self.cell_value(cell, op_target_index(op, idx), col)
        return self._img[key]

    def cell_value(self, cell, idx, vec):
        F = self.field
        u, coef = cell.decompose(idx, vec)
        out = {}
        for r, v in u.items():
            lin_add(F, out, cell.g(idx, r), v)
        for c, v in coef.items():
            lin_add(F, out, self.generator((cell.number, idx, c)), v)
        return out

    def _letter_elem(self, gid):
        return self.generator(gid)

    def struct(self, key, op):
        F = self.field
        O = self.operad
        idx, (okey, ws) = key
        n = len(ws)
        out = {}
        if self.kind == "chain":
            for nk, c in O.act(n, okey, "d").items():
                lin_add(F, out, self.act(n, nk, [self._mono(w) for w in ws]), c)
            before = O.key_index(okey)
            for i, w in enumerate(ws):
                sgn = F.neg(F.one) if before % 2 else F.one
                dw = self.generator_image(w, "d")
                xels = [{self._mono(v): F.one} for v in ws]
                xels[i] = dw
                lin_add(F, out, self.act_elems(n, {okey: F.one}, xels), sgn)
                before += w[1]
            return out
        oel = O.act(n, okey, op)
        xels = [self.generator_image(w, op) for w in ws]
        return self.act_elems(n, oel, xels)

    def _mono(self, gid):
        (k, _), = [(k, c) for k, c in self.generator(gid).items()]
        return k

    def restrict_cells(self, k):
        return CellAlgebra(self.operad, self.cells[:k], self.weight_bound, self.name)


def _indices(X):
    return X.degrees() if hasattr(X, "degrees") else range(X.s_max + 1)


class RestrictedAlgebra(OAlgebra):
    """``phi^* B``: the carrier of ``B`` with the action precomposed with ``phi``."""

    def __init__(self, phi: OperadMorphism, b: OAlgebra):
        self.phi, self.inner = phi, b
        self.operad = phi.source
        self.n_max_action = min(b.n_max_action, phi.source.arity_bound)
        self._carrier = None

    def basis(self):
        return self.inner.basis()

    def positions(self):
        return self.inner.positions()

    def act(self, n, okey, xs):
        F = self.field
        out = {}
        for k, c in self.phi(n, okey).items():
            lin_add(F, out, self.inner.act(n, k, xs), c)
        return out

    def struct(self, key, op):
        return self.inner.struct(key, op)

    def carrier(self):
        return self.inner.carrier()


class AlgebraMorphism:
    """Carrier map given on basis keys."""

    def __init__(self, source: OAlgebra, target: OAlgebra, fn, name="algebra map"):
        self.source, self.target, self.fn, self.name = source, target, fn, name
        self._cache = {}

    def __call__(self, key):
        if key not in self._cache:
            self._cache[key] = self.fn(key)
        return self._cache[key]

    def apply(self, elem):
        out = {}
        for k, c in elem.items():
            lin_add(self.source.field, out, self(k), c)
        return out

    def carrier_map(self):
        S, T = self.source.carrier(), self.target.carrier()
        F = self.source.field
        comps = {}
        for idx, keys in self.source.basis().items():
            comps[idx] = Matrix.from_columns(F, T.dim(idx), [self.target.vector(idx, self(k)) for k in keys])
        if self.source.kind == "chain":
            return ch.ChainMap(S, T, comps, check=False)
        return sv.SimplicialMap(S, T, comps, check=False)

    def is_weak_equivalence(self, degrees=None):
        m = self.carrier_map()
        if self.source.kind == "chain":
            return ch.is_weak_equivalence(m, degrees)
        return sv.sv_model_predicates(m)[1]

    def violations(self, max_checks=None, seed=0):
        """Failures of compatibility with the structure operators and the action."""
        A, B = self.source, self.target
        rng = random.Random(seed)
        bad = []
        for idx, keys in A.basis().items():
            for k in keys:
                for op in operators(A.base, idx):
                    try:
                        if self.apply(A.struct(k, op)) != _struct_elem(B, self(k), op):
                            bad.append(f"{op} on {k!r}")
                    except TruncationError:
                        pass
        for n in range(0, A.n_max_action + 1):
            if n > A.operad.arity_bound:
                break
            tuples = list(product(A.all_keys(), repeat=n))
            if max_checks is not None and len(tuples) > max_checks:
                tuples = rng.sample(tuples, max_checks)
            for okey in A.operad.all_keys(n):
                for xs in tuples:
                    try:
                        lhs = self.apply(A.act(n, okey, list(xs)))
                        rhs = B.act_elems(n, {okey: A.field.one}, [self(x) for x in xs])
                    except TruncationError:
                        continue
                    if lhs != rhs:
                        bad.append(f"action of {okey!r} on {xs!r}")
        return bad


def _struct_elem(A, elem, op):
    out = {}
    for k, c in elem.items():
        lin_add(A.field, out, A.struct(k, op), c)
    return out


# constructions --------------------------------------------------------------------------------

def initial_algebra(operad: Operad, weight_bound=None) -> CellAlgebra:
    """``O(0)`` with the action by full composition."""
    return CellAlgebra(operad, (), weight_bound, name="initial")


def free_algebra(operad: Operad, x, weight_bound=None) -> CellAlgebra:
    """Free algebra on the base object ``x``: ``sum over n of O(n) (x) x^n`` truncated by weight."""
    a = initial_algebra(operad, weight_bound)
    z = ch.zero_into(x) if operad.kind == "chain" else sv.SimplicialMap(sv.zero_sv(x.field, x.s_max), x, {}, check=False)
    return a.attach(z, lambda idx, j: {}, name="free")


def free_algebra_unit(a: CellAlgebra, cell_index=-1):
    """The adjunction unit ``x -> free(x)`` as a base-category map."""
    cell = a.cells[cell_index]
    X = cell.target
    F = a.field
    comps = {}
    for idx in _indices(X):
        cols = [a.vector(idx, a.cell_value(cell, idx, {j: F.one})) for j in range(X.dim(idx))]
        comps[idx] = Matrix.from_columns(F, a.carrier().dim(idx), cols)
    if a.kind == "chain":
        return ch.ChainMap(X, a.carrier(), comps)
    return sv.SimplicialMap(X, a.carrier(), comps)


def algebra_pushout_along_free(a: CellAlgebra, f, g, verify_universal=False):
    """``B = A +_(F U) F V`` for a single cell; returns ``(B, inclusion, ledger)``."""
    b = a.attach(f, g)
    incl = AlgebraMorphism(a, b, lambda k: {k: a.field.one}, "inclusion")
    return b, incl, AlgebraLedger(a, b, {len(a.cells)})


class AlgebraLedger:
    """Per layer ``t`` (number of new letters): predicted vs. realised graded dims.

    The prediction multiplies graded generating functions: for each arity ``m`` and
    each choice of ``t`` positions for new letters, ``O(m)`` tensored with old letters
    in the other positions, restricted to total weight within the bound.
    """

    def __init__(self, old: CellAlgebra, new: CellAlgebra, new_cells):
        self.old, self.new, self.new_cells = old, new, set(new_cells)
        self.layers = self._compute()

    def _letter_series(self, cells, level=None):
        """{(degree, weight): count} for one letter from the given cells."""
        out = {}
        for gid in self.new.gens:
            if gid[0] not in cells or (level is not None and gid[1] != level):
                continue
            key = (self.new.letter_degree(gid), self.new.weights[gid])
            out[key] = out.get(key, 0) + 1
        return out

    def _compute(self):
        alg = self.new
        O = alg.operad
        T = alg.weight_bound
        chain = alg.kind == "chain"
        old_cells = set(range(len(alg.cells))) - self.new_cells
        levels = [None] if chain else range(alg.base.s_max + 1)
        predicted = {}
        for lev in levels:
            s_old = self._letter_series(old_cells, lev)
            s_new = self._letter_series(self.new_cells, lev)
            for m in range(0, min(T, O.arity_bound) + 1):
                odims = {i: len(ks) for i, ks in O.basis(m).items() if lev is None or i == lev}
                for t in range(0, m + 1):
                    series = {(0, 0): 1}
                    for slot in range(m):
                        series = _mult(series, s_new if slot < t else s_old, T)
                    for (i, _), c in series.items():
                        for oi, od in odims.items():
                            row = predicted.setdefault(t, {})
                            row[oi + i] = row.get(oi + i, 0) + c * od * comb(m, t)
        actual = {}
        for idx, keys in alg.basis().items():
            for k in keys:
                row = actual.setdefault(alg.layer_of(k, self.new_cells), {})
                row[idx] = row.get(idx, 0) + 1
        return {t: {"predicted": predicted.get(t, {}), "actual": actual.get(t, {})}
                for t in sorted(set(predicted) | set(actual))}

    def identity_holds(self) -> bool:
        new = {i: len(ks) for i, ks in self.new.basis().items()}
        old = {i: len(ks) for i, ks in self.old.basis().items()}
        diff = {i: new.get(i, 0) - old.get(i, 0) for i in set(new) | set(old)}
        pred = {}
        for t, row in self.layers.items():
            if t >= 1:
                for i, v in row["predicted"].items():
                    pred[i] = pred.get(i, 0) + v
        clean = lambda d: {i: v for i, v in d.items() if v}
        return clean(diff) == clean(pred) and all(
            clean(r["predicted"]) == clean(r["actual"]) for r in self.layers.values())

    def csv_rows(self):
        rows = []
        for t, r in self.layers.items():
            if t >= 1:
                rows.append({"layer": t, "cokernel_dims": _dims_text(r["predicted"])})
        return rows


def _mult(series, letter, T):
    out = {}
    for (i, w), c in series.items():
        for (j, v), d in letter.items():
            if w + v <= T:
                out[(i + j, w + v)] = out.get((i + j, w + v), 0) + c * d
    return out


def _dims_text(d):
    return ";".join(f"{i}:{v}" for i, v in sorted(d.items()) if v)


def restrict_along(phi: OperadMorphism, b: OAlgebra) -> RestrictedAlgebra:
    return RestrictedAlgebra(phi, b)


def induce_along(phi: OperadMorphism, a: CellAlgebra):
    """``phi_* a`` for a presented algebra, and the unit ``a -> phi^* phi_* a``.

    Cells are transported unchanged; attaching maps and monomials are pushed through
    ``phi`` on the operation part.
    """
    F = a.field
    target = phi.target
    out = CellAlgebra(target, (), a.weight_bound, name=f"induced {a.name}")

    def push(elem):
        res = {}
        for (idx, (okey, ws)), c in elem.items():
            n = len(ws)
            for nk, v in phi(n, okey).items():
                lin_add(F, res, {(idx, (nk, ws)): F.one}, F.mul(c, v))
        return res

    for cell in a.cells:
        out = out.attach(cell.f, (lambda idx, j, cell=cell: push(cell.g(idx, j))))
    unit = AlgebraMorphism(a, RestrictedAlgebra(phi, out), lambda k: push({k: F.one}), "unit")
    return out, unit


def check_algebra_axioms(a: OAlgebra, max_checks=200, seed=0) -> list:
    """Violations of: unit, associativity of the action, compatibility with structure maps."""
    F = a.field
    O = a.operad
    rng = random.Random(seed)
    bad = []
    keys = a.all_keys()
    chain = a.kind == "chain"
    # unit
    for x in keys:
        uidx = 0 if chain else x[0]
        try:
            if a.act_elems(1, O.unit(uidx), [{x: F.one}]) != {x: F.one}:
                bad.append(f"unit on {x!r}")
        except TruncationError:
            pass
    # o_i compatibility: nu(o o_i p; xs) = nu(o; .., nu(p; ..), ..) with Koszul sign
    N = min(a.n_max_action, O.arity_bound)
    checks = 0
    for p in range(1, N + 1):
        for q in range(0, N + 2 - p):
            if p + q - 1 > N:
                continue
            for i in range(1, p + 1):
                for ok in O.all_keys(p):
                    for pk in O.all_keys(q):
                        if not chain and ok[0] != pk[0]:
                            continue
                        pool = keys if chain else [x for x in keys if x[0] == ok[0]]
                        tuples = list(product(pool, repeat=p + q - 1))
                        rng.shuffle(tuples)
                        for xs in tuples[:4]:
                            if checks >= max_checks:
                                break
                            checks += 1
                            xs = list(xs)
                            try:
                                lhs = a.act_elems(p + q - 1, O.compose(p, i, q, ok, pk), [{x: F.one} for x in xs])
                                inner = a.act(q, pk, xs[i - 1:i - 1 + q])
                                rhs = a.act_elems(p, {ok: F.one}, [{x: F.one} for x in xs[:i - 1]] + [inner] + [{x: F.one} for x in xs[i - 1 + q:]])
                            except TruncationError:
                                continue
                            if chain:
                                s = pk[0] * sum(x[0] for x in xs[:i - 1])
                                if s % 2:
                                    rhs = lin_scale(F, rhs, F.neg(F.one))
                            if lhs != rhs:
                                bad.append(f"associativity o_{i} ({ok!r},{pk!r}) on {xs!r}")
    # structure maps are derivations / simplicial
    for n in range(0, N + 1):
        for ok in O.all_keys(n):
            pool = keys if chain else [x for x in keys if x[0] == ok[0]]
            tuples = list(product(pool, repeat=n))
            rng.shuffle(tuples)
            for xs in tuples[:6]:
                xs = list(xs)
                idx = ok[0] + sum(x[0] for x in xs) if chain else ok[0]
                if not chain and any(x[0] != ok[0] for x in xs):
                    continue
                try:
                    val = a.act(n, ok, xs)
                    for op in operators(a.base, idx):
                        lhs = _struct_elem(a, val, op)
                        if chain:
                            rhs = a.act_elems(n, O.act(n, ok, op), [{x: F.one} for x in xs])
                            before = ok[0]
                            for j, x in enumerate(xs):
                                xe = [{y: F.one} for y in xs]
                                xe[j] = a.struct(x, op)
                                s = F.neg(F.one) if before % 2 else F.one
                                lin_add(F, rhs, a.act_elems(n, {ok: F.one}, xe), s)
                                before += x[0]
                        else:
                            rhs = a.act_elems(n, O.act(n, ok, op), [a.struct(x, op) for x in xs])
                        if lhs != rhs:
                            bad.append(f"{op} vs action of {ok!r} on {xs!r}")
                except TruncationError:
                    continue
    return bad


def extend_algebra_map(b: CellAlgebra, target: OAlgebra, letter_images: dict, name="extension") -> AlgebraMorphism:
    """The algebra map out of a quasi-free ``b`` with prescribed letter images."""
    F = b.field

    def fn(key):
        okey, ws = key[1]
        return target.act_elems(len(ws), {okey: F.one}, [letter_images[w] for w in ws])

    return AlgebraMorphism(b, target, fn, name)


def algebra_mediator_is_unique(b: CellAlgebra, m: AlgebraMorphism, old_cells: int) -> bool:
    """Zero nullspace for the derivations along ``m`` killing the old stage and new letters.

    Unknowns are the matrix entries of a carrier map ``delta``; equations are
    ``delta(nu(o; w..)) = sum_i nu(o; m w_1 .. delta w_i .. m w_n)`` on monomials,
    ``delta = 0`` on monomials in old letters and on every new letter.
    """
    F = b.field
    C = m.target
    cb = C.basis()
    var = {}
    for idx, keys in b.basis().items():
        for k in keys:
            for r in cb.get(idx, []):
                var[(k, r)] = len(var)
    if not var:
        return True
    eqs = []

    def pin(k):
        for r in cb.get(k[0], []):
            eqs.append({var[(k, r)]: F.one})

    letters = {b._mono(w) for w in b.gens}
    for idx, keys in b.basis().items():
        for k in keys:
            okey, ws = k[1]
            if all(w[0] < old_cells for w in ws) or (k in letters):
                pin(k)
                continue
            rows = {r: {var[(k, r)]: F.one} for r in cb.get(idx, [])}
            mw = [m(b._mono(w)) for w in ws]
            for i, w in enumerate(ws):
                lk = b._mono(w)
                for r2 in cb.get(lk[0], []):
                    xs = list(mw)
                    xs[i] = {r2: F.one}
                    try:
                        val = C.act_elems(len(ws), {okey: F.one}, xs)
                    except TruncationError:
                        # heavier than the truncation: no such term in the image of b
                        continue
                    for r, c in val.items():
                        j = var[(lk, r2)]
                        row = rows.setdefault(r, {})
                        row[j] = F.sub(row.get(j, F.zero), c)
            for row in rows.values():
                row = {j: v for j, v in row.items() if not F.is_zero(v)}
                if row:
                    eqs.append(row)
    cols = {}
    for i, row in enumerate(eqs):
        for j, v in row.items():
            cols.setdefault(j, {})[i] = v
    M = Matrix.from_columns(F, len(eqs), [cols.get(j, {}) for j in range(len(var))])
    return nullspace(M).cols == 0


# trials ---------------------------------------------------------------------------------------

def _random_alg_cells(a, rng, degrees=(0, 1, 2), allow_trivial=True):
    F = a.field
    kind = rng.choice(["sphere", "attached", "attached"] + (["disk"] if allow_trivial else []))
    d = rng.choice(degrees)
    if kind == "attached":
        d = max(d, 1)
        C = a.carrier()
        if C.dim(d - 1):
            Z = nullspace(C.d(d - 1))
            cycles = [Z.column(j) for j in range(Z.cols)]
            # only cycles of weight < bound so the new letter fits in the truncation
            keys = a.basis().get(d - 1, [])
            light = [z for z in cycles if all(a.word_weight(keys[r][1][1]) < a.weight_bound for r in z)]
            if light:
                z = {}
                for v in light:
                    if rng.random() < 0.7 or not z:
                        c = F(rng.choice([1, 2, -1]))
                        for r, x in v.items():
                            w = F.add(z.get(r, F.zero), F.mul(c, x))
                            if F.is_zero(w):
                                z.pop(r, None)
                            else:
                                z[r] = w
                if z:
                    el = {keys[r]: x for r, x in z.items()}
                    return ch.sphere_into_disk(d, F), (lambda idx, j, el=el: el), f"S{d - 1}->D{d}"
        kind = "sphere"
    if kind == "disk":
        d = max(d, 1)
        return ch.zero_into(ch.disk(d, F)), (lambda idx, j: {}), f"0->D{d}"
    return ch.zero_into(ch.sphere(d, F)), (lambda idx, j: {}), f"0->S{d}"


def algebra_leftproperness_trial(seed, operad=None, weight_bound=3) -> dict:
    """Push a weak equivalence of cellular algebras along a cell attachment."""
    from .operads import ass_operad
    from .seqcomp import ChainBase
    rng = random.Random(seed)
    O = operad if operad is not None else ass_operad(ChainBase(), weight_bound)
    F = O.field
    a = initial_algebra(O, weight_bound)
    descs = []
    for _ in range(rng.choice([1, 2])):
        f, g, d = _random_alg_cells(a, rng, allow_trivial=False)
        a = a.attach(f, g)
        descs.append(d)
    kind = rng.choice(["identity", "trivial-cell", "retraction", "rescale"])
    if kind == "identity":
        b, phi = a, AlgebraMorphism(a, a, lambda k: {k: F.one}, "id")
        src = a
    elif kind == "trivial-cell":
        d = rng.choice([1, 2])
        b = a.attach(ch.zero_into(ch.disk(d, F)), lambda idx, j: {})
        src, phi = a, AlgebraMorphism(a, b, lambda k: {k: F.one}, "incl")
    elif kind == "retraction":
        d = rng.choice([1, 2])
        src = a.attach(ch.zero_into(ch.disk(d, F)), lambda idx, j: {})
        b = a
        dead = len(a.cells)
        phi = AlgebraMorphism(src, b, lambda k: {} if any(w[0] == dead for w in k[1][1]) else {k: F.one}, "retract")
    else:
        # rescale the letters of the last cell when it is a free sphere
        src = b = a
        last = a.cells[-1]
        c = F(rng.choice([2, 3, -1]))
        if not any(last.source.dim(i) for i in _indices(last.source)):
            scale = lambda k: F.power(c, sum(1 for w in k[1][1] if w[0] == last.number))
            phi = AlgebraMorphism(a, a, lambda k: {k: scale(k)}, "rescale")
        else:
            phi = AlgebraMorphism(a, a, lambda k: {k: F.one}, "id")
    f, g, cdesc = _random_alg_cells(src, rng)
    c_alg = src.attach(f, g)
    g2 = lambda idx, j: phi.apply(g(idx, j))
    d_alg = b.attach(f, g2, weight=c_alg.cells[-1].weight)
    n_src, n_b = len(src.cells), len(b.cells)

    def phi_prime(key):
        idx, (okey, ws) = key
        if not any(w[0] >= n_src for w in ws):
            return phi(key)
        # letters of the new cell go to the new cell, others through phi
        xs = []
        for w in ws:
            if w[0] >= n_src:
                xs.append(d_alg.generator((w[0] - n_src + n_b, w[1], w[2])))
            else:
                xs.append(phi(src._mono(w)))
        return d_alg.act_elems(len(ws), {okey: F.one}, xs)

    pp = AlgebraMorphism(c_alg, d_alg, phi_prime, "phi'")
    ok_phi = phi.is_weak_equivalence()
    ok = pp.is_weak_equivalence()
    hom = not pp.violations(max_checks=20, seed=seed)
    led = AlgebraLedger(src, c_alg, {n_src}).identity_holds() and AlgebraLedger(b, d_alg, {n_b}).identity_holds()
    return {"seed": seed, "algebra": ",".join(descs), "phi": kind, "cell": cdesc, "phi_is_we": ok_phi,
            "phi_prime_is_we": ok, "morphism": hom, "ledger": led, "pass": ok_phi and ok and hom and led}


def _shift_images(b, c, new_cell, extra_cell):
    """Letters of the new cell go to themselves plus the extra sphere letter of equal degree."""
    F = b.field
    images = {w: c.generator(w) for w in b.gens}
    spheres = {g[1]: g for g in c.gens if g[0] == extra_cell}
    for w in b.gens:
        if w[0] == new_cell and w[1] in spheres and _is_top_letter(b, w):
            lin_add(F, images[w], c.generator(spheres[w[1]]))
    return images


def _is_top_letter(b, w):
    cell = b.cells[w[0]]
    return w[1] == max(i for i in _indices(cell.target) if cell.target.dim(i))


def algebra_universal_property_trial(seed, operad=None, weight_bound=3) -> dict:
    """Mediator out of ``A + cell`` into a cocone with twisted letter images."""
    from .operads import ass_operad
    from .seqcomp import ChainBase
    rng = random.Random(seed)
    O = operad if operad is not None else ass_operad(ChainBase(), weight_bound)
    F = O.field
    a = initial_algebra(O, weight_bound)
    for _ in range(rng.choice([1, 2])):
        f, g, _ = _random_alg_cells(a, rng, allow_trivial=False)
        a = a.attach(f, g)
    f, g, desc = _random_alg_cells(a, rng)
    b, incl, led = algebra_pushout_along_free(a, f, g)
    top = max(i for i in _indices(f.target) if f.target.dim(i))
    c = b.attach(ch.zero_into(ch.sphere(top, F)), lambda idx, j: {}, weight=b.cells[-1].weight)
    h = AlgebraMorphism(a, c, lambda k: {k: F.one}, "h")
    images = _shift_images(b, c, len(a.cells), len(b.cells))
    m = extend_algebra_map(b, c, images, "mediator")
    is_map = not m.violations(max_checks=10, seed=seed)
    restricts = all(m(k) == h(k) for ks in a.basis().values() for k in ks)
    on_cells = all(m(b._mono(w)) == images[w] for w in b.gens if w[0] == len(a.cells))
    unique = algebra_mediator_is_unique(b, m, len(a.cells))
    ok = is_map and restricts and on_cells and unique and led.identity_holds()
    return {"seed": seed, "cell": desc, "is_morphism": is_map, "restricts": restricts,
            "on_cells": on_cells, "unique": unique, "pass": ok}


def rectification_check(seed, arity_bound=3, weight_bound=3) -> dict:
    """``a -> q^* q_* a`` for a random cellular A-infinity algebra is a quasi-isomorphism."""
    from .ainfinity import a_infinity_operad
    rng = random.Random(seed)
    P, q = a_infinity_operad(arity_bound)
    a = initial_algebra(P, weight_bound)
    descs = []
    for _ in range(rng.choice([1, 2, 3])):
        f, g, d = _random_alg_cells(a, rng, degrees=(0, 1), allow_trivial=False)
        a = a.attach(f, g)
        descs.append(d)
    b, unit = induce_along(q, a)
    we = unit.is_weak_equivalence()
    hom = not unit.violations(max_checks=10, seed=seed)
    return {"seed": seed, "cells": ",".join(descs), "unit_is_we": we, "unit_is_morphism": hom, "pass": we and hom}


# serialization -----------------------------------------------------------------------------------

def _key_text(k):
    return f"{k[0]}:{k[1]}"


def _parse_key(s):
    i, j = s.split(":")
    return int(i), int(j)


class TableAlgebra(OAlgebra):
    """An algebra given by its action table over a ``TableOperad``."""

    def __init__(self, operad, carrier, n_max_action, table, undefined, name="algebra"):
        self.operad, self._carrier, self.n_max_action = operad, carrier, n_max_action
        self._table, self._undefined, self.name = table, undefined, name

    def basis(self):
        C = self._carrier
        if self.kind == "chain":
            return {d: [(d, j) for j in range(k)] for d, k in C.dims.items() if k}
        return {s: [(s, j) for j in range(k)] for s, k in C.levels.items() if k}

    def act(self, n, okey, xs):
        key = (n, okey, tuple(xs))
        if key in self._undefined or n > self.n_max_action:
            raise TruncationError(f"action {key!r} is not recorded")
        return dict(self._table.get(key, {}))

    def struct(self, key, op):
        idx, j = key
        C = self._carrier
        t = op_target_index(op, idx)
        m = C.d(idx) if self.kind == "chain" else (C.d(idx, op[1]) if op[0] == "d" else C.s(idx, op[1]))
        return {(t, r): v for r, v in m.column(j).items()}


def algebra_from_json(obj: dict) -> TableAlgebra:
    O = operad_from_json(obj["operad"])
    F = O.field
    if obj.get("base", "chain") == "chain":
        C = ch.ChainComplex.from_json(obj["carrier"], check=False)
    else:
        C = sv.SimplicialVS.from_json(obj["carrier"], check=False)
    table, undefined = {}, set()
    for entry in obj["actions"]:
        n, ok = int(entry["n"]), _parse_key(entry["op"])
        for tag, val in entry.get("values", {}).items():
            xs = tuple(_parse_key(t) for t in tag.split("|")) if tag else ()
            table[(n, ok, xs)] = {_parse_key(k): F.parse(str(v)) for k, v in val.items()}
        for tag in entry.get("undefined", []):
            undefined.add((n, ok, tuple(_parse_key(t) for t in tag.split("|")) if tag else ()))
    return TableAlgebra(O, C, int(obj.get("n_max_action", O.arity_bound)), table, undefined)
