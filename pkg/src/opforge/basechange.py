"""Weak monoidal adjunctions ``F -| G`` between the two bases, and what they do to operads.

Two instances ship: extension of scalars ``F_p -> F_(p^2)`` on chain complexes
(strong monoidal) and Dold-Kan ``gamma -| N`` from chains to simplicial vector spaces,
with ``N`` lax through the shuffle map and ``gamma`` colax through the mate of it.

``G`` acts on operads levelwise, composing through the lax multiplication. ``F`` acts on
cellular presentations cell by cell: each cell ``f`` becomes ``F(f)``, attached along
``chi o F(g)`` where ``chi: F(O) -> F^oper(O)`` is the comparison of the previous stage,
itself the composite ``counit o F(unit of the operad adjunction)``.
"""
from __future__ import annotations

import random
from itertools import combinations, product

from . import chaincat as ch
from . import simpcat as sv
from .algebras import OAlgebra
from .cellular import CellOperad, extend_morphism
from .exactla import GF, GF2, QQ, Matrix, Subspace, solve
from .operads import OperadMorphism, TableOperad, lin_add, unit_operad
from .seqcomp import ChainBase, SimplicialBase

__all__ = [
    "MonoidalAdjunction", "ScalarExtension", "DoldKan", "g_on_operads", "g_on_morphism", "f_oper",
    "chi", "unit_of_operads", "adjoint_morphism", "transport_algebra", "lax_unit_morphism",
    "invariance_experiment", "chi_report", "chi_naturality", "iterated_comultiplication_check",
    "arrow_comparison_check", "adjoint_transfer_check",
]


def _indices(X):
    return X.degrees() if hasattr(X, "degrees") else range(X.s_max + 1)


def _compose(a: dict, b: dict, target=None) -> dict:
    """Indexwise product; indices missing from ``a`` give zero maps into ``target``."""
    out = {}
    for i, m in b.items():
        if i in a:
            out[i] = a[i] @ m
        elif target is not None:
            out[i] = Matrix.zeros(m.field, target.dim(i), m.cols)
    return out


class MonoidalAdjunction:
    """Colax-lax monoidal adjunction ``F: V -> W``, ``G: W -> V``.

    Subclasses give ``F`` and ``G`` on objects and maps, the unit and counit, and the
    lax structure of ``G`` element by element (``g_vec``, ``g_coords``, ``lax_tensor``).
    Coherence is checked on construction.
    """

    name = "adjunction"
    strong = False
    # Quillen equivalence: derived unit and counit are weak equivalences
    equivalence = False

    def __init__(self):
        bad = self.coherence_violations()
        if bad:
            raise ValueError(f"{self.name}: coherence fails: {bad[:5]}")

    # to implement -----------------------------------------------------------------------------
    def F_obj(self, X): raise NotImplementedError
    def F_map(self, f, source=None, target=None): raise NotImplementedError
    def G_obj(self, Z): raise NotImplementedError
    def G_map(self, g): raise NotImplementedError
    def unit_map(self, X): raise NotImplementedError
    def counit_map(self, Z): raise NotImplementedError
    def g_vec(self, Z, idx, j): raise NotImplementedError
    def g_coords(self, Z, w_idx, vec): raise NotImplementedError
    def lax_tensor(self, parts): raise NotImplementedError
    def comult(self, xs): raise NotImplementedError
    def test_objects(self): raise NotImplementedError

    @property
    def field(self):
        return self.source.field

    def unit_element(self):
        """Image of ``1`` under ``1_V -> G(1_W)``, as a ``W``-vector at index 0."""
        return 0, {0: self.target.field.one}

    def w_tensor(self, objs):
        out = objs[0]
        for o in objs[1:]:
            out = self.target.tensor(out, o)
        return out

    def v_tensor(self, objs):
        out = objs[0]
        for o in objs[1:]:
            out = ch.tensor(out, o)
        return out

    # coherence ------------------------------------------------------------------------------
    def coherence_violations(self):
        bad = []
        K = self.target.field
        for X in self.test_objects():
            FX = self.F_obj(X)
            tri = _compose(self.counit_map(FX).comps, self.F_map(self.unit_map(X), source=FX).comps)
            if any(tri[i] != Matrix.identity(K, FX.dim(i)) for i in tri):
                bad.append(("counit.F(unit)", repr(X)))
            GZ = self.G_obj(FX)
            tri = _compose(self.G_map(self.counit_map(FX)).comps, self.unit_map(GZ).comps)
            if any(tri[i] != Matrix.identity(self.field, GZ.dim(i)) for i in tri):
                bad.append(("G(counit).unit", repr(X)))
        objs = [self.F_obj(X) for X in self.test_objects()]
        u_idx, u_vec = self.unit_element()
        unit_obj = self.target.unit()
        for Z in objs:
            GZ = self.G_obj(Z)
            for i in GZ.degrees():
                for j in range(GZ.dim(i)):
                    w, v = self.g_vec(Z, i, j)
                    for parts, slot in (([(unit_obj, u_idx, u_vec), (Z, w, v)], 1), ([(Z, w, v), (unit_obj, u_idx, u_vec)], 0)):
                        lvl, t = self.lax_tensor(parts)
                        got = {}
                        for key, c in t.items():
                            lin_add(K, got, {key[slot][1]: K.one}, c)
                        if self._reduce(Z, lvl, got) != self._reduce(Z, w, v) or lvl != w:
                            bad.append(("lax unit", i, j))
        rng = random.Random(0)
        for Z1, Z2, Z3 in [(objs[-1], objs[-1], objs[-1]), (objs[1], objs[-1], objs[1])]:
            for _ in range(6):
                parts = []
                for Z in (Z1, Z2, Z3):
                    GZ = self.G_obj(Z)
                    i = rng.choice([d for d in GZ.degrees() if GZ.dim(d)])
                    parts.append((Z, i, rng.randrange(GZ.dim(i))))
                if not self._associative(parts):
                    bad.append(("lax associativity", parts))
        if self.strong:
            for X in self.test_objects()[1:]:
                c = self.comult([X, X])
                if any(c[i].rows != c[i].cols or c[i].rank() != c[i].rows for i in c.comps):
                    bad.append(("comultiplication not invertible", repr(X)))
        return bad

    def _reduce(self, Z, w, vec):
        return self.g_coords(Z, w, vec)[1]

    def _associative(self, parts):
        """``mu(mu(x, y), z) == mu(x, mu(y, z)) ==`` the iterated formula, in ``G(Z1 Z2 Z3)``."""
        (Z1, i1, j1), (Z2, i2, j2), (Z3, i3, j3) = parts
        vs = [self.g_vec(Z, i, j) for Z, i, j in parts]
        Z12, Z23 = self.w_tensor([Z1, Z2]), self.w_tensor([Z2, Z3])
        Z123 = self.w_tensor([Z1, Z2, Z3])

        def flat(obj_parts, lvl, t):
            return lvl, {self._flat_index(obj_parts, lvl, key): c for key, c in t.items()}

        def pair(A, a, B, b):
            lvl, t = self.lax_tensor([(A, a[0], a[1]), (B, b[0], b[1])])
            lvl, v = flat([A, B], lvl, t)
            v = self._normal_part(self.w_tensor([A, B]), lvl, v)
            return lvl, v

        left = pair(Z12, pair(Z1, vs[0], Z2, vs[1]), Z3, vs[2])
        right = pair(Z1, vs[0], Z23, pair(Z2, vs[1], Z3, vs[2]))
        lvl, t = self.lax_tensor([(Z, v[0], v[1]) for Z, v in zip((Z1, Z2, Z3), vs)])
        multi = lvl, self._normal_part(Z123, *flat([Z1, Z2, Z3], lvl, t))
        right = right[0], self._reassociate(Z1, Z2, Z3, right[0], right[1])
        return left == multi and right == multi

    # hooks for the associativity check
    def _flat_index(self, objs, lvl, key):
        raise NotImplementedError

    def _normal_part(self, Z, lvl, vec):
        return vec

    def _reassociate(self, Z1, Z2, Z3, lvl, vec):
        return vec


# scalar extension ---------------------------------------------------------------------------

class ScalarExtension(MonoidalAdjunction):
    """``- (x) F_(p^2)`` from chains over ``F_p``, right adjoint restriction of scalars.

    ``G(Z)`` in degree ``i`` has basis ``e_j`` and ``a e_j`` (positions ``2j``, ``2j+1``).
    """

    strong = True

    def __init__(self, p=3, window=(0, 6)):
        self.p = p
        self.name = f"extension F_{p} -> F_{p}^2"
        self.source = ChainBase(GF(p), window)
        self.target = ChainBase(GF2(p), window)
        super().__init__()

    def _emb(self, m):
        return m.map_entries(self.target.field, lambda x: (x, 0))

    def _realify(self, m):
        k = self.source.field
        r = self.target.field.nonresidue
        data = [dict() for _ in range(2 * m.rows)]
        for i in range(m.rows):
            for j, (x, y) in m.row(i).items():
                for row, col, v in ((2 * i, 2 * j, x), (2 * i + 1, 2 * j, y), (2 * i, 2 * j + 1, y * r), (2 * i + 1, 2 * j + 1, x)):
                    v %= self.p
                    if v:
                        data[row][col] = v
        return Matrix(k, 2 * m.rows, 2 * m.cols, data)

    def F_obj(self, X):
        return ch.ChainComplex(self.target.field, X.window, X.dims, {d: self._emb(m) for d, m in X.diff.items()}, check=False)

    def F_map(self, f, source=None, target=None):
        return ch.ChainMap(source or self.F_obj(f.source), target or self.F_obj(f.target),
                           {d: self._emb(m) for d, m in f.comps.items()}, check=False)

    def G_obj(self, Z):
        return ch.ChainComplex(self.source.field, Z.window, {d: 2 * n for d, n in Z.dims.items()},
                               {d: self._realify(m) for d, m in Z.diff.items()}, check=False)

    def G_map(self, g):
        return ch.ChainMap(self.G_obj(g.source), self.G_obj(g.target), {d: self._realify(m) for d, m in g.comps.items()}, check=False)

    def unit_map(self, X):
        k = self.source.field
        return ch.ChainMap(X, self.G_obj(self.F_obj(X)),
                           {d: Matrix.from_columns(k, 2 * n, [{2 * j: k.one} for j in range(n)]) for d, n in X.dims.items()}, check=False)

    def counit_map(self, Z):
        K = self.target.field
        comps = {}
        for d, n in Z.dims.items():
            comps[d] = Matrix.from_columns(K, n, [{j // 2: ((1, 0) if j % 2 == 0 else (0, 1))} for j in range(2 * n)])
        return ch.ChainMap(self.F_obj(self.G_obj(Z)), Z, comps, check=False)

    def g_vec(self, Z, idx, j):
        return idx, {j // 2: ((1, 0) if j % 2 == 0 else (0, 1))}

    def g_coords(self, Z, w_idx, vec):
        out = {}
        for j, (x, y) in vec.items():
            if x:
                out[2 * j] = x
            if y:
                out[2 * j + 1] = y
        return w_idx, out

    def lax_tensor(self, parts):
        K = self.target.field
        lvl = sum(w for _, w, _ in parts)
        out = {}
        for combo in product(*[[((w, j), c) for j, c in v.items()] for _, w, v in parts]):
            c = K.one
            for _, x in combo:
                c = K.mul(c, x)
            key = tuple(k for k, _ in combo)
            out[key] = K.add(out.get(key, K.zero), c)
        return lvl, {k: c for k, c in out.items() if not K.is_zero(c)}

    def comult(self, xs):
        K = self.target.field
        T = self.v_tensor(xs)
        S = self.F_obj(T)
        tgt = self.w_tensor([self.F_obj(x) for x in xs])
        return ch.ChainMap(S, tgt, {d: Matrix.identity(K, n) for d, n in T.dims.items()}, check=False)

    def test_objects(self):
        k = self.source.field
        return [ch.unit_complex(k), ch.sphere(1, k), ch.disk(1, k)]

    def _flat_index(self, objs, lvl, key):
        return _chain_flat_index(objs, key)

    def _reassociate(self, Z1, Z2, Z3, lvl, vec):
        # positions in Z1 (x) (Z2 (x) Z3) -> positions in (Z1 (x) Z2) (x) Z3
        return _chain_reassociate(Z1, Z2, Z3, lvl, vec)


def _chain_tensor_basis(objs, d):
    """Tuples ``((deg, pos), ...)`` in the order of the left-nested tensor's degree-``d`` basis."""
    if len(objs) == 1:
        return [((d, j),) for j in range(objs[0].dim(d))]
    head = objs[0]
    for o in objs[1:-1]:
        head = ch.tensor(head, o)
    last = objs[-1]
    out = []
    left = objs[:-1]
    for i in range(head.lo, head.hi + 1):
        if not (head.dim(i) and last.dim(d - i)):
            continue
        for a in _chain_tensor_basis(left, i):
            for b in range(last.dim(d - i)):
                out.append(a + ((d - i, b),))
    return out


def _chain_flat_index(objs, key):
    d = sum(k[0] for k in key)
    return _chain_tensor_basis(objs, d).index(tuple(key))


def _chain_reassociate(Z1, Z2, Z3, lvl, vec):
    Z23 = ch.tensor(Z2, Z3)
    out = {}
    rb = []
    for i in range(Z1.lo, Z1.hi + 1):
        if not (Z1.dim(i) and Z23.dim(lvl - i)):
            continue
        inner = _chain_tensor_basis([Z2, Z3], lvl - i)
        for a in range(Z1.dim(i)):
            for b in inner:
                rb.append(((i, a),) + b)
    lb = _chain_tensor_basis([Z1, Z2, Z3], lvl)
    where = {k: n for n, k in enumerate(lb)}
    for pos, c in vec.items():
        out[where[rb[pos]]] = c
    return out


# Dold-Kan --------------------------------------------------------------------------------------

class DoldKan(MonoidalAdjunction):
    """``gamma -| N`` between chains in degrees ``0..s_max`` and simplicial spaces up to ``s_max``."""

    equivalence = True

    def __init__(self, field=QQ, s_max=3):
        self.name = f"Dold-Kan s_max={s_max}"
        self.s_max = s_max
        self.source = ChainBase(field, (0, s_max))
        self.target = SimplicialBase(field, s_max)
        self._gamma, self._norm = {}, {}
        super().__init__()

    def _trunc(self, X):
        return X.truncate(self.s_max) if X.hi > self.s_max else X

    def F_obj(self, X):
        return sv.gamma(self._trunc(X), self.s_max)

    def F_map(self, f, source=None, target=None):
        return sv.gamma_map(f, self.s_max, source=source or self.F_obj(f.source), target=target or self.F_obj(f.target))

    def G_obj(self, Z):
        return sv.normalize(Z)

    def G_map(self, g):
        return sv.normalize_map(g)

    def unit_map(self, X):
        return sv.dk_unit(self._trunc(X), self.s_max)

    def counit_map(self, Z):
        return sv.dk_counit(Z)

    def g_vec(self, Z, idx, j):
        return idx, Z.normal_inclusion(idx).column(j)

    def g_coords(self, Z, w_idx, vec):
        if w_idx > self.s_max:
            return w_idx, {}
        return w_idx, Z.normal_projection(w_idx).apply(vec)

    def lax_tensor(self, parts):
        """Iterated shuffle map on normalized vectors ``(Z, level, vec)``."""
        K = self.target.field
        degs = [w for _, w, _ in parts]
        n = sum(degs)
        if n > self.s_max:
            return n, {}
        out = {}
        for blocks, sign in _multishuffles(degs):
            vecs = []
            for (Z, w, v), S in zip(parts, blocks):
                cur, lvl = v, w
                for j in (x for x in range(n) if x not in S):
                    cur = Z.s(lvl, j).apply(cur)
                    lvl += 1
                vecs.append([((n, r), c) for r, c in cur.items()])
            for combo in product(*vecs):
                c = K.one if sign > 0 else K.neg(K.one)
                for _, x in combo:
                    c = K.mul(c, x)
                key = tuple(k for k, _ in combo)
                out[key] = K.add(out.get(key, K.zero), c)
        return n, {k: c for k, c in out.items() if not K.is_zero(c)}

    def comult(self, xs):
        """``gamma(X_1 .. X_k) -> gamma X_1 .. gamma X_k``: counit o gamma(shuffle o units)."""
        K = self.target.field
        xs = [self._trunc(x) for x in xs]
        gs = [self.F_obj(x) for x in xs]
        T = self.w_tensor(gs)
        units = [self.unit_map(x) for x in xs]
        src = self._trunc(self.v_tensor(xs))
        S = self.F_obj(src)
        # chain level: src -> N(T)
        m = {}
        for d in range(0, self.s_max + 1):
            cols = []
            for key in _chain_tensor_basis(xs, d) if src.dim(d) else []:
                parts = []
                for Z, u, (deg, j) in zip(gs, units, key):
                    nv = u[deg].column(j)
                    vec = Z.normal_inclusion(deg).apply(nv)
                    parts.append((Z, deg, vec))
                lvl, t = self.lax_tensor(parts)
                flat = {}
                for k, c in t.items():
                    lin_add(K, flat, {_sv_flat_index(gs, k): K.one}, c)
                cols.append(T.normal_projection(d).apply(flat) if flat else {})
            m[d] = cols
        comps = {}
        for n in range(self.s_max + 1):
            cols = [None] * S.dim(n)
            for sig, k, off, dk in S._gamma_layout.blocks[n][0]:
                op = T.operator(sig, k) @ T.normal_inclusion(k)
                for a in range(dk):
                    cols[off + a] = op.apply(m[k][a])
            comps[n] = Matrix.from_columns(K, T.dim(n), cols)
        return sv.SimplicialMap(S, T, comps, check=False)

    def test_objects(self):
        k = self.source.field
        return [ch.unit_complex(k), ch.sphere(1, k), ch.disk(1, k)]

    def _flat_index(self, objs, lvl, key):
        return _sv_flat_index(objs, key)

    def _normal_part(self, Z, lvl, vec):
        if lvl > self.s_max or not vec:
            return {}
        return Z.normal_inclusion(lvl).apply(Z.normal_projection(lvl).apply(vec))

    def _associative(self, parts):
        (Z1, i1, j1), (Z2, i2, j2), (Z3, i3, j3) = parts
        if i1 + i2 + i3 > self.s_max:
            return True
        return super()._associative(parts)


def _sv_flat_index(objs, key):
    idx = 0
    for Z, (lvl, r) in zip(objs, key):
        idx = idx * Z.dim(lvl) + r
    return idx


def _multishuffles(degs):
    """Ordered set partitions of ``0..n-1`` into blocks of the given sizes, with signs."""
    n = sum(degs)

    def go(rest, sizes):
        if not sizes:
            yield ()
            return
        for S in combinations(rest, sizes[0]):
            left = tuple(x for x in rest if x not in S)
            for tail in go(left, sizes[1:]):
                yield (S,) + tail

    for blocks in go(tuple(range(n)), list(degs)):
        seq = [x for S in blocks for x in S]
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if seq[a] > seq[b])
        yield blocks, (-1 if inv % 2 else 1)


# operads ----------------------------------------------------------------------------------------

def g_on_operads(adj: MonoidalAdjunction, P, name=None) -> TableOperad:
    """``G(P)``: components ``G(P(n))``, composition through the lax multiplication."""
    K = P.field
    comps = {n: adj.G_obj(P.component(n)) for n in range(P.arity_bound + 1)}

    def compose(p, i, q, a, b):
        Za, Zb = P.component(p), P.component(q)
        wa, va = adj.g_vec(Za, *a)
        wb, vb = adj.g_vec(Zb, *b)
        lvl, t = adj.lax_tensor([(Za, wa, va), (Zb, wb, vb)])
        if not t:
            return {}
        n = p + q - 1
        elem = {}
        Bp, Bq = P.basis(p), P.basis(q)
        for ((la, ra), (lb, rb)), c in t.items():
            lin_add(K, elem, P.compose(p, i, q, Bp[la][ra], Bq[lb][rb]), c)
        return _g_element(adj, P, n, lvl, elem)

    def unit(idx=0):
        if idx != 0:
            return {}
        w, v = adj.unit_element()
        return _g_element(adj, P, 1, w, P.unit(w))

    out = TableOperad(adj.source, P.arity_bound, comps, compose, unit, name or f"G({getattr(P, 'name', 'P')})")
    out.lifted_from = P
    return out


def _g_element(adj, P, n, w_idx, elem):
    if not elem:
        return {}
    Z = P.component(n)
    if w_idx not in P.basis(n):
        return {}
    v_idx, coords = adj.g_coords(Z, w_idx, P._vector(n, w_idx, elem))
    return {(v_idx, j): c for j, c in coords.items()}


def _elem_from_g(adj, P, n, key):
    """The ``P``-element underlying a basis key of ``G(P)(n)``."""
    w, vec = adj.g_vec(P.component(n), *key)
    B = P.basis(n).get(w, [])
    return w, {B[r]: c for r, c in vec.items()}


def g_on_morphism(adj, m: OperadMorphism, GS, GT) -> OperadMorphism:
    """``G(m): G(S) -> G(T)``."""
    S, T = m.source, m.target

    def fn(n, key):
        w, el = _elem_from_g(adj, S, n, key)
        return _g_element(adj, T, n, w, m.apply(n, el))

    return OperadMorphism(GS, GT, fn, f"G({m.name})")


def lax_unit_morphism(adj, src_const, tgt_const, GT=None) -> OperadMorphism:
    """``c^V -> G(c^W)`` for operads with the tensor unit in chosen arities."""
    GT = GT or g_on_operads(adj, tgt_const)
    w, v = adj.unit_element()

    def fn(n, key):
        if not tgt_const.basis(n):
            return {}
        return _g_element(adj, tgt_const, n, w, {tgt_const.all_keys(n)[0]: adj.target.field.one} if w in tgt_const.basis(n) else {})

    return OperadMorphism(src_const, GT, fn, "lax unit")


def _base_unit_map(src: CellOperad, tgt):
    return OperadMorphism(src.base_op, tgt, lambda n, key: tgt.unit(key[0]) if n == 1 else {}, "unit")


def unit_of_operads(adj, O: CellOperad, Fo: CellOperad, GFo=None) -> OperadMorphism:
    """``O -> G(F^oper O)``: generators go through the unit of ``F -| G`` and the cells of ``F^oper O``."""
    GFo = GFo or g_on_operads(adj, Fo)
    images = {}
    for cell, fcell in zip(O.cells, Fo.cells):
        n = cell.arity
        eta = adj.unit_map(cell.target)
        Z = Fo.component(n)
        for gid in cell.generators():
            _, idx, c = gid
            img = {}
            for pos, coef in eta[idx].column(c).items():
                w, wv = adj.g_vec(fcell.target, idx, pos)
                el = Fo.cell_value(fcell, w, wv)
                if not el:
                    continue
                v_idx, coords = adj.g_coords(Z, w, Fo._vector(n, w, el))
                for j, x in coords.items():
                    lin_add(O.field, img, {(v_idx, j): O.field.one}, O.field.mul(coef, x))
            images[gid] = img
    return extend_morphism(O, _base_unit_map(O, GFo), images, GFo)


def _chi_from_unit(adj, O, Fo, eta, n):
    m = eta.component(n)
    Fm = adj.F_map(m, source=adj.F_obj(O.component(n)), target=adj.F_obj(m.target))
    eps = adj.counit_map(Fo.component(n))
    return _compose(eps.comps, Fm.comps)


def chi(adj, O: CellOperad, Fo: CellOperad = None, arities=None) -> dict:
    """``chi(n): F(O(n)) -> F^oper(O)(n)`` as ``{n: {index: Matrix}}``."""
    Fo = Fo or f_oper(adj, O)
    eta = unit_of_operads(adj, O, Fo)
    arities = range(O.arity_bound + 1) if arities is None else arities
    return {n: _chi_from_unit(adj, O, Fo, eta, n) for n in arities}


def f_oper(adj, O: CellOperad, name=None) -> CellOperad:
    """``F^oper`` of a cellular presentation over the initial operad."""
    Wb = adj.target
    Fo = CellOperad(unit_operad(Wb, O.arity_bound), (), name=name or f"F({O.name})")
    for k, cell in enumerate(O.cells):
        n = cell.arity
        Ff = adj.F_map(cell.f)
        U = cell.source
        if not any(U.dim(i) for i in _indices(U)):
            Fo = Fo.attach(n, Ff, lambda idx, j: {})
            continue
        prev = O.restrict_cells(k)
        eta = unit_of_operads(adj, prev, Fo)
        chi_prev = _chi_from_unit(adj, prev, Fo, eta, n)
        K = prev.field
        gm = ch.ChainMap(U, prev.component(n),
                         {i: Matrix.from_columns(K, prev.component(n).dim(i), [prev._vector(n, i, cell.g(i, j)) for j in range(U.dim(i))])
                          for i in U.degrees()}, check=False)
        Fg = adj.F_map(gm, source=Ff.source, target=adj.F_obj(prev.component(n)))
        comp = _compose(chi_prev, Fg.comps, Fo.component(n))
        keys = Fo.basis(n)
        g = (lambda idx, j, comp=comp, keys=keys: {keys[idx][r]: v for r, v in comp[idx].column(j).items()})
        Fo = Fo.attach(n, Ff, g)
    return Fo


def adjoint_morphism(adj, O: CellOperad, Fo: CellOperad, h: OperadMorphism, R) -> OperadMorphism:
    """``F^oper O -> R`` adjoint to ``h: O -> G(R)``: on cells, ``counit o F(h o cell)``."""
    GR = h.target
    images = {}
    for cell, fcell in zip(O.cells, Fo.cells):
        n = cell.arity
        V = cell.target
        K = O.field
        hm = ch.ChainMap(V, GR.component(n),
                         {i: Matrix.from_columns(K, GR.component(n).dim(i),
                                                 [GR._vector(n, i, h.apply(n, O.cell_value(cell, i, {j: K.one}))) for j in range(V.dim(i))])
                          for i in V.degrees()}, check=False)
        Fh = adj.F_map(hm, source=fcell.target, target=adj.F_obj(GR.component(n)))
        eps = adj.counit_map(R.component(n))
        comp = _compose(eps.comps, Fh.comps, R.component(n))
        keys = R.basis(n)
        for gid in fcell.generators():
            _, w, c = gid
            images[gid] = {keys[w][r]: v for r, v in comp[w].column(c).items()}
    return extend_morphism(Fo, _base_unit_map(Fo, R), images, R)


# algebras ---------------------------------------------------------------------------------------

class TransportedAlgebra(OAlgebra):
    """``G(B)`` over ``G(P)`` with the action through the iterated lax multiplication."""

    def __init__(self, adj, b: OAlgebra, GP=None):
        self.adj, self.inner = adj, b
        self.operad = GP or g_on_operads(adj, b.operad)
        self.n_max_action = b.n_max_action
        self._gc = adj.G_obj(b.carrier())
        self._carrier = None

    def basis(self):
        C = self._gc
        return {d: [(d, j) for j in range(n)] for d, n in C.dims.items() if n}

    def act(self, n, okey, xs):
        adj, b = self.adj, self.inner
        P = b.operad
        K = adj.target.field
        Zo, Zb = P.component(n), b.carrier()
        parts = [(Zo,) + adj.g_vec(Zo, *okey)] + [(Zb,) + adj.g_vec(Zb, *x) for x in xs]
        lvl, t = adj.lax_tensor(parts)
        if not t:
            return {}
        Bo, Bb = P.basis(n), b.basis()
        elem = {}
        for key, c in t.items():
            (lo, ro), rest = key[0], key[1:]
            lin_add(K, elem, b.act(n, Bo[lo][ro], [Bb[l][r] for l, r in rest]), c)
        if not elem:
            return {}
        v_idx, coords = adj.g_coords(Zb, lvl, b.vector(lvl, elem))
        return {(v_idx, j): c for j, c in coords.items()}

    def struct(self, key, op):
        d, j = key
        return {(d - 1, r): c for r, c in self._gc.d(d).column(j).items()}

    def carrier(self):
        return self._gc


def transport_algebra(adj, b: OAlgebra, GP=None) -> TransportedAlgebra:
    return TransportedAlgebra(adj, b, GP)


# checks and experiments ------------------------------------------------------------------------

def _is_we(base, m):
    return base.is_weak_equivalence(m)


def _w_map(adj, S, T, comps):
    if adj.target.kind == "chain":
        return ch.ChainMap(S, T, comps, check=False)
    return sv.SimplicialMap(S, T, comps, check=False)


def chi_report(adj, O: CellOperad, Fo=None) -> dict:
    """Per arity: whether ``chi`` is invertible and whether it is a weak equivalence."""
    Fo = Fo or f_oper(adj, O)
    maps = chi(adj, O, Fo)
    rows = []
    for n, comps in maps.items():
        S, T = adj.F_obj(O.component(n)), Fo.component(n)
        m = _w_map(adj, S, T, comps)
        iso = all(M.rows == M.cols and M.rank() == M.rows for M in comps.values())
        rows.append({"n": n, "source_dims": _dims(S), "target_dims": _dims(T), "invertible": iso,
                     "weak_equivalence": _is_we(adj.target, m)})
    return {"adjunction": adj.name, "per_arity": rows}


def _dims(X):
    return {i: X.dim(i) for i in _indices(X) if X.dim(i)}


def chi_naturality(adj, O: CellOperad) -> bool:
    """``chi`` commutes with the stage inclusions ``O_k -> O_(k+1)``."""
    stages = [O.restrict_cells(k) for k in range(len(O.cells) + 1)]
    Fos = [f_oper(adj, s) for s in stages]
    chis = [chi(adj, s, f) for s, f in zip(stages, Fos)]
    K = adj.target.field
    for k in range(len(stages) - 1):
        a, b = stages[k], stages[k + 1]
        for n in range(O.arity_bound + 1):
            inc = {i: Matrix.from_columns(O.field, b.component(n).dim(i), [{b.positions(n)[key]: O.field.one} for key in a.basis(n).get(i, [])])
                   for i in a.component(n).degrees()}
            Finc = adj.F_map(ch.ChainMap(a.component(n), b.component(n), inc, check=False),
                             source=adj.F_obj(a.component(n)), target=adj.F_obj(b.component(n)))
            Fa, Fb = Fos[k], Fos[k + 1]
            winc = {}
            for i in _indices(Fa.component(n)):
                winc[i] = Matrix.from_columns(K, Fb.component(n).dim(i), [{Fb.positions(n)[key]: K.one} for key in Fa.basis(n).get(i, [])])
            lhs = _compose(chis[k + 1][n], Finc.comps, Fb.component(n))
            rhs = _compose(winc, chis[k][n], Fb.component(n))
            for i in set(lhs) | set(rhs):
                if i in lhs and i in rhs:
                    if lhs[i] != rhs[i]:
                        return False
                elif not (lhs.get(i) or rhs.get(i)).is_zero():
                    return False
    return True


def invariance_experiment(adj, arity_bound) -> dict:
    """``psi': F^oper(A-inf) -> Ass^W`` adjoint to ``A-inf -> Ass^V -> G(Ass^W)``, arity by arity."""
    from .ainfinity import a_infinity_operad
    from .operads import ass_operad
    P, q = a_infinity_operad(arity_bound, adj.source.field)
    Fo = f_oper(adj, P)
    assV = q.target
    assW = ass_operad(adj.target, arity_bound)
    GassW = g_on_operads(adj, assW)
    psi = lax_unit_morphism(adj, assV, assW, GassW) @ q
    psi_p = adjoint_morphism(adj, P, Fo, psi, assW)
    chis = chi(adj, P, Fo)
    rows = []
    ok = True
    for n in range(arity_bound + 1):
        m = psi_p.component(n)
        Fq = adj.F_map(q.component(n), source=adj.F_obj(P.component(n)), target=adj.F_obj(assV.component(n)))
        square = all(_compose(m.comps, chis[n])[i] == Fq[i] for i in Fq.comps)
        we = _is_we(adj.target, m)
        row = {"n": n, "homology_source": _hom(adj.target, Fo.component(n)),
               "homology_target": _hom(adj.target, assW.component(n)), "iso": we, "square_commutes": square}
        if n == 0:
            row["zero_to_zero"] = _is_zero(Fo.component(0)) and _is_zero(assW.component(0))
            we = we and row["zero_to_zero"]
        rows.append(row)
        ok = ok and we and square
    return {"experiment": "invariance", "adjunction": adj.name, "bounds": {"nmax": arity_bound},
            "per_arity": rows, "verdict": "pass" if ok else "fail"}


def _is_zero(X):
    return not any(X.dim(i) for i in _indices(X))


def _hom(base, X):
    h = base.homology(X)
    return {str(k): v for k, v in sorted(h.items()) if v}


def adjoint_transfer_check(adj, O: CellOperad, Fo, m: OperadMorphism) -> list:
    """Per arity: (``m`` weak equivalence, adjoint ``O -> G(R)`` weak equivalence).

    The two agree for a Quillen equivalence; other adjunctions are refused.
    """
    if not adj.equivalence:
        raise ValueError(f"{adj.name} is not a Quillen equivalence")
    R = m.target
    GFo, GR = g_on_operads(adj, Fo), g_on_operads(adj, R)
    flat = g_on_morphism(adj, m, GFo, GR) @ unit_of_operads(adj, O, Fo, GFo)
    out = []
    for n in range(O.arity_bound + 1):
        out.append((_is_we(adj.target, m.component(n)), adj.source.is_weak_equivalence(flat.component(n))))
    return out


def iterated_comultiplication_check(adj, xs) -> bool:
    """``F(X_1 .. X_k) -> F X_1 .. F X_k`` is a weak equivalence."""
    return _is_we(adj.target, adj.comult(list(xs)))


def _sub_object(base, X, spans):
    """Subobject spanned by the given vectors at each index, closed under structure maps."""
    K = base.field
    bases = {}
    for i in _indices(X):
        vecs = [v for v in spans.get(i, []) if v]
        if vecs:
            S = Subspace.span(Matrix.from_columns(K, X.dim(i), vecs))
            M = Matrix.from_columns(K, X.dim(i), [_pivot_col(S, a) for a in range(S.dim)])
        else:
            M = Matrix.zeros(K, X.dim(i), 0)
        bases[i] = M

    def restrict(A, src, tgt):
        img = A @ bases[src]
        if not img.cols:
            return Matrix.zeros(K, bases[tgt].cols, 0)
        x, _ = solve(bases[tgt], img)
        if x is None:
            raise ArithmeticError("span is not a subobject")
        return x

    if base.kind == "chain":
        diff = {d: restrict(X.d(d), d, d - 1) for d in range(X.lo + 1, X.hi + 1)}
        S = ch.ChainComplex(K, X.window, {i: bases[i].cols for i in X.degrees()}, diff, check=False)
        return S, bases
    faces = {(n, i): restrict(X.d(n, i), n, n - 1) for n in range(1, X.s_max + 1) for i in range(n + 1)}
    degens = {(n, i): restrict(X.s(n, i), n, n + 1) for n in range(X.s_max) for i in range(n + 1)}
    S = sv.SimplicialVS(K, X.s_max, {n: bases[n].cols for n in range(X.s_max + 1)}, faces, degens, check=False)
    return S, bases


def _pivot_col(S, a):
    out = dict(S.rows[a])
    out[S.pivots[a]] = S.field.one
    return out


def arrow_comparison_check(adj, fs, xs=()) -> dict:
    """``F(f_1 o .. o f_k (x) X) -> F f_1 o .. o F f_k (x) F X`` in the arrow category.

    Both ends are compared: the tensor of targets, and the pushout-product sources,
    realised as subobjects of the targets.
    """
    Vs = [f.target for f in fs] + list(xs)
    T = adj.v_tensor(Vs)
    if adj.target.kind == "simplicial":
        T = adj._trunc(T)
    c = adj.comult(Vs)
    FT, tgt = c.source, c.target
    # source of the pushout product: sum over i of V_1 .. U_i .. V_k (x) X
    src_spans, tgt_spans = {}, {}
    for i, f in enumerate(fs):
        pieces = [g.target.identity() for g in fs] + [x.identity() for x in xs]
        pieces[i] = f
        m = pieces[0]
        for p in pieces[1:]:
            m = ch.tensor_map(m, p)
        m_src = m.source
        if adj.target.kind == "simplicial":
            m_src = adj._trunc(m_src)
            comps = {d: m[d] for d in range(0, adj.s_max + 1)}
            m = ch.ChainMap(m_src, T, comps, check=False)
        Fm = adj.F_map(m, target=FT)
        for lvl in _indices(FT):
            src_spans.setdefault(lvl, []).extend(Fm[lvl].columns())
        wpieces = [adj.F_map(p) for p in pieces]
        wm = wpieces[0]
        for p in wpieces[1:]:
            wm = _w_tensor_map(adj, wm, p)
        for lvl in _indices(tgt):
            tgt_spans.setdefault(lvl, []).extend(wm[lvl].columns())
    FP, incl_p = _sub_object(adj.target, FT, src_spans)
    Q, incl_q = _sub_object(adj.target, tgt, tgt_spans)
    comps = {}
    inside = True
    for lvl in _indices(FT):
        img = c[lvl] @ incl_p[lvl]
        if not img.cols:
            comps[lvl] = Matrix.zeros(adj.target.field, incl_q[lvl].cols, 0)
            continue
        x, _ = solve(incl_q[lvl], img) if incl_q[lvl].cols else (None if not img.is_zero() else Matrix.zeros(adj.target.field, 0, img.cols), None)
        if x is None:
            inside = False
            break
        comps[lvl] = x
    src_we = inside and _is_we(adj.target, _w_map(adj, FP, Q, comps))
    tgt_we = _is_we(adj.target, c)
    return {"source_inside": inside, "source_we": src_we, "target_we": tgt_we, "pass": inside and src_we and tgt_we}


def _w_tensor_map(adj, a, b):
    if adj.target.kind == "chain":
        return ch.tensor_map(a, b)
    return sv.sv_tensor_map(a, b)
