"""Non-symmetric operads over chain complexes or truncated simplicial vector spaces.

Every operad exposes the same basis-level interface: each arity-``n`` component has
a basis of hashable keys ``(index, tag)``, where ``index`` is the chain degree or the
simplicial level. Elements are dicts ``{key: coefficient}``. An operad provides
partial compositions of basis keys, its structure operators (``"d"`` for chains,
``("d", i)`` / ``("s", i)`` for faces and degeneracies), and a unit.
"""
from __future__ import annotations

import random
from itertools import product

from . import chaincat as ch
from . import simpcat as sv
from .exactla import Matrix, TruncationError
from .seqcomp import ChainBase, Sequence, SequenceMap, SimplicialBase
from .trees import LEAF, enumerate_planar_trees

__all__ = [
    "Operad", "TableOperad", "FreeOperad", "OperadMorphism", "unit_operad", "ass_operad",
    "uass_operad", "phi_morphism", "check_operad_axioms", "check_morphism", "evaluate_tree",
    "lin_add", "lin_scale", "operators", "op_target_index", "plug_children", "operad_from_json",
]


# linear combinations ------------------------------------------------------------------------

def lin_add(F, acc: dict, elem: dict, c=None):
    """acc += c * elem, in place."""
    add, mul, isz = F.add, F.mul, F.is_zero
    for k, v in elem.items():
        if c is not None:
            v = mul(c, v)
        if k in acc:
            w = add(acc[k], v)
            if isz(w):
                del acc[k]
            else:
                acc[k] = w
        elif not isz(v):
            acc[k] = v
    return acc


def lin_scale(F, elem: dict, c) -> dict:
    if F.is_zero(c):
        return {}
    return {k: F.mul(c, v) for k, v in elem.items()}


def operators(base, idx):
    """Structure operators leaving index ``idx``."""
    if base.kind == "chain":
        return ["d"]
    ops = [("d", i) for i in range(idx + 1)] if idx >= 1 else []
    if idx < base.s_max:
        ops += [("s", i) for i in range(idx + 1)]
    return ops


def op_target_index(op, idx):
    if op == "d" or op[0] == "d":
        return idx - 1
    return idx + 1


def koszul_sign(degrees_in_final_order, seq_of):
    """Sign of reordering graded labels from ``seq`` order into the given order."""
    odd = [seq_of[i] for i, d in enumerate(degrees_in_final_order) if d % 2]
    inv = 0
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if odd[a] > odd[b]:
                inv += 1
    return -1 if inv % 2 else 1


# the interface --------------------------------------------------------------------------------

class Operad:
    """Abstract operad. Subclasses implement ``_basis``, ``compose``, ``act``, ``unit``."""

    base = None
    arity_bound = 0
    # True when every component above arity_bound is known to vanish
    bounded_support = False

    @property
    def field(self):
        return self.base.field

    @property
    def kind(self):
        return self.base.kind

    def _basis(self, n) -> dict:
        raise NotImplementedError

    def basis(self, n) -> dict:
        """``{index: [keys]}`` for arity ``n``."""
        cache = self.__dict__.setdefault("_basis_cache", {})
        if n not in cache:
            if n > self.arity_bound:
                raise TruncationError(f"arity {n} exceeds bound {self.arity_bound}")
            cache[n] = {i: ks for i, ks in self._basis(n).items() if ks}
        return cache[n]

    def positions(self, n) -> dict:
        cache = self.__dict__.setdefault("_pos_cache", {})
        if n not in cache:
            cache[n] = {k: j for ks in self.basis(n).values() for j, k in enumerate(ks)}
        return cache[n]

    def all_keys(self, n):
        return [k for i in sorted(self.basis(n)) for k in self.basis(n)[i]]

    @staticmethod
    def key_index(key):
        return key[0]

    def compose(self, p, i, q, a, b) -> dict:
        raise NotImplementedError

    def act(self, n, key, op) -> dict:
        raise NotImplementedError

    def unit(self, idx=0) -> dict:
        raise NotImplementedError

    def compose_elems(self, p, i, q, x: dict, y: dict) -> dict:
        F = self.field
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                lin_add(F, out, self.compose(p, i, q, a, b), F.mul(ca, cb))
        return out

    def act_elem(self, n, x: dict, op) -> dict:
        F = self.field
        out = {}
        for k, c in x.items():
            lin_add(F, out, self.act(n, k, op), c)
        return out

    def dims(self) -> dict:
        return {n: {i: len(ks) for i, ks in self.basis(n).items()} for n in range(self.arity_bound + 1)}

    def total_dims(self) -> dict:
        return {n: sum(len(ks) for ks in self.basis(n).values()) for n in range(self.arity_bound + 1)}

    # components as base-category objects ------------------------------------------------------
    def component(self, n):
        cache = self.__dict__.setdefault("_comp_cache", {})
        if n not in cache:
            cache[n] = self._build_component(n)
        return cache[n]

    def _vector(self, n, idx, elem: dict) -> dict:
        pos = self.positions(n)
        out = {}
        for k, c in elem.items():
            if self.key_index(k) != idx:
                raise ValueError(f"element of index {self.key_index(k)} where {idx} expected")
            if k not in pos:
                raise TruncationError(f"term {k!r} is outside the computed basis of arity {n}")
            out[pos[k]] = c
        return out

    def _build_component(self, n):
        F = self.field
        B = self.basis(n)
        if self.kind == "chain":
            degs = sorted(B)
            lo, hi = (min(degs + [0]), max(degs + [0]))
            dims = {d: len(B.get(d, [])) for d in range(lo, hi + 1)}
            diff = {}
            for d in range(lo + 1, hi + 1):
                cols = [self._vector(n, d - 1, self.act(n, k, "d")) for k in B.get(d, [])]
                diff[d] = Matrix.from_columns(F, dims[d - 1], cols)
            return ch.ChainComplex(F, (lo, hi), dims, diff)
        top = self.base.s_max
        levels = {s: len(B.get(s, [])) for s in range(top + 1)}
        faces, degens = {}, {}
        for s in range(top + 1):
            for op in operators(self.base, s):
                t = op_target_index(op, s)
                cols = [self._vector(n, t, self.act(n, k, op)) for k in B.get(s, [])]
                m = Matrix.from_columns(F, levels[t], cols)
                if op[0] == "d":
                    faces[(s, op[1])] = m
                else:
                    degens[(s, op[1])] = m
        return sv.SimplicialVS(F, top, levels, faces, degens, check=False)

    def underlying(self) -> Sequence:
        return Sequence(self.base, self.arity_bound, {n: self.component(n) for n in range(self.arity_bound + 1)})

    def composition_map(self, p, i, q):
        """``o_i`` as a map ``O(p) (x) O(q) -> O(p+q-1)`` in the base category."""
        F = self.field
        A, Bc, T = self.component(p), self.component(q), self.component(p + q - 1)
        Bp, Bq = self.basis(p), self.basis(q)
        n = p + q - 1
        if self.kind == "chain":
            S = ch.tensor(A, Bc)
            comps = {}
            for deg in S.degrees():
                cols = []
                for da, off, na, nb in ch.tensor_blocks(A, Bc, deg):
                    for a in Bp.get(da, []):
                        for b in Bq.get(deg - da, []):
                            cols.append(self._vector(n, deg, self.compose(p, i, q, a, b)))
                comps[deg] = Matrix.from_columns(F, T.dim(deg), cols)
            return ch.ChainMap(S, T, comps, check=False)
        S = sv.sv_tensor(A, Bc)
        comps = {}
        for s in range(self.base.s_max + 1):
            cols = [self._vector(n, s, self.compose(p, i, q, a, b)) for a in Bp.get(s, []) for b in Bq.get(s, [])]
            comps[s] = Matrix.from_columns(F, T.dim(s), cols)
        return sv.SimplicialMap(S, T, comps, check=False)

    def unit_vector(self, idx=0) -> dict:
        return self._vector(1, idx, self.unit(idx))

    def to_json(self) -> dict:
        F = self.field
        comps = {str(n): self.component(n).to_json() for n in range(self.arity_bound + 1)}
        compositions = {}
        for p in range(1, self.arity_bound + 1):
            for q in range(0, self.arity_bound + 2 - p):
                for i in range(1, p + 1):
                    m = self.composition_map(p, i, q)
                    compositions[f"{p},{i},{q}"] = {str(d): [F.format(x) for x in mat.entries] for d, mat in m.comps.items() if mat.rows and mat.cols}
        u = self.unit_vector(0)
        dim1 = len(self.basis(1).get(0, []))
        unit = [F.format(u.get(j, F.zero)) for j in range(dim1)]
        return {"base": self.kind, "arity_bound": self.arity_bound, "components": comps,
                "compositions": compositions, "unit": unit}


def _level_of(base):
    return 0 if base.kind == "chain" else None


# explicit operads --------------------------------------------------------------------------------

class TableOperad(Operad):
    """Operad given by explicit components and a composition rule on basis keys.

    Keys are ``(index, j)`` with ``j`` the position in the component's basis at that
    index. ``compose_fn(p, i, q, a, b)`` returns an element; ``unit_fn(idx)`` too.
    """

    def __init__(self, base, arity_bound, components: dict, compose_fn, unit_fn, name="operad"):
        self.base = base
        self.arity_bound = arity_bound
        self._components = components
        self._compose_fn = compose_fn
        self._unit_fn = unit_fn
        self.name = name

    def __repr__(self):
        return f"{self.name}({self.base!r}, N={self.arity_bound})"

    def _basis(self, n):
        c = self._components.get(n)
        if c is None:
            return {}
        if self.kind == "chain":
            return {d: [(d, j) for j in range(k)] for d, k in c.dims.items()}
        return {s: [(s, j) for j in range(k)] for s, k in c.levels.items()}

    def component(self, n):
        c = self._components.get(n)
        if c is None:
            return self.base.zero()
        return c

    def compose(self, p, i, q, a, b):
        if p + q - 1 > self.arity_bound:
            raise TruncationError(f"composite arity {p + q - 1} exceeds {self.arity_bound}")
        return self._compose_fn(p, i, q, a, b)

    def act(self, n, key, op):
        idx, j = key
        c = self.component(n)
        t = op_target_index(op, idx)
        if self.kind == "chain":
            m = c.d(idx)
        else:
            m = c.d(idx, op[1]) if op[0] == "d" else c.s(idx, op[1])
        return {(t, r): v for r, v in m.column(j).items()}

    def unit(self, idx=0):
        return self._unit_fn(idx)


def _one_dim_component(base, n_present):
    return base.unit() if n_present else base.zero()


def _constant_operad(base, arity_bound, arities, name):
    """Operad with the tensor unit in the given arities and composition the unitor."""
    F = base.field
    comps = {n: (base.unit() if n in arities else base.zero()) for n in range(arity_bound + 1)}

    def compose(p, i, q, a, b):
        n = p + q - 1
        if n not in arities:
            return {}
        idx = a[0] + b[0] if base.kind == "chain" else a[0]
        if base.kind != "chain" and a[0] != b[0]:
            raise ValueError("levels differ")
        if base.kind == "chain" and idx != 0:
            return {}
        return {(idx, 0): F.one}

    def unit(idx=0):
        return {(idx, 0): F.one} if 1 in arities else {}

    return TableOperad(base, arity_bound, comps, compose, unit, name)


def unit_operad(base, arity_bound) -> TableOperad:
    """The initial operad: the tensor unit in arity 1, zero elsewhere."""
    o = _constant_operad(base, arity_bound, {1}, "I")
    o.bounded_support = True
    return o


def ass_operad(base, arity_bound) -> TableOperad:
    """Non-unital associative operad: the tensor unit in every positive arity."""
    return _constant_operad(base, arity_bound, set(range(1, arity_bound + 1)), "Ass")


def uass_operad(base, arity_bound) -> TableOperad:
    """Unital associative operad: the tensor unit in every arity."""
    return _constant_operad(base, arity_bound, set(range(0, arity_bound + 1)), "uAss")


# morphisms ---------------------------------------------------------------------------------------

class OperadMorphism:
    """Levelwise map given on basis keys: ``fn(n, key) -> element of target(n)``."""

    def __init__(self, source: Operad, target: Operad, fn, name="morphism"):
        self.source, self.target, self.fn, self.name = source, target, fn, name
        self._cache = {}

    def __call__(self, n, key) -> dict:
        ck = (n, key)
        if ck not in self._cache:
            self._cache[ck] = self.fn(n, key)
        return self._cache[ck]

    def apply(self, n, elem: dict) -> dict:
        F = self.source.field
        out = {}
        for k, c in elem.items():
            lin_add(F, out, self(n, k), c)
        return out

    def __matmul__(self, other: "OperadMorphism") -> "OperadMorphism":
        return OperadMorphism(other.source, self.target, lambda n, k: self.apply(n, other(n, k)), f"{self.name}.{other.name}")

    @classmethod
    def identity(cls, o: Operad):
        return cls(o, o, lambda n, k: {k: o.field.one}, "id")

    def component(self, n):
        """The arity-``n`` component as a chain map / simplicial map."""
        S, T = self.source.component(n), self.target.component(n)
        F = self.source.field
        comps = {}
        for idx, keys in self.source.basis(n).items():
            t_rows = T.dim(idx)
            cols = [self.target._vector(n, idx, self(n, k)) for k in keys]
            comps[idx] = Matrix.from_columns(F, t_rows, cols)
        if self.source.kind == "chain":
            return ch.ChainMap(S, T, comps, check=False)
        return sv.SimplicialMap(S, T, comps, check=False)

    def sequence_map(self) -> SequenceMap:
        return SequenceMap(self.source.underlying(), self.target.underlying(),
                           {n: self.component(n) for n in range(self.source.arity_bound + 1)})

    def is_levelwise_weak_equivalence(self, arities=None) -> bool:
        arities = range(self.source.arity_bound + 1) if arities is None else arities
        return all(self.source.base.is_weak_equivalence(self.component(n)) for n in arities)


def phi_morphism(base, arity_bound) -> OperadMorphism:
    """The inclusion Ass -> uAss, identity in positive arities."""
    a, u = ass_operad(base, arity_bound), uass_operad(base, arity_bound)
    return OperadMorphism(a, u, lambda n, k: {k: base.field.one}, "phi")


# tree evaluation ---------------------------------------------------------------------------------

def plug_children(R: Operad, cur: dict, ar: int, kids: list):
    """Compose child values into the inputs of ``cur`` (arity ``ar``).

    ``kids[j]`` is ``None`` for an input left open, or ``(value, width)``. Narrow
    children go first, so intermediate arities stay as small as possible; the graded
    sign accounts for moving each child past the earlier children still pending.
    Returns ``(element, arity)``.
    """
    F = R.field
    chain = R.kind == "chain"
    pending = [j for j, k in enumerate(kids) if k is not None and k[0]]
    if any(k is not None and not k[0] for k in kids):
        return {}, ar
    degs = {j: (R.key_index(next(iter(kids[j][0]))) if chain else 0) for j in pending}
    done = set()
    for j in sorted(pending, key=lambda j: (kids[j][1], j)):
        val, w = kids[j]
        pos = 1 + sum((kids[l][1] if l in done else 1) for l in range(j))
        flips = degs[j] * sum(degs[l] for l in pending if l < j and l not in done)
        cur = R.compose_elems(ar, pos, w, cur, val)
        if flips % 2:
            cur = lin_scale(F, cur, F.neg(F.one))
        ar += w - 1
        done.add(j)
    return cur, ar


def evaluate_tree(R: Operad, shape, labels) -> dict:
    """Compose labels placed on a planar tree shape inside ``R``.

    ``shape`` is a planar tree (``"L"`` or tuple of children); ``labels`` lists basis
    keys of ``R`` in preorder, read as the tensor of the labels in that order.
    """
    it = iter(labels)

    def go(node):
        if node == LEAF:
            return None
        key = next(it)
        kids = [go(c) for c in node]
        return plug_children(R, {key: R.field.one}, len(node), kids)

    res = go(shape)
    if res is None:
        return R.unit(0)
    return res[0]


# free operad on planar trees -----------------------------------------------------------------------

class FreeOperad(Operad):
    """Free operad on a sequence ``gens``: decorated planar trees, grafting as composition.

    Keys are ``(index, tree)`` where a tree is ``"L"`` or ``(label, child, ..)`` with
    ``label = (index, j)`` a basis key of ``gens[arity]``.
    """

    def __init__(self, gens: Sequence, arity_bound=None, size_bound=None):
        self.gens = gens
        self.base = gens.base
        self.arity_bound = gens.arity_bound if arity_bound is None else arity_bound
        self.size_bound = size_bound
        sizes = {k: gens.base.size(gens[k]) for k in range(gens.arity_bound + 1)}
        self._gen_arities = sorted(k for k, s in sizes.items() if s)
        if (sizes.get(0) or sizes.get(1)) and size_bound is None:
            raise ValueError("generators in arity 0 or 1 need a size_bound")
        self._gen_basis = {}
        for k in self._gen_arities:
            g = gens[k]
            if self.kind == "chain":
                self._gen_basis[k] = {d: [(d, j) for j in range(n)] for d, n in g.dims.items() if n}
            else:
                self._gen_basis[k] = {s: [(s, j) for j in range(n)] for s, n in g.levels.items() if n}

    def __repr__(self):
        return f"FreeOperad(arities={self._gen_arities}, N={self.arity_bound})"

    def _shapes(self, n):
        mv = self.size_bound
        return enumerate_planar_trees(n, self._gen_arities, mv) if self._gen_arities else ([LEAF] if n == 1 else [])

    def _basis(self, n):
        out = {}
        for shape in self._shapes(n):
            ars = _preorder_arities(shape)
            if self.kind == "chain":
                choices = [[lab for labs in self._gen_basis[k].values() for lab in labs] for k in ars]
                for labs in product(*choices):
                    d = sum(l[0] for l in labs)
                    out.setdefault(d, []).append((d, _decorate(shape, labs)))
            else:
                for s in range(self.base.s_max + 1):
                    choices = [self._gen_basis[k].get(s, []) for k in ars]
                    for labs in product(*choices):
                        out.setdefault(s, []).append((s, _decorate(shape, labs)))
        return out

    def unit(self, idx=0):
        return {(idx, LEAF): self.field.one}

    def generator(self, k, label) -> dict:
        """The corolla carrying ``label`` (a basis key of ``gens[k]``)."""
        return {(label[0], (label,) + (LEAF,) * k): self.field.one}

    def compose(self, p, i, q, a, b):
        if p + q - 1 > self.arity_bound:
            raise TruncationError(f"composite arity {p + q - 1} exceeds {self.arity_bound}")
        F = self.field
        ia, ta = a
        ib, tb = b
        if self.kind == "chain":
            idx = ia + ib
            after = _labels_after_leaf(ta, i)
            sgn = -1 if (ib * sum(l[0] for l in after)) % 2 else 1
        else:
            if ia != ib:
                raise ValueError("levels differ")
            idx, sgn = ia, 1
        t = _graft_decorated(ta, i, tb)
        if self.size_bound is not None and _count_vertices(t) > self.size_bound:
            raise TruncationError("composite exceeds the size bound")
        return {(idx, t): F.sign(sgn)}

    def act(self, n, key, op):
        F = self.field
        idx, t = key
        labels = _preorder_labels(t)
        out = {}
        if self.kind == "chain":
            before = 0
            for v, lab in enumerate(labels):
                k = _preorder_arities(_strip(t))[v]
                dl = self._gen_act(k, lab, "d")
                sgn = F.sign(-1 if before % 2 else 1)
                for nl, c in dl.items():
                    new = list(labels)
                    new[v] = nl
                    lin_add(F, out, {(idx - 1, _decorate(_strip(t), new)): c}, sgn)
                before += lab[0]
            return out
        ars = _preorder_arities(_strip(t))
        images = [self._gen_act(k, lab, op) for k, lab in zip(ars, labels)]
        t_idx = op_target_index(op, idx)
        for combo in product(*[list(im.items()) for im in images]):
            c = F.one
            for _, v in combo:
                c = F.mul(c, v)
            lin_add(F, out, {(t_idx, _decorate(_strip(t), [l for l, _ in combo])): c})
        if not labels:
            out = {(t_idx, t): F.one}
        return out

    def _gen_act(self, k, lab, op):
        g = self.gens[k]
        idx, j = lab
        t = op_target_index(op, idx)
        if self.kind == "chain":
            m = g.d(idx)
        else:
            m = g.d(idx, op[1]) if op[0] == "d" else g.s(idx, op[1])
        return {(t, r): v for r, v in m.column(j).items()}

    def inclusion_of_generators(self) -> SequenceMap:
        """The sequence map gens -> underlying free operad."""
        comps = {}
        F = self.field
        for k in range(self.arity_bound + 1):
            src = self.gens[k] if k <= self.gens.arity_bound else self.base.zero()
            tgt = self.component(k)
            mats = {}
            for idx, labs in (self._gen_basis.get(k) or {}).items():
                cols = [self._vector(k, idx, self.generator(k, lab)) for lab in labs]
                mats[idx] = Matrix.from_columns(F, tgt.dim(idx), cols)
            if self.kind == "chain":
                comps[k] = ch.ChainMap(src, tgt, mats, check=False)
            else:
                comps[k] = sv.SimplicialMap(src, tgt, mats, check=False)
        return SequenceMap(self.gens, self.underlying(), comps)


def _preorder_arities(shape):
    if shape == LEAF:
        return []
    out = [len(shape)]
    for c in shape:
        out.extend(_preorder_arities(c))
    return out


def _decorate(shape, labels):
    it = iter(labels)

    def go(node):
        if node == LEAF:
            return LEAF
        lab = next(it)
        return (lab,) + tuple(go(c) for c in node)
    return go(shape)


def _strip(t):
    if t == LEAF:
        return LEAF
    return tuple(_strip(c) for c in t[1:])


def _preorder_labels(t):
    if t == LEAF:
        return []
    out = [t[0]]
    for c in t[1:]:
        out.extend(_preorder_labels(c))
    return out


def _count_vertices(t):
    if t == LEAF:
        return 0
    return 1 + sum(_count_vertices(c) for c in t[1:])


def _labels_after_leaf(t, i):
    """Labels visited after the ``i``-th leaf in preorder."""
    seen = [0]
    after = []
    passed = [False]

    def go(node):
        if node == LEAF:
            seen[0] += 1
            if seen[0] == i:
                passed[0] = True
            return
        if passed[0]:
            after.append(node[0])
        for c in node[1:]:
            go(c)
    go(t)
    return after


def _graft_decorated(t, i, s):
    count = [0]

    def go(node):
        if node == LEAF:
            count[0] += 1
            return s if count[0] == i else LEAF
        return (node[0],) + tuple(go(c) for c in node[1:])
    out = go(t)
    if count[0] < i:
        raise IndexError("not enough leaves")
    return out


# axiom checks ---------------------------------------------------------------------------------------

def _pairs(O, p, q):
    Bp, Bq = O.basis(p), O.basis(q)
    if O.kind == "chain":
        return [(a, b) for ka in Bp.values() for a in ka for kb in Bq.values() for b in kb]
    return [(a, b) for s in Bp for a in Bp[s] for b in Bq.get(s, [])]


def _triples(O, p, q, r):
    Bp, Bq, Br = O.basis(p), O.basis(q), O.basis(r)
    if O.kind == "chain":
        flat = lambda B: [k for ks in B.values() for k in ks]
        return list(product(flat(Bp), flat(Bq), flat(Br)))
    return [(a, b, c) for s in Bp for a in Bp[s] for b in Bq.get(s, []) for c in Br.get(s, [])]


def check_operad_axioms(O: Operad, max_checks=None, seed=0) -> list:
    """Violated identities (associativity, units, compatibility with structure maps)."""
    F = O.field
    N = O.arity_bound
    chain = O.kind == "chain"
    bad = []
    rng = random.Random(seed)

    def sample(xs):
        if max_checks is not None and len(xs) > max_checks:
            return rng.sample(xs, max_checks)
        return xs

    def deg(k):
        return k[0] if chain else 0

    # associativity
    for p in range(1, N + 1):
        for q in range(0, N + 2 - p):
            for r in range(0, min(N, N + 2 - p - q) + 1):
                if max(p + q + r - 2, p + r - 1, q + r - 1, p + q - 1) > N:
                    continue
                trip = sample(_triples(O, p, q, r))
                for x, y, z in trip:
                    for i in range(1, p + 1):
                        xy = O.compose(p, i, q, x, y)
                        for j in range(1, q + 1):
                            lhs = O.compose_elems(p + q - 1, i + j - 1, r, xy, {z: F.one})
                            rhs = O.compose_elems(p, i, q + r - 1, {x: F.one}, O.compose(q, j, r, y, z))
                            if lhs != rhs:
                                bad.append(f"sequential p={p} i={i} q={q} j={j} r={r} on {x!r},{y!r},{z!r}")
                        for j in range(1, i):
                            lhs = O.compose_elems(p + q - 1, j, r, xy, {z: F.one})
                            xz = O.compose(p, j, r, x, z)
                            rhs = O.compose_elems(p + r - 1, i + r - 1, q, xz, {y: F.one})
                            if chain and (deg(y) * deg(z)) % 2:
                                rhs = lin_scale(F, rhs, F.neg(F.one))
                            if lhs != rhs:
                                bad.append(f"parallel p={p} j={j} i={i} q={q} r={r} on {x!r},{y!r},{z!r}")
    # units
    idxs = [0] if chain else range(O.base.s_max + 1)
    for n in range(0, N + 1):
        for idx, keys in O.basis(n).items():
            if not chain and idx not in idxs:
                continue
            u = O.unit(0 if chain else idx)
            for x in sample(list(keys)):
                ex = {x: F.one}
                if n >= 1 and O.compose_elems(1, 1, n, u, ex) != ex:
                    bad.append(f"left unit on {x!r}")
                for i in range(1, n + 1):
                    if O.compose_elems(n, i, 1, ex, u) != ex:
                        bad.append(f"right unit at {i} on {x!r}")
    # structure operators
    for p in range(1, N + 1):
        for q in range(0, N + 2 - p):
            for x, y in sample(_pairs(O, p, q)):
                for i in range(1, p + 1):
                    xy = O.compose(p, i, q, x, y)
                    for op in operators(O.base, O.key_index(x)):
                        lhs = O.act_elem(p + q - 1, xy, op)
                        if chain:
                            rhs = O.compose_elems(p, i, q, O.act(p, x, op), {y: F.one})
                            s = F.neg(F.one) if deg(x) % 2 else F.one
                            lin_add(F, rhs, O.compose_elems(p, i, q, {x: F.one}, O.act(q, y, op)), s)
                        else:
                            rhs = O.compose_elems(p, i, q, O.act(p, x, op), O.act(q, y, op))
                        if lhs != rhs:
                            bad.append(f"structure map {op} vs o_{i} on {x!r},{y!r}")
    if chain and O.basis(1).get(0):
        if O.act_elem(1, O.unit(0), "d"):
            bad.append("unit is not a cycle")
    return bad


def check_morphism(phi: OperadMorphism, max_checks=None, seed=0) -> list:
    """Violations of: compatibility with o_i, structure maps and units."""
    S, T = phi.source, phi.target
    N = S.arity_bound
    rng = random.Random(seed)
    bad = []
    for p in range(1, N + 1):
        for q in range(0, N + 2 - p):
            pairs = _pairs(S, p, q)
            if max_checks is not None and len(pairs) > max_checks:
                pairs = rng.sample(pairs, max_checks)
            for x, y in pairs:
                for i in range(1, p + 1):
                    lhs = phi.apply(p + q - 1, S.compose(p, i, q, x, y))
                    rhs = T.compose_elems(p, i, q, phi(p, x), phi(q, y))
                    if lhs != rhs:
                        bad.append(f"o_{i} not preserved on {x!r},{y!r}")
    for n in range(N + 1):
        for idx, keys in S.basis(n).items():
            for x in keys:
                for op in operators(S.base, idx):
                    if phi.apply(n, S.act(n, x, op)) != T.act_elem(n, phi(n, x), op):
                        bad.append(f"structure map {op} not preserved on {x!r}")
    idxs = [0] if S.kind == "chain" else range(S.base.s_max + 1)
    for idx in idxs:
        if S.basis(1).get(idx) is not None or T.basis(1).get(idx):
            if phi.apply(1, S.unit(idx)) != T.unit(idx):
                bad.append(f"unit not preserved at index {idx}")
    return bad


# serialization -----------------------------------------------------------------------------------

def _matrix(F, rows, cols, entries):
    return Matrix.from_entries(F, rows, cols, [F.parse(str(x)) for x in entries])


def operad_from_json(obj: dict) -> TableOperad:
    """Rebuild an operad from its serialized components, compositions and unit."""
    kind = obj.get("base", "chain")
    N = int(obj["arity_bound"])
    if kind == "chain":
        comps = {int(n): ch.ChainComplex.from_json(c, check=False) for n, c in obj["components"].items()}
    else:
        comps = {int(n): sv.SimplicialVS.from_json(c, check=False) for n, c in obj["components"].items()}
    F = next(iter(comps.values())).field
    base = ChainBase(F) if kind == "chain" else SimplicialBase(F, next(iter(comps.values())).s_max)
    for n in range(N + 1):
        comps.setdefault(n, base.zero())
    tables = {}
    for key, per in obj.get("compositions", {}).items():
        p, i, q = map(int, key.split(","))
        A, B, T = comps[p], comps[q], comps[p + q - 1]
        tables[(p, i, q)] = {}
        for idx, entries in per.items():
            idx = int(idx)
            cols = A.dim(idx) * B.dim(idx) if kind != "chain" else sum(na * nb for _, _, na, nb in ch.tensor_blocks(A, B, idx))
            tables[(p, i, q)][idx] = _matrix(F, T.dim(idx), cols, entries)
    unit_vec = [F.parse(str(x)) for x in obj.get("unit", [])]

    def compose(p, i, q, a, b):
        if kind == "chain":
            idx = a[0] + b[0]
            off = next(o for d, o, _, nb in ch.tensor_blocks(comps[p], comps[q], idx) if d == a[0])
            col = off + a[1] * comps[q].dim(b[0]) + b[1]
        else:
            if a[0] != b[0]:
                raise ValueError("levels differ")
            idx = a[0]
            col = a[1] * comps[q].dim(idx) + b[1]
        m = tables.get((p, i, q), {}).get(idx)
        if m is None:
            return {}
        return {(idx, r): v for r, v in m.column(col).items()}

    def unit(idx=0):
        vec = {j: v for j, v in enumerate(unit_vec) if not F.is_zero(v)}
        if kind != "chain":
            C = comps[1]
            for s in range(idx):
                vec = C.s(s, 0).apply(vec)
        elif idx != 0:
            return {}
        return {(idx, j): v for j, v in vec.items()}

    return TableOperad(base, N, comps, compose, unit, obj.get("name", "operad"))
