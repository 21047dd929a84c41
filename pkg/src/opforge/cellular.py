"""Operads presented by cells attached to a base operad.

A cellular operad is ``O`` with free generators adjoined (the complements of the
cell inclusions ``U -> V``) and a twisted structure: a generator's boundary (or
face) is the image of its ``V``-boundary, where the ``U``-part is sent through the
attaching map. Basis elements are normal-form leveled trees. Odd vertices carry
basis keys of ``O``; even vertices carry generators; two odd vertices are never
adjacent. Compositions, differentials and simplicial operators all work by forming a
general tree and contracting every maximal cluster of adjacent ``O``-labels inside
``O``.
"""
from __future__ import annotations

from itertools import product

from . import chaincat as ch
from .exactla import Matrix, TruncationError, _quotient, nullspace, solve
from .operads import Operad, OperadMorphism, _pairs, evaluate_tree, lin_add, op_target_index, operators, plug_children
from .trees import LEAF, enumerate_leveled_trees, tree_degree_and_dims

__all__ = [
    "Cell", "CellOperad", "pushout_along_free", "extend_morphism", "FiltrationLedger",
    "attaching_from_map", "mediator_is_unique", "tree_shape", "count_generators",
]

ODD, GEN = "o", "g"


class Cell:
    """One attachment: an injective map ``f: U -> V`` in a single arity plus ``g``.

    ``g(idx, j)`` is the image of the ``j``-th basis vector of ``U`` at index
    ``idx`` as an element (tree-keyed dict) of the operad being built.
    """

    def __init__(self, number, arity, f, g, kind):
        self.number, self.arity, self.f, self.g, self.kind = number, arity, f, g, kind
        self.comp, self.proj = {}, {}
        V = f.target
        idxs = V.degrees() if kind == "chain" else range(V.s_max + 1)
        for idx in idxs:
            proj, comp = _quotient(f[idx], V.dim(idx))
            self.comp[idx], self.proj[idx] = comp, proj
        self.weight = 1

    @property
    def source(self):
        return self.f.source

    @property
    def target(self):
        return self.f.target

    def generators(self):
        return [(self.number, idx, c) for idx in sorted(self.comp) for c in self.comp[idx]]

    def decompose(self, idx, vec: dict):
        """Split a ``V``-vector into a ``U``-preimage and complement coordinates."""
        F = self.f.field
        if idx not in self.proj or not vec:
            return {}, {}
        comp, proj = self.comp[idx], self.proj[idx]
        coef = proj.apply(vec)
        rest = dict(vec)
        for c_pos, v in coef.items():
            c = comp[c_pos]
            w = F.sub(rest.get(c, F.zero), v)
            if F.is_zero(w):
                rest.pop(c, None)
            else:
                rest[c] = w
        u = {}
        if rest:
            fm = self.f[idx]
            x, _ = solve(fm, Matrix.from_columns(F, fm.rows, [rest]))
            if x is None:
                raise ArithmeticError("residual outside the image of f")
            u = x.column(0)
        return u, {comp[c]: v for c, v in coef.items()}


def tree_shape(tree):
    """Leveled shape (``trees`` module format) of a normal-form tree."""
    if tree == LEAF:
        return LEAF
    return ("o" if tree[0] == ODD else "e", tuple(tree_shape(c) for c in tree[2]))


def _planar(tree):
    if tree == LEAF:
        return LEAF
    return tuple(_planar(c) for c in tree[2])


def _labels(tree):
    if tree == LEAF:
        return []
    out = [(tree[0], tree[1])]
    for c in tree[2]:
        out.extend(_labels(c))
    return out


def count_generators(tree, cells=None) -> int:
    return sum(1 for k, lab in _labels(tree) if k == GEN and (cells is None or lab[0] in cells))


def _general(tree, pre, subst=None):
    """Normal tree -> general tree with sequence numbers ``(preorder, 0)``.

    ``subst`` maps preorder positions to ``(kind, label)`` or to a normal tree to be
    spliced in (its leaves receive the vertex's children).
    """
    counter = [0]

    def go(node):
        if node == LEAF:
            return LEAF
        k = counter[0]
        counter[0] += 1
        kids = [go(c) for c in node[2]]
        rep = None if subst is None else subst.get(k)
        if rep is None:
            return (node[0], node[1], (pre, k, 0), kids)
        if rep[0] == "label":
            return (node[0], rep[1], (pre, k, 0), kids)
        return _splice(rep[1], (pre, k), kids)
    return go(tree)


def _splice(tree, seq, kids):
    """General form of ``tree`` with its leaves replaced by ``kids``."""
    counter, leaf = [0], [0]

    def go(node):
        if node == LEAF:
            leaf[0] += 1
            return kids[leaf[0] - 1]
        k = counter[0]
        counter[0] += 1
        return (node[0], node[1], seq + (k + 1,), [go(c) for c in node[2]])
    return go(tree)


def _graft_general(tree, i, other):
    count = [0]

    def go(node):
        if node == LEAF:
            count[0] += 1
            return other if count[0] == i else LEAF
        return (node[0], node[1], node[2], [go(c) for c in node[3]])
    return go(tree)


class CellOperad(Operad):
    """``base_op`` with the cells' generators freely adjoined and twisted structure maps.

    ``t_max`` bounds the total generator weight and is required when generators of
    arity 0 or 1 exist or ``base_op(0) != 0``.
    """

    def __init__(self, base_op: Operad, cells=(), t_max=None, name="cellular"):
        self.base_op = base_op
        self.base = base_op.base
        self.arity_bound = base_op.arity_bound
        self.cells = list(cells)
        self.t_max = t_max
        self.name = name
        self.gens = {}
        self.weights = {}
        for c in self.cells:
            for gid in c.generators():
                self.gens[gid] = c.arity
                self.weights[gid] = c.weight
        self._img = {}
        ars = {c.arity for c in self.cells if c.generators()}
        self.exact = (not ars or min(ars) >= 2) and not base_op.basis(0)
        if not self.exact and t_max is None:
            raise TruncationError("generators of arity <= 1 or a base with arity-0 operations need t_max")

    def __repr__(self):
        return f"CellOperad({self.name}, cells={len(self.cells)}, N={self.arity_bound})"

    # structure --------------------------------------------------------------------------
    def attach(self, arity, f, g, name=None) -> "CellOperad":
        """New operad with one more cell ``f: U -> V`` in ``arity`` attached along ``g``."""
        if arity > self.arity_bound:
            raise TruncationError(f"cell arity {arity} exceeds the bound {self.arity_bound}")
        if self.kind == "chain":
            if not all(f[d].is_injective() for d in f.comps):
                raise ValueError("cell map is not injective")
        elif not f.is_levelwise_injective():
            raise ValueError("cell map is not injective")
        cell = Cell(len(self.cells), arity, f, g, self.kind)
        w = 1
        U = f.source
        for idx in (U.degrees() if self.kind == "chain" else range(U.s_max + 1)):
            for j in range(U.dim(idx)):
                for key in g(idx, j):
                    w = max(w, self.tree_weight(key[1]))
        cell.weight = w
        out = CellOperad(self.base_op, self.cells + [cell], self.t_max, name or self.name)
        out._check_attaching(cell)
        return out

    def _check_attaching(self, cell):
        U = cell.source
        k = cell.arity
        prev = CellOperad(self.base_op, self.cells[:-1], self.t_max, self.name)
        for idx in (U.degrees() if self.kind == "chain" else range(U.s_max + 1)):
            for j in range(U.dim(idx)):
                img = cell.g(idx, j)
                for key in img:
                    if prev.key_index(key) != idx:
                        raise ValueError("attaching map changes the index")
                    if any(lab[0] == cell.number for kind, lab in _labels(key[1]) if kind == GEN):
                        raise ValueError("attaching map uses the new cell")
                for op in operators(self.base, idx):
                    if op not in _ops_of(U, idx):
                        continue
                    lhs = prev.act_elem(k, img, op)
                    col = _op_matrix(U, idx, op).column(j)
                    rhs = {}
                    for r, v in col.items():
                        lin_add(self.field, rhs, cell.g(op_target_index(op, idx), r), v)
                    if lhs != rhs:
                        raise ValueError(f"attaching map does not commute with {op} at index {idx}")

    def tree_weight(self, tree) -> int:
        return sum(self.weights.get(lab, 1) for kind, lab in _labels(tree) if kind == GEN)

    def _deg(self, kind, label):
        if self.kind != "chain":
            return 0
        return label[1] if kind == GEN else self.base_op.key_index(label)

    def generator(self, gid) -> dict:
        """The corolla on a generator, as an element."""
        k = self.gens[gid]
        return self._normalize((GEN, gid, (0,), [LEAF] * k), gid[1])

    def generator_image(self, gid, op) -> dict:
        key = (gid, op)
        if key not in self._img:
            cell = self.cells[gid[0]]
            _, idx, j = gid
            V = cell.target
            t = op_target_index(op, idx)
            col = _op_matrix(V, idx, op).column(j)
            self._img[key] = self.cell_value(cell, t, col)
        return self._img[key]

    def cell_value(self, cell, idx, vec: dict) -> dict:
        """Image in this operad of a ``V``-vector: ``g`` on the ``U``-part plus generators."""
        F = self.field
        u, coef = cell.decompose(idx, vec)
        out = {}
        for r, v in u.items():
            lin_add(F, out, cell.g(idx, r), v)
        for c, v in coef.items():
            lin_add(F, out, self.generator((cell.number, idx, c)), v)
        return out

    # basis --------------------------------------------------------------------------------
    def _basis(self, n):
        O = self.base_op
        by_arity = {}
        for gid, k in self.gens.items():
            by_arity.setdefault(k, []).append(gid)
        even = sorted(by_arity)
        top_t = (n - 1 if n >= 1 else 0) if self.exact else self.t_max
        if not even:
            top_t = 0
        out = {}
        chain = self.kind == "chain"
        for t in range(0, top_t + 1):
            odd_ok = [k for k in range(0, n + t * (max(even, default=0) + 1) + 2)
                      if (k > O.arity_bound and not O.bounded_support) or (k <= O.arity_bound and O.basis(k))]
            for shape in enumerate_leveled_trees(n, t, even, odd_ok):
                verts = _shape_vertices(shape)
                for colour, k in verts:
                    if colour == "o" and k > O.arity_bound:
                        raise TruncationError(f"odd vertex of arity {k} exceeds the base bound {O.arity_bound}")
                levels = [None] if chain else range(self.base.s_max + 1)
                for s in levels:
                    choices = []
                    for colour, k in verts:
                        if colour == "o":
                            B = O.basis(k)
                            choices.append([x for ks in B.values() for x in ks] if chain else B.get(s, []))
                        else:
                            gs = by_arity.get(k, [])
                            choices.append(gs if chain else [g for g in gs if g[1] == s])
                    for labs in product(*choices):
                        tree = _decorate_leveled(shape, labs)
                        if self.t_max is not None and self.tree_weight(tree) > self.t_max:
                            continue
                        idx = sum(self._deg(ODD if c == "o" else GEN, l) for (c, _), l in zip(verts, labs)) if chain else s
                        out.setdefault(idx, []).append((idx, tree))
        return out

    def layer_of(self, key, cells) -> int:
        return count_generators(key[1], cells)

    # operations ---------------------------------------------------------------------------
    def unit(self, idx=0):
        return self._normalize(LEAF, idx)

    def compose(self, p, i, q, a, b):
        if p + q - 1 > self.arity_bound:
            raise TruncationError(f"composite arity {p + q - 1} exceeds {self.arity_bound}")
        ia, ta = a
        ib, tb = b
        if self.kind == "chain":
            idx = ia + ib
        else:
            if ia != ib:
                raise ValueError("levels differ")
            idx = ia
        ga, gb = _general(ta, 0), _general(tb, 1)
        return self._normalize(_graft_general(ga, i, gb), idx)

    def act(self, n, key, op):
        F = self.field
        idx, tree = key
        labels = _labels(tree)
        t = op_target_index(op, idx)
        out = {}
        if self.kind == "chain":
            before = 0
            for v, (kind, lab) in enumerate(labels):
                sgn = F.neg(F.one) if before % 2 else F.one
                if kind == ODD:
                    k = _arity_at(tree, v)
                    for nl, c in self.base_op.act(k, lab, "d").items():
                        g = _general(tree, 0, {v: ("label", nl)})
                        lin_add(F, out, self._normalize(g, t), F.mul(sgn, c))
                else:
                    for (ti, st), c in self.generator_image(lab, "d").items():
                        g = _general(tree, 0, {v: ("tree", st)})
                        lin_add(F, out, self._normalize(g, t), F.mul(sgn, c))
                before += self._deg(kind, lab)
            return out
        opts = []
        for v, (kind, lab) in enumerate(labels):
            if kind == ODD:
                k = _arity_at(tree, v)
                opts.append([(("label", nl), c) for nl, c in self.base_op.act(k, lab, op).items()])
            else:
                opts.append([(("tree", st), c) for (_, st), c in self.generator_image(lab, op).items()])
        if not labels:
            return self.unit(t)
        for combo in product(*opts):
            c = F.one
            for _, x in combo:
                c = F.mul(c, x)
            g = _general(tree, 0, {v: rep for v, (rep, _) in enumerate(combo)})
            lin_add(F, out, self._normalize(g, t), c)
        return out

    # normalisation ------------------------------------------------------------------------
    def _normalize(self, root, idx) -> dict:
        """Normal form of a general tree: contract odd clusters, insert units, sign."""
        F = self.field
        O = self.base_op
        uidx = 0 if self.kind == "chain" else idx
        unit = list(O.unit(uidx).items())
        order = []

        def odd(node):
            ext = []

            def ev(nd):
                order.append((nd[2], self._deg(ODD, nd[1])))
                kids = []
                for c in nd[3]:
                    if c == LEAF or c[0] == GEN:
                        ext.append(c)
                        kids.append(None)
                    else:
                        kids.append(ev(c))
                return plug_children(O, {nd[1]: F.one}, len(nd[3]), kids)

            val, _ = ev(node)
            kid_opts = [[(LEAF, F.one)] if c == LEAF else even(c) for c in ext]
            return _assemble(ODD, list(val.items()), kid_opts)

        def even(node):
            order.append((node[2], self._deg(GEN, node[1])))
            kid_opts = []
            for c in node[3]:
                if c == LEAF:
                    kid_opts.append(_assemble(ODD, unit, [[(LEAF, F.one)]]))
                elif c[0] == GEN:
                    kid_opts.append(_assemble(ODD, unit, [even(c)]))
                else:
                    kid_opts.append(odd(c))
            return _assemble(GEN, [(node[1], F.one)], kid_opts)

        def _assemble(kind, label_opts, kid_opts):
            res = []
            for combo in product(*kid_opts):
                c0 = F.one
                for _, c in combo:
                    c0 = F.mul(c0, c)
                kids = tuple(t for t, _ in combo)
                for lab, c in label_opts:
                    res.append(((kind, lab, kids), F.mul(c0, c)))
            return res

        if root == LEAF:
            terms = _assemble(ODD, unit, [[(LEAF, F.one)]])
        elif root[0] == GEN:
            terms = _assemble(ODD, unit, [even(root)])
        else:
            terms = odd(root)
        sgn = F.one
        if self.kind == "chain":
            odds = [s for s, d in order if d % 2]
            inv = sum(1 for a in range(len(odds)) for b in range(a + 1, len(odds)) if odds[a] > odds[b])
            if inv % 2:
                sgn = F.neg(F.one)
        out = {}
        for tree, c in terms:
            lin_add(F, out, {(idx, tree): F.mul(sgn, c)})
        return out

    # helpers --------------------------------------------------------------------------------
    def from_base(self, n, key) -> dict:
        """Image of a basis key of ``base_op`` as a corolla."""
        return {(self.base_op.key_index(key), (ODD, key, (LEAF,) * n)): self.field.one}

    def base_inclusion(self) -> OperadMorphism:
        return OperadMorphism(self.base_op, self, self.from_base, "incl")

    def restrict_cells(self, k) -> "CellOperad":
        """The stage with only the first ``k`` cells."""
        return CellOperad(self.base_op, self.cells[:k], self.t_max, self.name)


def _ops_of(X, idx):
    if hasattr(X, "s_max"):
        out = [("d", i) for i in range(idx + 1)] if idx >= 1 else []
        if idx < X.s_max:
            out += [("s", i) for i in range(idx + 1)]
        return out
    return ["d"]


def _op_matrix(X, idx, op):
    if op == "d":
        return X.d(idx)
    return X.d(idx, op[1]) if op[0] == "d" else X.s(idx, op[1])


def _shape_vertices(shape):
    if shape == LEAF:
        return []
    out = [(shape[0], len(shape[1]))]
    for c in shape[1]:
        out.extend(_shape_vertices(c))
    return out


def _decorate_leveled(shape, labels):
    it = iter(labels)

    def go(node):
        if node == LEAF:
            return LEAF
        lab = next(it)
        kind = ODD if node[0] == "o" else GEN
        return (kind, lab, tuple(go(c) for c in node[1]))
    return go(shape)


def _arity_at(tree, v):
    count = [0]
    found = [None]

    def go(node):
        if node == LEAF or found[0] is not None:
            return
        if count[0] == v:
            found[0] = len(node[2])
        count[0] += 1
        for c in node[2]:
            go(c)
    go(tree)
    return found[0]


# maps out of cellular operads -----------------------------------------------------------------

def extend_morphism(P: CellOperad, base_map: OperadMorphism, gen_images: dict, target: Operad = None) -> OperadMorphism:
    """Operad map out of ``P`` fixed by a map on ``P.base_op`` and images of generators.

    Missing generators go to zero. The result is only a morphism when the images
    are compatible with the structure maps; ``check_morphism`` verifies that.
    """
    R = target if target is not None else base_map.target
    F = P.field

    def fn(n, key):
        idx, tree = key
        labels = _labels(tree)
        shape = _planar(tree)
        opts = []
        for v, (kind, lab) in enumerate(labels):
            k = _arity_at(tree, v)
            img = base_map(k, lab) if kind == ODD else gen_images.get(lab, {})
            if not img:
                return {}
            opts.append(list(img.items()))
        out = {}
        for combo in product(*opts):
            c = F.one
            for _, x in combo:
                c = F.mul(c, x)
            lin_add(F, out, evaluate_tree(R, shape, [k for k, _ in combo]), c)
        return out

    return OperadMorphism(P, R, fn, "extended")


# pushouts along free maps ------------------------------------------------------------------------

def attaching_from_map(o: Operad, g_map, arity):
    """Wrap a base-category map ``U -> o(arity)`` as ``g(idx, j) -> element``."""
    keys = o.basis(arity)

    def g(idx, j):
        col = g_map[idx].column(j)
        return {keys[idx][r]: v for r, v in col.items()}
    return g


def pushout_along_free(o: Operad, f: dict, g: dict, t_max=None, verify=False):
    """Pushout of ``o <- F(U) -> F(V)`` along cells ``f[k]: U(k) -> V(k)``.

    ``g[k](idx, j)`` gives the attaching image of a ``U(k)`` basis vector as an
    element of ``o``. Returns ``(P, f_prime, ledger)``.
    """
    if isinstance(o, CellOperad):
        P, lift = o, (lambda k, elem: elem)
    else:
        P = CellOperad(o, (), t_max)
        lift = (lambda k, elem: _lift_base(P, k, elem))
    if t_max is not None:
        P = CellOperad(P.base_op, P.cells, t_max, P.name)
    start = len(P.cells)
    for k in sorted(f):
        fk = f[k]
        gk = g[k]
        P = P.attach(k, fk, (lambda idx, j, gk=gk, k=k: lift(k, gk(idx, j))))
    new_cells = set(range(start, len(P.cells)))
    if isinstance(o, CellOperad):
        fprime = OperadMorphism(o, P, lambda n, key: {key: o.field.one}, "f'")
    else:
        fprime = OperadMorphism(o, P, P.from_base, "f'")
    ledger = FiltrationLedger(o, P, new_cells, f)
    if verify:
        ledger.verify_layers()
    return P, fprime, ledger


def _lift_base(P, k, elem):
    out = {}
    for key, c in elem.items():
        lin_add(P.field, out, P.from_base(k, key), c)
    return out


def _tree_text(T):
    """Leveled tree as text: ``o(e(|,|),|)`` with ``|`` a leaf."""
    if T == LEAF:
        return "|"
    return T[0] + "(" + ",".join(_tree_text(c) for c in T[1]) + ")"


def _dims_text(d):
    return ";".join(f"{i}:{v}" for i, v in sorted(d.items()) if v)


class FiltrationLedger:
    """Layer-by-layer account of a pushout along free cells.

    Layer ``t`` of arity ``n`` holds the normal trees with exactly ``t`` new
    generators. Its predicted size is the sum over leveled trees with ``t`` even
    vertices of (complement dims on even vertices) x (old operad dims on odd ones).
    """

    def __init__(self, old: Operad, new: CellOperad, new_cells: set, f: dict):
        self.old, self.new, self.new_cells, self.f = old, new, set(new_cells), f
        self.kind = new.kind
        self.rows = {}
        self.verified = {}
        for n in range(new.arity_bound + 1):
            self.rows[n] = self._arity_rows(n)

    def _cokernel_dims(self):
        out = {}
        for c in self.new_cells:
            cell = self.new.cells[c]
            out.setdefault(cell.arity, {})
            for idx, comp in cell.comp.items():
                if comp:
                    out[cell.arity][idx] = out[cell.arity].get(idx, 0) + len(comp)
        return out

    def _arity_rows(self, n):
        W = self._cokernel_dims()
        old_dims = {k: {i: len(ks) for i, ks in self.old.basis(k).items()} for k in range(self.old.arity_bound + 1)}
        actual = {}
        for idx, keys in self.new.basis(n).items():
            for key in keys:
                t = self.new.layer_of(key, self.new_cells)
                actual.setdefault(t, {})
                actual[t][idx] = actual[t].get(idx, 0) + 1
        even = sorted(k for k, d in W.items() if d)
        layers = []
        top = max(actual) if actual else 0
        for t in range(0, top + 1):
            trees, predicted = [], {}
            if t == 0:
                predicted = dict(old_dims.get(n, {}))
                trees = [("o", ("L",) * n)]
            elif even:
                odd_ok = [k for k, d in old_dims.items() if d]
                for T in enumerate_leveled_trees(n, t, even, odd_ok):
                    dims = self._tree_dims(T, W, old_dims)
                    if dims:
                        trees.append(T)
                        for i, v in dims.items():
                            predicted[i] = predicted.get(i, 0) + v
            layers.append({"t": t, "trees": trees, "cokernel_dims": {i: v for i, v in predicted.items() if v},
                           "actual_dims": actual.get(t, {})})
        return layers

    def _tree_dims(self, T, W, old_dims):
        if self.kind == "chain":
            return tree_degree_and_dims(T, W, old_dims)
        # levels: every vertex decorated at the same level, so multiply per level
        out = {}
        for s in range(self.new.base.s_max + 1):
            prod = tree_degree_and_dims(T, {k: {0: d.get(s, 0)} for k, d in W.items()},
                                        {k: {0: d.get(s, 0)} for k, d in old_dims.items()})
            if prod.get(0):
                out[s] = prod[0]
        return out

    def identity_holds(self, n=None) -> bool:
        """``dim P(n) - dim O(n) = sum over t >= 1 of the predicted layer dims``, per index."""
        ns = range(self.new.arity_bound + 1) if n is None else [n]
        for m in ns:
            new = {i: len(ks) for i, ks in self.new.basis(m).items()}
            old = {i: len(ks) for i, ks in self.old.basis(m).items()}
            pred = {}
            for layer in self.rows[m]:
                if layer["t"] >= 1:
                    for i, v in layer["cokernel_dims"].items():
                        pred[i] = pred.get(i, 0) + v
            diff = {i: new.get(i, 0) - old.get(i, 0) for i in set(new) | set(old)}
            diff = {i: v for i, v in diff.items() if v}
            if diff != pred:
                return False
            for layer in self.rows[m]:
                if layer["t"] >= 1 and layer["cokernel_dims"] != layer["actual_dims"]:
                    return False
        return True

    def csv_rows(self):
        rows = []
        for n, layers in self.rows.items():
            for layer in layers:
                if layer["t"] == 0:
                    continue
                for T in layer["trees"]:
                    dims = self._tree_dims(T, self._cokernel_dims(), {k: {i: len(ks) for i, ks in self.old.basis(k).items()} for k in range(self.old.arity_bound + 1)})
                    rows.append({"arity": n, "layer": layer["t"], "tree": _tree_text(T),
                                 "cokernel_dims": _dims_text(dims)})
            new = sum(len(ks) for ks in self.new.basis(n).values())
            old = sum(len(ks) for ks in self.old.basis(n).values())
            total = sum(sum(l["cokernel_dims"].values()) for l in layers if l["t"] >= 1)
            rows.append({"arity": n, "layer": "total", "tree": f"dim_new-dim_old={new - old}",
                         "cokernel_dims": str(total)})
        return rows

    def to_json(self):
        out = []
        for n, layers in self.rows.items():
            out.append({"arity": n, "layers": [
                {"t": l["t"], "trees": [_tree_text(T) for T in l["trees"]],
                 "cokernel_dims": {str(i): v for i, v in l["cokernel_dims"].items()}}
                for l in layers if l["t"] >= 1]})
        return out

    # layer pushouts in the base category ----------------------------------------------------
    def verify_layers(self, arities=None):
        """Realise each layer as a pushout of complexes and compare with the flat operad.

        For every arity ``n`` and ``t >= 1``: ``P_t = P_(t-1) +_(L_src) L_tgt`` where
        ``L_tgt`` is the sum over layer trees of the tensor of old components (odd
        vertices) and cell targets (even vertices), and ``L_src`` the part with some
        even vertex in the cell source. The mediating map into the flat ``P_t`` must be
        an isomorphism. Chain base only.
        """
        if self.kind != "chain":
            raise NotImplementedError("layer pushouts are realised for the chain base")
        ns = range(self.new.arity_bound + 1) if arities is None else arities
        for n in ns:
            for layer in self.rows[n]:
                t = layer["t"]
                if t == 0:
                    continue
                self.verified[(n, t)] = self._verify_layer(n, t, layer["trees"])
        return all(self.verified.values())

    def _filtered(self, n, t):
        P = self.new
        F = P.field
        keys = {i: [k for k in ks if P.layer_of(k, self.new_cells) <= t] for i, ks in P.basis(n).items()}
        pos = {k: j for ks in keys.values() for j, k in enumerate(ks)}
        degs = sorted(keys) or [0]
        lo, hi = min(degs + [0]), max(degs + [0])
        dims = {d: len(keys.get(d, [])) for d in range(lo, hi + 1)}
        diff = {}
        for d in range(lo + 1, hi + 1):
            cols = []
            for k in keys.get(d, []):
                img = P.act(n, k, "d")
                if any(x not in pos for x in img):
                    raise ArithmeticError("filtration is not a subcomplex")
                cols.append({pos[x]: v for x, v in img.items()})
            diff[d] = Matrix.from_columns(F, dims[d - 1], cols)
        return ch.ChainComplex(F, (lo, hi), dims, diff), keys, pos

    def _verify_layer(self, n, t, trees):
        P = self.new
        F = P.field
        Pt, keys_t, pos_t = self._filtered(n, t)
        Pp, keys_p, pos_p = self._filtered(n, t - 1)
        incl = ch.ChainMap(Pp, Pt, {d: Matrix.from_columns(F, Pt.dim(d), [{pos_t[k]: F.one} for k in keys_p.get(d, [])]) for d in Pp.degrees()})
        if not trees:
            return all(incl[d].is_injective() and incl[d].rows == incl[d].cols for d in Pp.degrees()) and Pt.graded_dims() == Pp.graded_dims()
        blocks_tgt, alphas, srcs = [], [], []
        for T in trees:
            X, basis, factors = self._tree_tensor(T)
            alpha = self._alpha(n, T, X, basis, factors, Pt, pos_t)
            S, s_incl = self._source_part(T, X, factors)
            blocks_tgt.append(X)
            alphas.append(alpha)
            srcs.append((S, s_incl))
        Ltgt, inj = ch.sum_injections(blocks_tgt)
        Lsrc, inj_s = ch.sum_injections([s for s, _ in srcs])
        a_tot = _hcat(F, Ltgt, Pt, alphas)
        src_incl = _blockdiag_map(F, Lsrc, Ltgt, [m for _, m in srcs], [s for s, _ in srcs], blocks_tgt)
        a_src = a_tot @ src_incl
        # the attaching part lands in P_(t-1)
        to_prev = {}
        for d in Lsrc.degrees():
            m = a_src[d]
            rev = {pos_t[k]: pos_p[k] for k in keys_p.get(d, [])}
            cols = []
            for j in range(m.cols):
                col = m.column(j)
                if any(r not in rev for r in col):
                    return False
                cols.append({rev[r]: v for r, v in col.items()})
            to_prev[d] = Matrix.from_columns(F, Pp.dim(d), cols)
        a_prev = ch.ChainMap(Lsrc, Pp, to_prev)
        po = ch.pushout(a_prev, src_incl)
        med = po.mediator(incl, a_tot)
        return all(med[d].rows == med[d].cols and med[d].is_injective() for d in _degrees(po.object, Pt))

    def _tree_tensor(self, T):
        """Tensor of vertex factors in preorder, with the basis tuples of each degree."""
        old = self.old
        cells = {self.new.cells[c].arity: self.new.cells[c] for c in self.new_cells}
        factors = []
        for colour, k in _shape_vertices(T):
            if colour == "o":
                factors.append(("o", k, old.component(k)))
            else:
                factors.append(("e", k, cells[k].target))
        X = factors[0][2]
        basis = {d: [((d, j),) for j in range(X.dim(d))] for d in X.degrees()}
        for _, _, Y in factors[1:]:
            nb = {}
            Z = ch.tensor(X, Y)
            for d in Z.degrees():
                lst = []
                for i, off, da, db in ch.tensor_blocks(X, Y, d):
                    for a in basis[i]:
                        for jb in range(db):
                            lst.append(a + ((d - i, jb),))
                nb[d] = lst
            X, basis = Z, nb
        return X, basis, factors

    def _alpha(self, n, T, X, basis, factors, Pt, pos_t):
        P = self.new
        F = P.field
        cells = {self.new.cells[c].arity: self.new.cells[c] for c in self.new_cells}
        old_keys = {k: self.old.basis(k) for _, k, _ in factors}
        comps = {}
        for d in X.degrees():
            cols = []
            for tup in basis[d]:
                opts = []
                for (colour, k, _), (i, j) in zip(factors, tup):
                    if colour == "o":
                        key = old_keys[k][i][j]
                        el = {key: F.one} if isinstance(self.old, CellOperad) else P.from_base(k, key)
                    else:
                        el = P.cell_value(cells[k], i, {j: F.one})
                    opts.append(list(el.items()))
                col = {}
                for combo in product(*opts):
                    c = F.one
                    for _, x in combo:
                        c = F.mul(c, x)
                    trees = [tk[1] for tk, _ in combo]
                    gen = _substitute_shape(T, trees)
                    lin_add(F, col, P._normalize(gen, d), c)
                if any(k not in pos_t for k in col):
                    raise ArithmeticError("layer map leaves the filtration stage")
                cols.append({pos_t[k]: v for k, v in col.items()})
            comps[d] = Matrix.from_columns(F, Pt.dim(d), cols)
        return ch.ChainMap(X, Pt, comps)

    def _source_part(self, T, X, factors):
        """Span of the tensors with some even factor in the cell source."""
        F = X.field
        cells = {self.new.cells[c].arity: self.new.cells[c] for c in self.new_cells}
        images = []
        for e, (colour, k, _) in enumerate(factors):
            if colour != "e":
                continue
            m = None
            for e2, (c2, k2, Y) in enumerate(factors):
                piece = cells[k2].f if e2 == e else Y.identity()
                m = piece if m is None else ch.tensor_map(m, piece)
            images.append(m)
        return _image_subcomplex(F, X, images)


def _substitute_shape(T, trees):
    """General tree: leveled shape ``T`` with each vertex replaced by a normal tree."""
    it = iter(enumerate(trees))

    def go(node):
        if node == LEAF:
            return LEAF
        v, tr = next(it)
        kids = [go(c) for c in node[1]]
        return _splice(tr, (v,), kids)
    return go(T)


def _image_subcomplex(F, X, maps):
    """Sum of the images of chain maps into ``X``, as a complex with its inclusion."""
    cols, dims = {}, {}
    for d in X.degrees():
        vecs = []
        for m in maps:
            if d in m.comps:
                vecs.extend(m[d].columns())
        if vecs:
            M = Matrix.from_columns(F, X.dim(d), vecs)
            pivots = _col_pivots(M)
            basis = [vecs[p] for p in pivots]
        else:
            basis = []
        cols[d] = Matrix.from_columns(F, X.dim(d), basis)
        dims[d] = len(basis)
    diff = {}
    for d in range(X.lo + 1, X.hi + 1):
        if not dims[d]:
            continue
        img = X.d(d) @ cols[d]
        x, _ = solve(cols[d - 1], img) if dims[d - 1] else (Matrix.zeros(F, 0, dims[d]), None)
        if x is None:
            raise ArithmeticError("image is not a subcomplex")
        diff[d] = x
    S = ch.ChainComplex(F, X.window, dims, diff)
    return S, ch.ChainMap(S, X, cols)


def _col_pivots(M):
    """Indices of a maximal independent set of columns (greedy, left to right)."""
    from .exactla import rank
    chosen = []
    cur = []
    for j, col in enumerate(M.columns()):
        trial = cur + [col]
        if rank(Matrix.from_columns(M.field, M.rows, trial)) > len(cur):
            cur = trial
            chosen.append(j)
    return chosen


def _hcat(F, S, T, maps):
    comps = {}
    for d in S.degrees():
        comps[d] = Matrix.hstack(F, T.dim(d), [m[d] if d in m.comps else Matrix.zeros(F, T.dim(d), m.source.dim(d)) for m in maps])
    return ch.ChainMap(S, T, comps)


def _blockdiag_map(F, S, T, maps, sources, targets):
    comps = {}
    for d in S.degrees():
        blocks = [m[d] if d in m.comps else Matrix.zeros(F, t.dim(d), s.dim(d)) for m, s, t in zip(maps, sources, targets)]
        comps[d] = Matrix.block_diag(F, blocks)
    return ch.ChainMap(S, T, comps)


def _degrees(a, b):
    return range(min(a.lo, b.lo), max(a.hi, b.hi) + 1)


# universal property -----------------------------------------------------------------------------

def mediator_is_unique(P: CellOperad, m: OperadMorphism, new_cells, arities=None) -> bool:
    """Uniqueness of a mediating map, by a linear solve.

    Two mediators that agree on the old operad and on the new generators differ by a
    linear ``delta`` with ``delta(x o_i y) = delta(x) o_i m(y) + m(x) o_i delta(y)``,
    vanishing on old basis elements and generators. The system has only the zero
    solution iff the mediator is unique.
    """
    R = m.target
    F = P.field
    N = P.arity_bound if arities is None else max(arities)
    var = {}
    for n in range(N + 1):
        for idx, keys in P.basis(n).items():
            rk = R.basis(n).get(idx, [])
            for k in keys:
                for r in rk:
                    var[(n, k, r)] = len(var)
    if not var:
        return True
    eqs = []

    def vanish(n, elem):
        if not elem:
            return
        idx = P.key_index(next(iter(elem)))
        for r in R.basis(n).get(idx, []):
            row = {var[(n, k, r)]: c for k, c in elem.items() if (n, k, r) in var}
            if row:
                eqs.append(row)

    for n in range(N + 1):
        for keys in P.base_op.basis(n).values():
            for k in keys:
                vanish(n, P.from_base(n, k))
    for gid, k in P.gens.items():
        if k <= N:
            vanish(k, P.generator(gid))
    for p in range(1, N + 1):
        for q in range(0, N + 2 - p):
            n = p + q - 1
            for x, y in _pairs(P, p, q):
                idx = x[0] + y[0] if P.kind == "chain" else x[0]
                targets = R.basis(n).get(idx, [])
                if not targets:
                    continue
                mx, my = m(p, x), m(q, y)
                for i in range(1, p + 1):
                    xy = P.compose(p, i, q, x, y)
                    left = {rx: R.compose_elems(p, i, q, {rx: F.one}, my) for rx in R.basis(p).get(x[0], [])}
                    right = {ry: R.compose_elems(p, i, q, mx, {ry: F.one}) for ry in R.basis(q).get(y[0], [])}
                    for r in targets:
                        row = {}
                        for k, c in xy.items():
                            j = var[(n, k, r)]
                            row[j] = F.add(row.get(j, F.zero), c)
                        for rx, img in left.items():
                            c = img.get(r)
                            if c is not None:
                                j = var[(p, x, rx)]
                                row[j] = F.sub(row.get(j, F.zero), c)
                        for ry, img in right.items():
                            c = img.get(r)
                            if c is not None:
                                j = var[(q, y, ry)]
                                row[j] = F.sub(row.get(j, F.zero), c)
                        row = {j: v for j, v in row.items() if not F.is_zero(v)}
                        if row:
                            eqs.append(row)
    A = Matrix(F, len(eqs), len(var), eqs)
    return nullspace(A).cols == 0
