"""Bounded chain complexes of finite-dimensional vector spaces over an exact field.

Conventions: the differential lowers degree; ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``;
the basis of ``(A (x) B)_n`` lists the blocks ``A_i (x) B_{n-i}`` by ascending ``i``,
row-major inside each block.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations

from .exactla import Field, Matrix, QQ, TruncationError, nullspace, quotient_basis, complement_coordinates, solve

__all__ = [
    "ChainComplex", "ChainMap", "PushoutResult", "tensor", "tensor_map", "symmetry",
    "direct_sum", "pushout", "colimit_over_punctured_cube", "pushout_product",
    "iterated_pushout_product", "homology", "induced_homology_map", "is_cofibration",
    "is_fibration", "is_weak_equivalence", "generating_cofibrations", "sphere", "disk",
    "unit_complex", "zero_complex",
]


class ChainComplex:
    """A chain complex concentrated in the degree window ``[lo, hi]``."""

    def __init__(self, field: Field, window, dims: dict, diff: dict | None = None, check=True):
        lo, hi = window
        if lo > hi:
            raise ValueError(f"empty window {window}")
        self.field = field
        self.lo, self.hi = lo, hi
        self.dims = {d: int(dims.get(d, 0)) for d in range(lo, hi + 1)}
        for d, n in dims.items():
            if n and not lo <= d <= hi:
                raise TruncationError(f"degree {d} lies outside window [{lo}, {hi}]")
        self.diff = {}
        for d in range(lo + 1, hi + 1):
            m = (diff or {}).get(d)
            if m is None:
                m = Matrix.zeros(field, self.dims[d - 1], self.dims[d])
            if m.shape != (self.dims[d - 1], self.dims[d]):
                raise ValueError(f"differential in degree {d} has shape {m.shape}")
            self.diff[d] = m
        if check:
            bad = self.d_squared_violations()
            if bad:
                raise ValueError(f"d^2 != 0 in degree(s) {bad}")

    @property
    def window(self):
        return (self.lo, self.hi)

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    def d(self, d: int) -> Matrix:
        """Differential C_d -> C_{d-1} (a zero matrix outside the window)."""
        m = self.diff.get(d)
        return m if m is not None else Matrix.zeros(self.field, self.dim(d - 1), self.dim(d))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in self.dims.items())

    def d_squared_violations(self):
        return [d for d in range(self.lo + 2, self.hi + 1) if not (self.diff[d - 1] @ self.diff[d]).is_zero()]

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def graded_dims(self) -> dict:
        return {d: n for d, n in self.dims.items() if n}

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, {d: Matrix.identity(self.field, n) for d, n in self.dims.items()})

    def truncate(self, hi: int) -> "ChainComplex":
        """Brutal truncation: keep degrees <= hi (a subcomplex)."""
        hi = max(hi, self.lo)
        return ChainComplex(self.field, (self.lo, hi), {d: n for d, n in self.dims.items() if d <= hi},
                            {d: m for d, m in self.diff.items() if d <= hi}, check=False)

    def rewindow(self, window) -> "ChainComplex":
        return ChainComplex(self.field, window, self.graded_dims(), {d: m for d, m in self.diff.items() if window[0] < d <= window[1]})

    def __eq__(self, other):
        return (isinstance(other, ChainComplex) and self.field == other.field
                and self.graded_dims() == other.graded_dims()
                and all(self.d(d) == other.d(d) for d in range(min(self.lo, other.lo), max(self.hi, other.hi) + 1)))

    def __hash__(self):
        return hash(tuple(sorted(self.graded_dims().items())))

    def __repr__(self):
        return f"ChainComplex({self.field.tag}, {list(self.window)}, dims={self.graded_dims()})"

    @cached_property
    def _homology(self):
        return {d: _homology_data(self, d) for d in self.degrees()}

    # serialization ---------------------------------------------------------------------
    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.tag,
            "window": [self.lo, self.hi],
            "dims": {str(d): n for d, n in self.dims.items()},
            "diff": {str(d): [f.format(x) for x in m.entries] for d, m in self.diff.items() if m.rows and m.cols},
        }

    @classmethod
    def from_json(cls, obj: dict, check=True) -> "ChainComplex":
        f = Field.from_tag(obj["field"])
        lo, hi = obj["window"]
        dims = {int(d): int(n) for d, n in obj["dims"].items()}
        diff = {}
        for d, entries in obj.get("diff", {}).items():
            d = int(d)
            diff[d] = Matrix.from_entries(f, dims.get(d - 1, 0), dims.get(d, 0), [f.parse(str(x)) for x in entries])
        return cls(f, (lo, hi), dims, diff, check=check)


class ChainMap:
    """Degree-preserving chain map; ``comps[d]`` has shape (target_d, source_d)."""

    def __init__(self, source: ChainComplex, target: ChainComplex, comps: dict, check=True):
        if source.field != target.field:
            raise ValueError("field mismatch")
        self.source, self.target = source, target
        self.field = source.field
        self.comps = {}
        for d in _union(source, target):
            m = comps.get(d)
            if m is None:
                m = Matrix.zeros(self.field, target.dim(d), source.dim(d))
            if m.shape != (target.dim(d), source.dim(d)):
                raise ValueError(f"component in degree {d} has shape {m.shape}")
            self.comps[d] = m
        if check:
            bad = self.commutation_violations()
            if bad:
                raise ValueError(f"not a chain map in degree(s) {bad}")

    def __getitem__(self, d) -> Matrix:
        m = self.comps.get(d)
        return m if m is not None else Matrix.zeros(self.field, self.target.dim(d), self.source.dim(d))

    def commutation_violations(self):
        return [d for d in self.comps if self.target.d(d) @ self[d] != self[d - 1] @ self.source.d(d)]

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target, {d: self[d] @ other[d] for d in _union(other.source, self.target)}, check=False)

    def __add__(self, other):
        return ChainMap(self.source, self.target, {d: self[d] + other[d] for d in self.comps}, check=False)

    def __neg__(self):
        return ChainMap(self.source, self.target, {d: -m for d, m in self.comps.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, ChainMap) and all(self[d] == other[d] for d in set(self.comps) | set(other.comps))

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"

    def is_zero(self):
        return all(m.is_zero() for m in self.comps.values())

    def to_json(self) -> dict:
        f = self.field
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": {str(d): [f.format(x) for x in m.entries] for d, m in self.comps.items() if m.rows and m.cols},
        }

    @classmethod
    def from_json(cls, obj) -> "ChainMap":
        s, t = ChainComplex.from_json(obj["source"]), ChainComplex.from_json(obj["target"])
        f = s.field
        comps = {int(d): Matrix.from_entries(f, t.dim(int(d)), s.dim(int(d)), [f.parse(str(x)) for x in e])
                 for d, e in obj["components"].items()}
        return cls(s, t, comps)


def _union(*cs):
    return range(min(c.lo for c in cs), max(c.hi for c in cs) + 1)


# standard objects -----------------------------------------------------------------------

def zero_complex(field=QQ, window=(0, 0)) -> ChainComplex:
    return ChainComplex(field, window, {})


def unit_complex(field=QQ, window=(0, 0)) -> ChainComplex:
    """The tensor unit: the ground field in degree 0."""
    return ChainComplex(field, window, {0: 1})


def sphere(d: int, field=QQ, window=None) -> ChainComplex:
    """The field in degree ``d``."""
    window = window or (d, d)
    if not window[0] <= d <= window[1]:
        return ChainComplex(field, window, {})
    return ChainComplex(field, window, {d: 1})


def disk(d: int, field=QQ, window=None) -> ChainComplex:
    """The field in degrees ``d`` and ``d-1`` joined by the identity; cut at the window."""
    window = window or (d - 1, d)
    lo, hi = window
    dims = {k: 1 for k in (d - 1, d) if lo <= k <= hi}
    diff = {d: Matrix.identity(field, 1)} if d - 1 >= lo and d <= hi else {}
    return ChainComplex(field, window, dims, diff)


def sphere_into_disk(d: int, field=QQ, window=None) -> ChainMap:
    D = disk(d, field, window)
    S = sphere(d - 1, field, D.window)
    comps = {d - 1: Matrix.identity(field, 1)} if S.dim(d - 1) and D.dim(d - 1) else {}
    return ChainMap(S, D, comps)


def zero_into(c: ChainComplex) -> ChainMap:
    return ChainMap(zero_complex(c.field, c.window), c, {})


# tensor structure -------------------------------------------------------------------------

def tensor_blocks(a: ChainComplex, b: ChainComplex, n: int):
    """Block layout of degree ``n`` of ``a (x) b``: list of (i, offset, dim_a_i, dim_b_{n-i})."""
    out, off = [], 0
    for i in range(a.lo, a.hi + 1):
        j = n - i
        da, db = a.dim(i), b.dim(j)
        if da and db:
            out.append((i, off, da, db))
            off += da * db
    return out


def tensor(a: ChainComplex, b: ChainComplex, window=None) -> ChainComplex:
    if a.field != b.field:
        raise ValueError("field mismatch")
    F = a.field
    lo, hi = a.lo + b.lo, a.hi + b.hi
    dims = {n: sum(da * db for _, _, da, db in tensor_blocks(a, b, n)) for n in range(lo, hi + 1)}
    if window is not None:
        for n, k in dims.items():
            if k and not window[0] <= n <= window[1]:
                raise TruncationError(f"tensor product has degree {n} outside window {window}")
    diff = {}
    for n in range(lo + 1, hi + 1):
        rows = dims[n - 1]
        tgt = {i: (off, da, db) for i, off, da, db in tensor_blocks(a, b, n - 1)}
        data = [dict() for _ in range(rows)]
        for i, off, da, db in tensor_blocks(a, b, n):
            j = n - i
            # dx (x) y lands in block (i-1, j)
            if (i - 1) in tgt:
                toff, tda, tdb = tgt[i - 1]
                blk = a.d(i).kron(Matrix.identity(F, db))
                _paste(data, blk, toff, off)
            # (-1)^i x (x) dy lands in block (i, j-1)
            if i in tgt:
                toff, tda, tdb = tgt[i]
                blk = Matrix.identity(F, da).kron(b.d(j))
                if i % 2:
                    blk = -blk
                _paste(data, blk, toff, off)
        diff[n] = Matrix(F, rows, dims[n], data)
    out = ChainComplex(F, (lo, hi), dims, diff, check=False)
    return out.rewindow(window) if window is not None else out


def _paste(data, blk: Matrix, roff, coff):
    for i in range(blk.rows):
        r = blk.row(i)
        if r:
            tgt = data[roff + i]
            for j, v in r.items():
                tgt[coff + j] = v


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f (x) g`` for degree-zero chain maps (no sign arises)."""
    S, T = tensor(f.source, g.source), tensor(f.target, g.target)
    F = f.field
    comps = {}
    for n in T.degrees():
        tgt = {i: off for i, off, _, _ in tensor_blocks(f.target, g.target, n)}
        data = [dict() for _ in range(T.dim(n))]
        for i, off, _, _ in tensor_blocks(f.source, g.source, n):
            if i in tgt:
                _paste(data, f[i].kron(g[n - i]), tgt[i], off)
        comps[n] = Matrix(F, T.dim(n), S.dim(n), data)
    return ChainMap(S, T, comps, check=False)


def symmetry(a: ChainComplex, b: ChainComplex) -> ChainMap:
    """``x (x) y -> (-1)^{|x||y|} y (x) x``."""
    S, T = tensor(a, b), tensor(b, a)
    F = a.field
    comps = {}
    for n in S.degrees():
        tgt = {j: off for j, off, _, _ in tensor_blocks(b, a, n)}
        cols = []
        for i, off, da, db in tensor_blocks(a, b, n):
            j = n - i
            sgn = F.one if (i * j) % 2 == 0 else F.neg(F.one)
            toff = tgt[j]
            for x in range(da):
                for y in range(db):
                    cols.append({toff + y * da + x: sgn})
        comps[n] = Matrix.from_columns(F, T.dim(n), cols)
    return ChainMap(S, T, comps, check=False)


def left_unitor(x: ChainComplex) -> ChainMap:
    """Canonical iso ``1 (x) X -> X``."""
    u = unit_complex(x.field)
    S = tensor(u, x)
    return ChainMap(S, x, {n: Matrix.identity(x.field, x.dim(n)) for n in x.degrees()}, check=False)


def right_unitor(x: ChainComplex) -> ChainMap:
    u = unit_complex(x.field)
    S = tensor(x, u)
    return ChainMap(S, x, {n: Matrix.identity(x.field, x.dim(n)) for n in x.degrees()}, check=False)


def direct_sum(cs) -> ChainComplex:
    cs = list(cs)
    F = cs[0].field
    lo, hi = min(c.lo for c in cs), max(c.hi for c in cs)
    dims = {d: sum(c.dim(d) for c in cs) for d in range(lo, hi + 1)}
    diff = {d: Matrix.block_diag(F, [c.d(d) for c in cs]) for d in range(lo + 1, hi + 1)}
    return ChainComplex(F, (lo, hi), dims, diff, check=False)


def sum_injections(cs):
    """Inclusions of the summands into ``direct_sum(cs)``."""
    total = direct_sum(cs)
    F = total.field
    maps, offs = [], {d: 0 for d in total.degrees()}
    for c in cs:
        comps = {}
        for d in total.degrees():
            k = c.dim(d)
            comps[d] = Matrix(F, total.dim(d), k, [dict() for _ in range(total.dim(d))])
            data = comps[d]._data
            for i in range(k):
                data[offs[d] + i][i] = F.one
            offs[d] += k
        maps.append(ChainMap(c, total, comps, check=False))
    return total, maps


# colimits ---------------------------------------------------------------------------------

class PushoutResult:
    """Pushout of ``Y <-f- X -g-> Z`` computed as ``(Y + Z) / {(f x, -g x)}``."""

    def __init__(self, f: ChainMap, g: ChainMap):
        if f.source is not g.source and (f.source.graded_dims() != g.source.graded_dims()):
            raise ValueError("legs must share their source")
        self.f, self.g = f, g
        Y, Z = f.target, g.target
        F = f.field
        window = (min(Y.lo, Z.lo), max(Y.hi, Z.hi))
        self.proj, self.sect = {}, {}
        dims = {}
        for d in range(window[0], window[1] + 1):
            rel = Matrix.vstack(F, f.source.dim(d), [f[d], -g[d]])
            amb = Y.dim(d) + Z.dim(d)
            pi = quotient_basis(rel, amb)
            comp = complement_coordinates(rel, amb)
            self.proj[d] = pi
            self.sect[d] = Matrix.from_columns(F, amb, [{c: F.one} for c in comp])
            dims[d] = pi.rows
        diff = {}
        for d in range(window[0] + 1, window[1] + 1):
            dd = Matrix.block_diag(F, [Y.d(d), Z.d(d)])
            diff[d] = self.proj[d - 1] @ dd @ self.sect[d]
        self.object = ChainComplex(F, window, dims, diff)
        self.into_left = ChainMap(Y, self.object, {d: self.proj[d] @ _top(F, Y.dim(d), Z.dim(d)) for d in self.object.degrees()})
        self.into_right = ChainMap(Z, self.object, {d: self.proj[d] @ _bottom(F, Y.dim(d), Z.dim(d)) for d in self.object.degrees()})

    def mediator(self, a: ChainMap, b: ChainMap) -> ChainMap:
        """Unique ``m`` with ``m . into_left = a`` and ``m . into_right = b``.

        Raises ValueError when the cocone does not commute or the solution is not unique.
        """
        if a @ self.f != b @ self.g:
            raise ValueError("cocone does not commute")
        F = a.field
        Q = a.target
        comps = {}
        for d in self.object.degrees():
            rhs = Matrix.hstack(F, Q.dim(d), [a[d], b[d]])
            x, null = solve(self.proj[d].transpose(), rhs.transpose())
            if x is None:
                raise ValueError(f"no mediating map in degree {d}")
            if null.cols:
                raise ValueError(f"mediating map not unique in degree {d}")
            comps[d] = x.transpose()
        return ChainMap(self.object, Q, comps)


def _top(F, ny, nz):
    return Matrix(F, ny + nz, ny, [{i: F.one} for i in range(ny)] + [dict() for _ in range(nz)])


def _bottom(F, ny, nz):
    return Matrix(F, ny + nz, nz, [dict() for _ in range(ny)] + [{i: F.one} for i in range(nz)])


def pushout(f: ChainMap, g: ChainMap) -> PushoutResult:
    return PushoutResult(f, g)


def colimit_over_punctured_cube(objects: dict, maps: dict, n: int):
    """Colimit of a diagram indexed by the proper subsets of ``{0..n-1}``.

    ``objects[S]`` is a complex for each frozenset ``S`` other than the full set and
    ``maps[(S, i)]`` is the map ``objects[S] -> objects[S | {i}]``. Returns the colimit
    and the cocone ``{S: map into colimit}``. Computed by iterated pushouts.
    """
    full = frozenset(range(n))
    for S in objects:
        for i, j in combinations(sorted(full - S), 2):
            if S | {i, j} == full:
                continue
            lhs = maps[(S | {i}, j)] @ maps[(S, i)]
            rhs = maps[(S | {j}, i)] @ maps[(S, j)]
            if lhs != rhs:
                raise ValueError(f"diagram not functorial at {sorted(S)} with {i},{j}")
    return _punctured_colimit(objects, maps, tuple(range(n)))


def _punctured_colimit(objects, maps, idx):
    if len(idx) == 1:
        S0 = frozenset()
        c = objects[S0]
        return c, {S0: c.identity()}
    last, rest = idx[-1], idx[:-1]
    top = frozenset(rest)
    # face without the last index, minus its terminal vertex
    sub0 = {S: objects[S] for S in objects if last not in S and S != top}
    map0 = {k: v for k, v in maps.items() if k[0] in sub0 and last not in k[0] | {k[1]} and k[0] | {k[1]} != top}
    c0, cocone0 = _punctured_colimit(sub0, map0, rest)
    # face with the last index (shifted to subsets of rest)
    sub1 = {S - {last}: objects[S] for S in objects if last in S}
    map1 = {(k[0] - {last}, k[1]): v for k, v in maps.items() if last in k[0] and k[1] != last}
    c1, cocone1 = _punctured_colimit(sub1, map1, rest)
    # maps out of c0 into objects[top] and c1, by the universal property of c0
    to_top = _mediate_into(c0, cocone0, sub0, lambda S: _path_to_top(S, maps, top, objects), objects[top])
    to_c1 = _mediate_into(c0, cocone0, sub0, lambda S: cocone1[S] @ maps[(S, last)], c1)
    po = pushout(to_top, to_c1)
    cocone = {}
    for S in objects:
        if last in S:
            cocone[S] = po.into_right @ cocone1[S - {last}]
        elif S == top:
            cocone[S] = po.into_left
        else:
            cocone[S] = po.into_left @ _path_to_top(S, maps, top, objects)
    return po.object, cocone


def _missing(S, rest):
    return next(i for i in rest if i not in S)


def _path_to_top(S, maps, top, objects):
    cur, m = S, objects[S].identity()
    for i in sorted(top - S):
        m = maps[(cur, i)] @ m
        cur = cur | {i}
    return m


def _mediate_into(colim, cocone, objects, leg, target):
    """Solve for the map out of a colimit given compatible legs from each vertex."""
    F = colim.field
    comps = {}
    for d in _union(colim, target):
        keys = sorted(objects, key=lambda S: (len(S), sorted(S)))
        A = Matrix.hstack(F, colim.dim(d), [cocone[S][d] for S in keys])
        B = Matrix.hstack(F, target.dim(d), [leg(S)[d] for S in keys])
        x, null = solve(A.transpose(), B.transpose())
        if x is None:
            raise ValueError("legs are not compatible")
        comps[d] = x.transpose()
    return ChainMap(colim, target, comps)


def pushout_product(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f . g``: the map ``U(x)Y  +_{U(x)X}  V(x)X -> V(x)Y`` for ``f: U->V``, ``g: X->Y``."""
    U, V, X, Y = f.source, f.target, g.source, g.target
    po = pushout(tensor_map(U.identity(), g), tensor_map(f, X.identity()))
    return po.mediator(tensor_map(f, Y.identity()), tensor_map(V.identity(), g))


def iterated_pushout_product(fs) -> ChainMap:
    """``f_1 . f_2 . ... . f_k`` as the map out of the punctured-cube colimit."""
    fs = list(fs)
    k = len(fs)
    if k == 1:
        return fs[0]
    full = frozenset(range(k))
    objects, maps = {}, {}

    def vertex(S):
        c = fs[0].target if 0 in S else fs[0].source
        for i in range(1, k):
            c = tensor(c, fs[i].target if i in S else fs[i].source)
        return c

    def edge(S, i):
        m = (fs[0] if i == 0 else (fs[0].target if 0 in S else fs[0].source).identity())
        for j in range(1, k):
            nxt = fs[j] if j == i else (fs[j].target if j in S else fs[j].source).identity()
            m = tensor_map(m, nxt)
        return m

    every = {}
    for r in range(k):
        for S in combinations(range(k), r):
            objects[frozenset(S)] = vertex(frozenset(S))
    for S in objects:
        for i in full - S:
            every[(S, i)] = edge(S, i)
            if S | {i} != full:
                maps[(S, i)] = every[(S, i)]
    colim, cocone = colimit_over_punctured_cube(objects, maps, k)
    top = vertex(full)
    verts = {**objects, full: top}
    return _mediate_into(colim, cocone, objects, lambda S: _path_to_top(S, every, full, verts), top)


# homology ---------------------------------------------------------------------------------

class _HData:
    __slots__ = ("free", "proj", "sect", "cycles")

    def __init__(self, free, proj, sect, cycles):
        self.free, self.proj, self.sect, self.cycles = free, proj, sect, cycles


def _homology_data(c: ChainComplex, d: int) -> _HData:
    F = c.field
    Z = nullspace(c.d(d))  # dim_d x z; identity on the free coordinates
    free = [_free_coord(Z, j) for j in range(Z.cols)]
    B = c.d(d + 1)
    coords = B.submatrix(free, range(B.cols)) if free else Matrix.zeros(F, 0, B.cols)
    proj = quotient_basis(coords, len(free))
    comp = complement_coordinates(coords, len(free))
    sect = Matrix.from_columns(F, len(free), [{x: F.one} for x in comp])
    return _HData(free, proj, sect, Z)


def _free_coord(Z: Matrix, j: int) -> int:
    # nullspace columns carry a 1 in their own free coordinate and nothing in other free ones
    col = Z.column(j)
    return max(col)


def homology(c: ChainComplex) -> dict:
    """Dimensions of ``H_d``; zero degrees are omitted."""
    return {d: h.proj.rows for d, h in c._homology.items() if h.proj.rows}


def homology_dims(c: ChainComplex) -> dict:
    return {d: c._homology[d].proj.rows for d in c.degrees()}


def homology_class(c: ChainComplex, d: int, cycle: dict) -> dict:
    h = c._homology[d]
    coords = {i: cycle[x] for i, x in enumerate(h.free) if x in cycle}
    return h.proj.apply(coords)


def homology_representatives(c: ChainComplex, d: int) -> Matrix:
    h = c._homology[d]
    return h.cycles @ h.sect


def induced_homology_map(f: ChainMap) -> dict:
    out = {}
    F = f.field
    for d in _union(f.source, f.target):
        if not f.source.lo <= d <= f.source.hi:
            out[d] = Matrix.zeros(F, homology_dims(f.target).get(d, 0), 0)
            continue
        reps = homology_representatives(f.source, d)
        imgs = f[d] @ reps
        if f.target.lo <= d <= f.target.hi:
            cols = [homology_class(f.target, d, col) for col in imgs.columns()]
            out[d] = Matrix.from_columns(F, f.target._homology[d].proj.rows, cols)
        else:
            out[d] = Matrix.zeros(F, 0, reps.cols)
    return out


# model structure ---------------------------------------------------------------------------

def is_cofibration(f: ChainMap) -> bool:
    return all(m.is_injective() for m in f.comps.values())


def is_fibration(f: ChainMap) -> bool:
    return all(m.is_surjective() for m in f.comps.values())


def is_weak_equivalence(f: ChainMap, degrees=None) -> bool:
    """Quasi-isomorphism test, optionally restricted to some degrees."""
    hm = induced_homology_map(f)
    for d, m in hm.items():
        if degrees is not None and d not in degrees:
            continue
        if m.rows != m.cols or m.rank() != m.rows:
            return False
    return True


def generating_cofibrations(window, field=QQ):
    """Sphere-into-disk inclusions and acyclic disks inside ``window``.

    Returns ``(cofibrations, trivial_cofibrations)``. Disks are cut at the window,
    so the bottom inclusion is ``0 -> k[lo]``; the acyclic generators are only the
    disks that fit entirely inside the window.
    """
    lo, hi = window
    if lo > hi:
        raise ValueError("window is empty")
    cof = [sphere_into_disk(d, field, window) for d in range(lo, hi + 1)]
    triv = [zero_into(disk(d, field, window)) for d in range(lo + 1, hi + 1)]
    return cof, triv
