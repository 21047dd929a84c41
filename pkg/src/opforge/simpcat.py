"""Simplicial vector spaces truncated at a top level, and the Dold-Kan functors.

Normalization keeps the kernels of the faces ``d_1 .. d_n`` and uses ``d_0`` as
differential. ``gamma`` is its inverse: ``gamma(C)_n`` is a sum over surjections
``[n] -> [k]`` of copies of ``C_k``.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations

from .chaincat import ChainComplex, ChainMap, is_weak_equivalence, tensor as ch_tensor, tensor_blocks
from .exactla import Field, Matrix, QQ, TruncationError, nullspace, solve

__all__ = [
    "SimplicialVS", "SimplicialMap", "normalize", "normalize_map", "gamma", "gamma_map",
    "constant", "sv_tensor", "sv_tensor_map", "shuffle_map", "aw_map", "sv_model_predicates",
    "dk_unit", "dk_counit", "surjections", "shuffles", "sv_direct_sum", "zero_sv",
]


def surjections(n: int, k: int):
    """Order-preserving surjections [n] -> [k] as value tuples, in lexicographic order."""
    out = []
    for jumps in combinations(range(1, n + 1), k):
        js = set(jumps)
        v, vals = 0, [0]
        for i in range(1, n + 1):
            if i in js:
                v += 1
            vals.append(v)
        out.append(tuple(vals))
    return out


def _face(n: int, i: int):
    """The coface [n-1] -> [n] skipping i, as a value tuple."""
    return tuple(j if j < i else j + 1 for j in range(n))


def _degen(n: int, i: int):
    """The codegeneracy [n+1] -> [n] hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def degeneracy_word(sigma):
    """Indices ``j_1, j_2, ..`` with ``sigma^* = s_{j_1} s_{j_2} ...`` (rightmost applied first)."""
    word = []
    s = list(sigma)
    while True:
        j = next((j for j in range(len(s) - 1) if s[j] == s[j + 1]), None)
        if j is None:
            return word
        word.append(j)
        del s[j + 1]


class SimplicialVS:
    """Simplicial vector space known in levels ``0 .. s_max``."""

    def __init__(self, field: Field, s_max: int, levels: dict, faces: dict, degens: dict, check=True):
        self.field = field
        self.s_max = s_max
        self.levels = {n: int(levels.get(n, 0)) for n in range(s_max + 1)}
        self.faces = {}
        self.degens = {}
        for n in range(1, s_max + 1):
            for i in range(n + 1):
                m = faces.get((n, i)) or Matrix.zeros(field, self.levels[n - 1], self.levels[n])
                if m.shape != (self.levels[n - 1], self.levels[n]):
                    raise ValueError(f"face ({n},{i}) has shape {m.shape}")
                self.faces[(n, i)] = m
        for n in range(s_max):
            for i in range(n + 1):
                m = degens.get((n, i)) or Matrix.zeros(field, self.levels[n + 1], self.levels[n])
                if m.shape != (self.levels[n + 1], self.levels[n]):
                    raise ValueError(f"degeneracy ({n},{i}) has shape {m.shape}")
                self.degens[(n, i)] = m
        if check:
            bad = self.identity_violations()
            if bad:
                raise ValueError(f"simplicial identities fail: {bad[:5]}")

    def dim(self, n):
        return self.levels.get(n, 0)

    def d(self, n, i) -> Matrix:
        return self.faces[(n, i)]

    def s(self, n, i) -> Matrix:
        if n >= self.s_max:
            raise TruncationError(f"degeneracy out of level {n} exceeds s_max={self.s_max}")
        return self.degens[(n, i)]

    def __repr__(self):
        return f"SimplicialVS({self.field.tag}, s_max={self.s_max}, levels={self.levels})"

    def identity(self):
        return SimplicialMap(self, self, {n: Matrix.identity(self.field, k) for n, k in self.levels.items()})

    def identity_violations(self):
        """Check every simplicial identity that stays within the truncation."""
        bad = []
        d, s, top = self.faces, self.degens, self.s_max
        for n in range(2, top + 1):
            for j in range(n + 1):
                for i in range(j):
                    if d[(n - 1, i)] @ d[(n, j)] != d[(n - 1, j - 1)] @ d[(n, i)]:
                        bad.append(("dd", n, i, j))
        for n in range(top):
            for j in range(n + 1):
                one = Matrix.identity(self.field, self.levels[n])
                if d[(n + 1, j)] @ s[(n, j)] != one or d[(n + 1, j + 1)] @ s[(n, j)] != one:
                    bad.append(("ds=1", n, j))
                for i in range(n + 2):
                    if i < j:
                        if d[(n + 1, i)] @ s[(n, j)] != s[(n - 1, j - 1)] @ d[(n, i)]:
                            bad.append(("ds<", n, i, j))
                    elif i > j + 1:
                        if d[(n + 1, i)] @ s[(n, j)] != s[(n - 1, j)] @ d[(n, i - 1)]:
                            bad.append(("ds>", n, i, j))
        for n in range(top - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    if s[(n + 1, i)] @ s[(n, j)] != s[(n + 1, j + 1)] @ s[(n, i)]:
                        bad.append(("ss", n, i, j))
        return bad

    def operator(self, theta, n: int) -> Matrix:
        """Matrix of theta^*: X_n -> X_m for an order-preserving theta: [m] -> [n]."""
        m = len(theta) - 1
        F = self.field
        # factor theta = mono . epi; apply the epi's degeneracies after the mono's faces
        image = sorted(set(theta))
        out = Matrix.identity(F, self.dim(n))
        cur = n
        for v in range(n, -1, -1):
            if v not in image:
                out = self.d(cur, v) @ out
                cur -= 1
        rank_of = {v: r for r, v in enumerate(image)}
        epi = tuple(rank_of[t] for t in theta)
        for j in reversed(degeneracy_word(epi)):
            out = self.s(cur, j) @ out
            cur += 1
        assert cur == m
        return out

    @cached_property
    def _normal(self):
        F = self.field
        incl, free = {}, {}
        for n in range(self.s_max + 1):
            if n == 0:
                K = Matrix.identity(F, self.dim(0))
            else:
                K = nullspace(Matrix.vstack(F, self.dim(n), [self.d(n, i) for i in range(1, n + 1)]))
            incl[n] = K
            free[n] = [max(K.column(j)) for j in range(K.cols)]
        return incl, free

    def normal_inclusion(self, n) -> Matrix:
        return self._normal[0][n]

    def normal_coords(self, n, vec: dict) -> dict:
        """Coordinates in N_n of a vector known to lie in N_n."""
        free = self._normal[1][n]
        return {a: vec[x] for a, x in enumerate(free) if x in vec}

    @cached_property
    def _projection(self):
        # X_n = N_n + D_n; projection onto N_n along the degenerate part
        F = self.field
        out = {}
        for n in range(self.s_max + 1):
            K = self.normal_inclusion(n)
            blocks = [K] + ([self.s(n - 1, i) for i in range(n)] if n else [])
            A = Matrix.hstack(F, self.dim(n), blocks)
            x, _ = solve(A, Matrix.identity(F, self.dim(n)))
            if x is None:
                raise ArithmeticError("normalized and degenerate parts do not span")
            out[n] = x.submatrix(range(K.cols), range(self.dim(n)))
        return out

    def normal_projection(self, n) -> Matrix:
        """X_n -> N_n killing degenerate simplices (a chain map from the Moore complex)."""
        return self._projection[n]

    def to_json(self):
        f = self.field
        enc = lambda m: [f.format(x) for x in m.entries]
        return {
            "field": f.tag, "s_max": self.s_max,
            "levels": {str(n): k for n, k in self.levels.items()},
            "faces": {f"{n},{i}": enc(m) for (n, i), m in self.faces.items() if m.rows and m.cols},
            "degeneracies": {f"{n},{i}": enc(m) for (n, i), m in self.degens.items() if m.rows and m.cols},
        }

    @classmethod
    def from_json(cls, obj, check=True):
        f = Field.from_tag(obj["field"])
        top = int(obj["s_max"])
        levels = {int(n): int(k) for n, k in obj["levels"].items()}
        faces, degens = {}, {}
        for key, e in obj.get("faces", {}).items():
            n, i = map(int, key.split(","))
            faces[(n, i)] = Matrix.from_entries(f, levels.get(n - 1, 0), levels.get(n, 0), [f.parse(str(x)) for x in e])
        for key, e in obj.get("degeneracies", {}).items():
            n, i = map(int, key.split(","))
            degens[(n, i)] = Matrix.from_entries(f, levels.get(n + 1, 0), levels.get(n, 0), [f.parse(str(x)) for x in e])
        return cls(f, top, levels, faces, degens, check=check)


class SimplicialMap:
    def __init__(self, source: SimplicialVS, target: SimplicialVS, comps: dict, check=True):
        if source.s_max != target.s_max:
            raise ValueError("truncation mismatch")
        self.source, self.target, self.field = source, target, source.field
        self.comps = {}
        for n in range(source.s_max + 1):
            m = comps.get(n) or Matrix.zeros(self.field, target.dim(n), source.dim(n))
            if m.shape != (target.dim(n), source.dim(n)):
                raise ValueError(f"level {n} component has shape {m.shape}")
            self.comps[n] = m
        if check:
            bad = self.violations()
            if bad:
                raise ValueError(f"not simplicial: {bad[:5]}")

    def __getitem__(self, n):
        return self.comps[n]

    def violations(self):
        bad = []
        X, Y = self.source, self.target
        for (n, i), m in X.faces.items():
            if Y.d(n, i) @ self[n] != self[n - 1] @ m:
                bad.append(("d", n, i))
        for (n, i), m in X.degens.items():
            if Y.s(n, i) @ self[n] != self[n + 1] @ m:
                bad.append(("s", n, i))
        return bad

    def __matmul__(self, other):
        return SimplicialMap(other.source, self.target, {n: self[n] @ other[n] for n in self.comps}, check=False)

    def __eq__(self, other):
        return all(self[n] == other[n] for n in self.comps)

    def __hash__(self):
        return id(self)

    def is_levelwise_injective(self):
        return all(m.is_injective() for m in self.comps.values())


def constant(field=QQ, s_max=3, dim=1) -> SimplicialVS:
    """The constant simplicial vector space on ``field^dim``."""
    one = Matrix.identity(field, dim)
    faces = {(n, i): one for n in range(1, s_max + 1) for i in range(n + 1)}
    degens = {(n, i): one for n in range(s_max) for i in range(n + 1)}
    return SimplicialVS(field, s_max, {n: dim for n in range(s_max + 1)}, faces, degens)


def zero_sv(field=QQ, s_max=3) -> SimplicialVS:
    return SimplicialVS(field, s_max, {}, {}, {})


# normalization --------------------------------------------------------------------------

def normalize(x: SimplicialVS) -> ChainComplex:
    F = x.field
    dims = {n: x.normal_inclusion(n).cols for n in range(x.s_max + 1)}
    diff = {}
    for n in range(1, x.s_max + 1):
        img = x.d(n, 0) @ x.normal_inclusion(n)
        diff[n] = Matrix.from_columns(F, dims[n - 1], [x.normal_coords(n - 1, c) for c in img.columns()])
    return ChainComplex(F, (0, x.s_max), dims, diff)


def normalize_map(f: SimplicialMap, source: ChainComplex | None = None, target: ChainComplex | None = None) -> ChainMap:
    X, Y = f.source, f.target
    source = source or normalize(X)
    target = target or normalize(Y)
    comps = {}
    for n in range(X.s_max + 1):
        img = f[n] @ X.normal_inclusion(n)
        comps[n] = Matrix.from_columns(f.field, target.dim(n), [Y.normal_coords(n, c) for c in img.columns()])
    return ChainMap(source, target, comps)


# gamma ---------------------------------------------------------------------------------

class _GammaLayout:
    """Summand bookkeeping for gamma(C) at each level."""

    def __init__(self, c: ChainComplex, s_max: int):
        self.blocks = {}
        for n in range(s_max + 1):
            off, blk = 0, []
            for k in range(0, n + 1):
                dk = c.dim(k)
                if not dk:
                    continue
                for sig in surjections(n, k):
                    blk.append((sig, k, off, dk))
                    off += dk
            self.blocks[n] = (blk, off)

    def offset(self, n, sig):
        for s, k, off, dk in self.blocks[n][0]:
            if s == sig:
                return off
        return None


def _gamma_operator(c: ChainComplex, lay: _GammaLayout, theta, n: int) -> Matrix:
    """theta^* : gamma(C)_n -> gamma(C)_m."""
    F = c.field
    m = len(theta) - 1
    blk, width = lay.blocks[n]
    rows = lay.blocks[m][1]
    data = [dict() for _ in range(rows)]
    for sig, k, off, dk in blk:
        comp = tuple(sig[t] for t in theta)
        image = sorted(set(comp))
        rank_of = {v: r for r, v in enumerate(image)}
        eps = tuple(rank_of[v] for v in comp)
        if image == list(range(k + 1)):
            toff = lay.offset(m, eps)
            for a in range(dk):
                data[toff + a][off + a] = F.one
        elif image == list(range(1, k + 1)):
            toff = lay.offset(m, eps)
            if toff is None:
                continue
            bd = c.d(k)
            for a in range(bd.rows):
                for b, v in bd.row(a).items():
                    data[toff + a][off + b] = v
    return Matrix(F, rows, width, data)


def gamma(c: ChainComplex, s_max: int) -> SimplicialVS:
    gd = c.graded_dims()
    if gd and (min(gd) < 0 or max(gd) > s_max):
        raise TruncationError(f"window {c.window} not inside [0, {s_max}]")
    lay = _GammaLayout(c, s_max)
    faces = {(n, i): _gamma_operator(c, lay, _face(n, i), n) for n in range(1, s_max + 1) for i in range(n + 1)}
    degens = {(n, i): _gamma_operator(c, lay, _degen(n, i), n) for n in range(s_max) for i in range(n + 1)}
    levels = {n: lay.blocks[n][1] for n in range(s_max + 1)}
    out = SimplicialVS(c.field, s_max, levels, faces, degens, check=False)
    out._gamma_layout = lay
    out._gamma_source = c
    return out


def gamma_map(f: ChainMap, s_max: int, source=None, target=None) -> SimplicialMap:
    source = source or gamma(f.source, s_max)
    target = target or gamma(f.target, s_max)
    F = f.field
    comps = {}
    for n in range(s_max + 1):
        data = [dict() for _ in range(target.dim(n))]
        for sig, k, off, dk in source._gamma_layout.blocks[n][0]:
            toff = target._gamma_layout.offset(n, sig)
            if toff is None:
                continue
            m = f[k]
            for a in range(m.rows):
                for b, v in m.row(a).items():
                    data[toff + a][off + b] = v
        comps[n] = Matrix(F, target.dim(n), source.dim(n), data)
    return SimplicialMap(source, target, comps, check=False)


def dk_unit(c: ChainComplex, s_max: int) -> ChainMap:
    """C -> N(gamma C), sending c to the nondegenerate summand."""
    g = gamma(c, s_max)
    N = normalize(g)
    F = c.field
    comps = {}
    for k in range(s_max + 1):
        off = g._gamma_layout.offset(k, tuple(range(k + 1))) if c.dim(k) else None
        cols = []
        for a in range(c.dim(k)):
            cols.append(g.normal_coords(k, {off + a: F.one}))
        comps[k] = Matrix.from_columns(F, N.dim(k), cols)
    return ChainMap(c.truncate(s_max) if c.hi > s_max else c, N, comps)


def dk_counit(x: SimplicialVS) -> SimplicialMap:
    """gamma(N X) -> X, sending the summand (sigma, v) to sigma^* v."""
    N = normalize(x)
    g = gamma(N, x.s_max)
    F = x.field
    comps = {}
    for n in range(x.s_max + 1):
        cols = [None] * g.dim(n)
        for sig, k, off, dk in g._gamma_layout.blocks[n][0]:
            op = x.operator(sig, k) @ x.normal_inclusion(k)
            for a in range(dk):
                cols[off + a] = op.column(a)
        comps[n] = Matrix.from_columns(F, x.dim(n), cols)
    return SimplicialMap(g, x, comps)


# tensor --------------------------------------------------------------------------------

def sv_tensor(x: SimplicialVS, y: SimplicialVS) -> SimplicialVS:
    if x.s_max != y.s_max:
        raise ValueError("truncation mismatch")
    faces = {k: x.faces[k].kron(y.faces[k]) for k in x.faces}
    degens = {k: x.degens[k].kron(y.degens[k]) for k in x.degens}
    return SimplicialVS(x.field, x.s_max, {n: x.dim(n) * y.dim(n) for n in x.levels}, faces, degens, check=False)


def sv_tensor_map(f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    return SimplicialMap(sv_tensor(f.source, g.source), sv_tensor(f.target, g.target),
                         {n: f[n].kron(g[n]) for n in f.comps}, check=False)


def shuffles(p: int, q: int):
    """(p, q)-shuffles as (mu, nu, sign): mu has p entries, nu has q, partitioning 0..p+q-1."""
    out = []
    for mu in combinations(range(p + q), p):
        nu = tuple(i for i in range(p + q) if i not in mu)
        inv = sum(1 for a in mu for b in nu if a > b)
        out.append((mu, nu, -1 if inv % 2 else 1))
    return out


def _apply_degens(x: SimplicialVS, idx, n, vec: Matrix):
    for j in idx:
        vec = x.s(n, j) @ vec
        n += 1
    return vec


def shuffle_map(a: SimplicialVS, b: SimplicialVS) -> ChainMap:
    """Eilenberg-Zilber map N(a) (x) N(b) -> N(a (x) b), truncated at s_max."""
    F = a.field
    top = a.s_max
    Na, Nb = normalize(a), normalize(b)
    src = ch_tensor(Na, Nb).truncate(top)
    ab = sv_tensor(a, b)
    Nab = normalize(ab)
    comps = {}
    for n in range(top + 1):
        cols = []
        for p, off, dp, dq in tensor_blocks(Na, Nb, n):
            q = n - p
            Ka, Kb = a.normal_inclusion(p), b.normal_inclusion(q)
            acc = Matrix.zeros(F, ab.dim(n), dp * dq)
            for mu, nu, sgn in shuffles(p, q):
                xa = _apply_degens(a, nu, p, Ka)
                yb = _apply_degens(b, mu, q, Kb)
                term = xa.kron(yb)
                acc = acc + (term if sgn > 0 else -term)
            proj = ab.normal_projection(n) @ acc
            cols.extend(proj.columns())
        comps[n] = Matrix.from_columns(F, Nab.dim(n), cols)
    return ChainMap(src, Nab, comps)


def aw_map(a: SimplicialVS, b: SimplicialVS) -> ChainMap:
    """Alexander-Whitney map N(a (x) b) -> N(a) (x) N(b), truncated at s_max."""
    F = a.field
    top = a.s_max
    Na, Nb = normalize(a), normalize(b)
    tgt = ch_tensor(Na, Nb).truncate(top)
    ab = sv_tensor(a, b)
    Nab = normalize(ab)
    comps = {}
    for n in range(top + 1):
        K = ab.normal_inclusion(n)
        blocks = []
        for p, off, dp, dq in tensor_blocks(Na, Nb, n):
            q = n - p
            front = Matrix.identity(F, a.dim(n))
            for k in range(n, p, -1):
                front = a.d(k, k) @ front
            back = Matrix.identity(F, b.dim(n))
            for k in range(n, q, -1):
                back = b.d(k, 0) @ back
            blk = (a.normal_projection(p) @ front).kron(b.normal_projection(q) @ back)
            blocks.append(blk @ K)
        comps[n] = Matrix.vstack(F, K.cols, blocks) if blocks else Matrix.zeros(F, 0, K.cols)
    return ChainMap(Nab, tgt, comps)


def sv_model_predicates(f: SimplicialMap):
    """(cofibration, weak equivalence, fibration) through normalization.

    Weak equivalences are checked below the top level, where homology of the
    truncated normalization is exact. Fibrations: N(f) onto in positive degrees.
    """
    Nf = normalize_map(f)
    top = f.source.s_max
    cof = f.is_levelwise_injective()
    we = is_weak_equivalence(Nf, degrees=range(0, top))
    fib = all(Nf[n].is_surjective() for n in range(1, top + 1))
    return cof, we, fib


def sv_direct_sum(xs) -> SimplicialVS:
    xs = list(xs)
    F, top = xs[0].field, xs[0].s_max
    faces = {k: Matrix.block_diag(F, [x.faces[k] for x in xs]) for k in xs[0].faces}
    degens = {k: Matrix.block_diag(F, [x.degens[k] for x in xs]) for k in xs[0].degens}
    return SimplicialVS(F, top, {n: sum(x.dim(n) for x in xs) for n in range(top + 1)}, faces, degens, check=False)
