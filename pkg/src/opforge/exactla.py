"""Exact linear algebra over the rationals, prime fields and quadratic extensions.

Matrices are stored sparsely as one ``{column: value}`` dict per row. Every
elimination picks as pivot the first row (in current order) carrying a nonzero
entry in the leftmost unprocessed column, so bases come out the same on every run.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2

__all__ = [
    "Field", "QQ", "GF", "GF2", "Matrix", "rank", "solve", "nullspace",
    "quotient_basis", "complement_coordinates", "TruncationError",
]


class TruncationError(ValueError):
    """An exact result would leave the declared degree/arity/level window."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1
    return True


class Field:
    """Exact field. ``kind`` is ``"rationals"``, ``"prime"`` or ``"quadratic"``.

    The quadratic kind is F_{p^2} = F_p[a]/(a^2 - r) with r the least quadratic
    non-residue mod p; elements are pairs ``(x, y)`` meaning ``x + y a``.
    """

    def __init__(self, kind: str, p: int = 0):
        if kind not in ("rationals", "prime", "quadratic"):
            raise ValueError(f"unknown field kind {kind!r}")
        if kind != "rationals":
            if not (_is_prime(p) and p < 2**31):
                raise ValueError(f"{p} is not a prime below 2^31")
            if kind == "quadratic" and p == 2:
                raise ValueError("quadratic extension needs an odd prime")
        self.kind = kind
        self.p = p
        if kind == "rationals":
            self.zero, self.one = gmpy2.mpq(0), gmpy2.mpq(1)
        elif kind == "prime":
            self.zero, self.one = 0, 1
        else:
            self.nonresidue = next(r for r in range(2, p) if pow(r, (p - 1) // 2, p) == p - 1)
            self.zero, self.one = (0, 0), (1, 0)

    # identity / hashing -------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return self.tag

    @property
    def tag(self) -> str:
        return {"rationals": "q", "prime": f"p:{self.p}", "quadratic": f"p2:{self.p}"}[self.kind]

    @classmethod
    def from_tag(cls, tag: str) -> "Field":
        if tag in ("q", "Q", "rationals"):
            return QQ
        kind, _, p = tag.partition(":")
        if kind == "p" and p.isdigit():
            return GF(int(p))
        if kind == "p2" and p.isdigit():
            return GF2(int(p))
        raise ValueError(f"bad field tag {tag!r}")

    # arithmetic -----------------------------------------------------------
    def __call__(self, x):
        """Coerce an int, Fraction, string or element into the field."""
        if isinstance(x, str):
            return self.parse(x)
        k = self.kind
        if k == "rationals":
            if isinstance(x, Fraction):
                return gmpy2.mpq(x.numerator, x.denominator)
            return gmpy2.mpq(x)
        if k == "prime":
            if isinstance(x, (Fraction, type(gmpy2.mpq()))):
                return int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, tuple):
            return (x[0] % self.p, x[1] % self.p)
        return (int(x) % self.p, 0)

    def add(self, a, b):
        k = self.kind
        if k == "rationals":
            return a + b
        if k == "prime":
            return (a + b) % self.p
        return ((a[0] + b[0]) % self.p, (a[1] + b[1]) % self.p)

    def sub(self, a, b):
        k = self.kind
        if k == "rationals":
            return a - b
        if k == "prime":
            return (a - b) % self.p
        return ((a[0] - b[0]) % self.p, (a[1] - b[1]) % self.p)

    def neg(self, a):
        k = self.kind
        if k == "rationals":
            return -a
        if k == "prime":
            return -a % self.p
        return (-a[0] % self.p, -a[1] % self.p)

    def mul(self, a, b):
        k = self.kind
        if k == "rationals":
            return a * b
        if k == "prime":
            return a * b % self.p
        p = self.p
        return ((a[0] * b[0] + self.nonresidue * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def inv(self, a):
        k = self.kind
        if k == "rationals":
            return 1 / a
        if k == "prime":
            return pow(a, -1, self.p)
        p = self.p
        norm = (a[0] * a[0] - self.nonresidue * a[1] * a[1]) % p
        n_inv = pow(norm, -1, p)
        return (a[0] * n_inv % p, -a[1] * n_inv % p)

    def is_zero(self, a) -> bool:
        if self.kind == "quadratic":
            return a[0] == 0 and a[1] == 0
        return a == 0

    def power(self, a, e: int):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def sign(self, s: int):
        return self.one if s > 0 else self.neg(self.one)

    # text form -----------------------------------------------------------------
    def format(self, a) -> str:
        if self.kind == "rationals":
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        if self.kind == "prime":
            return str(a)
        return f"{a[0]}+{a[1]}a"

    def parse(self, s: str):
        s = s.strip()
        if self.kind == "quadratic":
            x, _, y = s.partition("+")
            return (int(x) % self.p, int(y.rstrip("a") or 0) % self.p)
        if self.kind == "rationals":
            return gmpy2.mpq(Fraction(s))
        if "/" in s:
            n, d = s.split("/")
            return int(n) * pow(int(d), -1, self.p) % self.p
        return int(s) % self.p

    def elements(self):
        """All elements of a finite field (used by small exhaustive tests)."""
        if self.kind == "prime":
            return list(range(self.p))
        if self.kind == "quadratic":
            return [(x, y) for x in range(self.p) for y in range(self.p)]
        raise ValueError("the rationals are infinite")


QQ = Field("rationals")


def GF(p: int) -> Field:
    return Field("prime", p)


def GF2(p: int) -> Field:
    return Field("quadratic", p)


class Matrix:
    """Immutable sparse matrix over an exact field."""

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, field: Field, rows: int, cols: int, data=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        # data: list of dict rows with nonzero values only
        self._data = data if data is not None else [dict() for _ in range(rows)]

    # constructors ---------------------------------------------------------------
    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [{i: field.one} for i in range(n)])

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            d = {}
            for j, x in enumerate(r):
                v = field(x)
                if not field.is_zero(v):
                    d[j] = v
            data.append(d)
        return cls(field, len(rows), cols, data)

    @classmethod
    def from_entries(cls, field, rows, cols, entries):
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        return cls.from_rows(field, [entries[i * cols:(i + 1) * cols] for i in range(rows)], cols)

    @classmethod
    def from_columns(cls, field, rows, columns):
        """Build from a list of sparse columns ``{row: value}``."""
        data = [dict() for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if not field.is_zero(v):
                    data[i][j] = v
        return cls(field, rows, len(columns), data)

    # accessors -----------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def entries(self):
        z = self.field.zero
        return [self._data[i].get(j, z) for i in range(self.rows) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i].get(j, self.field.zero)

    def row(self, i) -> dict:
        return self._data[i]

    def column(self, j) -> dict:
        return {i: r[j] for i, r in enumerate(self._data) if j in r}

    def columns(self) -> list:
        cols = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def to_lists(self):
        z = self.field.zero
        return [[r.get(j, z) for j in range(self.cols)] for r in self._data]

    def is_zero(self) -> bool:
        return not any(self._data)

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.field == other.field and self._data == other._data)

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __repr__(self):
        f = self.field
        body = "; ".join(" ".join(f.format(x) for x in row) for row in self.to_lists())
        return f"Matrix({self.rows}x{self.cols} over {f.tag}: [{body}])"

    # algebra ---------------------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        add, mul, isz = F.add, F.mul, F.is_zero
        od = other._data
        out = []
        for r in self._data:
            acc = {}
            for k, a in r.items():
                for j, b in od[k].items():
                    if j in acc:
                        acc[j] = add(acc[j], mul(a, b))
                    else:
                        acc[j] = mul(a, b)
            out.append({j: v for j, v in acc.items() if not isz(v)})
        return Matrix(F, self.rows, other.cols, out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self.field
        out = []
        for r, s in zip(self._data, other._data):
            d = dict(r)
            for j, v in s.items():
                w = F.add(d[j], v) if j in d else v
                if F.is_zero(w):
                    d.pop(j, None)
                else:
                    d[j] = w
            out.append(d)
        return Matrix(F, self.rows, self.cols, out)

    def __neg__(self):
        F = self.field
        return Matrix(F, self.rows, self.cols, [{j: F.neg(v) for j, v in r.items()} for r in self._data])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Matrix":
        F = self.field
        c = F(c)
        if F.is_zero(c):
            return Matrix.zeros(F, self.rows, self.cols)
        return Matrix(F, self.rows, self.cols, [{j: F.mul(c, v) for j, v in r.items()} for r in self._data])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, self.columns())

    T = property(transpose)

    def apply(self, vec: dict) -> dict:
        """Multiply by a sparse column vector ``{index: value}``."""
        F = self.field
        out = {}
        for i, r in enumerate(self._data):
            acc = F.zero
            for k, v in vec.items():
                if k in r:
                    acc = F.add(acc, F.mul(r[k], v))
            if not F.is_zero(acc):
                out[i] = acc
        return out

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        cpos = {c: n for n, c in enumerate(col_idx)}
        data = [{cpos[j]: v for j, v in self._data[i].items() if j in cpos} for i in row_idx]
        return Matrix(self.field, len(row_idx), len(col_idx), data)

    def map_entries(self, field: Field, fn) -> "Matrix":
        data = []
        for r in self._data:
            d = {}
            for j, v in r.items():
                w = fn(v)
                if not field.is_zero(w):
                    d[j] = w
            data.append(d)
        return Matrix(field, self.rows, self.cols, data)

    @staticmethod
    def hstack(field, rows, blocks):
        data = [dict() for _ in range(rows)]
        off = 0
        for b in blocks:
            if b.rows != rows:
                raise ValueError("hstack row mismatch")
            for i, r in enumerate(b._data):
                for j, v in r.items():
                    data[i][off + j] = v
            off += b.cols
        return Matrix(field, rows, off, data)

    @staticmethod
    def vstack(field, cols, blocks):
        data = []
        for b in blocks:
            if b.cols != cols:
                raise ValueError("vstack column mismatch")
            data.extend(dict(r) for r in b._data)
        return Matrix(field, len(data), cols, data)

    @staticmethod
    def block_diag(field, blocks):
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        data = []
        off = 0
        for b in blocks:
            for r in b._data:
                data.append({off + j: v for j, v in r.items()})
            off += b.cols
        return Matrix(field, rows, cols, data)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; row/column pairs (i, k) ordered row-major."""
        F = self.field
        data = []
        for r in self._data:
            for s in other._data:
                d = {}
                for j, a in r.items():
                    base = j * other.cols
                    for l, b in s.items():
                        d[base + l] = F.mul(a, b)
                data.append(d)
        return Matrix(F, self.rows * other.rows, self.cols * other.cols, data)

    # elimination-backed queries ---------------------------------------------------------
    def rank(self) -> int:
        return len(_echelon(self.field, self._data, self.cols, reduce=False)[0])

    def is_injective(self) -> bool:
        return self.rank() == self.cols

    def is_surjective(self) -> bool:
        return self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        x, null = solve(self, Matrix.identity(self.field, self.rows))
        if x is None or null.cols:
            raise ValueError("matrix is singular")
        return x


def _echelon(F: Field, data, ncols, reduce=True):
    """Row-reduce sparse rows. Returns (pivot columns, reduced pivot rows)."""
    add, mul, neg, inv, isz = F.add, F.mul, F.neg, F.inv, F.is_zero
    remaining = [dict(r) for r in data if r]
    pivots, prow = [], []
    # bucket rows by leading column to find pivots in column order quickly
    while remaining:
        lead = min(min(r) for r in remaining)
        k = next(i for i, r in enumerate(remaining) if lead in r)
        piv = remaining.pop(k)
        s = inv(piv[lead])
        if not (F.kind == "rationals" and s == 1):
            piv = {j: mul(v, s) for j, v in piv.items()}
        nxt = []
        for r in remaining:
            c = r.get(lead)
            if c is not None:
                nc = neg(c)
                for j, v in piv.items():
                    w = add(r[j], mul(nc, v)) if j in r else mul(nc, v)
                    if isz(w):
                        r.pop(j, None)
                    else:
                        r[j] = w
            if r:
                nxt.append(r)
        remaining = nxt
        pivots.append(lead)
        prow.append(piv)
    if reduce:
        for a in range(len(prow) - 1, -1, -1):
            c = pivots[a]
            pa = prow[a]
            for b in range(a):
                r = prow[b]
                coef = r.get(c)
                if coef is None:
                    continue
                nc = neg(coef)
                for j, v in pa.items():
                    w = add(r[j], mul(nc, v)) if j in r else mul(nc, v)
                    if isz(w):
                        r.pop(j, None)
                    else:
                        r[j] = w
    return pivots, prow


def rank(m: Matrix) -> int:
    return m.rank()


def nullspace(m: Matrix) -> Matrix:
    """Basis of ker(m) as the columns of a (cols x nullity) matrix."""
    F = m.field
    pivots, prow = _echelon(F, m._data, m.cols)
    pset = set(pivots)
    free = [j for j in range(m.cols) if j not in pset]
    cols = []
    for fj in free:
        v = {fj: F.one}
        for pc, r in zip(pivots, prow):
            c = r.get(fj)
            if c is not None:
                v[pc] = F.neg(c)
        cols.append(v)
    return Matrix.from_columns(F, m.cols, cols)


def solve(m: Matrix, b: Matrix):
    """Solve m x = b exactly.

    Returns ``(x, null)`` with ``x`` a particular solution (free variables set
    to zero) or ``None`` when inconsistent, and ``null`` a nullspace basis.
    """
    if b.rows != m.rows:
        raise ValueError(f"dimension mismatch: m has {m.rows} rows, b has {b.rows}")
    F = m.field
    n, k = m.cols, b.cols
    aug = []
    for r, s in zip(m._data, b._data):
        d = dict(r)
        for j, v in s.items():
            d[n + j] = v
        aug.append(d)
    pivots, prow = _echelon(F, aug, n + k)
    null = nullspace(m)
    if pivots and pivots[-1] >= n:
        return None, null
    x = [dict() for _ in range(n)]
    for pc, r in zip(pivots, prow):
        x[pc] = {j - n: v for j, v in r.items() if j >= n}
    sol = Matrix(F, n, k, x)
    if m @ sol != b:
        raise ArithmeticError("substitution check failed")
    return sol, null


def _quotient(sub: Matrix, ambient_dim: int):
    if sub.rows != ambient_dim:
        raise ValueError("sub columns must live in the ambient space")
    F = sub.field
    pivots, prow = _echelon(F, sub.columns(), ambient_dim)
    pset = set(pivots)
    comp = [c for c in range(ambient_dim) if c not in pset]
    cpos = {c: i for i, c in enumerate(comp)}
    data = [dict() for _ in comp]
    for c in comp:
        data[cpos[c]][c] = F.one
    for pc, r in zip(pivots, prow):
        for c, v in r.items():
            if c in cpos:
                data[cpos[c]][pc] = F.neg(v)
    return Matrix(F, len(comp), ambient_dim, data), comp


def quotient_basis(sub: Matrix, ambient_dim: int) -> Matrix:
    """Projection ambient -> ambient / im(sub).

    The complement basis is the standard coordinates outside the pivot set of
    the column space of ``sub``.
    """
    return _quotient(sub, ambient_dim)[0]


def complement_coordinates(sub: Matrix, ambient_dim: int) -> list:
    return _quotient(sub, ambient_dim)[1]


@dataclass(frozen=True)
class Subspace:
    """Column space with a reduced basis, for membership and coordinate queries."""

    field: Field
    ambient: int
    pivots: tuple
    rows: tuple

    @classmethod
    def span(cls, m: Matrix):
        pivots, prow = _echelon(m.field, m.columns(), m.rows)
        return cls(m.field, m.rows, tuple(pivots), tuple(prow))

    @property
    def dim(self):
        return len(self.pivots)

    def coordinates(self, vec: dict):
        """Coordinates of ``vec`` in the reduced basis, or None if outside."""
        F = self.field
        v = dict(vec)
        coords = {}
        for a, (pc, r) in enumerate(zip(self.pivots, self.rows)):
            c = v.get(pc)
            if c is None:
                continue
            coords[a] = c
            nc = F.neg(c)
            for j, x in r.items():
                w = F.add(v[j], F.mul(nc, x)) if j in v else F.mul(nc, x)
                if F.is_zero(w):
                    v.pop(j, None)
                else:
                    v[j] = w
        return None if v else coords
