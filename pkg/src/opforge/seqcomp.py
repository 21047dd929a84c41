"""Arity-indexed sequences and the composition product."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import chaincat as ch
from . import simpcat as sv
from .exactla import Field, QQ, TruncationError

__all__ = [
    "ChainBase", "SimplicialBase", "Sequence", "SequenceMap", "compose_product",
    "unit_sequence", "seq_model_predicates", "compositions",
]


class ChainBase:
    """Chain complexes over ``field``; ``window`` is the default degree window."""

    kind = "chain"

    def __init__(self, field: Field = QQ, window=(0, 6)):
        self.field, self.window = field, tuple(window)

    def __eq__(self, other):
        return isinstance(other, ChainBase) and self.field == other.field

    def __hash__(self):
        return hash(("chain", self.field))

    def __repr__(self):
        return f"ChainBase({self.field.tag})"

    def zero(self):
        return ch.zero_complex(self.field, (0, 0))

    def unit(self):
        return ch.unit_complex(self.field)

    def tensor(self, a, b):
        return ch.tensor(a, b)

    def direct_sum(self, objs):
        objs = list(objs)
        return ch.direct_sum(objs) if objs else self.zero()

    def size(self, obj) -> int:
        return obj.total_dim()

    def graded_dims(self, obj) -> dict:
        return obj.graded_dims()

    def identity(self, obj):
        return obj.identity()

    def zero_map(self, a, b):
        return ch.ChainMap(a, b, {})

    def predicates(self, f):
        return ch.is_cofibration(f), ch.is_weak_equivalence(f), ch.is_fibration(f)

    def is_weak_equivalence(self, f):
        return ch.is_weak_equivalence(f)

    def homology(self, obj) -> dict:
        return ch.homology(obj)


class SimplicialBase:
    """Simplicial vector spaces over ``field`` truncated at level ``s_max``."""

    kind = "simplicial"

    def __init__(self, field: Field = QQ, s_max: int = 3):
        self.field, self.s_max = field, s_max

    def __eq__(self, other):
        return isinstance(other, SimplicialBase) and (self.field, self.s_max) == (other.field, other.s_max)

    def __hash__(self):
        return hash(("simplicial", self.field, self.s_max))

    def __repr__(self):
        return f"SimplicialBase({self.field.tag}, s_max={self.s_max})"

    def zero(self):
        return sv.zero_sv(self.field, self.s_max)

    def unit(self):
        return sv.constant(self.field, self.s_max)

    def tensor(self, a, b):
        return sv.sv_tensor(a, b)

    def direct_sum(self, objs):
        objs = list(objs)
        return sv.sv_direct_sum(objs) if objs else self.zero()

    def size(self, obj) -> int:
        return sum(obj.levels.values())

    def graded_dims(self, obj) -> dict:
        return {n: k for n, k in obj.levels.items() if k}

    def identity(self, obj):
        return obj.identity()

    def zero_map(self, a, b):
        return sv.SimplicialMap(a, b, {})

    def predicates(self, f):
        return sv.sv_model_predicates(f)

    def is_weak_equivalence(self, f):
        return sv.sv_model_predicates(f)[1]

    def homology(self, obj) -> dict:
        """Homology of the normalization below the top level."""
        h = ch.homology(sv.normalize(obj))
        return {d: k for d, k in h.items() if d < self.s_max}


def compositions(n: int, m: int, min_part: int = 1):
    """Ordered m-tuples of integers >= min_part summing to n, in lexicographic order."""
    if m == 0:
        if n == 0:
            yield ()
        return
    for first in range(min_part, n - min_part * (m - 1) + 1):
        for rest in compositions(n - first, m - 1, min_part):
            yield (first,) + rest


@dataclass
class Sequence:
    base: object
    arity_bound: int
    components: dict
    summands: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        for n in range(self.arity_bound + 1):
            if n not in self.components:
                self.components[n] = self.base.zero()

    def __getitem__(self, n):
        if n > self.arity_bound:
            raise TruncationError(f"arity {n} beyond bound {self.arity_bound}")
        return self.components[n]

    def dims(self) -> dict:
        return {n: self.base.graded_dims(c) for n, c in self.components.items()}

    def total_dims(self) -> dict:
        return {n: self.base.size(c) for n, c in self.components.items()}

    def is_reduced(self) -> bool:
        return self.base.size(self.components[0]) == 0

    def to_json(self) -> dict:
        return {"base": self.base.kind, "arity_bound": self.arity_bound,
                "components": {str(n): c.to_json() for n, c in self.components.items()}}

    @classmethod
    def from_json(cls, obj) -> "Sequence":
        comps = {}
        if obj.get("base", "chain") == "chain":
            comps = {int(n): ch.ChainComplex.from_json(c) for n, c in obj["components"].items()}
            f = next(iter(comps.values())).field if comps else QQ
            base = ChainBase(f)
        else:
            comps = {int(n): sv.SimplicialVS.from_json(c) for n, c in obj["components"].items()}
            c0 = next(iter(comps.values()))
            base = SimplicialBase(c0.field, c0.s_max)
        return cls(base, int(obj["arity_bound"]), comps)


@dataclass
class SequenceMap:
    source: Sequence
    target: Sequence
    components: dict

    def __getitem__(self, n):
        return self.components[n]

    @classmethod
    def identity(cls, s: Sequence):
        return cls(s, s, {n: s.base.identity(c) for n, c in s.components.items()})


def unit_sequence(base, arity_bound: int) -> Sequence:
    """The unit for the composition product: the tensor unit in arity 1."""
    return Sequence(base, arity_bound, {n: (base.unit() if n == 1 else base.zero()) for n in range(arity_bound + 1)})


def compose_product(u: Sequence, v: Sequence, policy="reduced") -> Sequence:
    """``(u o v)(n) = sum over m, p_1+..+p_m = n of u(m) (x) v(p_1) (x) .. (x) v(p_m)``.

    ``policy`` is ``"reduced"`` (needs ``v(0) = 0``) or ``("bounded", m_max)``.
    Summands are ordered by ``m`` and then lexicographically in ``p``.
    """
    base = u.base
    N = min(u.arity_bound, v.arity_bound)
    if policy == "reduced":
        if not v.is_reduced():
            raise ValueError("reduced policy needs v(0) = 0")
        m_max, min_part = None, 1
    else:
        kind, m_max = policy
        if kind != "bounded":
            raise ValueError(f"unknown policy {policy!r}")
        if m_max > u.arity_bound:
            raise TruncationError(f"m_max={m_max} exceeds the arity bound of u")
        min_part = 0
    comps, labels = {}, {}
    for n in range(N + 1):
        parts, lab = [], []
        top = n if m_max is None else m_max
        for m in range(0, top + 1):
            if base.size(u[m]) == 0:
                continue
            for p in compositions(n, m, min_part):
                obj = u[m]
                for pi in p:
                    obj = base.tensor(obj, v[pi])
                if base.size(obj):
                    parts.append(obj)
                    lab.append((m, p))
        comps[n] = base.direct_sum(parts)
        labels[n] = lab
    return Sequence(base, N, comps, labels)


def seq_model_predicates(f: SequenceMap):
    """Levelwise (cofibration, weak equivalence, fibration)."""
    base = f.source.base
    flags = [base.predicates(m) for m in f.components.values()]
    return tuple(all(x[i] for x in flags) for i in range(3))
