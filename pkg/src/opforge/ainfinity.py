"""The A-infinity operad as a cellular operad, and resolutions by attaching cells."""
from __future__ import annotations

from . import chaincat as ch
from .cellular import CellOperad, extend_morphism
from .exactla import QQ, Matrix, TruncationError, solve
from .operads import OperadMorphism, ass_operad, lin_add, unit_operad
from .seqcomp import ChainBase

__all__ = ["a_infinity_operad", "a_infinity_generator", "a_infinity_boundary", "resolve_by_cells", "Resolution"]


def a_infinity_generator(P: CellOperad, n: int) -> dict:
    """``m_n`` inside a presentation built by :func:`a_infinity_operad`."""
    cell = P.cells[n - 2]
    return P.generator((cell.number, n - 2, cell.comp[n - 2][0]))


def a_infinity_boundary(P: CellOperad, n: int) -> dict:
    """``-sum (-1)^(r+st) m_(r+1+t) o_(r+1) m_s`` over ``r+s+t = n``, ``2 <= s <= n-1``."""
    F = P.field
    out = {}
    for s in range(2, n):
        for r in range(0, n - s + 1):
            t = n - s - r
            outer = r + 1 + t
            if outer < 2:
                continue
            term = P.compose_elems(outer, r + 1, s, a_infinity_generator(P, outer), a_infinity_generator(P, s))
            sign = -1 if (r + s * t) % 2 else 1
            lin_add(F, out, term, F.sign(-sign))
    return out


def a_infinity_operad(arity_bound: int, field=QQ):
    """Cells ``m_n`` (arity n, degree n-2) attached in increasing n, and ``q: A-inf -> Ass``.

    ``m_2`` is the free cell ``0 -> k[0]``; ``m_n`` for ``n >= 3`` is ``S^(n-3) -> D^(n-2)``
    attached along its boundary.
    """
    base = ChainBase(field)
    P = CellOperad(unit_operad(base, arity_bound), (), name="A-inf")
    for n in range(2, arity_bound + 1):
        if n == 2:
            f = ch.zero_into(ch.unit_complex(field))
            P = P.attach(2, f, lambda idx, j: {})
        else:
            f = ch.sphere_into_disk(n - 2, field)
            bd = a_infinity_boundary(P, n)
            P = P.attach(n, f, lambda idx, j, bd=bd: bd)
    ass = ass_operad(base, arity_bound)
    base_map = OperadMorphism(P.base_op, ass, lambda k, key: {key: field.one}, "unit")
    images = {}
    if arity_bound >= 2:
        images[P.cells[0].generators()[0]] = {(0, 0): field.one}
    q = extend_morphism(P, base_map, images, ass)
    return P, q


class Resolution:
    """Outcome of :func:`resolve_by_cells`."""

    def __init__(self, operad, comparison, converged, defects, steps):
        self.operad, self.comparison = operad, comparison
        self.converged, self.defects, self.steps = converged, defects, steps

    def __repr__(self):
        return f"Resolution(cells={len(self.operad.cells)}, converged={self.converged}, defects={self.defects})"


def resolve_by_cells(target, arity_bound: int, degree_bound: int, t_max=None, max_rounds=8) -> Resolution:
    """Attach cells to ``unit_operad`` until the comparison map to ``target`` is a quasi-iso.

    Works arity by arity and degree by degree: a missing homology class gets a free
    sphere cell sent to a representative; a cycle killed by the comparison gets a
    disk cell bounding it, sent to a chosen preimage. Repeats until a full sweep finds
    no defect (arities <= ``arity_bound``, degrees <= ``degree_bound``) or the rounds run out.

    With a weight bound ``t_max`` the top weight of each truncated component carries
    classes whose killers would need more weight. Defects are then audited in the
    stable range: classes of weight < ``t_max`` that survive in the weight-``t_max``
    truncation.
    """
    if target.kind != "chain":
        raise ValueError("resolve_by_cells needs the chain base")
    N = min(arity_bound, target.arity_bound)
    P = CellOperad(unit_operad(target.base, target.arity_bound), (), t_max, name="resolution")
    audit = None if t_max is None else t_max - 1
    images = {}
    steps = []

    def comparison(P):
        base_map = OperadMorphism(P.base_op, target, lambda k, key: target.unit(0), "unit")
        return extend_morphism(P, base_map, images, target)

    for _ in range(max_rounds):
        changed = False
        for n in range(0, N + 1):
            for d in range(0, degree_bound + 1):
                fix = _defects(P, comparison(P), target, n, d, audit, first=True)
                if fix is None:
                    continue
                kind, z, w = fix
                F = target.field
                if kind == "missing":
                    P = P.attach(n, ch.zero_into(ch.sphere(d, F)), lambda idx, j: {})
                else:
                    P = P.attach(n, ch.sphere_into_disk(d + 1, F), lambda idx, j, z=z: z)
                images[P.cells[-1].generators()[-1]] = w
                steps.append((kind, n, d))
                changed = True
        if not changed:
            break
    phi = comparison(P)
    defects = sum(_defects(P, phi, target, n, d, audit) for n in range(N + 1) for d in range(degree_bound + 1))
    return Resolution(P, phi, defects == 0, defects, steps)


def _weight_subcomplex(P, C, n, audit):
    """Inclusion of the span of basis trees of weight <= ``audit`` into ``C = P(n)``."""
    F = P.field
    B = P.basis(n)
    keep = {d: [j for j, k in enumerate(B.get(d, [])) if P.tree_weight(k[1]) <= audit] for d in C.degrees()}
    incl = {d: Matrix.from_columns(F, C.dim(d), [{j: F.one} for j in js]) for d, js in keep.items()}
    diff = {}
    for d in range(C.lo + 1, C.hi + 1):
        rows = {j: i for i, j in enumerate(keep[d - 1])}
        cols = []
        for j in keep[d]:
            col = C.d(d).column(j)
            if any(r not in rows for r in col):
                raise ArithmeticError("weight filtration is not a subcomplex")
            cols.append({rows[r]: v for r, v in col.items()})
        diff[d] = Matrix.from_columns(F, len(keep[d - 1]), cols)
    S = ch.ChainComplex(F, C.window, {d: len(js) for d, js in keep.items()}, diff)
    return ch.ChainMap(S, C, incl)


def _defects(P, phi, target, n, d, audit, first=False):
    """Homology defects of the comparison in arity ``n``, degree ``d``.

    Returns the count, or with ``first`` the first fix: ``("kill", cycle, preimage)``
    for a surviving class sent to zero, ``("missing", None, representative)`` for a
    target class not hit.
    """
    from .exactla import nullspace
    F = P.field
    try:
        f = phi.component(n)
    except TruncationError:
        return None if first else 1
    C, T = f.source, f.target
    if audit is None:
        iota = C.identity()
    else:
        iota = _weight_subcomplex(P, C, n, audit)
    S = iota.source
    h_in = ch.induced_homology_map(iota).get(d)
    h_cmp = ch.induced_homology_map(f @ iota).get(d)
    if h_in is None or h_cmp is None:
        return None if first else 0
    K = nullspace(h_cmp)
    surviving = h_in @ K
    missing_rank = h_cmp.rank()
    if not first:
        return surviving.rank() + (h_cmp.rows - missing_rank)
    keys, tkeys = P.basis(n), target.basis(n)
    for j in range(K.cols):
        if not surviving.column(j):
            continue
        x = K.column(j)
        zS = ch.homology_representatives(S, d).apply(x)
        z = iota[d].apply(zS)
        img = Matrix.from_columns(F, T.dim(d), [f[d].apply(z)])
        b, _ = solve(T.d(d + 1), img)
        z_el = {keys[d][r]: v for r, v in z.items()}
        b_el = {tkeys[d + 1][r]: v for r, v in b.column(0).items()}
        return ("kill", z_el, b_el)
    for j in range(h_cmp.rows):
        e = Matrix.from_columns(F, h_cmp.rows, [{j: F.one}])
        if h_cmp.cols and solve(h_cmp, e)[0] is not None:
            continue
        rep = ch.homology_representatives(T, d).column(j)
        return ("missing", None, {tkeys[d][r]: v for r, v in rep.items()})
    return None
