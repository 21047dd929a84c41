"""Planar rooted trees and two-coloured leveled trees.

A planar tree is the string ``"L"`` (a leaf) or a tuple of child trees (a vertex
whose arity is the tuple length). A leveled tree is ``"L"``, ``("o", children)`` or
``("e", children)``: the root is an ``o`` vertex, ``o`` vertices have leaves or ``e``
vertices as children, ``e`` vertices have only ``o`` vertices as children.
"""
from __future__ import annotations

from functools import lru_cache

LEAF = "L"

__all__ = [
    "LEAF", "leaves", "vertex_count", "arities", "canonical_key", "enumerate_planar_trees",
    "enumerate_leveled_trees", "tree_degree_and_dims", "to_nested", "from_nested",
    "associahedron_dims", "catalan", "graft",
]


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


def _is_leveled(t) -> bool:
    return t != LEAF and len(t) > 0 and t[0] in ("o", "e")


def _children(t):
    if t == LEAF:
        return ()
    if _is_leveled(t):
        return t[1]
    return t


def leaves(t) -> int:
    if t == LEAF:
        return 1
    return sum(leaves(c) for c in _children(t))


def vertex_count(t) -> int:
    if t == LEAF:
        return 0
    return 1 + sum(vertex_count(c) for c in _children(t))


def arities(t) -> list:
    """Vertex arities in preorder."""
    if t == LEAF:
        return []
    ch = _children(t)
    out = [len(ch)]
    for c in ch:
        out.extend(arities(c))
    return out


def colours(t) -> list:
    """Vertex colours (``"o"``/``"e"``) of a leveled tree in preorder."""
    if t == LEAF:
        return []
    out = [t[0]]
    for c in t[1]:
        out.extend(colours(c))
    return out


def canonical_key(t):
    """Sort key: leaves first, then vertices by arity, then by children."""
    if t == LEAF:
        return (0,)
    ch = _children(t)
    tag = (t[0],) if _is_leveled(t) else ()
    return (1, len(ch)) + tag + (tuple(canonical_key(c) for c in ch),)


def graft(s, i: int, t):
    """Plant ``t`` on the ``i``-th leaf (1-based) of the planar tree ``s``."""
    def go(node, k):
        if node == LEAF:
            return (t, 0) if k == 1 else (LEAF, k - 1)
        out = []
        for c in node:
            if k <= 0:
                out.append(c)
                continue
            new, k = go(c, k)
            out.append(new)
        return tuple(out), k
    res, rest = go(s, i)
    if rest > 0:
        raise IndexError(f"tree has fewer than {i} leaves")
    return res


def _forests(k, n, v, trees_of):
    """Ordered k-tuples of trees with n leaves and v vertices in total."""
    if k == 0:
        if n == 0 and v == 0:
            yield ()
        return
    for n1 in range(0, n + 1):
        for v1 in range(0, v + 1):
            first = trees_of(n1, v1)
            if not first:
                continue
            for rest in _forests(k - 1, n - n1, v - v1, trees_of):
                for t in first:
                    yield (t,) + rest


def enumerate_planar_trees(n_leaves: int, allowed_arities, max_vertices=None) -> list:
    """All planar trees with ``n_leaves`` leaves and vertex arities in the allowed set."""
    allowed = tuple(sorted(set(allowed_arities)))
    if max_vertices is None:
        if 0 in allowed or 1 in allowed:
            raise ValueError("arities 0 or 1 give infinitely many trees; pass max_vertices")
        max_vertices = max(n_leaves - 1, 0)

    @lru_cache(maxsize=None)
    def trees_of(n, v):
        if v == 0:
            return (LEAF,) if n == 1 else ()
        out = []
        for k in allowed:
            out.extend(_forests(k, n, v - 1, trees_of))
        return tuple(out)

    found = []
    for v in range(max_vertices + 1):
        found.extend(trees_of(n_leaves, v))
    return sorted(set(found), key=canonical_key)


def enumerate_leveled_trees(n_leaves: int, t_even: int, even_arity_support, odd_arity_support=None) -> list:
    """Leveled trees with ``n_leaves`` leaves and exactly ``t_even`` even vertices.

    ``odd_arity_support=None`` allows every odd arity. Two odd vertices are never
    adjacent, so the family is finite.
    """
    even = tuple(sorted(set(even_arity_support)))
    odd_ok = (lambda k: True) if odd_arity_support is None else set(odd_arity_support).__contains__

    @lru_cache(maxsize=None)
    def odd_trees(n, t):
        out = []
        for k in range(0, n + t + 1):
            if odd_ok(k):
                for kids in _odd_children(k, n, t):
                    out.append(("o", kids))
        return tuple(out)

    @lru_cache(maxsize=None)
    def even_trees(n, t):
        if t < 1:
            return ()
        out = []
        for k in even:
            for kids in _seq(k, n, t - 1, odd_trees):
                out.append(("e", kids))
        return tuple(out)

    def slot(n, t):
        # a child of an odd vertex: a leaf or an even subtree
        out = [LEAF] if (n, t) == (1, 0) else []
        out.extend(even_trees(n, t))
        return out

    def _odd_children(k, n, t):
        return _seq(k, n, t, slot)

    def _seq(k, n, t, fn):
        if k == 0:
            if n == 0 and t == 0:
                yield ()
            return
        for n1 in range(n + 1):
            for t1 in range(t + 1):
                heads = fn(n1, t1)
                if not heads:
                    continue
                for rest in _seq(k - 1, n - n1, t - t1, fn):
                    for h in heads:
                        yield (h,) + rest

    return sorted(set(odd_trees(n_leaves, t_even)), key=canonical_key)


def tree_degree_and_dims(tree, generator_dims: dict, odd_dims: dict | None = None) -> dict:
    """Graded dimension of the decorated tensor product over the vertices.

    ``generator_dims[k]`` is ``{degree: dim}`` for arity-``k`` decorations. For a
    leveled tree, even vertices use ``generator_dims`` and odd vertices ``odd_dims``.
    """
    total = {0: 1}
    stack = [tree]
    while stack:
        t = stack.pop()
        if t == LEAF:
            continue
        ch = _children(t)
        table = odd_dims if (_is_leveled(t) and t[0] == "o") else generator_dims
        dec = table.get(len(ch), {}) if table else {}
        nxt = {}
        for d1, a in total.items():
            for d2, b in dec.items():
                if a * b:
                    nxt[d1 + d2] = nxt.get(d1 + d2, 0) + a * b
        total = nxt
        stack.extend(ch)
    return {d: n for d, n in total.items() if n}


def associahedron_dims(n: int) -> dict:
    """Degree -> number of planar trees with n leaves, arities >= 2 and degree n - v - 1."""
    out = {}
    for t in enumerate_planar_trees(n, range(2, n + 1)):
        d = n - vertex_count(t) - 1
        out[d] = out.get(d, 0) + 1
    return out


def to_nested(t):
    """``[2, [2, "L", "L"], "L"]`` style notation (colours are implied by level)."""
    if t == LEAF:
        return LEAF
    ch = _children(t)
    return [len(ch)] + [to_nested(c) for c in ch]


def from_nested(obj, leveled=False):
    def go(o, colour):
        if o == LEAF:
            return LEAF
        k, kids = o[0], o[1:]
        if len(kids) != k:
            raise ValueError(f"arity {k} with {len(kids)} children")
        nxt = "e" if colour == "o" else "o"
        sub = tuple(go(c, nxt) for c in kids)
        return (colour, sub) if leveled else sub
    return go(obj, "o")
