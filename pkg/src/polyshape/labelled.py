"""Labelled shapes and the operations that build them.

A labelled shape is a finite polygraph together with an ordered list of leaf
vertices and an ordered list of root vertices.  Shapes of arity (n, m) play
the role of n-input, m-output composition patterns; the closure operations
below (grafting, window grafting, juxtaposition, relabelling) assemble larger
patterns out of smaller ones by gluing bodies along boundary vertices.

Index conventions: leaf/root positions handed to grafting operations are
1-based, matching the usual notation for plugging "output i into input j".
Permutations are 0-based tuples p with p[k] the image of position k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .polygraph import (
    Edge,
    Polygraph,
    PolyMorphism,
    coproduct,
    invert_perm,
    is_perm,
    pushout_discrete,
    make_span,
    validate,
)


@dataclass(frozen=True)
class LabelledShape:
    body: Polygraph
    leaves: tuple[str, ...]
    roots: tuple[str, ...]

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.body, self.leaves, self.roots))
            self.__dict__["_hash"] = h
        return h

    @property
    def arity(self) -> tuple[int, int]:
        return (len(self.leaves), len(self.roots))

    @property
    def edge_count(self) -> int:
        return len(self.body.edges)

    @cached_property
    def max_edge_arity(self) -> int:
        return max((max(e.arity) for e in self.body.edges), default=0)


def shape_errors(x: LabelledShape) -> list[str]:
    problems = validate(x.body)
    for v in x.leaves:
        if v not in x.body.vertex_set:
            problems.append(f"leaf {v!r} is not a vertex of the body")
    for v in x.roots:
        if v not in x.body.vertex_set:
            problems.append(f"root {v!r} is not a vertex of the body")
    return problems


def make_shape(body: Polygraph, leaves, roots) -> LabelledShape:
    x = LabelledShape(body, tuple(leaves), tuple(roots))
    problems = shape_errors(x)
    if problems:
        raise ValueError("; ".join(problems))
    return x


def identity_shape() -> LabelledShape:
    """The trivial (1,1) shape: one vertex serving as both leaf and root."""
    body = Polygraph(("v0",), ())
    return LabelledShape(body, ("v0",), ("v0",))


def empty_shape() -> LabelledShape:
    """The (0,0) shape with nothing in it (the nullary juxtaposition unit)."""
    return LabelledShape(Polygraph((), ()), (), ())


def corolla(n: int, m: int) -> LabelledShape:
    """A single edge of arity (n, m) with its boundary read off in order."""
    sources = tuple(f"v{i}" for i in range(n))
    targets = tuple(f"v{n + j}" for j in range(m))
    body = Polygraph(sources + targets, (Edge("e0", sources, targets),))
    return LabelledShape(body, sources, targets)


def relabel(x: LabelledShape, phi: tuple[int, ...], psi: tuple[int, ...]) -> LabelledShape:
    """Permute the boundary: new leaf k is old leaf phi[k], and old root j
    becomes new root psi[j]."""
    n, m = x.arity
    if not is_perm(tuple(phi), n) or not is_perm(tuple(psi), m):
        raise ValueError("permutation does not match the shape's arity")
    inv_psi = invert_perm(tuple(psi))
    return LabelledShape(x.body,
                         tuple(x.leaves[phi[k]] for k in range(n)),
                         tuple(x.roots[inv_psi[k]] for k in range(m)))


def multi_graft_legs(y: LabelledShape, x: LabelledShape, root_window, leaf_window
                     ) -> tuple[LabelledShape, PolyMorphism, PolyMorphism]:
    """Like multi_graft, but also return the two gluing legs (the morphisms
    from x.body and y.body into the glued body)."""
    I = tuple(root_window)
    J = tuple(leaf_window)
    n, m = x.arity
    p, q = y.arity
    if len(I) != len(J) or not I:
        raise ValueError("windows must be nonempty and of equal length")
    if list(I) != list(range(I[0], I[0] + len(I))) or \
       list(J) != list(range(J[0], J[0] + len(J))):
        raise ValueError("windows must be contiguous ascending runs")
    i, j, k = I[0], J[0], len(I) - 1
    if not (1 <= i and i + k <= m):
        raise ValueError("root window out of range")
    if not (1 <= j and j + k <= p):
        raise ValueError("leaf window out of range")
    glued, from_x, from_y = pushout_discrete(
        make_span((x.roots[i - 1 + t], y.leaves[j - 1 + t]) for t in range(k + 1)),
        x.body, y.body)
    fx, fy = from_x.vertex_map, from_y.vertex_map
    leaves = (tuple(fy[v] for v in y.leaves[:j - 1])
              + tuple(fx[v] for v in x.leaves)
              + tuple(fy[v] for v in y.leaves[j + k:]))
    roots = (tuple(fx[v] for v in x.roots[:i - 1])
             + tuple(fy[v] for v in y.roots)
             + tuple(fx[v] for v in x.roots[i + k:]))
    return LabelledShape(glued, leaves, roots), from_x, from_y


def multi_graft(y: LabelledShape, x: LabelledShape,
                root_window, leaf_window) -> LabelledShape:
    """Glue a contiguous window of x's roots onto a contiguous window of
    y's leaves, pairing them in order.

    ``root_window`` and ``leaf_window`` are equal-length runs of consecutive
    1-based positions (root i+t of x meets leaf j+t of y).  The bodies are
    glued by a discrete pushout, one identification per window position.
    """
    return multi_graft_legs(y, x, root_window, leaf_window)[0]


def graft(y: LabelledShape, x: LabelledShape, i: int, j: int) -> LabelledShape:
    """Plug root i of x into leaf j of y (both 1-based).

    The result has arity (n + p - 1, m + q - 1) where x has arity (n, m) and
    y has arity (p, q): x's leaves replace the consumed leaf of y, and y's
    roots replace the consumed root of x.
    """
    return multi_graft(y, x, (i,), (j,))


def juxtapose_legs(y: LabelledShape, x: LabelledShape
                   ) -> tuple[LabelledShape, PolyMorphism, PolyMorphism]:
    """Like juxtapose, but also return the two coproduct injections."""
    both, from_x, from_y = coproduct(x.body, y.body)
    fx, fy = from_x.vertex_map, from_y.vertex_map
    shape = LabelledShape(
        both,
        tuple(fx[v] for v in x.leaves) + tuple(fy[v] for v in y.leaves),
        tuple(fx[v] for v in x.roots) + tuple(fy[v] for v in y.roots))
    return shape, from_x, from_y


def juxtapose(y: LabelledShape, x: LabelledShape) -> LabelledShape:
    """Place two shapes side by side with no gluing.

    The boundary lists concatenate with x's labels first, matching the
    grafting convention that the second argument is the "earlier" shape.
    """
    return juxtapose_legs(y, x)[0]
