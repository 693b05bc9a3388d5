"""Bounded shapely functors and their algebra.

A functor here is a finite stage table: for every boundary arity (n, m)
within bounds, a set of canonical labelled shapes.  On top of that sit the
lattice operations (join, containment), the substitution composite, the
free-monad closure, pointwise evaluation on a polygraph, and spectrum
export.

Substitution follows the combinatorial reading: an inner shape is glued
into each edge of the outer shape, boundary onto endpoints, and the outer
labels survive.  Two conventions keep the unit laws exact for the
one-shape identity functor, which has nothing to offer at other arities:
any edge may be left in place when the inner functor contains the identity
shape (as if a corolla of the right arity were available), and the
identity shape is itself never glued in, nor substituted into.  The outer
identity instead passes the whole inner functor through.  See the unit
tests for the laws these conventions buy.

The free monad comes in two flavours.  For the three built-in signatures
the closure is computed directly, by growing all bodies of the matching
shape class and labelling them; the generic path iterates the join-and-
substitute fixpoint, which stays within bounds and can therefore miss
shapes whose every decomposition passes through an over-bound arity.  The
signature constructors tag their output so free_monad can pick the exact
route.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations

from .canon import (PermGroup, body_certificate, body_from_certificate,
                    canonical_form, label_preserving_automorphisms,
                    orbit_morphism_valid, trivial_group)
from .cellular import well_labelled
from .labelled import (LabelledShape, corolla, identity_shape, juxtapose,
                       multi_graft, relabel)
from .polygraph import (MODES, PLANAR, Polygraph, Edge, PolyMorphism,
                        compose_morphisms, discrete, hom)
from .shapes import PROP, PROPERAD, body_boundary, _with_isolated

POLYCAT = "polycat"
KINDS = (POLYCAT, PROPERAD, PROP)


# ---------------------------------------------------------------------------
# The functor type


class ShapelyFunctor:
    """A stage table of canonical shapes within explicit bounds.

    ``stages`` maps an arity pair to a digest-keyed dict of canonical
    shapes; empty stages are not stored.  Instances are treated as
    immutable: every operation builds a fresh table.  ``kind`` is a
    provenance tag set only by the built-in signature constructors, and
    ``non_degenerate`` records that the functor carries the vertex stage
    (all constructors here produce such functors).
    """

    __slots__ = ("mode", "max_edges", "max_arity", "stages",
                 "non_degenerate", "kind")

    def __init__(self, mode: str, bounds, stages, non_degenerate: bool = True,
                 kind: str | None = None):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        max_edges, max_arity = bounds
        if max_edges < 0 or max_arity < 1:
            raise ValueError("bounds must allow at least arity one")
        if kind is not None and kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.mode = mode
        self.max_edges = int(max_edges)
        self.max_arity = int(max_arity)
        self.stages = {st: dict(table) for st, table in stages.items() if table}
        self.non_degenerate = bool(non_degenerate)
        self.kind = kind

    @property
    def bounds(self) -> tuple[int, int]:
        return (self.max_edges, self.max_arity)

    def arities(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.stages))

    def stage(self, n: int, m: int) -> tuple[LabelledShape, ...]:
        table = self.stages.get((n, m), {})
        return tuple(table[d] for d in sorted(table))

    def stage_digests(self, n: int, m: int) -> tuple[str, ...]:
        return tuple(sorted(self.stages.get((n, m), {})))

    def shapes(self):
        """All stored shapes, stages in sorted order, digests sorted."""
        for st in sorted(self.stages):
            table = self.stages[st]
            for d in sorted(table):
                yield table[d]

    @property
    def shape_count(self) -> int:
        return sum(len(t) for t in self.stages.values())

    def contains_digest(self, digest: str) -> bool:
        return any(digest in t for t in self.stages.values())

    def __eq__(self, other):
        if not isinstance(other, ShapelyFunctor):
            return NotImplemented
        return (self.mode == other.mode and self.bounds == other.bounds
                and self.stages.keys() == other.stages.keys()
                and all(self.stages[st].keys() == other.stages[st].keys()
                        for st in self.stages))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        return (f"ShapelyFunctor(mode={self.mode!r}, bounds={self.bounds}, "
                f"shapes={self.shape_count})")


def _stage_errors(x: LabelledShape, max_edges: int, max_arity: int) -> str | None:
    n, m = x.arity
    if x.edge_count > max_edges:
        return f"has {x.edge_count} edges, bound is {max_edges}"
    if x.edge_count and x.max_edge_arity > max_arity:
        return f"edge arity {x.max_edge_arity} exceeds bound {max_arity}"
    if max(n, m) > max_arity:
        return f"boundary arity ({n}, {m}) exceeds bound {max_arity}"
    return None


def _table_from(shapes, mode, bounds, kind=None) -> ShapelyFunctor:
    max_edges, max_arity = bounds
    stages: dict[tuple[int, int], dict[str, LabelledShape]] = {}
    for idx, x in enumerate(shapes):
        wl = well_labelled(x)
        if not wl:
            raise ValueError(f"shape {idx} is not well-labelled: {wl.reason}")
        bad = _stage_errors(x, max_edges, max_arity)
        if bad:
            raise ValueError(f"shape {idx} exceeds bounds: {bad}")
        cf = canonical_form(x, mode)
        stages.setdefault(x.arity, {})[cf.digest] = cf.shape
    return ShapelyFunctor(mode, bounds, stages, kind=kind)


def from_shapes(shapes, mode: str = PLANAR, bounds=(4, 3)) -> ShapelyFunctor:
    """Build a functor from explicit shapes: validated, canonicalized,
    deduped.  Raises ValueError on an ill-labelled or over-bound shape."""
    return _table_from(shapes, mode, bounds)


@lru_cache(maxsize=8)
def _id_digest(mode: str) -> str:
    return canonical_form(identity_shape(), mode).digest


def identity_functor(bounds, mode: str = PLANAR) -> ShapelyFunctor:
    """The unit for substitution: just the identity shape at (1, 1)."""
    return _table_from([identity_shape()], mode, bounds)


# ---------------------------------------------------------------------------
# Signatures


def _all_relabellings(x: LabelledShape):
    n, m = x.arity
    for phi in permutations(range(n)):
        for psi in permutations(range(m)):
            yield relabel(x, phi, psi)


def _signature_shapes(kind: str, max_edges: int, max_arity: int):
    """The generating shapes of Definition-style presentations: identity,
    relabelled corollas, single composites of two corollas, and for props
    additionally juxtaposed pairs and the empty shape."""
    A = max_arity
    yield identity_shape()
    if kind == PROP:
        yield LabelledShape(Polygraph((), ()), (), ())
    if max_edges >= 1:
        for n in range(A + 1):
            for m in range(A + 1):
                yield from _all_relabellings(corolla(n, m))
    if max_edges >= 2:
        for n in range(A + 1):
            for m in range(1, A + 1):
                x = corolla(n, m)
                for p in range(1, A + 1):
                    for q in range(A + 1):
                        y = corolla(p, q)
                        widths = (1,) if kind == POLYCAT else range(1, min(m, p) + 1)
                        for w in widths:
                            if p + n - w > A or q + m - w > A:
                                continue
                            for i in range(1, m - w + 2):
                                for j in range(1, p - w + 2):
                                    yield multi_graft(
                                        y, x,
                                        tuple(range(i, i + w)),
                                        tuple(range(j, j + w)))
        if kind == PROP:
            for n in range(A + 1):
                for m in range(A + 1):
                    x = corolla(n, m)
                    for p in range(A - n + 1):
                        for q in range(A - m + 1):
                            yield juxtapose(corolla(p, q), x)


def sigma_polycat(bounds=(4, 3), mode: str = PLANAR) -> ShapelyFunctor:
    """Generators of polycategorical composition, truncated to bounds."""
    return _table_from(_signature_shapes(POLYCAT, *bounds), mode, bounds,
                       kind=POLYCAT)


def sigma_properad(bounds=(4, 3), mode: str = PLANAR) -> ShapelyFunctor:
    """Like sigma_polycat, with window composites of any width."""
    return _table_from(_signature_shapes(PROPERAD, *bounds), mode, bounds,
                       kind=PROPERAD)


def sigma_prop(bounds=(4, 3), mode: str = PLANAR) -> ShapelyFunctor:
    """The properad generators plus juxtaposed corolla pairs and the
    empty shape."""
    return _table_from(_signature_shapes(PROP, *bounds), mode, bounds,
                       kind=PROP)


# ---------------------------------------------------------------------------
# Lattice structure


def _check_same(F: ShapelyFunctor, G: ShapelyFunctor):
    if F.mode != G.mode:
        raise ValueError("mode mismatch")
    if F.bounds != G.bounds:
        raise ValueError("bounds mismatch")


def join(F: ShapelyFunctor, G: ShapelyFunctor) -> ShapelyFunctor:
    """Pointwise union of the shape tables."""
    _check_same(F, G)
    stages = {st: dict(table) for st, table in F.stages.items()}
    for st, table in G.stages.items():
        stages.setdefault(st, {}).update(table)
    return ShapelyFunctor(F.mode, F.bounds, stages,
                          F.non_degenerate or G.non_degenerate)


def leq(F: ShapelyFunctor, G: ShapelyFunctor) -> bool:
    """Pointwise containment of the shape tables."""
    _check_same(F, G)
    return all(st in G.stages and table.keys() <= G.stages[st].keys()
               for st, table in F.stages.items())


# ---------------------------------------------------------------------------
# Substitution


def _inline(x: LabelledShape, filling) -> LabelledShape:
    """Replace each edge of x by its assigned inner shape (None keeps the
    edge), identifying inner boundary vertices with the edge's endpoints.

    Vertices are tagged pairs during the merge; the result is renamed to
    w0, w1, ... in first-appearance order and its edges to e0, e1, ...
    """
    parent: dict = {}

    def find(a):
        root = a
        while parent[root] is not root:
            root = parent[root]
        while parent[a] is not root:
            parent[a], a = root, parent[a]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra is not rb:
            parent[rb] = ra

    order = []

    def register(tag):
        if tag not in parent:
            parent[tag] = tag
            order.append(tag)

    for v in x.body.vertices:
        register(("o", v))
    raw_edges = []
    for e, inner in zip(x.body.edges, filling):
        if inner is None:
            raw_edges.append((tuple(("o", v) for v in e.sources),
                              tuple(("o", v) for v in e.targets)))
            continue
        k = len(raw_edges), e.name  # unique tag per filled edge
        for v in inner.body.vertices:
            register((k, v))
        for pos, v in enumerate(e.sources):
            union(("o", v), (k, inner.leaves[pos]))
        for pos, v in enumerate(e.targets):
            union(("o", v), (k, inner.roots[pos]))
        for f in inner.body.edges:
            raw_edges.append((tuple((k, v) for v in f.sources),
                              tuple((k, v) for v in f.targets)))

    names: dict = {}
    vertices = []
    for tag in order:
        root = find(tag)
        if root not in names:
            names[root] = f"w{len(names)}"
            vertices.append(names[root])

    def resolve(tag):
        return names[find(tag)]

    edges = tuple(Edge(f"e{t}", tuple(map(resolve, ss)), tuple(map(resolve, ts)))
                  for t, (ss, ts) in enumerate(raw_edges))
    return LabelledShape(Polygraph(tuple(vertices), edges),
                         tuple(resolve(("o", v)) for v in x.leaves),
                         tuple(resolve(("o", v)) for v in x.roots))


def substitute(F: ShapelyFunctor, G: ShapelyFunctor) -> ShapelyFunctor:
    """The composite functor: every edge of an outer F-shape receives an
    inner G-shape of matching arity (or stays put, when G contains the
    identity); outer labels survive.  Outer shapes with an unfillable edge
    contribute nothing; edge-less outer shapes pass through; the outer
    identity passes all of G through.  Results beyond the edge budget are
    discarded."""
    _check_same(F, G)
    idd = _id_digest(G.mode)
    keep_allowed = idd in G.stages.get((1, 1), {})
    stages: dict[tuple[int, int], dict[str, LabelledShape]] = {}

    def emit(stage, digest, shape):
        stages.setdefault(stage, {})[digest] = shape

    for st, table in F.stages.items():
        for dx, x in table.items():
            if dx == idd and st == (1, 1):
                for st2, t2 in G.stages.items():
                    stages.setdefault(st2, {}).update(t2)
                continue
            if x.edge_count == 0:
                emit(st, dx, x)
                continue
            options = []
            feasible = True
            for e in x.body.edges:
                cand = [None] if keep_allowed else []
                for dy, y in G.stages.get(e.arity, {}).items():
                    if dy != idd:
                        cand.append(y)
                if not cand:
                    feasible = False
                    break
                cand.sort(key=lambda y: 1 if y is None else y.edge_count)
                options.append(cand)
            if not feasible:
                continue
            cheapest = [1 if c[0] is None else c[0].edge_count for c in options]
            tail_min = [0] * (len(options) + 1)
            for t in range(len(options) - 1, -1, -1):
                tail_min[t] = tail_min[t + 1] + cheapest[t]

            def assign(t, used, picked):
                if t == len(options):
                    composite = _inline(x, picked)
                    if well_labelled(composite):
                        cf = canonical_form(composite, F.mode)
                        emit(st, cf.digest, cf.shape)
                    return
                for y in options[t]:
                    cost = 1 if y is None else y.edge_count
                    if used + cost + tail_min[t + 1] > F.max_edges:
                        break  # options are cost-sorted
                    picked.append(y)
                    assign(t + 1, used + cost, picked)
                    picked.pop()

            assign(0, 0, [])
    return ShapelyFunctor(F.mode, F.bounds, stages,
                          F.non_degenerate and G.non_degenerate)


# ---------------------------------------------------------------------------
# Free monads


def _int_degrees(nv, edges):
    in_deg = [0] * nv
    out_deg = [0] * nv
    for sources, targets in edges:
        for v in sources:
            out_deg[v] += 1
        for v in targets:
            in_deg[v] += 1
    return in_deg, out_deg


def _int_acyclic(nv, edges) -> bool:
    feeder = {}
    for j, (_, targets) in enumerate(edges):
        for v in targets:
            feeder[v] = j
    succ = [[] for _ in edges]
    for j, (sources, _) in enumerate(edges):
        for v in sources:
            if v in feeder:
                succ[feeder[v]].append(j)
    state = [0] * len(edges)
    for start in range(len(edges)):
        if state[start]:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if state[nxt] == 1:
                    return False
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    break
            else:
                state[node] = 2
                stack.pop()
    return True


def _grown_ints(max_edges: int, max_arity: int, single_wire: bool):
    """Certificates of connected bodies grown corolla by corolla.

    Each step glues a fresh edge's chosen source positions onto distinct
    open outputs and target positions onto distinct open inputs (at least
    one wire total; exactly one when single_wire, which yields trees and
    needs no cycle check).  Removing a spanning-tree-leaf edge from any
    connected body of the class undoes one such step and stays connected,
    so the growth reaches everything.  A body is kept while each
    coordinate of its boundary excess over max_arity can still be paid
    down by the remaining attachments (one unit per attachment for trees,
    up to max_arity otherwise); stages within bounds are collected.
    """
    A = max_arity
    pay = 1 if single_wire else A
    final = set()
    point = body_certificate(1, (), PLANAR)
    final.add(point)
    current: dict = {}
    if max_edges >= 1:
        for a in range(A + 1):
            for b in range(A + 1):
                body = (a + b, ((tuple(range(a)), tuple(range(a, a + b))),))
                current[body_certificate(*body, PLANAR)] = body
    final.update(current)
    for level in range(2, max_edges + 1):
        remaining = max_edges - level
        nxt: dict = {}
        for nv, edges in current.values():
            in_deg, out_deg = _int_degrees(nv, edges)
            opens_in = [v for v in range(nv) if in_deg[v] == 0]
            opens_out = [v for v in range(nv) if out_deg[v] == 0]
            n0, m0 = len(opens_in), len(opens_out)
            for a in range(A + 1):
                for b in range(A + 1):
                    if a + b == 0:
                        continue
                    smax = min(a, m0)
                    tmax = min(b, n0)
                    for s in range(smax + 1):
                        for t in range(tmax + 1):
                            if s + t == 0:
                                continue
                            if single_wire and s + t != 1:
                                continue
                            n2 = n0 + (a - s) - t
                            m2 = m0 + (b - t) - s
                            if (max(n2 - A, 0) > remaining * pay
                                    or max(m2 - A, 0) > remaining * pay):
                                continue
                            for spos in combinations(range(a), s):
                                for spick in permutations(opens_out, s):
                                    for tpos in combinations(range(b), t):
                                        for tpick in permutations(opens_in, t):
                                            fresh = iter(range(nv, nv + a + b))
                                            src = dict(zip(spos, spick))
                                            tgt = dict(zip(tpos, tpick))
                                            sources = tuple(
                                                src[p] if p in src
                                                else next(fresh)
                                                for p in range(a))
                                            targets = tuple(
                                                tgt[p] if p in tgt
                                                else next(fresh)
                                                for p in range(b))
                                            used = a + b - s - t
                                            cand_edges = edges + ((sources,
                                                                   targets),)
                                            cand_nv = nv + used
                                            # compact the vertex ids
                                            cand = _compact(cand_nv, cand_edges)
                                            if s and t and \
                                                    not _int_acyclic(*cand):
                                                continue
                                            cert = body_certificate(*cand,
                                                                    PLANAR)
                                            if cert not in nxt:
                                                nxt[cert] = cand
        for cert, (nv, edges) in nxt.items():
            in_deg, out_deg = _int_degrees(nv, edges)
            if (sum(1 for d in in_deg if d == 0) <= A
                    and sum(1 for d in out_deg if d == 0) <= A):
                final.add(cert)
        current = nxt
    return sorted(final)


def _compact(nv, edges):
    """Renumber vertex ids to a gap-free 0..k-1 in first-use order."""
    seen: dict[int, int] = {}
    out = []
    for sources, targets in edges:
        rs = tuple(seen.setdefault(v, len(seen)) for v in sources)
        rt = tuple(seen.setdefault(v, len(seen)) for v in targets)
        out.append((rs, rt))
    return len(seen), tuple(out)


def _int_stage(nv, edges):
    in_deg, out_deg = _int_degrees(nv, edges)
    return (sum(1 for d in in_deg if d == 0),
            sum(1 for d in out_deg if d == 0))


@lru_cache(maxsize=64)
def _closure_bodies(kind: str, max_edges: int, max_arity: int):
    A = max_arity
    if kind == POLYCAT:
        certs = _grown_ints(max_edges, A, single_wire=True)
    elif kind == PROPERAD:
        certs = _grown_ints(max_edges, A, single_wire=False)
    else:
        pool = []
        for cert in _grown_ints(max_edges, A, single_wire=False):
            nv = cert[0]
            edges = tuple((s, t) for _, _, s, t in cert[1])
            n, m = _int_stage(nv, edges)
            pool.append((cert, n, m, len(edges), nv, edges))
        assemblies = set()

        def assemble(i, nv, edges, n, m, e):
            assemblies.add(body_certificate(nv, edges, PLANAR))
            for k in range(i, len(pool)):
                _, nk, mk, ek, nvk, edgesk = pool[k]
                if n + nk > A or m + mk > A or e + ek > max_edges:
                    continue
                shifted = tuple((tuple(v + nv for v in s),
                                 tuple(v + nv for v in t))
                                for s, t in edgesk)
                assemble(k, nv + nvk, edges + shifted, n + nk, m + mk, e + ek)

        assemble(0, 0, (), 0, 0, 0)
        certs = sorted(assemblies)
    return tuple(body_from_certificate(c, PLANAR) for c in certs)


def _expand_bodies(bodies, mode: str):
    stages: dict[tuple[int, int], dict[str, LabelledShape]] = {}
    for body in bodies:
        ins, outs = body_boundary(body)
        table = stages.setdefault((len(ins), len(outs)), {})
        for leaves in permutations(ins):
            for roots in permutations(outs):
                cf = canonical_form(LabelledShape(body, leaves, roots), mode)
                if cf.digest not in table:
                    table[cf.digest] = cf.shape
    return stages


_FREE_TABLES: dict = {}


def clear_memos():
    """Drop the memoized free-monad tables and closure bodies.  Only
    needed by memory-sensitive batch runs that sweep large bounds."""
    _FREE_TABLES.clear()
    _closure_bodies.cache_clear()
    _id_digest.cache_clear()


def free_monad(F: ShapelyFunctor) -> ShapelyFunctor:
    """The least substitution-closed functor above F and the identity,
    within F's bounds.

    Signature-tagged functors take the direct route: their closure is the
    full shape class, which the bounded fixpoint cannot always reach (a
    shape may only decompose through an over-bound arity), so the bodies
    are grown outright.  Everything else iterates join with
    self-substitution until stable.
    """
    if F.kind is not None:
        key = (F.kind, F.bounds, F.mode)
        if key not in _FREE_TABLES:
            bodies = _closure_bodies(F.kind, F.max_edges, F.max_arity)
            _FREE_TABLES[key] = _expand_bodies(bodies, F.mode)
        return ShapelyFunctor(F.mode, F.bounds, _FREE_TABLES[key])
    S = join(identity_functor(F.bounds, F.mode), F)
    while True:
        grown = join(S, substitute(S, S))
        if grown == S:
            return S
        S = grown


# ---------------------------------------------------------------------------
# Evaluation


@dataclass(frozen=True, eq=False)
class EvalClass:
    """One orbit class of maps from a shape's body into the argument."""

    digest: str
    shape: LabelledShape
    rep: PolyMorphism
    orbit_size: int
    sources: tuple[str, ...]
    targets: tuple[str, ...]


class Evaluation:
    """evaluate() output: the vertex stage plus orbit classes per arity."""

    __slots__ = ("star", "stages")

    def __init__(self, star, stages):
        self.star = tuple(star)
        self.stages = {st: tuple(classes) for st, classes in stages.items()
                       if classes}

    def arities(self):
        return tuple(sorted(self.stages))

    def stage(self, n, m):
        return self.stages.get((n, m), ())

    @property
    def class_count(self):
        return sum(len(c) for c in self.stages.values())


def evaluate(F: ShapelyFunctor, a: Polygraph) -> Evaluation:
    """Apply the functor to a polygraph.

    The vertex stage is a's vertices.  At each arity the classes are maps
    from a stored shape's body into a, taken up to precomposition with the
    shape's label-preserving automorphisms; the representative is the
    least map of its orbit, and the source/target fields record where the
    boundary labels land.
    """
    stages = {}
    for st in sorted(F.stages):
        table = F.stages[st]
        classes = []
        for d in sorted(table):
            x = table[d]
            group = label_preserving_automorphisms(x, F.mode)
            done = set()
            for f in sorted(hom(x.body, a, F.mode), key=lambda f: f.key()):
                if f.key() in done:
                    continue
                orbit = {compose_morphisms(f, s).key() for s in group.elements}
                done |= orbit
                classes.append(EvalClass(
                    d, x, f, len(orbit),
                    tuple(f.vertex_map[v] for v in x.leaves),
                    tuple(f.vertex_map[v] for v in x.roots)))
        stages[st] = classes
    return Evaluation(tuple(a.vertices) if F.non_degenerate else (), stages)


# ---------------------------------------------------------------------------
# Spectrum export


@dataclass(frozen=True, eq=False)
class SpectrumEntry:
    digest: str
    shape: LabelledShape
    group: PermGroup
    leaf_classes: tuple[tuple[str, ...], ...]
    root_classes: tuple[tuple[str, ...], ...]


class SpectrumData:
    """The spectrum presheaf of a functor: the singleton vertex stage and,
    per arity, each shape with its exponent data (the body, the
    label-preserving group, and the orbit class of every boundary
    vertex)."""

    __slots__ = ("mode", "bounds", "star", "stages")

    def __init__(self, mode, bounds, star, stages):
        self.mode = mode
        self.bounds = bounds
        self.star = tuple(star)
        self.stages = {st: tuple(entries) for st, entries in stages.items()
                       if entries}

    def arities(self):
        return tuple(sorted(self.stages))

    def stage(self, n, m):
        return self.stages.get((n, m), ())

    @property
    def entry_count(self):
        return sum(len(s) for s in self.stages.values())

    def digests(self):
        return {e.digest for entries in self.stages.values() for e in entries}


def _point_arrow_valid(shape: LabelledShape, v: str, group: PermGroup,
                       mode: str) -> bool:
    dot = discrete(("p",))
    carrier = LabelledShape(dot, ("p",), ("p",))
    f = PolyMorphism(dot, shape.body, {"p": v}, {}, mode)
    return orbit_morphism_valid(f, trivial_group(carrier, mode), group)


def _spectrum_entry(digest: str, shape: LabelledShape, mode: str
                    ) -> SpectrumEntry:
    group = label_preserving_automorphisms(shape, mode)
    for v in set(shape.leaves) | set(shape.roots):
        if not _point_arrow_valid(shape, v, group, mode):
            raise AssertionError("boundary arrow fails orbit validation")

    def orbit(v):
        return tuple(sorted({g.vertex_map[v] for g in group.elements}))

    return SpectrumEntry(digest, shape, group,
                         tuple(orbit(v) for v in shape.leaves),
                         tuple(orbit(v) for v in shape.roots))


def spectrum(F: ShapelyFunctor) -> SpectrumData:
    """Export F's stage table with exponent data per shape."""
    stages = {st: [_spectrum_entry(d, table[d], F.mode)
                   for d in sorted(table)]
              for st, table in sorted(F.stages.items())}
    return SpectrumData(F.mode, F.bounds, ("u",) if F.non_degenerate else (),
                        stages)


def _universal_ints(max_edges: int, max_arity: int):
    """Certificates of every body within bounds, cycles and repeated
    endpoints included, without isolated vertices.  Port values are
    assigned in first-use order, so each labelling class is produced once
    before certificate dedup."""
    types = [(a, b) for a in range(max_arity + 1)
             for b in range(max_arity + 1)]
    seen = set()
    for count in range(max_edges + 1):
        for profile in combinations_with_replacement(types, count):
            widths = [a + b for a, b in profile]
            total = sum(widths)

            def emit(assignment, used):
                edges = []
                pos = 0
                for a, b in profile:
                    edges.append((assignment[pos:pos + a],
                                  assignment[pos + a:pos + a + b]))
                    pos += a + b
                seen.add(body_certificate(used, tuple(edges), PLANAR))

            def grow(pos, used, acc):
                if pos == total:
                    emit(acc, used)
                    return
                for v in range(used + 1):
                    grow(pos + 1, max(used, v + 1), acc + (v,))

            grow(0, 0, ())
    return sorted(seen)


def universal_spectrum(bounds, mode: str = PLANAR) -> SpectrumData:
    """The spectrum of the universal shapely monad within bounds: every
    well-labelled canonical shape, each with its exponent data.  Meant for
    small bounds; the body census grows like set partitions of the total
    port count."""
    max_edges, max_arity = bounds
    A = max_arity
    stages: dict[tuple[int, int], dict[str, LabelledShape]] = {}
    for cert in _universal_ints(max_edges, A):
        base = body_from_certificate(cert, PLANAR)
        n0, m0 = map(len, body_boundary(base))
        for k in range(A - max(n0, m0) + 1):
            body = _with_isolated(base, k) if k else base
            ins, outs = body_boundary(body)
            table = stages.setdefault((len(ins), len(outs)), {})
            for leaves in permutations(ins):
                for roots in permutations(outs):
                    x = LabelledShape(body, leaves, roots)
                    if not well_labelled(x):
                        continue
                    cf = canonical_form(x, mode)
                    table.setdefault(cf.digest, cf.shape)
    data = {st: [_spectrum_entry(d, table[d], mode) for d in sorted(table)]
            for st, table in sorted(stages.items())}
    return SpectrumData(mode, (max_edges, max_arity), ("u",), data)
