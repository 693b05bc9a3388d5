"""Finite polygraphs and their morphisms.

A polygraph is a bipartite incidence structure: a finite set of vertices
together with a finite set of edges, where an edge of arity (n, m) carries an
ordered list of n source vertices and an ordered list of m target vertices
(repeats allowed).  Morphisms send vertices to vertices and edges to edges of
the same arity.  In planar mode the source and target lists must be preserved
position by position; in symmetric mode each edge may additionally be mapped
with a pair of port permutations, so only the wiring up to reordering of the
ports is preserved.

Vertex and edge names are opaque strings.  Operations that build new
polygraphs (coproducts, pushouts, quotients) mint fresh names and return
explicit morphisms; nothing should ever be identified by name coincidence
across distinct polygraphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

PLANAR = "planar"
SYMMETRIC = "symmetric"
MODES = (PLANAR, SYMMETRIC)


def identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def compose_perm(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """The permutation "p after q": (p . q)[i] = p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def is_perm(p: tuple[int, ...], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


@dataclass(frozen=True)
class Edge:
    name: str
    sources: tuple[str, ...]
    targets: tuple[str, ...]

    @property
    def arity(self) -> tuple[int, int]:
        return (len(self.sources), len(self.targets))


@dataclass(frozen=True)
class Polygraph:
    """An immutable finite polygraph."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __hash__(self):
        # hashed constantly as a cache key, so memoize (the instance dict is
        # writable even on a frozen dataclass)
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.vertices, self.edges))
            self.__dict__["_hash"] = h
        return h

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def edge_by_name(self) -> dict[str, Edge]:
        return {e.name: e for e in self.edges}

    def edge(self, name: str) -> Edge:
        return self.edge_by_name[name]

    @property
    def is_discrete(self) -> bool:
        return not self.edges


def make_polygraph(vertices, edges) -> Polygraph:
    p = Polygraph(tuple(vertices), tuple(edges))
    problems = validate(p)
    if problems:
        raise ValueError("; ".join(problems))
    return p


def discrete(names) -> Polygraph:
    return make_polygraph(tuple(names), ())


def validate(p: Polygraph) -> list[str]:
    """Return a list of structural problems (empty when well formed)."""
    problems = []
    seen = set()
    for v in p.vertices:
        if v in seen:
            problems.append(f"duplicate vertex name {v!r}")
        seen.add(v)
    enames = set()
    for e in p.edges:
        if e.name in enames:
            problems.append(f"duplicate edge name {e.name!r}")
        enames.add(e.name)
        for v in e.sources:
            if v not in seen:
                problems.append(f"edge {e.name!r} has unknown source {v!r}")
        for v in e.targets:
            if v not in seen:
                problems.append(f"edge {e.name!r} has unknown target {v!r}")
    return problems


@dataclass(frozen=True)
class EdgeImage:
    """Image of one edge under a morphism.

    ``in_perm``/``out_perm`` are permutations (0-based tuples) describing how
    the ports are matched up.  Source i of the domain edge lands on source
    ``in_perm[i]`` of the image edge; target ``out_perm[j]`` of the domain
    edge lands on target j of the image edge.  Planar morphisms use identity
    permutations throughout.
    """

    edge: str
    in_perm: tuple[int, ...]
    out_perm: tuple[int, ...]


class PolyMorphism:
    """A morphism of polygraphs, planar or symmetric."""

    __slots__ = ("dom", "cod", "vertex_map", "edge_map", "mode", "_key")

    def __init__(self, dom: Polygraph, cod: Polygraph, vertex_map: dict[str, str],
                 edge_map: dict[str, EdgeImage], mode: str = PLANAR):
        self.dom = dom
        self.cod = cod
        self.vertex_map = dict(vertex_map)
        self.edge_map = dict(edge_map)
        self.mode = mode
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (
                tuple(sorted(self.vertex_map.items())),
                tuple(sorted((n, im.edge, im.in_perm, im.out_perm)
                             for n, im in self.edge_map.items())),
                self.mode,
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, PolyMorphism):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        vm = ", ".join(f"{a}>{b}" for a, b in sorted(self.vertex_map.items()))
        em = ", ".join(f"{a}>{im.edge}" for a, im in sorted(self.edge_map.items()))
        return f"PolyMorphism({self.mode}; {vm}; {em})"

    def apply_vertex(self, v: str) -> str:
        return self.vertex_map[v]

    def is_bijective(self) -> bool:
        return (len(set(self.vertex_map.values())) == len(self.cod.vertices)
                and len(self.vertex_map) == len(self.dom.vertices)
                and len(set(im.edge for im in self.edge_map.values())) == len(self.cod.edges)
                and len(self.edge_map) == len(self.dom.edges))


def morphism_errors(f: PolyMorphism) -> list[str]:
    """Check naturality of a morphism; return problems found."""
    problems = []
    for v in f.dom.vertices:
        if v not in f.vertex_map:
            problems.append(f"vertex {v!r} has no image")
        elif f.vertex_map[v] not in f.cod.vertex_set:
            problems.append(f"vertex {v!r} maps outside the codomain")
    for e in f.dom.edges:
        im = f.edge_map.get(e.name)
        if im is None:
            problems.append(f"edge {e.name!r} has no image")
            continue
        target = f.cod.edge_by_name.get(im.edge)
        if target is None:
            problems.append(f"edge {e.name!r} maps outside the codomain")
            continue
        n, m = e.arity
        if target.arity != (n, m):
            problems.append(f"edge {e.name!r} changes arity")
            continue
        if f.mode == PLANAR and (im.in_perm != identity_perm(n)
                                 or im.out_perm != identity_perm(m)):
            problems.append(f"edge {e.name!r} uses port permutations in planar mode")
            continue
        if not is_perm(im.in_perm, n) or not is_perm(im.out_perm, m):
            problems.append(f"edge {e.name!r} has malformed port permutations")
            continue
        for i in range(n):
            want = target.sources[im.in_perm[i]]
            if f.vertex_map.get(e.sources[i]) != want:
                problems.append(
                    f"edge {e.name!r} source {i} does not commute with the vertex map")
                break
        for j in range(m):
            want = target.targets[j]
            if f.vertex_map.get(e.targets[im.out_perm[j]]) != want:
                problems.append(
                    f"edge {e.name!r} target {j} does not commute with the vertex map")
                break
    return problems


def check_morphism(f: PolyMorphism) -> PolyMorphism:
    problems = morphism_errors(f)
    if problems:
        raise ValueError("; ".join(problems))
    return f


def identity_morphism(p: Polygraph, mode: str = PLANAR) -> PolyMorphism:
    return PolyMorphism(
        p, p,
        {v: v for v in p.vertices},
        {e.name: EdgeImage(e.name, identity_perm(e.arity[0]), identity_perm(e.arity[1]))
         for e in p.edges},
        mode,
    )


def compose_morphisms(g: PolyMorphism, f: PolyMorphism) -> PolyMorphism:
    """The composite g . f.  Port permutations compose contravariantly on
    the output side: in_perm composes as g-after-f, out_perm as f-after-g."""
    if f.cod != g.dom:
        raise ValueError("morphisms are not composable")
    vmap = {v: g.vertex_map[f.vertex_map[v]] for v in f.dom.vertices}
    emap = {}
    for name, im1 in f.edge_map.items():
        im2 = g.edge_map[im1.edge]
        emap[name] = EdgeImage(
            im2.edge,
            compose_perm(im2.in_perm, im1.in_perm),
            compose_perm(im1.out_perm, im2.out_perm),
        )
    mode = SYMMETRIC if SYMMETRIC in (f.mode, g.mode) else PLANAR
    return PolyMorphism(f.dom, g.cod, vmap, emap, mode)


def invert_morphism(f: PolyMorphism) -> PolyMorphism:
    if not f.is_bijective():
        raise ValueError("only bijective morphisms can be inverted")
    vmap = {w: v for v, w in f.vertex_map.items()}
    emap = {}
    for name, im in f.edge_map.items():
        emap[im.edge] = EdgeImage(name, invert_perm(im.in_perm), invert_perm(im.out_perm))
    return PolyMorphism(f.cod, f.dom, vmap, emap, f.mode)


def is_mono(f: PolyMorphism) -> bool:
    vs = list(f.vertex_map.values())
    es = [im.edge for im in f.edge_map.values()]
    return len(set(vs)) == len(vs) and len(set(es)) == len(es)


def restrict_to_image(f: PolyMorphism) -> frozenset[str]:
    """Vertex names of the codomain hit by f."""
    return frozenset(f.vertex_map.values())


# ---------------------------------------------------------------------------
# Colimits


def coproduct(p: Polygraph, q: Polygraph) -> tuple[Polygraph, PolyMorphism, PolyMorphism]:
    """Disjoint union with fresh names; returns the two injections."""
    vmap_p, vmap_q, vertices = {}, {}, []
    for v in p.vertices:
        name = f"v{len(vertices)}"
        vmap_p[v] = name
        vertices.append(name)
    for v in q.vertices:
        name = f"v{len(vertices)}"
        vmap_q[v] = name
        vertices.append(name)
    emap_p, emap_q, edges = {}, {}, []
    for e in p.edges:
        name = f"e{len(edges)}"
        emap_p[e.name] = name
        edges.append(Edge(name, tuple(vmap_p[v] for v in e.sources),
                          tuple(vmap_p[v] for v in e.targets)))
    for e in q.edges:
        name = f"e{len(edges)}"
        emap_q[e.name] = name
        edges.append(Edge(name, tuple(vmap_q[v] for v in e.sources),
                          tuple(vmap_q[v] for v in e.targets)))
    result = Polygraph(tuple(vertices), tuple(edges))

    def injection(src, vmap, emap):
        return PolyMorphism(src, result, vmap, {
            n: EdgeImage(emap[n], identity_perm(src.edge_by_name[n].arity[0]),
                         identity_perm(src.edge_by_name[n].arity[1]))
            for n in emap})

    return result, injection(p, vmap_p, emap_p), injection(q, vmap_q, emap_q)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def quotient(p: Polygraph, vertex_pairs, edge_pairs=()) -> tuple[Polygraph, PolyMorphism]:
    """Quotient a polygraph by generated identifications.

    Identifying two edges also identifies their sources and targets pointwise
    (the identifications are closed off so that incidence maps descend).
    Returns the quotient with fresh names and the projection morphism.
    """
    uf_v, uf_e = _UnionFind(), _UnionFind()
    for a, b in vertex_pairs:
        uf_v.union(a, b)
    pending = list(edge_pairs)
    while pending:
        a, b = pending.pop()
        ra, rb = uf_e.find(a), uf_e.find(b)
        if ra == rb:
            continue
        uf_e.union(ra, rb)
        ea, eb = p.edge_by_name[a], p.edge_by_name[b]
        if ea.arity != eb.arity:
            raise ValueError("cannot identify edges of different arities")
        for x, y in zip(ea.sources + ea.targets, eb.sources + eb.targets):
            uf_v.union(x, y)
    # merging vertices can never force more edge merges, so one pass suffices
    vclass, vertices = {}, []
    for v in p.vertices:
        r = uf_v.find(v)
        if r not in vclass:
            vclass[r] = f"v{len(vertices)}"
            vertices.append(vclass[r])
    eclass, edges = {}, []
    for e in p.edges:
        r = uf_e.find(e.name)
        if r not in eclass:
            eclass[r] = f"e{len(edges)}"
            edges.append(Edge(eclass[r],
                              tuple(vclass[uf_v.find(v)] for v in e.sources),
                              tuple(vclass[uf_v.find(v)] for v in e.targets)))
    result = Polygraph(tuple(vertices), tuple(edges))
    proj = PolyMorphism(
        p, result,
        {v: vclass[uf_v.find(v)] for v in p.vertices},
        {e.name: EdgeImage(eclass[uf_e.find(e.name)],
                           identity_perm(e.arity[0]), identity_perm(e.arity[1]))
         for e in p.edges})
    return result, proj


@dataclass(frozen=True)
class DiscreteSpan:
    """A span of vertex selections used to glue two polygraphs.

    ``points`` is a tuple of apex point names; ``left``/``right`` send each
    point to a vertex of the left/right polygraph.
    """

    points: tuple[str, ...]
    left: tuple[tuple[str, str], ...]
    right: tuple[tuple[str, str], ...]

    @cached_property
    def left_map(self) -> dict[str, str]:
        return dict(self.left)

    @cached_property
    def right_map(self) -> dict[str, str]:
        return dict(self.right)


def make_span(pairs) -> DiscreteSpan:
    """Build a span from (left vertex, right vertex) pairs."""
    pairs = list(pairs)
    points = tuple(f"x{i}" for i in range(len(pairs)))
    return DiscreteSpan(points,
                        tuple((x, a) for x, (a, _) in zip(points, pairs)),
                        tuple((x, b) for x, (_, b) in zip(points, pairs)))


def pushout_discrete(span: DiscreteSpan, p: Polygraph, q: Polygraph
                     ) -> tuple[Polygraph, PolyMorphism, PolyMorphism]:
    """Pushout of p and q along a discrete span of vertices.

    The result is the disjoint union with the selected vertex pairs
    identified; edges are carried through the quotient untouched.
    """
    for x in span.points:
        if span.left_map[x] not in p.vertex_set:
            raise ValueError(f"span point {x!r} misses the left polygraph")
        if span.right_map[x] not in q.vertex_set:
            raise ValueError(f"span point {x!r} misses the right polygraph")
    both, inl, inr = coproduct(p, q)
    pairs = [(inl.vertex_map[span.left_map[x]], inr.vertex_map[span.right_map[x]])
             for x in span.points]
    result, proj = quotient(both, pairs)
    return result, compose_morphisms(proj, inl), compose_morphisms(proj, inr)


def coequalizer(f: PolyMorphism, g: PolyMorphism) -> tuple[Polygraph, PolyMorphism]:
    """Coequalizer of a parallel pair, computed stage by stage."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("not a parallel pair")
    vpairs = [(f.vertex_map[v], g.vertex_map[v]) for v in f.dom.vertices]
    epairs = [(f.edge_map[e.name].edge, g.edge_map[e.name].edge) for e in f.dom.edges]
    return quotient(f.cod, vpairs, epairs)


# ---------------------------------------------------------------------------
# Hom sets and fixed points


def hom(p: Polygraph, q: Polygraph, mode: str = PLANAR) -> tuple[PolyMorphism, ...]:
    """All morphisms p -> q in the given mode, in a deterministic order.

    Backtracks over edge assignments (largest arities first), then assigns
    any vertices left unconstrained.  Symmetric mode additionally branches
    over port permutations; two assignments that differ only in their
    permutations count as distinct morphisms.
    """
    edges = sorted(p.edges, key=lambda e: (-(e.arity[0] + e.arity[1]), e.name))
    cod_by_arity: dict[tuple[int, int], list[Edge]] = {}
    for e in sorted(q.edges, key=lambda e: e.name):
        cod_by_arity.setdefault(e.arity, []).append(e)
    results = []

    def extend(idx: int, vmap: dict[str, str], emap: dict[str, EdgeImage]):
        if idx == len(edges):
            free = [v for v in p.vertices if v not in vmap]
            if not free:
                results.append(PolyMorphism(p, q, dict(vmap), dict(emap), mode))
                return
            for assignment in itertools.product(sorted(q.vertices), repeat=len(free)):
                full = dict(vmap)
                full.update(zip(free, assignment))
                results.append(PolyMorphism(p, q, full, dict(emap), mode))
            return
        e = edges[idx]
        n, m = e.arity
        if mode == PLANAR:
            perms_in, perms_out = [identity_perm(n)], [identity_perm(m)]
        else:
            perms_in = list(itertools.permutations(range(n)))
            perms_out = list(itertools.permutations(range(m)))
        for cand in cod_by_arity.get((n, m), ()):
            for pin in perms_in:
                for pout in perms_out:
                    new = {}
                    ok = True
                    for i in range(n):
                        v, w = e.sources[i], cand.sources[pin[i]]
                        cur = vmap.get(v, new.get(v))
                        if cur is None:
                            new[v] = w
                        elif cur != w:
                            ok = False
                            break
                    if ok:
                        for j in range(m):
                            v, w = e.targets[pout[j]], cand.targets[j]
                            cur = vmap.get(v, new.get(v))
                            if cur is None:
                                new[v] = w
                            elif cur != w:
                                ok = False
                                break
                    if not ok:
                        continue
                    vmap.update(new)
                    emap[e.name] = EdgeImage(cand.name, pin, pout)
                    extend(idx + 1, vmap, emap)
                    del emap[e.name]
                    for v in new:
                        del vmap[v]

    extend(0, {}, {})
    results.sort(key=lambda f: f.key())
    return tuple(results)


def automorphisms(p: Polygraph, mode: str = PLANAR,
                  fixed_vertices=()) -> tuple[PolyMorphism, ...]:
    """All self-isomorphisms of p, optionally fixing some vertices pointwise."""
    fixed = set(fixed_vertices)
    out = []
    for f in hom(p, p, mode):
        if not f.is_bijective():
            continue
        if any(f.vertex_map[v] != v for v in fixed):
            continue
        out.append(f)
    return tuple(out)


def fixed_subpolygraph(p: Polygraph, elements) -> tuple[Polygraph, PolyMorphism]:
    """The largest subpolygraph on which every listed automorphism acts as
    the identity, with its inclusion.

    Every element must be a planar automorphism of p.  A fixed edge has all
    its sources and targets fixed automatically, so the fixed cells really do
    form a subpolygraph.
    """
    elements = list(elements)
    for g in elements:
        if g.dom != p or g.cod != p or g.mode != PLANAR or not g.is_bijective():
            raise ValueError("expected planar automorphisms of the given polygraph")
        if morphism_errors(g):
            raise ValueError("element is not a valid morphism")
    vs = tuple(v for v in p.vertices
               if all(g.vertex_map[v] == v for g in elements))
    vset = set(vs)
    es = tuple(e for e in p.edges
               if all(g.edge_map[e.name].edge == e.name for g in elements)
               and set(e.sources) <= vset and set(e.targets) <= vset)
    sub = Polygraph(vs, es)
    incl = PolyMorphism(sub, p, {v: v for v in vs}, {
        e.name: EdgeImage(e.name, identity_perm(e.arity[0]), identity_perm(e.arity[1]))
        for e in es})
    return sub, incl
