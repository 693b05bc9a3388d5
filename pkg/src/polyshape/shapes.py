"""Shape-class recognizers and brute-force enumerators.

Three nested classes of labelled shapes are recognized here, all defined by
conditions on the incidence multigraph of the body (one node per vertex and
per edge, one arc for every position-counted way a vertex occurs in an
edge's source or target list):

* tree shapes: every vertex is a source of at most one edge and a target of
  at most one edge, the incidence graph is undirected-acyclic and connected,
  and the leaf/root labels enumerate exactly the non-target/non-source
  vertices;
* properadic shapes: as above, but only directed acyclicity is required
  (undirected cycles are fine as long as no directed path loops back);
* prop shapes: properadic minus connectedness, so disjoint unions and the
  empty shape are admitted.

``enumerate_shapes`` is the independent oracle: it generates every body
within the given budget outright, applies the recognizer, and canonicalizes.
Generation works over directed-acyclic bodies only, adding edges in
topological order; a new edge draws each source either from the currently
unconsumed targets or from a fresh vertex, and always mints fresh targets.
Every degree-valid acyclic body is reached this way (walk any topological
edge order: at each step the edge's internal sources are exactly unconsumed
earlier targets and everything else is fresh), and no cyclic or
degree-violating body can be produced at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .canon import body_certificate, body_from_certificate, canonical_form
from .labelled import LabelledShape
from .polygraph import PLANAR, Polygraph

TREE = "tree"
PROPERAD = "properad"
PROP = "prop"
SHAPE_CLASSES = (TREE, PROPERAD, PROP)


# ---------------------------------------------------------------------------
# Incidence graphs


@dataclass(frozen=True)
class Arc:
    """One position-counted incidence: vertex ⌢ edge, oriented into the edge
    for source occurrences and out of it for target occurrences."""

    vertex: str
    edge: str
    role: str  # "source" | "target"


@dataclass(frozen=True)
class IncidenceGraph:
    vertex_nodes: tuple[str, ...]
    edge_nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]


def incidence_graph(x: Polygraph) -> IncidenceGraph:
    arcs = []
    for e in x.edges:
        for v in e.sources:
            arcs.append(Arc(v, e.name, "source"))
        for v in e.targets:
            arcs.append(Arc(v, e.name, "target"))
    return IncidenceGraph(tuple(x.vertices),
                          tuple(e.name for e in x.edges),
                          tuple(arcs))


# ---------------------------------------------------------------------------
# Recognizers


def _source_target_counts(body: Polygraph):
    src: dict[str, int] = {}
    tgt: dict[str, int] = {}
    for e in body.edges:
        for v in e.sources:
            src[v] = src.get(v, 0) + 1
        for v in e.targets:
            tgt[v] = tgt.get(v, 0) + 1
    return src, tgt


def _degree_ok(body: Polygraph) -> bool:
    src, tgt = _source_target_counts(body)
    return all(c <= 1 for c in src.values()) and all(c <= 1 for c in tgt.values())


def _forest_and_connected(body: Polygraph) -> tuple[bool, bool]:
    """Undirected acyclicity and connectedness of the incidence multigraph,
    in one union-find pass.  The empty body counts as disconnected."""
    parent: dict[tuple, tuple] = {}

    def find(a):
        p = parent.setdefault(a, a)
        while p != parent[p]:
            p = parent[p] = parent[parent[p]]
        parent[a] = p
        return p

    nodes = len(body.vertices) + len(body.edges)
    if nodes == 0:
        return True, False
    for v in body.vertices:
        find(("v", v))
    merges = 0
    forest = True
    for e in body.edges:
        en = find(("e", e.name))
        for v in e.sources + e.targets:
            rv, re = find(("v", v)), find(en)
            if rv == re:
                forest = False
            else:
                parent[rv] = re
                merges += 1
    return forest, merges == nodes - 1


def _directed_acyclic(body: Polygraph) -> bool:
    """No directed cycle through source-arcs into edges and target-arcs out."""
    producers: dict[str, list[str]] = {}
    for e in body.edges:
        for v in e.targets:
            producers.setdefault(v, []).append(e.name)
    # depth-first over edges: e precedes f when some target of e feeds f
    WHITE, GREY, BLACK = 0, 1, 2
    color = {e.name: WHITE for e in body.edges}
    by_name = body.edge_by_name

    def feeds(name):
        for v in by_name[name].sources:
            for p in producers.get(v, ()):
                yield p

    for start in color:
        if color[start] != WHITE:
            continue
        stack = [(start, feeds(start))]
        color[start] = GREY
        while stack:
            name, it = stack[-1]
            advanced = False
            for p in it:
                if color[p] == GREY:
                    return False
                if color[p] == WHITE:
                    color[p] = GREY
                    stack.append((p, feeds(p)))
                    advanced = True
                    break
            if not advanced:
                color[name] = BLACK
                stack.pop()
    return True


def _labels_enumerate_boundary(x: LabelledShape) -> bool:
    """Leaves list the non-target vertices bijectively; roots the
    non-source vertices."""
    src, tgt = _source_target_counts(x.body)
    inputs = {v for v in x.body.vertices if v not in tgt}
    outputs = {v for v in x.body.vertices if v not in src}
    return (len(x.leaves) == len(inputs) and set(x.leaves) == inputs
            and len(set(x.leaves)) == len(x.leaves)
            and len(x.roots) == len(outputs) and set(x.roots) == outputs
            and len(set(x.roots)) == len(x.roots))


def is_polycat_tree(x: LabelledShape) -> bool:
    forest, connected = _forest_and_connected(x.body)
    return (connected and forest and _degree_ok(x.body)
            and _labels_enumerate_boundary(x))


def is_properadic_graph(x: LabelledShape) -> bool:
    _, connected = _forest_and_connected(x.body)
    return (connected and _degree_ok(x.body) and _directed_acyclic(x.body)
            and _labels_enumerate_boundary(x))


def is_prop_graph(x: LabelledShape) -> bool:
    return (_degree_ok(x.body) and _directed_acyclic(x.body)
            and _labels_enumerate_boundary(x))


_RECOGNIZERS = {TREE: is_polycat_tree, PROPERAD: is_properadic_graph,
                PROP: is_prop_graph}


# ---------------------------------------------------------------------------
# Body pools


def body_boundary(body: Polygraph) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(inputs, outputs): vertices that are never a target / never a source,
    in the body's vertex order."""
    src, tgt = _source_target_counts(body)
    return (tuple(v for v in body.vertices if v not in tgt),
            tuple(v for v in body.vertices if v not in src))


def _components(body: Polygraph) -> dict[str, int]:
    comp: dict[str, int] = {}
    nxt = 0
    adjacency: dict[str, set[str]] = {v: set() for v in body.vertices}
    for e in body.edges:
        touched = set(e.sources) | set(e.targets)
        for a in touched:
            adjacency[a] |= touched
    for v in body.vertices:
        if v in comp:
            continue
        stack = [v]
        comp[v] = nxt
        while stack:
            a = stack.pop()
            for b in adjacency[a]:
                if b not in comp:
                    comp[b] = nxt
                    stack.append(b)
        nxt += 1
    return comp


def _int_meta(nv: int, edges, forest: bool):
    """Boundary counts, attachable targets and (optionally) vertex
    components of a nameless body."""
    is_src = [False] * nv
    is_tgt = [False] * nv
    for srcs, tgts in edges:
        for v in srcs:
            is_src[v] = True
        for v in tgts:
            is_tgt[v] = True
    opens = tuple(v for v in range(nv) if is_tgt[v] and not is_src[v])
    n_in = sum(1 for v in range(nv) if not is_tgt[v])
    n_out = sum(1 for v in range(nv) if not is_src[v])
    comp = None
    if forest:
        parent = list(range(nv))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for srcs, tgts in edges:
            touched = set(srcs) | set(tgts)
            it = iter(touched)
            r0 = None
            for v in it:
                r = find(v)
                if r0 is None:
                    r0 = r
                elif r != r0:
                    parent[r] = r0
        comp = [find(v) for v in range(nv)]
    return opens, n_in, n_out, comp


@lru_cache(maxsize=32)
def _bodies(max_edges: int, max_arity: int, stage_cap: int, forest: bool
            ) -> tuple[Polygraph, ...]:
    """All canonical degree-valid directed-acyclic bodies with 1..max_edges
    edges, per-edge arity ≤ max_arity, at most stage_cap inputs, and (when
    ``forest``) an undirected-acyclic incidence graph.

    Isolated vertices are never included; callers add them as needed.  The
    output count is only loosely capped during generation (a later edge can
    consume up to max_arity open targets), so bodies can momentarily exceed
    stage_cap outputs; callers filter by exact boundary.

    Generation runs on nameless integer bodies and dedupes by certificate;
    only the surviving class representatives are materialized as polygraphs.
    """
    arities = [(a, b) for a in range(max_arity + 1)
               for b in range(max_arity + 1)]
    current: list[tuple[int, tuple]] = [(0, ())]
    found: list[tuple] = []
    for level in range(1, max_edges + 1):
        remaining = max_edges - level
        seen: set = set()
        for nv, edges in current:
            opens, n_in, n_out, comp = _int_meta(nv, edges, forest)
            for a, b in arities:
                for k in range(min(a, len(opens)) + 1):
                    # choose which source slots take existing open targets
                    if n_in + (a - k) > stage_cap:
                        continue
                    if n_out + b - k > stage_cap + remaining * max_arity:
                        continue
                    for slots in combinations(range(a), k):
                        for picks in permutations(opens, k):
                            if forest and k > 1:
                                cs = {comp[p] for p in picks}
                                if len(cs) != k:
                                    continue
                            fresh = nv
                            srcs = []
                            chosen = dict(zip(slots, picks))
                            for i in range(a):
                                if i in chosen:
                                    srcs.append(chosen[i])
                                else:
                                    srcs.append(fresh)
                                    fresh += 1
                            tgts = tuple(range(fresh, fresh + b))
                            cand = edges + ((tuple(srcs), tgts),)
                            seen.add(body_certificate(fresh + b, cand, PLANAR))
        layer = sorted(seen)
        current = [(cert[0], tuple((s, t) for _, _, s, t in cert[1]))
                   for cert in layer]
        found.extend(layer)
    return tuple(body_from_certificate(cert, PLANAR) for cert in found)


# ---------------------------------------------------------------------------
# Enumeration


def _isolated_names(k: int) -> tuple[str, ...]:
    return tuple(f"u{i}" for i in range(k))


def _with_isolated(body: Polygraph, k: int) -> Polygraph:
    extra = _isolated_names(k)
    return Polygraph(body.vertices + extra, body.edges)


def _stage_pool(shape_class: str, n: int, m: int, max_edges: int,
                max_arity: int) -> list[Polygraph]:
    """Candidate bodies whose boundary fits arity (n, m) exactly."""
    stage_cap = max(n, m, max_arity, 1)
    pool: list[Polygraph] = []
    if shape_class == PROP:
        # any body with few enough inputs can be padded by isolated vertices
        for body in _bodies(max_edges, max_arity, stage_cap, False):
            inputs, outputs = body_boundary(body)
            k = n - len(inputs)
            if k >= 0 and len(outputs) + k == m:
                pool.append(_with_isolated(body, k))
        if n == m:
            pool.append(_with_isolated(Polygraph((), ()), n))
    else:
        if (n, m) == (1, 1) and max_edges >= 0:
            pool.append(Polygraph(("u0",), ()))
        for body in _bodies(max_edges, max_arity, stage_cap, shape_class == TREE):
            inputs, outputs = body_boundary(body)
            if len(inputs) == n and len(outputs) == m:
                pool.append(body)
    return pool


def _stage_forms(shape_class: str, n: int, m: int, max_edges: int,
                 mode: str, max_arity: int | None):
    """Canonical forms of every shape of the class at arity (n, m) within
    the budget, deduped, keyed by digest.

    The recognizer runs once per body: its body conditions do not depend on
    the labelling, and every labelling tried here enumerates the boundary
    bijectively by construction, which is all the label conditions ask.
    """
    if shape_class not in _RECOGNIZERS:
        raise ValueError(f"unknown shape class {shape_class!r}")
    if min(n, m, max_edges) < 0:
        raise ValueError("bounds must be nonnegative")
    recognize = _RECOGNIZERS[shape_class]
    if max_arity is None:
        max_arity = max(n, m, 2)
    found = {}
    for body in _stage_pool(shape_class, n, m, max_edges, max_arity):
        inputs, outputs = body_boundary(body)
        if not recognize(LabelledShape(body, inputs, outputs)):
            continue
        for leaves in permutations(inputs):
            for roots in permutations(outputs):
                cf = canonical_form(LabelledShape(body, leaves, roots), mode)
                if cf.digest not in found:
                    found[cf.digest] = cf.shape
    return found


def enumerate_class_shapes(shape_class: str, n: int, m: int, max_edges: int,
                           mode: str = PLANAR, max_arity: int | None = None
                           ) -> tuple[LabelledShape, ...]:
    """Canonical representatives of every shape of the class at arity (n, m)
    within the budget, ordered by digest.

    ``max_arity`` bounds each edge's source and target count; the default
    max(n, m, 2) is just enough to make the small standard examples appear.
    """
    found = _stage_forms(shape_class, n, m, max_edges, mode, max_arity)
    return tuple(found[d] for d in sorted(found))


def enumerate_shapes(shape_class: str, n: int, m: int, max_edges: int,
                     mode: str = PLANAR, max_arity: int | None = None
                     ) -> tuple[str, ...]:
    """Sorted canonical digests of every shape of the class at arity (n, m)
    within the budget."""
    found = _stage_forms(shape_class, n, m, max_edges, mode, max_arity)
    return tuple(sorted(found))
