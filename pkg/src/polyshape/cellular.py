"""Building polygraphs by attaching cells, and extending symmetries.

A polygraph Y is *constructible* from a chosen set of vertices when the rest
of it can be added one cell at a time using three attachment templates:

* ``vertex``: add a bare fresh vertex;
* ``edge_from_sources``: add an edge whose sources are already present,
  together with fresh, pairwise distinct target vertices;
* ``edge_from_targets``: the dual, attaching along present targets with
  fresh, pairwise distinct sources.

``is_relative_complex`` searches for such a build order and returns a replayable
certificate.  The search only ever needs to decide, per edge, which of the two
edge templates to use and in what order: bare vertices can be inserted lazily
right before the attachment that needs them, and any never-needed vertices go
at the end.  (The lazy insertion matters: an edge with a repeated source can
only be attached source-side, after its source vertex exists.)

``minimal_extension`` pushes an automorphism of a subpolygraph forward along a
monic inclusion: outside the image the extension is the identity, and that is
well defined exactly when no outside cell touches a moved image vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polygraph import (
    PLANAR,
    Polygraph,
    PolyMorphism,
    EdgeImage,
    coequalizer,
    compose_morphisms,
    discrete,
    identity_perm,
    is_mono,
    morphism_errors,
)

VERTEX = "vertex"
EDGE_FROM_SOURCES = "edge_from_sources"
EDGE_FROM_TARGETS = "edge_from_targets"


@dataclass(frozen=True)
class Bordage:
    """Descriptor for the attachment templates in play.  Only the standard
    edge bordage (the three templates above) is supported."""

    name: str
    templates: tuple[str, ...]


def standard_bordage() -> Bordage:
    return Bordage("standard", (VERTEX, EDGE_FROM_SOURCES, EDGE_FROM_TARGETS))


@dataclass(frozen=True)
class Step:
    template: str
    cell: str
    attached: tuple[str, ...]
    fresh: tuple[str, ...]


@dataclass(frozen=True)
class CellCertificate:
    base_vertices: tuple[str, ...]
    steps: tuple[Step, ...]

    def to_json(self):
        return {
            "base": list(self.base_vertices),
            "steps": [
                {"template": s.template, "cell": s.cell,
                 "attached": list(s.attached), "fresh": list(s.fresh)}
                for s in self.steps
            ],
        }


@dataclass(frozen=True)
class NotConstructible:
    reason: str

    def __bool__(self):
        return False


def replay(cert: CellCertificate, target: Polygraph) -> bool:
    """Re-run a certificate and confirm it rebuilds the target exactly."""
    present = set(cert.base_vertices)
    if not present <= target.vertex_set:
        return False
    edges_added = set()
    for s in cert.steps:
        if s.template == VERTEX:
            if s.cell in present or s.cell not in target.vertex_set:
                return False
            present.add(s.cell)
        elif s.template in (EDGE_FROM_SOURCES, EDGE_FROM_TARGETS):
            e = target.edge_by_name.get(s.cell)
            if e is None or s.cell in edges_added:
                return False
            along = e.sources if s.template == EDGE_FROM_SOURCES else e.targets
            fresh = e.targets if s.template == EDGE_FROM_SOURCES else e.sources
            if tuple(along) != s.attached or tuple(fresh) != s.fresh:
                return False
            if not set(along) <= present:
                return False
            if len(set(fresh)) != len(fresh) or set(fresh) & present:
                return False
            present.update(fresh)
            edges_added.add(s.cell)
        else:
            return False
    return present == set(target.vertices) and edges_added == set(target.edge_by_name)


def is_relative_complex(m: PolyMorphism):
    """Search for a build order of cod(m) starting from the image of m.

    The domain must be discrete and the morphism planar; a non-monic map is
    never constructible.  Returns a CellCertificate or NotConstructible.
    """
    if m.mode != PLANAR:
        raise ValueError("constructibility is defined for planar morphisms")
    if not m.dom.is_discrete:
        raise ValueError("the domain must be a discrete polygraph")
    if morphism_errors(m):
        raise ValueError("invalid morphism")
    if not is_mono(m):
        return NotConstructible("the morphism is not injective")

    target = m.cod
    base = tuple(sorted(set(m.vertex_map.values())))
    all_edges = tuple(sorted(target.edge_by_name))
    dead: set[frozenset] = set()

    def present_after(done: frozenset) -> set[str]:
        out = set(base)
        for name in done:
            e = target.edge_by_name[name]
            out.update(e.sources)
            out.update(e.targets)
        return out

    def search(done: frozenset, steps: list[Step]):
        if len(done) == len(all_edges):
            return True
        if done in dead:
            return False
        present = present_after(done)
        for name in all_edges:
            if name in done:
                continue
            e = target.edge_by_name[name]
            src, tgt = set(e.sources), set(e.targets)
            # attach along sources: targets must be fresh and distinct
            if len(set(e.targets)) == len(e.targets) and not tgt & (present | src):
                pre = [Step(VERTEX, v, (), ()) for v in e.sources
                       if v not in present]
                # keep the insertion order stable
                seen = set()
                pre = [s for s in pre if not (s.cell in seen or seen.add(s.cell))]
                steps.extend(pre)
                steps.append(Step(EDGE_FROM_SOURCES, name, tuple(e.sources), tuple(e.targets)))
                if search(done | {name}, steps):
                    return True
                del steps[len(steps) - len(pre) - 1:]
            # attach along targets: sources must be fresh and distinct
            if len(set(e.sources)) == len(e.sources) and not src & (present | tgt):
                pre = [Step(VERTEX, v, (), ()) for v in e.targets
                       if v not in present]
                seen = set()
                pre = [s for s in pre if not (s.cell in seen or seen.add(s.cell))]
                steps.extend(pre)
                steps.append(Step(EDGE_FROM_TARGETS, name, tuple(e.targets), tuple(e.sources)))
                if search(done | {name}, steps):
                    return True
                del steps[len(steps) - len(pre) - 1:]
        dead.add(done)
        return False

    steps: list[Step] = []
    if not search(frozenset(), steps):
        return NotConstructible("no attachment order builds the codomain")
    present = present_after(frozenset(all_edges))
    for v in target.vertices:
        if v not in present:
            steps.append(Step(VERTEX, v, (), ()))
    return CellCertificate(base, tuple(steps))


def is_finite_complex(p: Polygraph):
    """Constructibility from nothing at all."""
    empty = discrete(())
    return is_relative_complex(PolyMorphism(empty, p, {}, {}, PLANAR))


@dataclass(frozen=True)
class WellLabelled:
    """Positive answer from well_labelled: one build certificate per
    boundary inclusion."""

    from_leaves: CellCertificate
    from_roots: CellCertificate

    def __bool__(self):
        return True


def well_labelled(x):
    """Decide whether a labelled shape's boundary maps are both
    constructible inclusions.

    The leaf labels must be pairwise distinct vertices, the body must be
    buildable starting from just the leaves, and the same dually for the
    roots.  Returns a WellLabelled pair of certificates, or a falsy
    NotConstructible naming the failing side.
    """
    for side, labels in (("leaf", x.leaves), ("root", x.roots)):
        if len(set(labels)) != len(labels):
            return NotConstructible(f"{side} labels repeat a vertex")
    for side, labels in (("leaves", x.leaves), ("roots", x.roots)):
        incl = PolyMorphism(discrete(labels), x.body,
                            {v: v for v in labels}, {}, PLANAR)
        cert = is_relative_complex(incl)
        if not cert:
            return NotConstructible(f"body is not buildable from the {side}: "
                                    + cert.reason)
        if side == "leaves":
            from_leaves = cert
        else:
            from_roots = cert
    return WellLabelled(from_leaves, from_roots)


# ---------------------------------------------------------------------------
# Minimal extensions of symmetries


@dataclass(frozen=True)
class NoExtension:
    reason: str
    edge: str = ""
    role: str = ""
    position: int = -1
    vertex: str = ""

    def __bool__(self):
        return False


def minimal_extension(f: PolyMorphism, sigma: PolyMorphism):
    """Extend an automorphism sigma of dom(f) along a monic f.

    The candidate acts as f.sigma.f^-1 on the image and as the identity
    outside.  That is a genuine morphism exactly when every cell outside the
    image meets the image only in vertices sigma holds fixed; otherwise the
    obstructing incidence is reported.  The result is checked to commute with
    f and to be minimal (the coequalizer of f and f.sigma also coequalizes
    the extension).
    """
    if f.mode != PLANAR or sigma.mode != PLANAR:
        raise ValueError("minimal extensions are computed for planar morphisms")
    if morphism_errors(f) or morphism_errors(sigma):
        raise ValueError("invalid morphism")
    if sigma.dom != f.dom or sigma.cod != f.dom or not sigma.is_bijective():
        raise ValueError("sigma must be an automorphism of dom(f)")
    if not is_mono(f):
        raise ValueError("f must be monic")

    b = f.cod
    v_back = {w: v for v, w in f.vertex_map.items()}
    e_back = {im.edge: name for name, im in f.edge_map.items()}
    moved = {w for w, v in v_back.items() if sigma.vertex_map[v] != v}

    for e in b.edges:
        if e.name in e_back:
            continue
        for role, seq in (("source", e.sources), ("target", e.targets)):
            for pos, w in enumerate(seq):
                if w in moved:
                    return NoExtension(
                        "a cell outside the image touches a moved vertex",
                        edge=e.name, role=role, position=pos + 1, vertex=w)

    vmap = {}
    for w in b.vertices:
        if w in v_back:
            vmap[w] = f.vertex_map[sigma.vertex_map[v_back[w]]]
        else:
            vmap[w] = w
    emap = {}
    for e in b.edges:
        if e.name in e_back:
            image = f.edge_map[sigma.edge_map[e_back[e.name]].edge].edge
        else:
            image = e.name
        n, m = e.arity
        emap[e.name] = EdgeImage(image, identity_perm(n), identity_perm(m))
    tau = PolyMorphism(b, b, vmap, emap, PLANAR)

    problems = morphism_errors(tau)
    if problems or not tau.is_bijective():
        raise AssertionError("extension construction produced an invalid morphism")
    if compose_morphisms(tau, f) != compose_morphisms(f, sigma):
        raise AssertionError("extension does not commute with the inclusion")
    _, q = coequalizer(f, compose_morphisms(f, sigma))
    if compose_morphisms(q, tau) != q:
        raise AssertionError("extension is not minimal")
    return tau
