"""Canonical forms, isomorphism witnesses and automorphism groups for shapes.

Canonicalization runs in two stages.  The body alone is canonicalized by
iterated partition refinement over vertex and edge colours, with backtracking
over individualized vertices when refinement stalls; the certificate of a
finished ordering is the lexicographically least full rendering, so two
bodies get the same certificate exactly when they are isomorphic in the
given mode.  Leaf and root labels are then transported along the body
witness and minimized over the automorphism group of the canonical body.
Since a label-preserving isomorphism is nothing but a body isomorphism that
carries one boundary listing to the other, two labelled shapes receive equal
digests exactly when such an isomorphism exists.

The split pays off because the expensive search is cached per body while a
single body is typically canonicalized under many labellings.  Bodies that
were themselves produced by this module are recognized and skip the search
outright.  In symmetric mode the rendering sorts each edge's boundary, which
quotients out port permutations.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

from .labelled import LabelledShape
from .polygraph import (
    PLANAR,
    SYMMETRIC,
    Edge,
    EdgeImage,
    Polygraph,
    PolyMorphism,
    compose_morphisms,
    identity_morphism,
    identity_perm,
    invert_morphism,
    morphism_errors,
)

_NAMES: list[str] = []


def _vname(i: int) -> str:
    # shared vertex-name strings; canonical shapes are produced in bulk and
    # would otherwise each carry private copies of "v0", "v1", ...
    while len(_NAMES) <= i:
        _NAMES.append(f"v{len(_NAMES)}")
    return _NAMES[i]


class _View:
    """Integer-indexed working copy of a body."""

    __slots__ = ("vnames", "vidx", "edges", "nv", "ne", "inc", "base")

    def __init__(self, body: Polygraph):
        self.vnames = body.vertices
        self.vidx = {v: i for i, v in enumerate(self.vnames)}
        self.edges = [(tuple(self.vidx[v] for v in e.sources),
                       tuple(self.vidx[v] for v in e.targets),
                       e.name) for e in body.edges]
        self.nv = len(self.vnames)
        self._finish()

    @classmethod
    def from_ints(cls, nv: int, edges) -> "_View":
        """View over a nameless body: vertices 0..nv-1, edges given as
        (sources, targets) index tuples.  Lets bulk generators skip string
        bookkeeping entirely."""
        self = cls.__new__(cls)
        self.vnames = None
        self.vidx = None
        self.edges = [(s, t, j) for j, (s, t) in enumerate(edges)]
        self.nv = nv
        self._finish()
        return self

    def _finish(self):
        self.ne = len(self.edges)
        inc: list[list[tuple[int, int, int]]] = [[] for _ in range(self.nv)]
        width = 1
        for j, (srcs, tgts, _) in enumerate(self.edges):
            if len(srcs) > width:
                width = len(srcs)
            if len(tgts) > width:
                width = len(tgts)
            for pos, v in enumerate(srcs):
                inc[v].append((j, 0, pos))
            for pos, v in enumerate(tgts):
                inc[v].append((j, 1, pos))
        self.inc = [tuple(entries) for entries in inc]
        self.base = width + 1  # packing base for (.., role, position) keys

    def initial_colors(self, mode: str, leaves=(), roots=()):
        """Seed colours from arity profiles, plus boundary positions when a
        labelled search needs them (the body certificate passes none)."""
        B = self.base
        acode = [len(s) * B + len(t) for s, t, _ in self.edges]
        profs = []
        for i in range(self.nv):
            if mode == PLANAR:
                prof = sorted((acode[j] * 2 + role) * B + pos
                              for j, role, pos in self.inc[i])
            else:
                prof = sorted(acode[j] * 2 + role for j, role, _ in self.inc[i])
            profs.append(tuple(prof))
        if leaves or roots:
            leaf_at: list[list[int]] = [[] for _ in range(self.nv)]
            root_at: list[list[int]] = [[] for _ in range(self.nv)]
            for pos, v in enumerate(leaves):
                leaf_at[v].append(pos)
            for pos, v in enumerate(roots):
                root_at[v].append(pos)
            vkeys = [(tuple(leaf_at[i]), tuple(root_at[i]), profs[i])
                     for i in range(self.nv)]
        else:
            vkeys = profs
        cv, ncv = _rank(vkeys)
        ce, nce = _rank(acode)
        return cv, ce, ncv, nce

    def refine(self, cv, ce, ncv, nce, mode):
        B = self.base
        planar = mode == PLANAR
        while True:
            ekeys = []
            if planar:
                for j, (srcs, tgts, _) in enumerate(self.edges):
                    ekeys.append((ce[j],
                                  tuple(cv[v] for v in srcs),
                                  tuple(cv[v] for v in tgts)))
            else:
                for j, (srcs, tgts, _) in enumerate(self.edges):
                    ekeys.append((ce[j],
                                  tuple(sorted(cv[v] for v in srcs)),
                                  tuple(sorted(cv[v] for v in tgts))))
            ce2, nce2 = _rank(ekeys)
            vkeys = []
            for i in range(self.nv):
                if planar:
                    prof = sorted((ce2[j] * 2 + role) * B + pos
                                  for j, role, pos in self.inc[i])
                else:
                    prof = sorted(ce2[j] * 2 + role for j, role, _ in self.inc[i])
                prof.append(cv[i])
                vkeys.append(tuple(prof))
            cv2, ncv2 = _rank(vkeys)
            if ncv2 == ncv and nce2 == nce:
                return cv2, ce2, ncv2, nce2
            cv, ce, ncv, nce = cv2, ce2, ncv2, nce2

    def render(self, rank, mode):
        """Full rendering under a discrete vertex ranking."""
        out = []
        for srcs, tgts, _ in self.edges:
            s = tuple(rank[v] for v in srcs)
            t = tuple(rank[v] for v in tgts)
            if mode == SYMMETRIC:
                s, t = tuple(sorted(s)), tuple(sorted(t))
            out.append((len(srcs), len(tgts), s, t))
        out.sort()
        return (self.nv, tuple(out))


def _rank(keys):
    order = {}
    for k in sorted(set(keys)):
        order[k] = len(order)
    return [order[k] for k in keys], len(order)


def _search_least(view: _View, mode: str):
    """Find the least body certificate and one vertex ranking achieving it.
    Also reports whether refinement alone was discrete: then the colours are
    a complete invariant and no automorphism can move any vertex."""
    best: list = [None, None]

    def rec(cv, ce, ncv, nce):
        if ncv == view.nv:
            # colours are compact, so a discrete colouring is a ranking
            cert = view.render(cv, mode)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, cv
            return
        by_color: list[list[int]] = [[] for _ in range(ncv)]
        for i, c in enumerate(cv):
            by_color[c].append(i)
        target = next(g for g in by_color if len(g) > 1)
        for i in target:
            cv2 = list(cv)
            cv2[i] = ncv
            rec(*view.refine(cv2, ce, ncv + 1, nce, mode))

    cv, ce, ncv, nce = view.refine(*view.initial_colors(mode), mode)
    rigid = ncv == view.nv
    rec(cv, ce, ncv, nce)
    return best[0], tuple(best[1]), rigid


# certificates of bodies this module itself produced, exempt from search
_canon_cert: dict[tuple[Polygraph, str], tuple] = {}
# certificates whose bodies admit no vertex-moving automorphism
_rigid_certs: set[tuple] = set()


@lru_cache(maxsize=1 << 17)
def _searched_cert(body: Polygraph, mode: str):
    view = _View(body)
    cert, rank, rigid = _search_least(view, mode)
    if rigid:
        _rigid_certs.add((cert, mode))
    if _canon_from_cert(cert, mode) == body:
        # the body is its own canonical form; pin the identity ranking so
        # label transport and witness construction can never disagree about
        # which automorphic ranking realizes the certificate
        return cert, None
    return cert, rank


def body_certificate(nv: int, edges, mode: str = PLANAR):
    """Isomorphism-complete certificate of a nameless body (vertices are
    0..nv-1, edges are (sources, targets) index tuples).  Equal exactly for
    isomorphic bodies in the given mode, in whichever encoding they reach
    this module."""
    cert, _, rigid = _search_least(_View.from_ints(nv, tuple(edges)), mode)
    if rigid:
        _rigid_certs.add((cert, mode))
    return cert


def body_from_certificate(cert, mode: str = PLANAR) -> Polygraph:
    """The canonical body realizing a certificate."""
    return _canon_from_cert(cert, mode)


def _body_cert_rank(body: Polygraph, mode: str):
    """Certificate plus the ranking that realizes it (None for the identity
    ranking, which canonical bodies get by construction)."""
    cert = _canon_cert.get((body, mode))
    if cert is not None:
        return cert, None
    return _searched_cert(body, mode)


@lru_cache(maxsize=1 << 17)
def _canon_from_cert(cert, mode: str) -> Polygraph:
    nv, renderings = cert
    vertices = tuple(_vname(i) for i in range(nv))
    edges = tuple(Edge(f"e{k}",
                       tuple(_vname(i) for i in s),
                       tuple(_vname(i) for i in t))
                  for k, (_, _, s, t) in enumerate(renderings))
    body = Polygraph(vertices, edges)
    _canon_cert[(body, mode)] = cert
    return body


@lru_cache(maxsize=1 << 17)
def _canon_auts(cert, mode: str):
    """Automorphisms of the canonical body, as morphisms and as vertex-index
    permutations, plus the position of the identity."""
    body = _canon_from_cert(cert, mode)
    group = label_preserving_automorphisms(LabelledShape(body, (), ()), mode)
    idx = {v: i for i, v in enumerate(body.vertices)}
    vperms = tuple(tuple(idx[f.vertex_map[v]] for v in body.vertices)
                   for f in group.elements)
    id_index = group.elements.index(identity_morphism(body, mode))
    return group.elements, vperms, id_index


@lru_cache(maxsize=1 << 17)
def _cert_hasher(cert, mode: str):
    return hashlib.sha256(repr((mode, cert)).encode("utf-8"))


def _digest(cert, mode: str, leaves, roots) -> str:
    h = _cert_hasher(cert, mode).copy()
    h.update(repr((leaves, roots)).encode("utf-8"))
    return h.hexdigest()


class CanonicalForm:
    """Canonical representative of a shape under label-preserving
    isomorphism in a fixed mode, with a content digest.  The witness
    morphism from the input to the canonical shape is built lazily, since
    bulk enumeration only ever looks at digests."""

    __slots__ = ("shape", "digest", "mode", "_source", "_aut", "_witness")

    def __init__(self, shape, digest, mode, source, aut):
        self.shape = shape
        self.digest = digest
        self.mode = mode
        self._source = source
        self._aut = aut
        self._witness = None

    @property
    def witness(self) -> PolyMorphism:
        if self._witness is None:
            w = _witness_to_canon(self._source.body, self.mode)
            if self._aut is not None:
                w = compose_morphisms(self._aut, w)
            self._witness = w
        return self._witness

    def __repr__(self):
        return f"CanonicalForm({self.digest[:12]}, {self.mode})"


def _match_sorted(values, seq):
    """Positions matching each element of seq into the sorted arrangement,
    consuming duplicates left to right."""
    slots: dict[int, list[int]] = {}
    for pos, v in enumerate(sorted(values)):
        slots.setdefault(v, []).append(pos)
    taken: dict[int, int] = {}
    out = []
    for v in seq:
        k = taken.get(v, 0)
        taken[v] = k + 1
        out.append(slots[v][k])
    return tuple(out)


def _witness_to_canon(body: Polygraph, mode: str) -> PolyMorphism:
    """The morphism from a body onto its canonical body."""
    cert, rank = _body_cert_rank(body, mode)
    nv, renderings = cert
    canon_body = _canon_from_cert(cert, mode)
    if rank is None:
        rank = tuple(range(nv))
    view = _View(body)

    def rend(srcs, tgts):
        s = tuple(rank[v] for v in srcs)
        t = tuple(rank[v] for v in tgts)
        if mode == SYMMETRIC:
            return (len(srcs), len(tgts), tuple(sorted(s)), tuple(sorted(t))), s, t
        return (len(srcs), len(tgts), s, t), s, t

    # pair original edges with canonical edges through their renderings
    buckets: dict[tuple, list[int]] = {}
    for k, r in enumerate(renderings):
        buckets.setdefault(r, []).append(k)
    emap = {}
    used: dict[tuple, int] = {}
    for srcs, tgts, name in sorted(view.edges,
                                   key=lambda e: (rend(e[0], e[1])[0], e[2])):
        r, s_ranks, t_ranks = rend(srcs, tgts)
        k = buckets[r][used.get(r, 0)]
        used[r] = used.get(r, 0) + 1
        if mode == SYMMETRIC:
            in_perm = _match_sorted(s_ranks, s_ranks)
            out_pairs = _match_sorted(t_ranks, t_ranks)
            # out_perm[j] = original position landing on canonical slot j
            out_perm = tuple(p[0] for p in
                             sorted(enumerate(out_pairs), key=lambda q: q[1]))
        else:
            in_perm = identity_perm(len(srcs))
            out_perm = identity_perm(len(tgts))
        emap[name] = EdgeImage(f"e{k}", in_perm, out_perm)
    vmap = {view.vnames[i]: _vname(rank[i]) for i in range(view.nv)}
    return PolyMorphism(body, canon_body, vmap, emap, mode)


def canonical_form(x: LabelledShape, mode: str = PLANAR) -> CanonicalForm:
    """Deterministic canonical representative, digest and witness."""
    cert, rank = _body_cert_rank(x.body, mode)
    body = _canon_from_cert(cert, mode)
    if not x.leaves and not x.roots:
        return CanonicalForm(LabelledShape(body, (), ()),
                             _digest(cert, mode, (), ()), mode, x, None)
    vr = dict(zip(x.body.vertices,
                  rank if rank is not None else range(cert[0])))
    leaves = tuple(vr[v] for v in x.leaves)
    roots = tuple(vr[v] for v in x.roots)
    aut = None
    if (cert, mode) not in _rigid_certs:
        elements, vperms, id_index = _canon_auts(cert, mode)
        if len(vperms) > 1:
            best = min(range(len(vperms)),
                       key=lambda t: (tuple(vperms[t][i] for i in leaves),
                                      tuple(vperms[t][i] for i in roots)))
            if best != id_index:
                p = vperms[best]
                leaves = tuple(p[i] for i in leaves)
                roots = tuple(p[i] for i in roots)
                aut = elements[best]
    shape = LabelledShape(body,
                          tuple(_vname(i) for i in leaves),
                          tuple(_vname(i) for i in roots))
    return CanonicalForm(shape, _digest(cert, mode, leaves, roots), mode, x, aut)


def shape_digest(x: LabelledShape, mode: str = PLANAR) -> str:
    return canonical_form(x, mode).digest


def are_isomorphic(x: LabelledShape, y: LabelledShape, mode: str = PLANAR):
    """A label-preserving isomorphism x -> y, or None."""
    cx = canonical_form(x, mode)
    cy = canonical_form(y, mode)
    if cx.digest != cy.digest:
        return None
    return compose_morphisms(invert_morphism(cy.witness), cx.witness)


def clear_caches():
    """Drop memoized certificates, canonical bodies and automorphism groups.
    Only needed by memory-sensitive batch runs."""
    _searched_cert.cache_clear()
    _canon_from_cert.cache_clear()
    _canon_auts.cache_clear()
    _cert_hasher.cache_clear()
    label_preserving_automorphisms.cache_clear()
    _canon_cert.clear()
    _rigid_certs.clear()


# ---------------------------------------------------------------------------
# Automorphism groups


@dataclass(frozen=True)
class PermGroup:
    """A group of label-preserving automorphisms of one shape, listed in
    full (these groups stay tiny at the scales we work at)."""

    carrier: LabelledShape
    mode: str
    elements: tuple[PolyMorphism, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_closed(self) -> bool:
        pool = set(self.elements)
        return all(compose_morphisms(a, b) in pool for a in self.elements
                   for b in self.elements)


def trivial_group(x: LabelledShape, mode: str = PLANAR) -> PermGroup:
    return PermGroup(x, mode, (identity_morphism(x.body, mode),))


@lru_cache(maxsize=1 << 14)
def label_preserving_automorphisms(x: LabelledShape, mode: str = PLANAR) -> PermGroup:
    """All automorphisms of the body fixing every leaf and root position."""
    view = _View(x.body)
    leaves = tuple(view.vidx[v] for v in x.leaves)
    roots = tuple(view.vidx[v] for v in x.roots)
    cv, ce, ncv, nce = view.initial_colors(mode, leaves, roots)
    cv, ce, ncv, nce = view.refine(cv, ce, ncv, nce, mode)
    edges = sorted(range(view.ne),
                   key=lambda j: (-(len(view.edges[j][0]) + len(view.edges[j][1])), j))
    found = []

    def vertex_stage(vperm: dict[int, int], emap):
        free = [i for i in range(view.nv) if i not in vperm]
        taken = set(vperm.values())
        pools = []
        for i in free:
            pool = [t for t in range(view.nv) if cv[t] == cv[i] and t not in taken]
            pools.append(pool)
        for combo in product(*pools):
            if len(set(combo)) != len(combo):
                continue
            full = dict(vperm)
            full.update(zip(free, combo))
            vmap = {view.vnames[a]: view.vnames[b] for a, b in full.items()}
            f = PolyMorphism(x.body, x.body, vmap, dict(emap), mode)
            if not morphism_errors(f) and all(
                    vmap[v] == v for v in x.leaves + x.roots):
                found.append(f)

    def rec(idx: int, vperm: dict[int, int], emap: dict, eused: set):
        if idx == len(edges):
            vertex_stage(vperm, emap)
            return
        j = edges[idx]
        srcs, tgts, name = view.edges[j]
        n, m = len(srcs), len(tgts)
        for k in range(view.ne):
            if k in eused or ce[k] != ce[j]:
                continue
            srcs2, tgts2, name2 = view.edges[k]
            if (len(srcs2), len(tgts2)) != (n, m):
                continue
            if mode == PLANAR:
                perms = [(identity_perm(n), identity_perm(m))]
            else:
                perms = [(pin, pout) for pin in permutations(range(n))
                         for pout in permutations(range(m))]
            for pin, pout in perms:
                new = {}
                ok = True
                for i in range(n):
                    a, b = srcs[i], srcs2[pin[i]]
                    cur = vperm.get(a, new.get(a))
                    if cur is None:
                        if cv[a] != cv[b] or b in set(vperm.values()) | set(new.values()):
                            ok = False
                            break
                        new[a] = b
                    elif cur != b:
                        ok = False
                        break
                if ok:
                    for q in range(m):
                        a, b = tgts[pout[q]], tgts2[q]
                        cur = vperm.get(a, new.get(a))
                        if cur is None:
                            if cv[a] != cv[b] or b in set(vperm.values()) | set(new.values()):
                                ok = False
                                break
                            new[a] = b
                        elif cur != b:
                            ok = False
                            break
                if not ok:
                    continue
                vperm.update(new)
                emap[name] = EdgeImage(name2, pin, pout)
                eused.add(k)
                rec(idx + 1, vperm, emap, eused)
                eused.discard(k)
                del emap[name]
                for a in new:
                    del vperm[a]

    rec(0, {}, {}, set())
    uniq = sorted(set(found), key=lambda f: f.key())
    return PermGroup(x, mode, tuple(uniq))


# ---------------------------------------------------------------------------
# Orbit conditions


def orbit_morphism_valid(f: PolyMorphism, g_dom: PermGroup, g_cod: PermGroup) -> bool:
    """Whether f descends to a map of orbit objects: every codomain symmetry
    must restrict along f to some domain symmetry."""
    if g_dom.carrier.body != f.dom or g_cod.carrier.body != f.cod:
        raise ValueError("groups do not act on the morphism's boundary")
    for tau in g_cod.elements:
        lhs = compose_morphisms(tau, f)
        if not any(lhs == compose_morphisms(f, sigma) for sigma in g_dom.elements):
            return False
    return True


def orbit_equal(f: PolyMorphism, g: PolyMorphism, g_dom: PermGroup) -> bool:
    """Whether f and g agree up to precomposition with a domain symmetry."""
    if f.dom != g.dom or f.cod != g.cod:
        return False
    return any(g == compose_morphisms(f, sigma) for sigma in g_dom.elements)
