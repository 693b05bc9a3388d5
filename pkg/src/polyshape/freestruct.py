"""Free polycategories, properads and props on a finite polygraph.

A morphism of the free structure is a canonical shape together with a map
of its body into the base, taken up to the shape's label-preserving
automorphisms; the hom table is keyed by the object sequences the
boundary labels land on.  Composition grafts shapes and transports the
maps along the gluing; the boundary bookkeeping (where each leaf and root
of a composite sits, and which permutation relates two composition
orders) is derived mechanically from the concatenation identities by
simulating them on position tags.

check_axioms instantiates each defining axiom on seeded pseudo-random
morphisms and verifies both sides agree.  In planar mode the axioms whose
statement needs a boundary permutation are only checked on instances
where that permutation is the identity; symmetric mode applies the
derived permutation through exchange.  The ``mutate`` flag is a negative
control: it omits the derived permutations, which must surface failures.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .canon import canonical_form, label_preserving_automorphisms
from .functors import KINDS, POLYCAT, PROP, PROPERAD, evaluate, free_monad, \
    sigma_polycat, sigma_prop, sigma_properad
from .labelled import (LabelledShape, empty_shape, identity_shape,
                       juxtapose_legs, multi_graft_legs, relabel)
from .polygraph import (PLANAR, SYMMETRIC, Edge, Polygraph, PolyMorphism,
                        compose_morphisms, compose_perm, identity_perm,
                        invert_morphism, is_perm, make_polygraph)

_SIGMA = {POLYCAT: sigma_polycat, PROPERAD: sigma_properad, PROP: sigma_prop}


# ---------------------------------------------------------------------------
# Morphisms


@dataclass(frozen=True)
class Morphism:
    """A hom element: canonical shape plus an orbit-least map to the base.

    Two values are equal exactly when their shapes coincide and their
    representatives lie in one orbit of the shape's label-preserving
    automorphisms; storing the least representative turns that into plain
    field equality.
    """

    kind: str
    mode: str
    digest: str
    shape: LabelledShape
    rep: PolyMorphism
    sources: tuple[str, ...]
    targets: tuple[str, ...]

    @property
    def base(self) -> Polygraph:
        return self.rep.cod

    def __repr__(self):
        return (f"Morphism({self.kind}, {self.digest[:8]}, "
                f"{self.sources} -> {self.targets})")


def _least_in_orbit(rep: PolyMorphism, shape: LabelledShape,
                    mode: str) -> PolyMorphism:
    group = label_preserving_automorphisms(shape, mode)
    if group.order == 1:
        return rep
    return min((compose_morphisms(rep, s) for s in group.elements),
               key=lambda g: g.key())


def _morphism(kind: str, mode: str, shape: LabelledShape,
              rep: PolyMorphism) -> Morphism:
    """Canonicalize a (shape, map) pair into a Morphism."""
    cf = canonical_form(shape, mode)
    carried = compose_morphisms(rep, invert_morphism(cf.witness))
    carried = _least_in_orbit(carried, cf.shape, mode)
    return Morphism(kind, mode, cf.digest, cf.shape, carried,
                    tuple(carried.vertex_map[v] for v in cf.shape.leaves),
                    tuple(carried.vertex_map[v] for v in cf.shape.roots))


def identity(base: Polygraph, v: str, kind: str = POLYCAT,
             mode: str = PLANAR) -> Morphism:
    """The identity morphism on one object of the base."""
    if v not in base.vertex_set:
        raise ValueError(f"{v!r} is not a vertex of the base")
    x = identity_shape()
    rep = PolyMorphism(x.body, base, {x.leaves[0]: v}, {}, mode)
    return _morphism(kind, mode, x, rep)


def empty_morphism(base: Polygraph, kind: str = PROP,
                   mode: str = PLANAR) -> Morphism:
    """The juxtaposition unit; props only."""
    if kind != PROP:
        raise ValueError("the empty morphism exists only in props")
    x = empty_shape()
    return _morphism(kind, mode, x, PolyMorphism(x.body, base, {}, {}, mode))


def _merged_rep(glued: LabelledShape, parts, mode: str) -> PolyMorphism:
    """Assemble a map on a glued body from legs into it and maps on the
    pieces.  The legs come from discrete pushouts or coproducts and never
    reshuffle ports, so edge images carry over name by name."""
    base = parts[0][1].cod
    vmap: dict[str, str] = {}
    emap = {}
    for leg, rep in parts:
        for v, w in leg.vertex_map.items():
            vmap[w] = rep.vertex_map[v]
        for name, im in leg.edge_map.items():
            emap[im.edge] = rep.edge_map[name]
    return PolyMorphism(glued.body, base, vmap, emap, mode)


def _window(start: int, width: int) -> tuple[int, ...]:
    return tuple(range(start, start + width))


def multi_compose(g: Morphism, f: Morphism, i: int, j: int,
                  width: int = 1) -> Morphism:
    """Plug roots j..j+width-1 of f into leaves i..i+width-1 of g.

    Positions are 1-based; the boundary objects must match pointwise.
    Widths beyond one need window composition, which polycategories do
    not have.
    """
    if g.kind != f.kind or g.mode != f.mode or g.base != f.base:
        raise ValueError("morphisms live in different structures")
    if width < 1:
        raise ValueError("width must be positive")
    if width > 1 and g.kind == POLYCAT:
        raise ValueError("window composition is unsupported in polycategories")
    if not (1 <= i and i + width - 1 <= len(g.sources)):
        raise ValueError("leaf window out of range")
    if not (1 <= j and j + width - 1 <= len(f.targets)):
        raise ValueError("root window out of range")
    for t in range(width):
        if g.sources[i - 1 + t] != f.targets[j - 1 + t]:
            raise ValueError(
                f"boundary mismatch at window position {t + 1}: "
                f"{g.sources[i - 1 + t]!r} != {f.targets[j - 1 + t]!r}")
    glued, from_f, from_g = multi_graft_legs(g.shape, f.shape,
                                             _window(j, width),
                                             _window(i, width))
    rep = _merged_rep(glued, ((from_f, f.rep), (from_g, g.rep)), g.mode)
    return _morphism(g.kind, g.mode, glued, rep)


def compose(g: Morphism, f: Morphism, i: int, j: int) -> Morphism:
    """Plug root j of f into leaf i of g (1-based)."""
    return multi_compose(g, f, i, j, 1)


def juxtapose_morphisms(f: Morphism, g: Morphism) -> Morphism:
    """Place f and g side by side, f's boundary first; props only."""
    if f.kind != g.kind or f.mode != g.mode or f.base != g.base:
        raise ValueError("morphisms live in different structures")
    if f.kind != PROP:
        raise ValueError("juxtaposition is unsupported outside props")
    glued, from_f, from_g = juxtapose_legs(g.shape, f.shape)
    rep = _merged_rep(glued, ((from_f, f.rep), (from_g, g.rep)), f.mode)
    return _morphism(f.kind, f.mode, glued, rep)


def exchange(f: Morphism, phi, psi) -> Morphism:
    """Permute f's boundary: new leaf k is old leaf phi[k], old root j
    becomes new root psi[j].  Non-identity permutations need symmetric
    mode; the planar structures have no actions."""
    phi, psi = tuple(phi), tuple(psi)
    n, m = len(f.sources), len(f.targets)
    if not (is_perm(phi, n) and is_perm(psi, m)):
        raise ValueError("permutations do not match the boundary arity")
    if f.mode != SYMMETRIC and (phi != identity_perm(n)
                                or psi != identity_perm(m)):
        raise ValueError("planar morphisms admit only identity actions")
    return _morphism(f.kind, f.mode, relabel(f.shape, phi, psi), f.rep)


# ---------------------------------------------------------------------------
# The free structure


class FreeStructure:
    """Hom tables of the free polycategory / properad / prop on a base."""

    __slots__ = ("kind", "mode", "base", "max_edges", "max_arity", "homs")

    def __init__(self, kind, mode, base, bounds, homs):
        self.kind = kind
        self.mode = mode
        self.base = base
        self.max_edges, self.max_arity = bounds
        self.homs = homs

    @property
    def bounds(self):
        return (self.max_edges, self.max_arity)

    def objects(self) -> tuple[str, ...]:
        return self.base.vertices

    def hom(self, sources, targets) -> tuple[Morphism, ...]:
        return self.homs.get((tuple(sources), tuple(targets)), ())

    def morphisms(self):
        for key in sorted(self.homs):
            yield from self.homs[key]

    @property
    def morphism_count(self) -> int:
        return sum(len(v) for v in self.homs.values())

    def __repr__(self):
        return (f"FreeStructure({self.kind}, {self.mode}, "
                f"{self.morphism_count} morphisms)")


def free_structure(kind: str, base: Polygraph, bounds=(3, 2),
                   mode: str = PLANAR) -> FreeStructure:
    """Build the free structure's hom tables within bounds.

    The homs are the evaluation of the free monad on the matching
    signature, fibered over where the boundary labels land.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    ev = evaluate(free_monad(_SIGMA[kind](bounds, mode)), base)
    homs: dict[tuple, list[Morphism]] = {}
    for st in ev.arities():
        for c in ev.stage(*st):
            m = Morphism(kind, mode, c.digest, c.shape, c.rep,
                         c.sources, c.targets)
            homs.setdefault((c.sources, c.targets), []).append(m)
    table = {key: tuple(sorted(ms, key=lambda m: (m.digest, m.rep.key())))
             for key, ms in homs.items()}
    return FreeStructure(kind, mode, base, bounds, table)


def random_base(seed: int, max_edges: int = 3, max_vertices: int = 3,
                max_arity: int = 2) -> Polygraph:
    """A small pseudo-random polygraph, reproducible from the seed."""
    rng = random.Random(seed)
    nv = rng.randint(1, max_vertices)
    vertices = tuple(f"x{t}" for t in range(nv))
    edges = []
    for t in range(rng.randint(1, max_edges)):
        a = rng.randint(0, max_arity)
        b = rng.randint(0, max_arity)
        edges.append(Edge(f"g{t}",
                          tuple(rng.choice(vertices) for _ in range(a)),
                          tuple(rng.choice(vertices) for _ in range(b))))
    return make_polygraph(vertices, edges)


# ---------------------------------------------------------------------------
# Axiom checking
#
# Each axiom samples an instantiation, builds both sides, and compares.
# Boundary permutations are never written down by hand: both composition
# orders are simulated on unique position tags and the permutation that
# matches them is extracted, then applied through exchange.


def _tags(prefix: str, m: Morphism):
    return ([(prefix, "s", t) for t in range(len(m.sources))],
            [(prefix, "t", t) for t in range(len(m.targets))])


def _sim(ylv, yrt, xlv, xrt, i, j, width=1):
    """Tag-level mirror of multi_compose's boundary concatenation."""
    lv = ylv[:i - 1] + xlv + ylv[i - 1 + width:]
    rt = xrt[:j - 1] + yrt + xrt[j - 1 + width:]
    return lv, rt


def _leaf_perm(cur, want):
    """phi with relabel-semantics new[k] = old[phi[k]] carrying cur to want."""
    pos = {lab: t for t, lab in enumerate(cur)}
    return tuple(pos[lab] for lab in want)


def _root_perm(cur, want):
    """psi with relabel-semantics old j at new psi[j] carrying cur to want."""
    pos = {lab: t for t, lab in enumerate(want)}
    return tuple(pos[lab] for lab in cur)


def _twisted(lhs: Morphism, cur, want, mutate: bool):
    """Apply the derived boundary permutation to lhs, or skip it under the
    mutation control.  Returns None when the instance is not expressible
    (planar mode, non-identity twist)."""
    phi = _leaf_perm(cur[0], want[0])
    psi = _root_perm(cur[1], want[1])
    if mutate:
        return lhs
    if phi == identity_perm(len(phi)) and psi == identity_perm(len(psi)):
        return lhs
    if lhs.mode != SYMMETRIC:
        return None
    return exchange(lhs, phi, psi)


class _Sampler:
    """Seeded draws over a free structure's morphisms."""

    def __init__(self, fs: FreeStructure, rng: random.Random):
        self.fs = fs
        self.rng = rng
        self.all = tuple(fs.morphisms())
        self.feeding: dict[str, list[tuple[Morphism, int]]] = {}
        for m in self.all:
            for j, v in enumerate(m.targets, start=1):
                self.feeding.setdefault(v, []).append((m, j))
        self._src_pools: dict[int, tuple[Morphism, ...]] = {}
        self._tgt_pools: dict[int, tuple[Morphism, ...]] = {}

    def src_pool(self, width):
        if width not in self._src_pools:
            self._src_pools[width] = tuple(
                m for m in self.all if len(m.sources) >= width)
        return self._src_pools[width]

    def tgt_pool(self, width):
        if width not in self._tgt_pools:
            self._tgt_pools[width] = tuple(
                m for m in self.all if len(m.targets) >= width)
        return self._tgt_pools[width]

    def any(self):
        return self.rng.choice(self.all) if self.all else None

    def consumer(self):
        pool = self.src_pool(1)
        if not pool:
            return None
        g = self.rng.choice(pool)
        return g, self.rng.randint(1, len(g.sources))

    def feeder(self, v):
        pool = self.feeding.get(v)
        if not pool:
            return None
        return self.rng.choice(pool)

    def composable(self):
        got = self.consumer()
        if got is None:
            return None
        g, i = got
        fed = self.feeder(g.sources[i - 1])
        if fed is None:
            return None
        f, j = fed
        return g, f, i, j

    def fill_window(self, need):
        """A morphism whose target window matches the object run."""
        width = len(need)
        pool = self.tgt_pool(width)
        for f in self.rng.sample(pool, min(12, len(pool))):
            for j in range(1, len(f.targets) - width + 2):
                if f.targets[j - 1:j - 1 + width] == need:
                    return f, j
        return None

    def host_window(self, need):
        """A morphism whose source window matches the object run."""
        width = len(need)
        pool = self.src_pool(width)
        for h in self.rng.sample(pool, min(12, len(pool))):
            for i in range(1, len(h.sources) - width + 2):
                if h.sources[i - 1:i - 1 + width] == need:
                    return h, i
        return None

    def window(self, width: int):
        """g, f and aligned windows of the given width."""
        pool = self.src_pool(width)
        if not pool:
            return None
        g = self.rng.choice(pool)
        i = self.rng.randint(1, len(g.sources) - width + 1)
        got = self.fill_window(g.sources[i - 1:i - 1 + width])
        if got is None:
            return None
        f, j = got
        return g, f, i, j

    def perm(self, n):
        p = list(range(n))
        self.rng.shuffle(p)
        return tuple(p)


def _axiom_unit_left(s: _Sampler, mutate):
    got = s.consumer()
    if got is None:
        return None
    g, i = got
    e = identity(g.base, g.sources[i - 1], g.kind, g.mode)
    lhs = compose(g, e, i, 1)
    return lhs == g, f"id into leaf {i} of {g!r}", lhs, g


def _axiom_unit_right(s: _Sampler, mutate):
    f = s.any()
    if f is None or not f.targets:
        return None
    j = s.rng.randint(1, len(f.targets))
    e = identity(f.base, f.targets[j - 1], f.kind, f.mode)
    lhs = compose(e, f, 1, j)
    return lhs == f, f"root {j} of {f!r} into id", lhs, f


def _axiom_assoc(s: _Sampler, mutate):
    got = s.composable()
    if got is None:
        return None
    h, g, ih, jg = got
    if not g.sources:
        return None
    lg = s.rng.randint(1, len(g.sources))
    fed = s.feeder(g.sources[lg - 1])
    if fed is None:
        return None
    f, jf = fed
    lhs = compose(compose(h, g, ih, jg), f, ih - 1 + lg, jf)
    rhs = compose(h, compose(g, f, lg, jf), ih, jf - 1 + jg)
    return (lhs == rhs,
            f"({h!r} . {g!r}) . {f!r} nested at {ih},{jg},{lg},{jf}",
            lhs, rhs)


def _axiom_left_interchange(s: _Sampler, mutate, w1=1, w2=1):
    pool = s.src_pool(w1 + w2)
    if not pool:
        return None
    h = s.rng.choice(pool)
    p = len(h.sources)
    i1 = s.rng.randint(1, p - w1 - w2 + 1)
    i2 = s.rng.randint(i1 + w1, p - w2 + 1)
    got1 = s.fill_window(h.sources[i1 - 1:i1 - 1 + w1])
    got2 = s.fill_window(h.sources[i2 - 1:i2 - 1 + w2])
    if got1 is None or got2 is None:
        return None
    g1, j1 = got1
    g2, j2 = got2
    lhs = multi_compose(multi_compose(h, g1, i1, j1, w1),
                        g2, i2 + len(g1.sources) - w1, j2, w2)
    rhs = multi_compose(multi_compose(h, g2, i2, j2, w2),
                        g1, i1, j1, w1)
    th, t1, t2 = _tags("h", h), _tags("g1", g1), _tags("g2", g2)
    cur = _sim(*_sim(*th, *t1, i1, j1, w1),
               *t2, i2 + len(g1.sources) - w1, j2, w2)
    want = _sim(*_sim(*th, *t2, i2, j2, w2), *t1, i1, j1, w1)
    lhs2 = _twisted(lhs, cur, want, mutate)
    if lhs2 is None:
        return None
    return (lhs2 == rhs,
            f"{g1!r},{g2!r} into leaves {i1},{i2} of {h!r} "
            f"(widths {w1},{w2})",
            lhs2, rhs)


def _axiom_right_interchange(s: _Sampler, mutate, w1=1, w2=1):
    pool = s.tgt_pool(w1 + w2)
    if not pool:
        return None
    f = s.rng.choice(pool)
    q = len(f.targets)
    j1 = s.rng.randint(1, q - w1 - w2 + 1)
    j2 = s.rng.randint(j1 + w1, q - w2 + 1)
    got1 = s.host_window(f.targets[j1 - 1:j1 - 1 + w1])
    got2 = s.host_window(f.targets[j2 - 1:j2 - 1 + w2])
    if got1 is None or got2 is None:
        return None
    h1, i1 = got1
    h2, i2 = got2
    lhs = multi_compose(h2, multi_compose(h1, f, i1, j1, w1),
                        i2, j2 + len(h1.targets) - w1, w2)
    rhs = multi_compose(h1, multi_compose(h2, f, i2, j2, w2),
                        i1, j1, w1)
    tf, t1, t2 = _tags("f", f), _tags("h1", h1), _tags("h2", h2)
    cur = _sim(*t2, *_sim(*t1, *tf, i1, j1, w1),
               i2, j2 + len(h1.targets) - w1, w2)
    want = _sim(*t1, *_sim(*t2, *tf, i2, j2, w2), i1, j1, w1)
    lhs2 = _twisted(lhs, cur, want, mutate)
    if lhs2 is None:
        return None
    return (lhs2 == rhs,
            f"roots {j1},{j2} of {f!r} into {h1!r},{h2!r} "
            f"(widths {w1},{w2})",
            lhs2, rhs)


def _axiom_action_unit(s: _Sampler, mutate):
    f = s.any()
    if f is None:
        return None
    lhs = exchange(f, identity_perm(len(f.sources)),
                   identity_perm(len(f.targets)))
    return lhs == f, f"identity action on {f!r}", lhs, f


def _axiom_action_compose(s: _Sampler, mutate):
    f = s.any()
    if f is None:
        return None
    n, m = len(f.sources), len(f.targets)
    p1, q1 = s.perm(n), s.perm(m)
    p2, q2 = s.perm(n), s.perm(m)
    lhs = exchange(exchange(f, p1, q1), p2, q2)
    rhs = exchange(f, compose_perm(p1, p2), compose_perm(q2, q1))
    return (lhs == rhs, f"stacked actions on {f!r}", lhs, rhs)


def _axiom_equivariance(s: _Sampler, mutate):
    got = s.composable()
    if got is None:
        return None
    g, f, i, j = got
    phi = s.perm(len(g.sources))
    psi = s.perm(len(g.targets))
    twisted_g = exchange(g, phi, psi)
    i2 = phi.index(i - 1) + 1
    lhs = compose(twisted_g, f, i2, j)
    tg, tf = _tags("g", g), _tags("f", f)
    tg_twist = ([tg[0][phi[k]] for k in range(len(phi))],
                [tg[1][k] for k in _inv(psi)])
    cur = _sim(*tg_twist, *tf, i2, j)
    base = _sim(*tg, *tf, i, j)
    rhs0 = compose(g, f, i, j)
    want_phi = _leaf_perm(base[0], cur[0])
    want_psi = _root_perm(base[1], cur[1])
    if mutate:
        rhs = rhs0
    else:
        rhs = exchange(rhs0, want_phi, want_psi)
    return (lhs == rhs, f"action slides past composition on {g!r}.{f!r}",
            lhs, rhs)


def _inv(p):
    out = [0] * len(p)
    for t, v in enumerate(p):
        out[v] = t
    return out


def _axiom_window_assoc(s: _Sampler, mutate):
    w1 = s.rng.randint(1, 2)
    got = s.window(w1)
    if got is None:
        return None
    g, f, i, j = got
    c = multi_compose(g, f, i, j, w1)
    w2 = s.rng.randint(1, min(2, len(g.targets)) if g.targets else 1) \
        if g.targets else None
    if w2 is None:
        return None
    # a window inside g's surviving root block
    l0 = s.rng.randint(1, len(g.targets) - w2 + 1)
    got_h = s.host_window(g.targets[l0 - 1:l0 - 1 + w2])
    if got_h is None:
        return None
    h, k = got_h
    lhs = multi_compose(h, c, k, j - 1 + l0, w2)
    rhs = multi_compose(multi_compose(h, g, k, l0, w2), f, k - 1 + i, j, w1)
    return (lhs == rhs,
            f"windows {w1},{w2} nest on {h!r},{g!r},{f!r}", lhs, rhs)


def _axiom_window_left(s: _Sampler, mutate):
    w1 = s.rng.randint(1, 2)
    w2 = 2 if w1 == 1 else s.rng.randint(1, 2)
    return _axiom_left_interchange(s, mutate, w1, w2)


def _axiom_window_right(s: _Sampler, mutate):
    w1 = s.rng.randint(1, 2)
    w2 = 2 if w1 == 1 else s.rng.randint(1, 2)
    return _axiom_right_interchange(s, mutate, w1, w2)


def _axiom_tensor_assoc(s: _Sampler, mutate):
    f, g, h = s.any(), s.any(), s.any()
    if None in (f, g, h):
        return None
    lhs = juxtapose_morphisms(juxtapose_morphisms(f, g), h)
    rhs = juxtapose_morphisms(f, juxtapose_morphisms(g, h))
    return lhs == rhs, f"({f!r} + {g!r}) + {h!r}", lhs, rhs


def _axiom_tensor_unit(s: _Sampler, mutate):
    f = s.any()
    if f is None:
        return None
    e = empty_morphism(f.base, f.kind, f.mode)
    lhs = juxtapose_morphisms(e, f)
    rhs = juxtapose_morphisms(f, e)
    return lhs == f and rhs == f, f"empty + {f!r} + empty", lhs, rhs


def _axiom_tensor_compose(s: _Sampler, mutate):
    got = s.composable()
    if got is None:
        return None
    g, f, i, j = got
    k = s.any()
    if k is None:
        return None
    lhs = juxtapose_morphisms(compose(g, f, i, j), k)
    rhs = compose(juxtapose_morphisms(g, k), f, i, j)
    tg, tf, tk = _tags("g", g), _tags("f", f), _tags("k", k)
    comp = _sim(*tg, *tf, i, j)
    cur = (comp[0] + tk[0], comp[1] + tk[1])
    want = _sim(tg[0] + tk[0], tg[1] + tk[1], *tf, i, j)
    rhs2 = _twisted(rhs, want, cur, mutate)
    if rhs2 is None:
        return None
    return (lhs == rhs2, f"({g!r}.{f!r}) + {k!r} slides", lhs, rhs2)


def _axiom_tensor_symmetry(s: _Sampler, mutate):
    f, g = s.any(), s.any()
    if None in (f, g):
        return None
    fg = juxtapose_morphisms(f, g)
    gf = juxtapose_morphisms(g, f)
    tf, tg = _tags("f", f), _tags("g", g)
    cur = (tf[0] + tg[0], tf[1] + tg[1])
    want = (tg[0] + tf[0], tg[1] + tf[1])
    lhs = _twisted(fg, cur, want, mutate)
    if lhs is None:
        return None
    return lhs == gf, f"swap of {f!r} + {g!r}", lhs, gf


_AXIOMS = {
    POLYCAT: (
        ("unit-left", _axiom_unit_left),
        ("unit-right", _axiom_unit_right),
        ("associativity", _axiom_assoc),
        ("left-interchange", _axiom_left_interchange),
        ("right-interchange", _axiom_right_interchange),
        ("action-unit", _axiom_action_unit),
        ("action-compose", _axiom_action_compose),
        ("equivariance", _axiom_equivariance),
    ),
}
_AXIOMS[PROPERAD] = _AXIOMS[POLYCAT] + (
    ("window-associativity", _axiom_window_assoc),
    ("window-left-interchange", _axiom_window_left),
    ("window-right-interchange", _axiom_window_right),
)
_AXIOMS[PROP] = _AXIOMS[PROPERAD] + (
    ("tensor-associativity", _axiom_tensor_assoc),
    ("tensor-unit", _axiom_tensor_unit),
    ("tensor-compose", _axiom_tensor_compose),
    ("tensor-symmetry", _axiom_tensor_symmetry),
)
_SYMMETRIC_ONLY = {"action-unit", "action-compose", "equivariance"}


@dataclass
class AxiomResult:
    axiom: str
    attempted: int = 0
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class AxiomReport:
    kind: str
    mode: str
    seed: int
    trials: int
    bounds: tuple[int, int]
    mutate: bool
    results: tuple[AxiomResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failure_count(self) -> int:
        return sum(len(r.failures) for r in self.results)

    def to_json_dict(self):
        return {
            "kind": self.kind,
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
            "bounds": list(self.bounds),
            "mutate": self.mutate,
            "ok": self.ok,
            "results": [
                {"axiom": r.axiom, "attempted": r.attempted,
                 "checked": r.checked,
                 "failures": [dict(f) for f in r.failures]}
                for r in self.results
            ],
        }


_FAILURE_CAP = 20


def check_axioms(kind: str, base: Polygraph, trials: int = 1000,
                 seed: int = 0, bounds=(2, 2), mode: str = PLANAR,
                 mutate: bool = False) -> AxiomReport:
    """Instantiate every defining axiom of the kind on seeded random
    morphisms of the free structure and verify both sides agree.

    Each trial draws one instantiation; draws that cannot be completed
    (no boundary-compatible morphism, or a twist that planar mode cannot
    express) count as attempted but not checked.  Failures carry the
    instantiation and both sides' identities, up to a cap per axiom.
    """
    if kind not in _AXIOMS:
        raise ValueError(f"unknown kind {kind!r}")
    fs = free_structure(kind, base, bounds, mode)
    rng = random.Random(seed)
    sampler = _Sampler(fs, rng)
    results = []
    for name, axiom in _AXIOMS[kind]:
        res = AxiomResult(name)
        if mode != SYMMETRIC and name in _SYMMETRIC_ONLY:
            results.append(res)
            continue
        for _ in range(trials):
            res.attempted += 1
            got = axiom(sampler, mutate)
            if got is None:
                continue
            ok, what, lhs, rhs = got
            res.checked += 1
            if not ok and len(res.failures) < _FAILURE_CAP:
                res.failures.append({
                    "instantiation": what,
                    "lhs": f"{lhs.digest}:{lhs.rep.key()}",
                    "rhs": f"{rhs.digest}:{rhs.rep.key()}",
                })
            elif not ok:
                res.failures[-1]["more"] = \
                    res.failures[-1].get("more", 0) + 1
        results.append(res)
    return AxiomReport(kind, mode, seed, trials, tuple(bounds), mutate,
                       tuple(results))
