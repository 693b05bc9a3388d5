"""Canonical forms, digests, witnesses, and automorphism groups."""

import random

from polyshape import (
    Edge,
    LabelledShape,
    PLANAR,
    SYMMETRIC,
    are_isomorphic,
    canonical_form,
    corolla,
    hom,
    identity_shape,
    juxtapose,
    label_preserving_automorphisms,
    make_polygraph,
    relabel,
    shape_digest,
)
from polyshape.canon import orbit_equal, orbit_morphism_valid, trivial_group
from polyshape.polygraph import (
    compose_morphisms,
    invert_morphism,
    morphism_errors,
)


def shuffled(x, rng):
    """The same shape with its body vertices and edges renamed and
    reordered at random."""
    vs = list(x.body.vertices)
    new = [f"r{i}" for i in range(len(vs))]
    rng.shuffle(new)
    ren = dict(zip(vs, new))
    edges = [Edge(f"q{i}", tuple(ren[v] for v in e.sources),
                  tuple(ren[v] for v in e.targets))
             for i, e in enumerate(x.body.edges)]
    order_v = sorted(range(len(vs)), key=lambda i: rng.random())
    order_e = sorted(range(len(edges)), key=lambda i: rng.random())
    body = make_polygraph([new[i] for i in order_v],
                          [edges[i] for i in order_e])
    return LabelledShape(body, tuple(ren[v] for v in x.leaves),
                         tuple(ren[v] for v in x.roots))


def random_shape(rng, max_edges=3):
    """A random well-formed labelled shape (the body need not be
    buildable; canonical forms work for any polygraph)."""
    nv = rng.randint(1, 5)
    vs = [f"v{i}" for i in range(nv)]
    edges = []
    for i in range(rng.randint(0, max_edges)):
        srcs = tuple(rng.choice(vs) for _ in range(rng.randint(0, 2)))
        tgts = tuple(rng.choice(vs) for _ in range(rng.randint(0, 2)))
        edges.append(Edge(f"e{i}", srcs, tgts))
    body = make_polygraph(vs, edges)
    pool = [v for v in vs]
    rng.shuffle(pool)
    k = rng.randint(0, min(2, len(pool)))
    leaves = tuple(pool[:k])
    m = rng.randint(0, min(2, len(pool) - k))
    roots = tuple(pool[k:k + m])
    return LabelledShape(body, leaves, roots)


def test_digest_ignores_names_and_order():
    rng = random.Random(0)
    x = corolla(2, 2)
    d = shape_digest(x)
    for _ in range(10):
        assert shape_digest(shuffled(x, rng)) == d


def test_digest_separates_modes_and_labels():
    x = corolla(2, 0)
    swapped = relabel(x, (1, 0), ())
    assert shape_digest(x, PLANAR) != shape_digest(swapped, PLANAR)
    assert shape_digest(x, SYMMETRIC) == shape_digest(swapped, SYMMETRIC)


def test_witness_is_a_label_preserving_iso():
    rng = random.Random(1)
    for _ in range(20):
        x = random_shape(rng)
        for mode in (PLANAR, SYMMETRIC):
            cf = canonical_form(x, mode)
            w = cf.witness
            assert morphism_errors(w) == []
            assert w.dom == x.body and w.cod == cf.shape.body
            assert w.is_bijective()
            assert tuple(w.vertex_map[v] for v in x.leaves) == cf.shape.leaves
            assert tuple(w.vertex_map[v] for v in x.roots) == cf.shape.roots


def test_canonical_form_is_a_fixpoint():
    rng = random.Random(2)
    for _ in range(10):
        x = random_shape(rng)
        for mode in (PLANAR, SYMMETRIC):
            cf = canonical_form(x, mode)
            again = canonical_form(cf.shape, mode)
            assert again.shape == cf.shape
            assert again.digest == cf.digest


def test_are_isomorphic_returns_connecting_iso():
    rng = random.Random(3)
    x = random_shape(rng)
    y = shuffled(x, rng)
    f = are_isomorphic(x, y)
    assert f is not None
    assert morphism_errors(f) == []
    assert f.dom == x.body and f.cod == y.body
    assert tuple(f.vertex_map[v] for v in x.leaves) == y.leaves
    assert are_isomorphic(x, corolla(1, 1)) is None


def test_symmetric_mode_merges_planar_classes():
    x = corolla(2, 1)
    twisted = relabel(x, (1, 0), (0,))
    assert are_isomorphic(x, twisted, PLANAR) is None
    f = are_isomorphic(x, twisted, SYMMETRIC)
    assert f is not None
    img = f.edge_map["e0"]
    assert img.in_perm == (1, 0)


# ---------------------------------------------------------------------------
# Automorphism groups


def brute_self_isos(x, mode):
    """Label-preserving self-isomorphisms found by raw search."""
    out = []
    for f in hom(x.body, x.body, mode):
        if not f.is_bijective():
            continue
        if any(f.vertex_map[v] != v for v in x.leaves):
            continue
        if any(f.vertex_map[v] != v for v in x.roots):
            continue
        out.append(f)
    return out


def test_group_matches_brute_force_on_random_shapes():
    rng = random.Random(4)
    for _ in range(15):
        x = random_shape(rng)
        for mode in (PLANAR, SYMMETRIC):
            g = label_preserving_automorphisms(x, mode)
            assert g.order == len(brute_self_isos(x, mode))
            assert g.is_closed()


def test_two_bead_swap_group():
    body = make_polygraph(["w"], [Edge("f", (), ()), Edge("g", (), ())])
    g = label_preserving_automorphisms(LabelledShape(body, (), ()))
    assert g.order == 2


def test_unanchored_corolla_pair_symmetries():
    # two parallel (1, 0) edges on separate vertices, boundary empty on
    # the root side: swapping the components fixes no label
    x = juxtapose(corolla(1, 0), corolla(1, 0))
    closed = LabelledShape(x.body, (), ())
    assert label_preserving_automorphisms(closed).order == 2
    # anchoring the leaves kills the swap
    assert label_preserving_automorphisms(x).order == 1


def test_port_twist_counts_only_symmetrically():
    # swapping the two source vertices needs a port twist on the edge, so
    # the closed (2, 0) corolla is rigid planarly but not symmetrically
    x = corolla(2, 0)
    closed = LabelledShape(x.body, (), ())
    assert label_preserving_automorphisms(closed, PLANAR).order == 1
    assert label_preserving_automorphisms(closed, SYMMETRIC).order == 2


def test_trivial_group_and_orbit_helpers():
    x = corolla(1, 1)
    g = trivial_group(x)
    assert g.order == 1
    f = are_isomorphic(x, x)
    assert orbit_morphism_valid(f, g, g)
    assert orbit_equal(f, f, g)


def test_orbit_equal_spots_group_translates():
    body = make_polygraph(["w"], [Edge("f", (), ()), Edge("g", (), ())])
    x = LabelledShape(body, (), ())
    g = label_preserving_automorphisms(x)
    ident = [a for a in g if a.edge_map["f"].edge == "f"][0]
    swap = [a for a in g if a.edge_map["f"].edge == "g"][0]
    assert not ident == swap
    assert orbit_equal(ident, swap, g)
    assert orbit_equal(compose_morphisms(swap, ident),
                       compose_morphisms(ident, swap), g)


def test_witness_transports_groups():
    rng = random.Random(5)
    x = random_shape(rng)
    cf = canonical_form(x, SYMMETRIC)
    g_x = label_preserving_automorphisms(x, SYMMETRIC)
    g_c = label_preserving_automorphisms(cf.shape, SYMMETRIC)
    assert g_x.order == g_c.order
    w = cf.witness
    carried = {compose_morphisms(w, compose_morphisms(a, invert_morphism(w)))
               for a in g_x}
    assert carried == set(g_c.elements)
