"""Shape-class recognizers and brute-force shape enumeration.

The census numbers asserted here were computed twice: once by this
enumerator and once by a standalone script that generated bodies by raw
iteration over edge multisets and boundary labellings, deduplicating with
the canonical digest.  Both runs agreed; the numbers are frozen so any
regression in either the enumerator or the canonicalizer shows up loudly.
"""

import math

import pytest

from polyshape import (
    Edge,
    LabelledShape,
    PLANAR,
    PROP,
    PROPERAD,
    SYMMETRIC,
    TREE,
    body_boundary,
    corolla,
    enumerate_class_shapes,
    enumerate_shapes,
    identity_shape,
    incidence_graph,
    is_polycat_tree,
    is_prop_graph,
    is_properadic_graph,
    juxtapose,
    graft,
    make_polygraph,
    make_shape,
    relabel,
    shape_digest,
    well_labelled,
)

# ---------------------------------------------------------------------------
# Recognizers on fixtures


def test_identity_and_corollas_are_trees():
    assert is_polycat_tree(identity_shape())
    for n in range(3):
        for m in range(3):
            assert is_polycat_tree(corolla(n, m))


def test_grafted_corollas_stay_trees():
    t = graft(corolla(2, 1), corolla(0, 1), 1, 1)
    assert is_polycat_tree(t)
    assert is_properadic_graph(t)
    assert is_prop_graph(t)


def test_diamond_is_properadic_but_not_a_tree():
    # two wires between the same pair of edges close an undirected cycle
    # without breaking acyclicity
    body = make_polygraph(
        ["a", "b", "c", "d"],
        [Edge("e", ("a",), ("b", "c")), Edge("f", ("b", "c"), ("d",))],
    )
    x = make_shape(body, ("a",), ("d",))
    assert not is_polycat_tree(x)
    assert is_properadic_graph(x)
    assert is_prop_graph(x)


def test_disconnected_pair_is_prop_only():
    x = juxtapose(identity_shape(), identity_shape())
    assert not is_polycat_tree(x)
    assert not is_properadic_graph(x)
    assert is_prop_graph(x)


def test_empty_shape_is_prop_only():
    from polyshape import empty_shape

    assert is_prop_graph(empty_shape())
    assert not is_properadic_graph(empty_shape())


def test_directed_cycle_is_nothing():
    body = make_polygraph(
        ["a", "b"],
        [Edge("e", ("a",), ("b",)), Edge("f", ("b",), ("a",))],
    )
    x = make_shape(body, (), ())
    assert not is_prop_graph(x)


def test_inner_vertex_degree_must_be_two():
    # vertex b feeds two edges, so the middle stage is not a simple wire
    body = make_polygraph(
        ["a", "b", "c", "d"],
        [Edge("e", ("a",), ("b",)),
         Edge("f", ("b",), ("c",)),
         Edge("g", ("b",), ("d",))],
    )
    x = make_shape(body, ("a",), ("c", "d"))
    assert not is_prop_graph(x)


def test_labels_must_enumerate_the_boundary():
    c = corolla(2, 1)
    missing = LabelledShape(c.body, c.leaves[:1], c.roots)
    assert not is_polycat_tree(missing)
    wrong_side = LabelledShape(c.body, c.leaves, c.leaves[:1])
    assert not is_prop_graph(wrong_side)


def test_recognizers_ignore_boundary_order():
    x = relabel(corolla(2, 2), (1, 0), (1, 0))
    assert is_polycat_tree(x)


def test_class_nesting_on_enumerated_shapes():
    for n in range(3):
        for m in range(3):
            trees = set(enumerate_shapes(TREE, n, m, 2))
            conn = set(enumerate_shapes(PROPERAD, n, m, 2))
            every = set(enumerate_shapes(PROP, n, m, 2))
            assert trees <= conn <= every


def test_body_boundary_reads_off_free_ports():
    t = graft(corolla(1, 1), corolla(0, 1), 1, 1)
    ins, outs = body_boundary(t.body)
    assert set(ins) == set(t.leaves)
    assert set(outs) == set(t.roots)


def test_incidence_graph_structure():
    g = incidence_graph(corolla(2, 1).body)
    assert len(g.arcs) == 3
    assert {a.role for a in g.arcs} == {"source", "target"}
    assert g.edge_nodes == ("e0",)


# ---------------------------------------------------------------------------
# Censuses


def test_every_enumerated_shape_is_recognized_and_well_labelled():
    checks = {TREE: is_polycat_tree, PROPERAD: is_properadic_graph,
              PROP: is_prop_graph}
    for cls, check in checks.items():
        for x in enumerate_class_shapes(cls, 1, 2, 2):
            assert check(x)
            assert well_labelled(x)
            assert x.arity == (1, 2)


def test_enumeration_is_deterministic_and_digest_sorted():
    once = enumerate_shapes(PROPERAD, 1, 1, 2)
    again = enumerate_shapes(PROPERAD, 1, 1, 2)
    assert once == again == tuple(sorted(once))
    reps = enumerate_class_shapes(PROPERAD, 1, 1, 2)
    assert tuple(shape_digest(x) for x in reps) == once


@pytest.mark.parametrize("cls,counts", [
    (TREE, {(1, 1): 11, (2, 1): 38, (0, 0): 2}),
    (PROPERAD, {(1, 1): 49, (2, 1): 114, (0, 0): 10}),
    (PROP, {(1, 1): 62, (2, 1): 158, (0, 0): 12}),
])
def test_census_two_edges_arity_three(cls, counts):
    for (n, m), want in counts.items():
        assert len(enumerate_shapes(cls, n, m, 2, PLANAR, 3)) == want


def test_census_default_arity_cap():
    # the default cap max(n, m, 2) trims the (1, 1) stage differently per
    # class: trees are unaffected, the wider classes lose wide edges
    assert len(enumerate_shapes(TREE, 1, 1, 2)) == 11
    assert len(enumerate_shapes(PROPERAD, 1, 1, 2)) == 13
    assert len(enumerate_shapes(PROP, 1, 1, 2)) == 20


def test_one_edge_census_counts_boundary_orderings():
    # with exactly one edge the shape is a corolla and the only freedom is
    # the boundary ordering: n!m! planar readings, all equal symmetrically
    for n in range(4):
        for m in range(4):
            planar = enumerate_shapes(TREE, n, m, 1, PLANAR, 3)
            sym = enumerate_shapes(TREE, n, m, 1, SYMMETRIC, 3)
            expect = math.factorial(n) * math.factorial(m)
            if (n, m) == (1, 1):
                expect += 1  # the bare wire also lands at this arity
                assert len(sym) == 2
            else:
                assert len(sym) == 1
            assert len(planar) == expect


def test_symmetric_census_is_a_quotient_of_planar():
    for cls in (TREE, PROPERAD, PROP):
        planar = enumerate_class_shapes(cls, 2, 1, 2)
        sym = enumerate_shapes(cls, 2, 1, 2, SYMMETRIC)
        assert {shape_digest(x, SYMMETRIC) for x in planar} == set(sym)
        assert len(sym) <= len(planar)


def test_enumerated_digests_are_mode_tagged():
    planar = set(enumerate_shapes(TREE, 1, 1, 1))
    sym = set(enumerate_shapes(TREE, 1, 1, 1, SYMMETRIC))
    assert planar.isdisjoint(sym)
