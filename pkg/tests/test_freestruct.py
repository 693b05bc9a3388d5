"""Free polycategories, properads, and PROPs, plus the axiom checker."""

import json

import pytest

from polyshape import (
    AxiomReport,
    Edge,
    PLANAR,
    PROP,
    POLYCAT,
    PROPERAD,
    SYMMETRIC,
    check_axioms,
    compose,
    discrete,
    empty_morphism,
    exchange,
    free_structure,
    identity,
    juxtapose_morphisms,
    make_polygraph,
    multi_compose,
    random_base,
)
from polyshape.canon import label_preserving_automorphisms
from polyshape.freestruct import _AXIOMS, _SYMMETRIC_ONLY
from polyshape.polygraph import (
    compose_morphisms,
    invert_morphism,
    morphism_errors,
)

LOOP = make_polygraph(["v"], [Edge("e", ("v",), ("v",))])
BEADS = make_polygraph(["w"], [Edge("f", (), ()), Edge("g", (), ())])
CHAIN_LINK = make_polygraph(["a", "b"], [Edge("u", ("a",), ("b",))])

KINDS = (POLYCAT, PROPERAD, PROP)


# ---------------------------------------------------------------------------
# Hom tables


def test_loop_endomorphisms_count_chains():
    # over the loop the (v;v) morphisms are the wire and the chains of one,
    # two, and three copies of the generator
    fs = free_structure(POLYCAT, LOOP, bounds=(3, 2))
    assert fs.objects() == ("v",)
    assert len(fs.hom(("v",), ("v",))) == 4
    assert fs.bounds == (3, 2)


def test_bead_pairs_interchange_in_a_prop():
    # with two scalar generators the two-edge morphisms at (;) are ff,
    # fg ~ gf, and gg, whichever mode
    for mode in (PLANAR, SYMMETRIC):
        fs = free_structure(PROP, BEADS, bounds=(2, 2), mode=mode)
        closed = fs.hom((), ())
        two = [m for m in closed if len(m.shape.body.edges) == 2]
        assert len(two) == 3


def test_morphism_reps_are_valid_and_least():
    fs = free_structure(PROPERAD, CHAIN_LINK, bounds=(2, 2), mode=SYMMETRIC)
    for m in fs.morphisms():
        assert morphism_errors(m.rep) == []
        assert m.rep.dom == m.shape.body and m.rep.cod == CHAIN_LINK
        group = label_preserving_automorphisms(m.shape, m.mode)
        least = min((compose_morphisms(m.rep, invert_morphism(s)).key()
                     for s in group), default=None)
        assert m.rep.key() == least
        assert m.sources == tuple(m.rep.vertex_map[v] for v in m.shape.leaves)
        assert m.targets == tuple(m.rep.vertex_map[v] for v in m.shape.roots)


def test_hom_tables_are_fibred_by_boundary():
    fs = free_structure(POLYCAT, CHAIN_LINK, bounds=(2, 2))
    for (srcs, tgts), ms in fs.homs.items():
        for m in ms:
            assert (m.sources, m.targets) == (srcs, tgts)
    assert fs.morphism_count == sum(len(v) for v in fs.homs.values())


def test_free_structure_rejects_unknown_kind():
    with pytest.raises(ValueError, match="kind"):
        free_structure("operad", LOOP)


# ---------------------------------------------------------------------------
# Composition


def test_identity_units():
    fs = free_structure(POLYCAT, LOOP, bounds=(2, 2))
    i = identity(LOOP, "v")
    for f in fs.hom(("v",), ("v",)):
        assert compose(i, f, 1, 1) == f
        assert compose(f, i, 1, 1) == f


def test_identity_requires_a_base_vertex():
    with pytest.raises(ValueError, match="vertex"):
        identity(LOOP, "nope")


def test_compose_grows_chains():
    g = identity(LOOP, "v", POLYCAT, PLANAR)
    gen = [m for m in free_structure(POLYCAT, LOOP, bounds=(1, 2))
           .hom(("v",), ("v",)) if m.shape.body.edges]
    (one,) = gen
    two = compose(one, one, 1, 1)
    three = compose(two, one, 1, 1)
    assert len(two.shape.body.edges) == 2
    assert len(three.shape.body.edges) == 3
    assert compose(one, two, 1, 1) == three  # chains associate


def test_compose_checks_boundary_agreement():
    fs = free_structure(POLYCAT, CHAIN_LINK, bounds=(2, 2))
    (u,) = [m for m in fs.hom(("a",), ("b",)) if m.shape.body.edges]
    with pytest.raises(ValueError, match="boundary mismatch"):
        compose(u, u, 1, 1)  # u ends at b, u starts at a


def test_compose_checks_kind_mode_and_base():
    a = free_structure(POLYCAT, LOOP, bounds=(2, 2)).hom(("v",), ("v",))[0]
    b = free_structure(PROPERAD, LOOP, bounds=(2, 2)).hom(("v",), ("v",))[0]
    c = free_structure(POLYCAT, LOOP, bounds=(2, 2), mode=SYMMETRIC)
    d = free_structure(POLYCAT, discrete("v"), bounds=(2, 2))
    for other in (b, c.hom(("v",), ("v",))[0],
                  identity(discrete("v"), "v")):
        with pytest.raises(ValueError, match="different structures"):
            compose(a, other, 1, 1)
    assert d.objects() == ("v",)


def test_window_composition_glues_two_ports_at_once():
    fan = make_polygraph(["p"], [Edge("mk", (), ("p", "p")),
                                 Edge("use", ("p", "p"), ())])
    fs = free_structure(PROPERAD, fan, bounds=(2, 2))
    f = [m for m in fs.hom((), ("p", "p")) if m.shape.body.edges][0]
    g = [m for m in fs.hom(("p", "p"), ()) if m.shape.body.edges][0]
    closed = multi_compose(g, f, 1, 1, width=2)
    assert closed.sources == () and closed.targets == ()
    assert len(closed.shape.body.edges) == 2
    # the diamond really glued both wires: one fewer vertex than gluing one
    narrow = multi_compose(g, f, 1, 1)
    assert len(closed.shape.body.vertices) == 2
    assert len(narrow.shape.body.vertices) == 3
    with pytest.raises(ValueError, match="width"):
        multi_compose(g, f, 1, 1, width=0)


def test_polycat_kind_rejects_wide_windows():
    fs = free_structure(POLYCAT, LOOP, bounds=(2, 2))
    m = fs.hom(("v",), ("v",))[0]
    with pytest.raises(ValueError, match="polycat"):
        multi_compose(m, m, 1, 1, width=2)


def test_window_ranges_are_checked():
    fs = free_structure(POLYCAT, LOOP, bounds=(2, 2))
    m = fs.hom(("v",), ("v",))[0]
    with pytest.raises(ValueError, match="window"):
        compose(m, m, 2, 1)
    with pytest.raises(ValueError, match="window"):
        compose(m, m, 1, 2)


# ---------------------------------------------------------------------------
# Tensor and exchange


def test_juxtapose_is_prop_only():
    fs = free_structure(PROP, BEADS, bounds=(2, 2))
    f = [m for m in fs.hom((), ()) if len(m.shape.body.edges) == 1][0]
    both = juxtapose_morphisms(f, f)
    assert len(both.shape.body.edges) == 2
    tree_m = free_structure(POLYCAT, LOOP, bounds=(2, 2)).hom(("v",), ("v",))[0]
    with pytest.raises(ValueError, match="prop"):
        juxtapose_morphisms(tree_m, tree_m)


def test_empty_morphism_is_the_tensor_unit():
    fs = free_structure(PROP, BEADS, bounds=(2, 2))
    e = empty_morphism(BEADS)
    assert e.sources == () and e.targets == ()
    f = fs.hom((), ())[1]
    assert juxtapose_morphisms(e, f) == f
    assert juxtapose_morphisms(f, e) == f
    with pytest.raises(ValueError, match="prop"):
        empty_morphism(BEADS, kind=POLYCAT)


def test_exchange_requires_symmetric_mode_for_real_twists():
    fs = free_structure(PROP, CHAIN_LINK, bounds=(2, 2))
    pair = [m for m in fs.hom(("a", "a"), ("b", "b"))
            if len(m.shape.body.edges) == 2][0]
    assert exchange(pair, (0, 1), (0, 1)) == pair
    with pytest.raises(ValueError, match="planar"):
        exchange(pair, (1, 0), (0, 1))
    sym = free_structure(PROP, CHAIN_LINK, bounds=(2, 2), mode=SYMMETRIC)
    spair = [m for m in sym.hom(("a", "a"), ("b", "b"))
             if len(m.shape.body.edges) == 2][0]
    twisted = exchange(spair, (1, 0), (0, 1))
    assert twisted.sources == ("a", "a")
    assert exchange(twisted, (1, 0), (0, 1)) == spair


def test_exchange_validates_permutations():
    fs = free_structure(PROP, BEADS, bounds=(2, 2), mode=SYMMETRIC)
    f = fs.hom((), ())[0]
    with pytest.raises(ValueError, match="permutation"):
        exchange(f, (0,), ())


def test_symmetric_action_identifies_twisted_pairs():
    # two parallel generators tensored in either order differ planarly
    # and agree symmetrically
    planar = free_structure(PROP, BEADS, bounds=(2, 2))
    fs = [m for m in planar.hom((), ()) if len(m.shape.body.edges) == 1]
    f, g = fs
    assert juxtapose_morphisms(f, g) == juxtapose_morphisms(g, f)  # (;) twistless
    sym = free_structure(PROP, CHAIN_LINK, bounds=(2, 2), mode=SYMMETRIC)
    (u,) = [m for m in sym.hom(("a",), ("b",)) if m.shape.body.edges]
    uu = juxtapose_morphisms(u, u)
    assert exchange(uu, (1, 0), (1, 0)) == uu


# ---------------------------------------------------------------------------
# Axiom checker


def test_axiom_registry_sizes():
    assert len(_AXIOMS[POLYCAT]) == 8
    assert len(_AXIOMS[PROPERAD]) == 11
    assert len(_AXIOMS[PROP]) == 15
    assert _SYMMETRIC_ONLY < {name for name, _ in _AXIOMS[POLYCAT]}


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("mode", (PLANAR, SYMMETRIC))
def test_axioms_hold_on_the_chain_link(kind, mode):
    report = check_axioms(kind, CHAIN_LINK, trials=120, seed=5, mode=mode)
    assert report.ok, report.to_json_dict()
    assert report.failure_count == 0
    assert {r.axiom for r in report.results} == \
        {name for name, _ in _AXIOMS[kind]}
    for r in report.results:
        if mode == PLANAR and r.axiom in _SYMMETRIC_ONLY:
            assert r.attempted == 0  # vacuous planarly, skipped outright
        else:
            assert r.attempted == 120
            assert 0 <= r.checked <= r.attempted


def test_every_axiom_gets_real_instances_at_wider_arity():
    # windows of width two need three-port edges; this base feeds and
    # consumes wide windows in both directions
    rich = make_polygraph(["p"], [Edge("m3", (), ("p", "p", "p")),
                                  Edge("b2", ("p", "p"), ()),
                                  Edge("w3", ("p", "p", "p"), ("p",))])
    report = check_axioms(PROPERAD, rich, trials=100, seed=1, bounds=(2, 3),
                          mode=SYMMETRIC)
    assert report.ok
    for r in report.results:
        assert r.checked > 0, r.axiom
    planar = check_axioms(PROPERAD, rich, trials=100, seed=1, bounds=(2, 3))
    assert planar.ok
    for r in planar.results:
        if r.axiom not in _SYMMETRIC_ONLY:
            assert r.checked > 0, r.axiom


def test_mutation_control_breaks_twisted_axioms():
    report = check_axioms(PROP, CHAIN_LINK, trials=150, seed=2,
                          mode=SYMMETRIC, mutate=True)
    assert not report.ok
    broken = {r.axiom for r in report.results if r.failures}
    assert "equivariance" in broken
    assert "tensor-symmetry" in broken
    for r in report.results:
        assert len(r.failures) <= 20
        for d in r.failures:
            assert {"instantiation", "lhs", "rhs"} <= set(d)


def test_planar_mutation_control_spares_equivariance():
    report = check_axioms(PROP, CHAIN_LINK, trials=150, seed=2, mutate=True)
    broken = {r.axiom for r in report.results if r.failures}
    assert "equivariance" not in broken
    assert "left-interchange" in broken


def test_report_serializes_to_json():
    report = check_axioms(POLYCAT, LOOP, trials=30, seed=9)
    doc = report.to_json_dict()
    text = json.dumps(doc, sort_keys=True)
    assert json.loads(text) == doc
    assert doc["kind"] == POLYCAT and doc["trials"] == 30
    assert isinstance(report, AxiomReport)


def test_check_axioms_is_deterministic():
    a = check_axioms(PROPERAD, BEADS, trials=60, seed=3, mode=SYMMETRIC)
    b = check_axioms(PROPERAD, BEADS, trials=60, seed=3, mode=SYMMETRIC)
    assert a.to_json_dict() == b.to_json_dict()


def test_random_base_is_reproducible_and_valid():
    from polyshape.polygraph import validate

    for seed in range(10):
        p = random_base(seed)
        q = random_base(seed)
        assert p == q
        assert validate(p) == []
        assert p.edges
