import random

import pytest
from hypothesis import HealthCheck, settings

from polyshape import (Edge, LabelledShape, enumerate_class_shapes,
                       make_polygraph)

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=60,
)
settings.load_profile("suite")


@pytest.fixture
def loop_base():
    """One object with a unary loop generator."""
    return make_polygraph(("v",), (Edge("e", ("v",), ("v",)),))


@pytest.fixture
def bead_base():
    """Two closed generators on one object (the Eckmann-Hilton base)."""
    return make_polygraph(("w",), (Edge("f", (), ()), Edge("g", (), ())))


@pytest.fixture
def two_beads():
    """The disconnected two-edge shape with empty boundary."""
    body = make_polygraph((), (Edge("f", (), ()), Edge("g", (), ())))
    return LabelledShape(body, (), ())


def shape_pool(shape_class, mode, max_edges=2, max_arity=2):
    """A deterministic pool of small canonical shapes across arities."""
    pool = []
    for n in range(max_arity + 1):
        for m in range(max_arity + 1):
            pool.extend(enumerate_class_shapes(shape_class, n, m,
                                               max_edges, mode, max_arity))
    return pool


def rng_shapes(seed, pool, k):
    return random.Random(seed).sample(pool, min(k, len(pool)))


def assert_same_digests(f, g):
    """Two functors agree stage by stage."""
    assert f.arities() == g.arities()
    for st in f.arities():
        assert f.stage_digests(*st) == g.stage_digests(*st), st
