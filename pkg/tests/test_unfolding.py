import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstree.census import build_census
from qstree.fixtures import BOUNDED, fixture
from qstree.quotient import expand_quotient
from qstree.unfolding import (INTERNER, ball_node_count, ball_of, canonical_code, interior_classes,
                              restrict_ball, unfold_ball)

from conftest import census_of

trees = st.recursive(
    st.builds(lambda c: (c, ()), st.sampled_from("abc")),
    lambda kids: st.builds(lambda c, ch: (c, tuple(ch)), st.sampled_from("abc"),
                           st.lists(kids, max_size=3)),
    max_leaves=20,
)


def intern(tree, rng=None):
    color, kids = tree
    kids = list(kids)
    if rng is not None:
        rng.shuffle(kids)
    return INTERNER.node(color, [intern(k, rng) for k in kids])


def ahu(tree):
    color, kids = tree
    return "(" + " ".join([color] + sorted(ahu(k) for k in kids)) + ")"


@settings(max_examples=200)
@given(trees, st.integers(0, 2 ** 32 - 1))
def test_code_ignores_child_order(tree, seed):
    a = intern(tree)
    b = intern(tree, random.Random(seed))
    assert a == b
    assert INTERNER.string(a) == ahu(tree)


@pytest.mark.parametrize("name", BOUNDED)
def test_restriction_matches_smaller_unfolding(name):
    g = expand_quotient(fixture(name), 30)
    for v in list(range(len(g)))[:25]:
        big = unfold_ball(g, v, 5)
        for m in range(5):
            assert restrict_ball(big, m) .node == unfold_ball(g, v, m).node


@given(st.integers(2, 5), st.integers(0, 5))
def test_node_count(d, n):
    g = expand_quotient(fixture(f"mono:{d}"), 0)
    assert ball_of(canonical_code(unfold_ball(g, 0, n))).size() == ball_node_count(d, n)


def test_node_count_formula():
    assert ball_node_count(3, 0) == 1
    assert ball_node_count(3, 2) == 10
    assert ball_node_count(2, 4) == 9


def test_colors_distinguish_balls():
    census = census_of("ex-basic", 3)
    assert len({c.string for c in census.classes[0]}) == 3


def test_interior_classes_cover_neighbors():
    census = census_of("ex-n0eq1", 6)
    g = census.graph
    v = g.index["w0"]
    got = interior_classes(unfold_ball(g, v, 3), 2)
    want = {census.codes[2][v]} | {census.codes[2][y] for y, _ in g.adj[v]}
    assert set(got) == want
    assert sum(got.values()) == 1 + census.spec.degree


def test_restrict_rejects_bigger_radius():
    g = expand_quotient(fixture("mono"), 0)
    with pytest.raises(ValueError):
        restrict_ball(unfold_ball(g, 0, 1), 2)
