import pytest

from qstree.census import complexity_profile
from qstree.errors import InconsistencyError
from qstree.factor_graph import (CASE_I, adjacency_table, build_factor_graph, classify_markers,
                                 detect_cyclic, evolve, first_K, identify_lineage)
from qstree.fixtures import BOUNDED, fixture

from conftest import census_of


@pytest.mark.parametrize("name", BOUNDED)
def test_factor_graph_has_one_vertex_per_class(name):
    census = census_of(name, 8)
    for n in range(6):
        fg = build_factor_graph(census, n)
        assert len(fg.vertices) == census.b[n]


def test_dot_export_is_deterministic():
    census = census_of("ex-n0eq1", 8)
    a = build_factor_graph(census, 3).to_dot()
    b = build_factor_graph(census, 3).to_dot()
    assert a == b
    assert a.startswith("graph G3 {")
    assert '"3.0"' in a and " -- " in a


def test_non_special_weak_means_strong():
    census = census_of("ex-loops-n0eq1", 8)
    for n in range(6):
        for (D, E), kind in adjacency_table(census, n).items():
            if kind == "none":
                continue
            if not census.record(D).is_special:
                assert kind in ("strong(D->E)", "strong(both)")


def test_ex_n0eq1_alternates_i_and_ii():
    tr = evolve(fixture("ex-n0eq1"), 2, 15, census=census_of("ex-n0eq1", 17))
    assert tr.K == 2
    assert [tr.labels[n] for n in range(2, 16)] == ["I-a", "II"] * 7
    assert tr.n_k == list(range(2, 16, 2))
    assert set(tr.m_values.values()) == {2}
    assert not tr.violations
    for n, chk in tr.checks.items():
        if chk.label == "II":
            assert chk.s_degree == 3
        else:
            assert chk.linear


def test_sturmian_evolution_pattern():
    census = census_of("sturmian-fib", 14)
    tr = evolve(fixture("sturmian-fib"), 1, 12, census=census)
    assert tr.cyclic == "acyclic-up-to-window" and not tr.violations
    assert tr.labels[2] == "III" and tr.labels[3] == "I-b"
    for n in tr.n_k:
        assert tr.checks[n].linear


@pytest.mark.parametrize("name", ["ex-basic", "ex-nonray", "ex-loops-n0eq1", "ex-cycleG"])
def test_pre_k_fixtures(name):
    census = census_of(name, 12)
    lin = identify_lineage(census, complexity_profile(census).N0)
    assert first_K(lin) is None
    for n in lin.radii:
        m = lin.markers(n)
        assert m.A == m.S == m.C
        assert classify_markers(m, None) == "pre-K"


def test_cyclic_detection():
    census = census_of("ex-n0-ne-n1", 12)
    verdict, _ = detect_cyclic(census, 0)
    assert verdict == "cyclic"
    assert detect_cyclic(census_of("ex-n0eq1", 12), 1)[0] == "acyclic-up-to-window"


def test_lineage_extensions_restrict_to_s():
    census = census_of("ex-n0eq1", 12)
    lin = identify_lineage(census, 1)
    for n in lin.radii:
        m = lin.markers(n)
        assert census.record(m.A).restriction == lin.S[n - 1]
        assert census.record(m.B).restriction == lin.S[n - 1]
        assert m.A != m.B


def test_evolve_needs_a_window():
    with pytest.raises(InconsistencyError):
        evolve(fixture("mono"), 1, 4)
