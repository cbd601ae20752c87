import pytest

from qstree.census import build_census
from qstree.errors import InconsistencyError
from qstree.fixtures import BOUNDED, fixture
from qstree.structure import (build_periodic_extension, derive_Z, marked_recoloring, psi_ball,
                              structure_report, theorem_main3_check)

from conftest import census_of

EXPECTED = {
    # name: (N0, N1, |G|, x_N1, r(x_N1, G), Z)
    "ex-basic": (0, 0, 3, "T0[0]", 2, "single-vertex(loop=3)"),
    "ex-nonray": (0, 0, 3, "b1", 1, "single-vertex(loop=3)"),
    "ex-n0eq1": (1, 1, 3, "w0", 2, "segment(3)"),
    "ex-loops-n0eq1": (1, 1, 6, "T0[1]", 4, "single-vertex(loop=3)"),
    "ex-cycleG": (2, 2, 7, "T0[1]", 4, "single-vertex(loop=3)"),
    "ex-n0-ne-n1": (0, 1, 1, "x0", 0, "cycle(4)"),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_structure_and_z(name):
    spec = fixture(name)
    census = census_of(name, 13)
    rep = structure_report(spec, census)
    n0, n1, size, x, r, zdesc = EXPECTED[name]
    assert (rep.N0, rep.N1, len(rep.G), rep.x_N1, rep.radius_G) == (n0, n1, size, x, r)
    assert rep.shape == "finite-part-plus-ray"
    assert rep.bounded == "bounded"
    z = derive_Z(spec, census, rep)
    assert z.describe() == zdesc
    assert all(s == spec.degree for s in z.degree_sums())


def test_g_contains_the_finite_part():
    for name in BOUNDED:
        spec = fixture(name)
        rep = structure_report(spec, census_of(name, 13))
        assert {v.id for v in spec.vertices} <= set(rep.G)


def test_ex_n0_ne_n1_z_cycle_colors():
    spec = fixture("ex-n0-ne-n1")
    census = census_of("ex-n0-ne-n1", 13)
    z = derive_Z(spec, census, structure_report(spec, census))
    assert z.topology == "cycle" and z.size == 4
    assert sorted(z.colors) == ["b", "b", "w", "x"]
    assert not z.loops()


def test_loops_do_not_make_a_cycle():
    spec = fixture("ex-basic")
    census = census_of("ex-basic", 13)
    z = derive_Z(spec, census, structure_report(spec, census))
    assert z.loops() == {0: 3}
    assert z.topology == "single-vertex"


@pytest.mark.parametrize("name", BOUNDED)
def test_periodic_extension_stabilizes(name):
    spec = fixture(name)
    census = census_of(name, 13)
    rep = structure_report(spec, census)
    z = derive_Z(spec, census, rep)
    ext = build_periodic_extension(spec, census, rep, z)
    assert ext.stable_from is not None and ext.stable_from <= 2 * z.size
    assert ext.stable_value <= z.size


def test_psi_matches_unfolding_of_z():
    spec = fixture("ex-n0eq1")
    census = census_of("ex-n0eq1", 13)
    rep = structure_report(spec, census)
    z = derive_Z(spec, census, rep)
    ext_census = build_census(z.to_spec(3), 4)
    from qstree.unfolding import unfold_ball
    for a in range(z.size):
        assert psi_ball(z, a, 4) == unfold_ball(ext_census.graph, f"z{a}", 4).node


def test_marked_recoloring_gives_g_fresh_colors():
    spec = fixture("ex-basic")
    rep = structure_report(spec, census_of("ex-basic", 13))
    marked = marked_recoloring(spec, rep)
    fresh = [c for c in marked.alphabet if c.startswith("g_")]
    assert len(fresh) == len(rep.G)
    # a1 and a2 only occur on G, so they drop out of the alphabet
    assert set(marked.alphabet) == {"a3"} | set(fresh)


def test_characterization_directions():
    mc = theorem_main3_check(fixture("ex-nonray"), 8)
    assert mc.direction_a == "pass" and mc.direction_b == "pass"
    # observed marked complexity is n + |VG| + |VZ|
    assert mc.marked_b == tuple(n + 4 for n in range(9))
    assert theorem_main3_check(fixture("mono"), 5).direction_a == "vacuous"


def test_sturmian_is_unbounded_heuristic():
    spec = fixture("sturmian-fib")
    rep = structure_report(spec, census_of("sturmian-fib", 12))
    assert rep.bounded == "unbounded-heuristic"
    assert rep.shape == "biinfinite"
    with pytest.raises(InconsistencyError):
        derive_Z(spec, census_of("sturmian-fib", 12), rep)
