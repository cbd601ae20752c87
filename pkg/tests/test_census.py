import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstree.census import (build_census, census_from_graph, check_monotone, complexity_profile,
                           default_horizon, horizon_slack, increment_law, profile_of, special_balls,
                           type_sets)
from qstree.errors import HorizonError
from qstree.fixtures import BOUNDED, fixture
from qstree.quotient import expand_quotient, parse_spec

from conftest import FIB, census_of

TABLES = {
    "ex-basic": ([n + 3 for n in range(13)], 0),
    "ex-nonray": ([n + 3 for n in range(13)], 0),
    "ex-n0eq1": ([3] + [n + 4 for n in range(1, 13)], 1),
    "ex-loops-n0eq1": ([3] + [n + 5 for n in range(1, 13)], 1),
    "ex-cycleG": ([3, 5] + [n + 5 for n in range(2, 13)], 2),
    "ex-n0-ne-n1": ([n + 3 for n in range(13)], 0),
}


@pytest.mark.parametrize("name", sorted(TABLES))
def test_complexity_tables(name):
    census = census_of(name, 13)
    b, n0 = TABLES[name]
    assert census.b[:13] == b
    assert complexity_profile(census).N0 == n0
    check_monotone(census)


@pytest.mark.parametrize("name", BOUNDED + ("sturmian-fib",))
def test_increment_law_and_unique_special(name):
    census = census_of(name, 12)
    prof = complexity_profile(census)
    for n in range(census.N):
        assert increment_law(census, n)
        if n >= prof.N0:
            assert len(special_balls(census, n, prof.N0)) == 1


def test_mono_is_periodic_like():
    census = census_of("mono", 6)
    assert census.b == [1] * 7
    assert complexity_profile(census).verdict == "periodic-like"


def test_specials_need_one_more_radius():
    census = census_of("ex-basic", 4)
    with pytest.raises(HorizonError):
        special_balls(census, 4)


@given(st.lists(st.integers(1, 40), min_size=2, max_size=12))
def test_profile_of_quasi_sturmian(prefix):
    b = sorted(prefix)
    tail = [b[-1] + 2 + k for k in range(6)]
    prof = profile_of(b + tail)
    assert prof.verdict == "quasi-Sturmian-up-to-N"
    assert prof.N0 <= len(b)
    n0 = prof.N0
    assert all(x == n + prof.c for n, x in enumerate(b + tail) if n >= n0)


@pytest.mark.parametrize("name", BOUNDED)
def test_horizon_doubling_keeps_b(name):
    spec = fixture(name)
    H = default_horizon(spec, 12)
    a = census_from_graph(expand_quotient(spec, H), 12)
    b = census_from_graph(expand_quotient(spec, 2 * H), 12)
    assert a.b == b.b


def test_parallel_matches_serial():
    spec = fixture("ex-n0eq1")
    a = build_census(spec, 8)
    b = build_census(spec, 8, workers=4)
    assert [[c.string for c in lvl.values()] for lvl in a.codes] == \
        [[c.string for c in lvl.values()] for lvl in b.codes]


def test_substitution_tail_grows_horizon():
    census = build_census(parse_spec(FIB), 8)
    assert census.b == [2 * n + 2 for n in range(9)]


def test_slack_env(monkeypatch):
    monkeypatch.setenv("QSTREE_HORIZON_SLACK", "5")
    assert horizon_slack() == 5
    monkeypatch.setenv("QSTREE_HORIZON_SLACK", "-1")
    with pytest.raises(ValueError):
        horizon_slack()


def test_type_sets_grow_along_the_tail():
    census = census_of("ex-basic", 13)
    ts = {t.vertex: t for t in type_sets(census)}
    assert ts["v1"].tau == -1
    taus = [ts[f"T0[{j}]"].tau for j in range(4)]
    assert taus == sorted(taus) and not ts["T0[3]"].censored
