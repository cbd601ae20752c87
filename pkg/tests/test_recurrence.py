import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstree.census import build_census
from qstree.errors import CapExceededError
from qstree.factor_graph import evolve
from qstree.fixtures import BOUNDED, fixture
from qstree.recurrence import (formula_value, predict_Rpp, recurrence_profile, recurrence_R,
                               recurrence_Rpp, uniform_recurrence_probe, verify_cover)
from qstree.structure import derive_Z, structure_report

from conftest import census_of


@pytest.mark.parametrize("name", BOUNDED)
def test_rpp_monotone_and_witnessed(name):
    census = census_of(name, 14)
    prev = 0
    for n in range(11):
        res = recurrence_Rpp(census, n)
        assert res.value >= max(n, prev)
        assert verify_cover(census, res)
        prev = res.value


@pytest.mark.parametrize("name", BOUNDED)
def test_prediction_matches_brute_force(name):
    spec = fixture(name)
    census = census_of(name, 14)
    rep = structure_report(spec, census)
    topo = derive_Z(spec, census, rep).topology
    trace = evolve(spec, rep.N0 + 1, census.N - 2, census=census)
    for n in range(rep.N1 + 1, 11):
        assert recurrence_Rpp(census, n).value == predict_Rpp(rep, trace, census, n, topo).value


@pytest.mark.parametrize("name", BOUNDED)
def test_r_not_attained_after_n1(name):
    spec = fixture(name)
    census = census_of(name, 14)
    rep = structure_report(spec, census)
    res = recurrence_R(census, rep.N1 + 1)
    assert res.status == "not-attained" and res.missing
    assert not uniform_recurrence_probe(census)


def test_mono_recurrence():
    census = census_of("mono", 8)
    for n in range(6):
        assert recurrence_Rpp(census, n).value == n
        assert recurrence_R(census, n).value == n


def test_sturmian_prediction_branch_one():
    spec = fixture("sturmian-fib")
    census = census_of("sturmian-fib", 24)
    rep = structure_report(spec, census)
    trace = evolve(spec, 1, census.N - 2, census=census)
    for n in range(1, 11):
        p = predict_Rpp(rep, trace, census, n, None)
        assert p.branch == "(1)"
        assert recurrence_Rpp(census, n).value == p.value
    assert uniform_recurrence_probe(census, 6)


def test_cap_exceeded_reports_best_coverage():
    census = census_of("ex-n0eq1", 10)
    with pytest.raises(CapExceededError) as exc:
        recurrence_Rpp(census, 5, cap=5)
    assert 0 < exc.value.best_coverage < census.b[5]
    assert exc.value.exit_code == 3


@given(st.integers(0, 30), st.integers(1, 60), st.integers(0, 10), st.integers(0, 10))
def test_formula_branches(n, b, g, r):
    assert formula_value("(1)", n, b) == n + b // 2
    assert formula_value("(2a)", n, b, g, r) == n + (b - g + r + 1) // 2


def test_profile_csv_shape():
    prof = recurrence_profile(census_of("ex-basic", 10), 4)
    lines = prof.csv().splitlines()
    assert lines[0] == "n,Rpp,Rpp_predicted,branch,R,status"
    assert len(lines) == 6
