import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstree.errors import ParseError
from qstree.fixtures import BOUNDED, ex_basic, fixture, fixture_text, mono
from qstree.quotient import (expand_quotient, finite_eccentricity, parse_spec, promote_tail_prefix,
                             recolor, serialize, tail_label)

from conftest import FIB


@pytest.mark.parametrize("name", BOUNDED + ("mono", "sturmian-fib"))
def test_fixtures_parse_and_round_trip(name):
    spec = fixture(name)
    assert parse_spec(serialize(spec)) == spec


def test_substitution_document_parses():
    spec = parse_spec(FIB)
    assert spec.tails[0].kind == "substitution"
    assert spec.tails[0].symbols(8) == list("ABAABABA")
    assert not spec.periodic_tails


@given(st.integers(min_value=3, max_value=9))
def test_ex_basic_round_trip(c):
    spec = parse_spec(ex_basic(c))
    assert len(spec.alphabet) == c
    assert parse_spec(serialize(spec)) == spec


@given(st.integers(min_value=2, max_value=8))
def test_mono_round_trip(d):
    spec = parse_spec(mono(d))
    assert spec.degree == d and not spec.tails
    assert parse_spec(serialize(spec)) == spec


@pytest.mark.parametrize("text, line", [
    ("qst 2\n", 1),
    ("qst 1\ndegree 3\nalphabet a\nvertex v color=a\nloop v 2\n", 4),
    ("qst 1\ndegree 3\nalphabet a b\nvertex v color=a\nloop v 3\n", 3),
    ("qst 1\ndegree 3\nalphabet a\nvertex v color=a\nvertex w color=a\nloop v 3\nloop w 3\n", None),
    ("qst 1\ndegree 3\nalphabet a\nvertex v color=q\nloop v 3\n", 4),
    ("qst 1\ndegree 3\nalphabet a\nfrobnicate\n", 4),
    ("qst 1\ndegree 3\nalphabet a\nvertex v color=a\nedge v v 1 1\n", 5),
])
def test_invalid_documents_raise_parse_error(text, line):
    with pytest.raises(ParseError) as exc:
        parse_spec(text)
    assert exc.value.exit_code == 1
    if line is not None:
        assert exc.value.line == line
        assert str(exc.value).startswith(f"line {line}: ")


def test_periodic_template_degree_checked():
    bad = fixture_text("ex-nonray").replace("loop=0 fwd=2 bwd=1", "loop=1 fwd=2 bwd=1")
    with pytest.raises(ParseError, match="degree mismatch"):
        parse_spec(bad)


def test_expansion_labels_and_reach():
    spec = fixture("ex-basic")
    g = expand_quotient(spec, 10)
    assert tail_label(0, 3) == "T0[3]"
    assert g.vertices[g.tail_vertex(0, 3)].label == "T0[3]"
    assert g.color(g.index["T0[3]"]) == "a3"
    # every vertex inside the horizon has full index sum d
    for v in range(len(g)):
        if g.reach[v] >= 1:
            assert g.index_sum(v) == spec.degree
    assert finite_eccentricity(spec) >= 1


def test_promote_and_recolor():
    spec = fixture("ex-basic")
    promoted = promote_tail_prefix(spec, 2)
    assert {v.id for v in promoted.vertices} >= {"t0_0", "t0_1"}
    out = recolor(promoted, {"t0_0": "fresh"})
    assert "fresh" in out.alphabet
    assert parse_spec(serialize(out)) == out
