"""One pass/fail report over every invariant the library can test."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .census import (BallCensus, build_census, census_from_graph, check_monotone, complexity_profile,
                     default_horizon, increment_law, special_balls)
from .errors import CapExceededError, HorizonError, InconsistencyError
from .factor_graph import adjacency_table, build_factor_graph, detect_cyclic, evolve
from .quotient import QuotientSpec, expand_quotient, parse_spec, serialize
from .recurrence import predict_Rpp, recurrence_R, recurrence_Rpp, verify_cover
from .structure import build_periodic_extension, derive_Z, structure_report, theorem_main3_check
from .unfolding import ball_node_count, ball_of, canonical_code, restrict_ball, unfold_ball


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # PASS, FAIL, SKIP or NOTE
    detail: str = ""

    def line(self) -> str:
        return f"{self.status:4} {self.name}" + (f": {self.detail}" if self.detail else "")


def _run(name, fn) -> CheckResult:
    try:
        out = fn()
    except InconsistencyError as exc:
        return CheckResult(name, "FAIL", str(exc))
    except (HorizonError, CapExceededError) as exc:
        return CheckResult(name, "SKIP", str(exc))
    if isinstance(out, CheckResult):
        return out
    if out is True or out is None:
        return CheckResult(name, "PASS")
    if out is False:
        return CheckResult(name, "FAIL")
    return CheckResult(name, "PASS", str(out))


def _fail(msg: str):
    raise InconsistencyError(msg)


def _sample(census: BallCensus, n: int, k: int = 12) -> list[int]:
    verts = sorted(census.codes[n])
    return random.Random(n).sample(verts, min(k, len(verts)))


def _roundtrip(spec: QuotientSpec):
    if parse_spec(serialize(spec)) != spec:
        _fail("serialize/parse round trip changed the document")


def _restriction(census: BallCensus):
    for n in range(1, census.N + 1):
        for v in _sample(census, n):
            ball = unfold_ball(census.graph, v, n)
            for m in range(n):
                if canonical_code(restrict_ball(ball, m)) != census.codes[m][v]:
                    _fail(f"restriction of the {n}-ball at vertex {v} to {m} differs")


def _node_count(census: BallCensus):
    d = census.spec.degree
    for n in range(census.N + 1):
        for code in list(census.classes[n])[:8]:
            if ball_of(code).size() != ball_node_count(d, n):
                _fail(f"class {census.label(code)} has the wrong node count")


def _horizon(census: BallCensus):
    spec = census.spec
    if not spec.tails:
        return CheckResult("horizon doubling", "SKIP", "no tails")
    H = default_horizon(spec, census.N)
    other = census_from_graph(expand_quotient(spec, 2 * H + 1), census.N)
    if other.b != census.b:
        _fail(f"b changes with the horizon: {census.b} vs {other.b}")


def _increments(census: BallCensus):
    for n in range(census.N):
        if not increment_law(census, n):
            _fail(f"increment law fails at n={n}")


def _specials(census: BallCensus, N0):
    if N0 is None:
        return CheckResult("unique special ball for n >= N0", "SKIP", "no N0 in the window")
    for n in range(N0, census.N):
        special_balls(census, n, N0)


def _weak_strong(census: BallCensus):
    for n in range(census.N):
        table = adjacency_table(census, n)
        for (D, E), kind in table.items():
            if kind == "none":
                continue
            for X, Y, arrow in ((D, E, f"strong({'D->E'})"), (E, D, f"strong({'E->D'})")):
                if not census.record(X).is_special and kind not in (arrow, "strong(both)"):
                    _fail(f"non-special {census.label(X)} weakly but not strongly adjacent at n={n}")


def _factor_vertices(census: BallCensus):
    for n in range(census.N):
        fg = build_factor_graph(census, n)
        if len(fg.vertices) != census.b[n]:
            _fail(f"factor graph at {n} has {len(fg.vertices)} vertices, b={census.b[n]}")


def _one_branch(census: BallCensus, N0: int):
    for n in range(N0 + 1, census.N):
        fg = build_factor_graph(census, n)
        big = [v for v in fg.vertices if fg.degree(v) >= 3]
        if len(big) > 1:
            _fail(f"factor graph at {n} has {len(big)} vertices of degree >= 3")


def _three_types(census: BallCensus):
    from .census import type_sets
    g = census.graph
    ts = {t.vertex: t for t in type_sets(census)}
    for v in range(len(g)):
        ball = [v] + g.neighbors(v)
        sets = [ts[g.vertices[u].label] for u in ball]
        if any(t.censored for t in sets):
            continue
        distinct = {t.members for t in sets}
        if len(distinct) > 3:
            _fail(f"1-ball at {g.vertices[v].label} shows {len(distinct)} type sets")


def run_all(spec: QuotientSpec, max_n: int = 10, *, workers: int | None = None) -> list[CheckResult]:
    N = max_n + 2
    out = [_run("serialize round trip", lambda: _roundtrip(spec))]
    census = build_census(spec, N, workers=workers)
    prof = complexity_profile(census)
    out.append(CheckResult("complexity window", "NOTE",
                           f"b={census.b} verdict={prof.verdict} N0={prof.N0} c={prof.c}"))
    out.append(_run("b(n) nondecreasing", lambda: check_monotone(census)))
    out.append(_run("restriction consistency", lambda: _restriction(census)))
    out.append(_run("ball node count", lambda: _node_count(census)))
    out.append(_run("horizon doubling", lambda: _horizon(census)))
    out.append(_run("increment law", lambda: _increments(census)))
    out.append(_run("unique special ball for n >= N0", lambda: _specials(census, prof.N0)))
    out.append(_run("weak adjacency of non-special balls is strong", lambda: _weak_strong(census)))
    out.append(_run("factor graph has b(n) vertices", lambda: _factor_vertices(census)))

    rep = None
    if prof.N0 is not None:
        rep = structure_report(spec, census)
        out.append(CheckResult("structure", "NOTE", " ".join(rep.lines()[:8])))

        def ev():
            g = set(rep.G) if rep.G else None
            tr = evolve(spec, prof.N0 + 1, max_n, census=census, g_labels=g)
            if tr.violations:
                _fail("; ".join(f"{n}: {m}" for n, m in tr.violations))
            bad = [n for n, c in tr.checks.items() if not c.ok_strict]
            if tr.cyclic == "cyclic":
                # the path-shape claims only cover acyclic colorings
                bad = [n for n in bad if tr.checks[n].label == "II"]
            if bad:
                _fail(f"degree/linearity claims fail at n={bad}")
            return f"K={tr.K} labels={','.join(tr.labels.values()) or '-'}"
        out.append(_run("case evolution", ev))
    trace = None
    z = None
    wide = None
    if rep is not None and rep.bounded == "bounded" and rep.N1 is not None:
        def zcheck():
            nonlocal z
            z = derive_Z(spec, census, rep)
            ext = build_periodic_extension(spec, census, rep, z)
            if ext.stable_from is None or ext.stable_from > 2 * z.size:
                _fail(f"extension b={ext.b} does not stabilize by 2|VZ|")
            cyc, _ = detect_cyclic(census, rep.N0)
            if (cyc == "cyclic") != (z.topology == "cycle"):
                _fail(f"cyclic coloring verdict {cyc} vs Z topology {z.topology}")
            return f"Z={z.describe()} extension b stable at {ext.stable_value}"
        out.append(_run("Z and periodic extension", zcheck))

        def main():
            mc = theorem_main3_check(spec, max_n, census)
            if mc.direction_a == "fail" or mc.direction_b == "fail":
                _fail("; ".join(mc.details))
            return f"a={mc.direction_a} b={mc.direction_b}"
        out.append(_run("bounded-type characterization", main))
        mc = theorem_main3_check(spec, max_n, census)
        if not mc.marked_ok:
            out.append(CheckResult("marked recoloring formula", "NOTE",
                                   f"observed {list(mc.marked_b)} vs n+|A|+|VG| {list(mc.marked_expected)}"))
        try:
            trace = evolve(spec, rep.N0 + 1, N - 2, census=census)
        except InconsistencyError:
            trace = None

    def rec():
        prev = -1
        for n in range(max_n + 1):
            r = recurrence_Rpp(census, n)
            if r.value < n or r.value < prev:
                _fail(f"R''({n})={r.value} is below n or below R''({n - 1})")
            if not verify_cover(census, r):
                _fail(f"witness ball for R''({n}) does not hold every class")
            prev = r.value
            rr = recurrence_R(census, n)
            if rr.value is not None and rr.value < r.value:
                _fail(f"R({n})={rr.value} < R''({n})={r.value}")
    out.append(_run("recurrence sanity", rec))

    if rep is not None and rep.bounded == "unbounded-heuristic":
        wide = build_census(spec, 2 * max_n + 4, workers=workers)
        try:
            trace = evolve(spec, rep.N0 + 1, wide.N - 2, census=wide)
        except InconsistencyError:
            trace = None
        out.append(_run("one branch vertex in the factor graph", lambda: _one_branch(census, rep.N0)))
        out.append(_run("at most three type sets per 1-ball", lambda: _three_types(census)))

        def finite_R():
            for n in range(max_n + 1):
                if recurrence_R(census, n).value is None:
                    _fail(f"R({n}) is not attained")
        out.append(_run("R(n) finite over the window", finite_R))

    if rep is not None and rep.bounded in ("bounded", "unbounded-heuristic") and (
            rep.N1 is not None or rep.bounded != "bounded"):
        def pred():
            topo = z.topology if z is not None else None
            start = rep.N1 + 1 if rep.bounded == "bounded" else rep.N0 + 1
            for n in range(start, max_n + 1):
                p = predict_Rpp(rep, trace, wide if wide is not None else census, n, topo)
                got = recurrence_Rpp(census, n).value
                if got != p.value:
                    _fail(f"R''({n})={got} but {p.branch} predicts {p.value}")

        out.append(_run("R'' closed form", pred))

    if rep is not None and rep.N1 is not None and rep.bounded == "bounded":
        def never():
            if spec.periodic_tails and rep.N1 + 1 <= max_n:
                rr = recurrence_R(census, rep.N1 + 1)
                if rr.status != "not-attained":
                    _fail(f"R(N1+1) = {rr.value} is attained")
                return f"missing {','.join(rr.missing)}"
        out.append(_run("R(N1+1) not attained", never))
    return out
