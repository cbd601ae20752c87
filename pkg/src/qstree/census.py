"""Enumeration of colored n-balls: complexity, special balls, type sets."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import HorizonError, InconsistencyError
from .quotient import ExpandedGraph, QuotientSpec, expand_quotient, finite_eccentricity
from .unfolding import BallCode, ball_of, canonical_code, restrict_ball, unfold_ball


def horizon_slack() -> int:
    raw = os.environ.get("QSTREE_HORIZON_SLACK", "0")
    try:
        slack = int(raw)
    except ValueError:
        raise ValueError(f"QSTREE_HORIZON_SLACK must be an integer, got {raw!r}") from None
    if slack < 0:
        raise ValueError("QSTREE_HORIZON_SLACK must be >= 0")
    return slack


def default_horizon(spec: QuotientSpec, N: int) -> int:
    """Tail length that exposes every radius-``<= N`` class of a periodic tail.

    A tail occurrence at position ``j >= N`` has an ``N``-ball that never sees
    the attachment, so its class only depends on ``j mod p``; one full period
    past that point must be unfoldable to radius ``N`` (and one more vertex
    for the edges between consecutive witnesses).
    """
    if not spec.tails:
        return 0
    p = spec.max_period
    return finite_eccentricity(spec) + 2 * N + 2 * p + 2 + horizon_slack()


@dataclass
class ClassRecord:
    code: BallCode
    label: str
    witnesses: list[int] = field(default_factory=list)
    extensions: set[BallCode] = field(default_factory=set)
    restriction: BallCode | None = None

    @property
    def is_special(self) -> bool:
        return len(self.extensions) >= 2


@dataclass
class BallCensus:
    spec: QuotientSpec
    N: int
    graph: ExpandedGraph
    codes: list[dict[int, BallCode]]
    classes: list[dict[BallCode, ClassRecord]]

    @property
    def b(self) -> list[int]:
        return [len(c) for c in self.classes]

    def code(self, vertex: int | str, n: int) -> BallCode | None:
        if isinstance(vertex, str):
            vertex = self.graph.index[vertex]
        return self.codes[n].get(vertex)

    def record(self, code: BallCode) -> ClassRecord:
        return self.classes[code.radius][code]

    def label(self, code: BallCode) -> str:
        return self.classes[code.radius][code].label

    def witness_labels(self, code: BallCode) -> list[str]:
        return [self.graph.vertices[w].label for w in self.record(code).witnesses]

    def extensions_known(self, n: int) -> bool:
        return n + 1 <= self.N


def _codes_at(graph: ExpandedGraph, n: int, workers: int | None) -> dict[int, BallCode]:
    todo = [v for v in range(len(graph)) if graph.reach[v] >= n]

    def one(v):
        return v, canonical_code(unfold_ball(graph, v, n))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(one, todo))
    else:
        pairs = [one(v) for v in todo]
    return dict(sorted(pairs))


def census_from_graph(graph: ExpandedGraph, N: int, workers: int | None = None) -> BallCensus:
    codes: list[dict[int, BallCode]] = []
    classes: list[dict[BallCode, ClassRecord]] = []
    for n in range(N + 1):
        at_n = _codes_at(graph, n, workers)
        table: dict[BallCode, ClassRecord] = {}
        for v, code in at_n.items():
            rec = table.get(code)
            if rec is None:
                rec = table[code] = ClassRecord(code, f"{n}.{len(table)}")
            rec.witnesses.append(v)
        codes.append(at_n)
        classes.append(table)
    for n in range(1, N + 1):
        for code, rec in classes[n].items():
            below = canonical_code(restrict_ball(ball_of(code), n - 1))
            if below not in classes[n - 1]:
                raise InconsistencyError(f"restriction of class {rec.label} is not a census class")
            rec.restriction = below
            for w in rec.witnesses:
                if codes[n - 1][w] != below:
                    raise InconsistencyError("restriction disagrees with the witness's smaller ball")
            classes[n - 1][below].extensions.add(code)
    return BallCensus(graph.spec, N, graph, codes, classes)


SUBSTITUTION_DOUBLINGS = 5


def build_census(spec: QuotientSpec, N: int, *, horizon: int | None = None,
                 workers: int | None = None) -> BallCensus:
    """All colored balls of radius ``0..N`` of the covering coloring."""
    if N < 0:
        raise ValueError("N must be >= 0")
    H = default_horizon(spec, N) if horizon is None else horizon
    census = census_from_graph(expand_quotient(spec, H), N, workers)
    if spec.periodic_tails:
        return census
    # substitution tails: grow until doubling the horizon changes nothing
    for _ in range(SUBSTITUTION_DOUBLINGS):
        H = 2 * H + 1
        doubled = census_from_graph(expand_quotient(spec, H), N, workers)
        if doubled.b == census.b:
            return census
        census = doubled
    raise HorizonError(
        f"complexity still changes after {SUBSTITUTION_DOUBLINGS} horizon doublings (H={H})"
    )


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexityProfile:
    b: tuple[int, ...]
    N0: int | None
    c: int | None
    verdict: str

    @property
    def increments(self) -> tuple[int, ...]:
        return tuple(self.b[i + 1] - self.b[i] for i in range(len(self.b) - 1))


def profile_of(b: list[int] | tuple[int, ...]) -> ComplexityProfile:
    b = tuple(b)
    inc = [b[i + 1] - b[i] for i in range(len(b) - 1)]
    if not inc:
        return ComplexityProfile(b, None, None, "other")
    if inc[-1] == 0 and all(x == 0 for x in inc[inc.index(0):]):
        return ComplexityProfile(b, None, None, "periodic-like")
    n0 = len(inc)
    while n0 > 0 and inc[n0 - 1] == 1:
        n0 -= 1
    if n0 == len(inc):
        return ComplexityProfile(b, None, None, "other")
    return ComplexityProfile(b, n0, b[n0] - n0, "quasi-Sturmian-up-to-N")


def complexity_profile(census: BallCensus) -> ComplexityProfile:
    return profile_of(census.b)


def check_monotone(census: BallCensus) -> None:
    b = census.b
    for n in range(len(b) - 1):
        if b[n + 1] < b[n]:
            raise InconsistencyError(f"b({n + 1}) = {b[n + 1]} < b({n}) = {b[n]}")


def special_balls(census: BallCensus, n: int, n0: int | None = None) -> list[tuple[BallCode, int]]:
    """Classes at radius ``n`` with two or more extensions, with their counts.

    When ``n0`` is given and ``n >= n0`` the answer must be a single class
    with exactly two extensions.
    """
    if not census.extensions_known(n):
        raise HorizonError(f"census stops at radius {census.N}; specials at {n} need {n + 1}")
    out = [(code, len(rec.extensions)) for code, rec in census.classes[n].items()
           if len(rec.extensions) >= 2]
    if n0 is not None and n >= n0:
        if len(out) != 1 or out[0][1] != 2:
            detail = ", ".join(f"{census.label(c)}x{k}" for c, k in out) or "none"
            raise InconsistencyError(
                f"radius {n} >= N0={n0} should have one special ball with 2 extensions; got {detail}"
            )
    return out


def increment_law(census: BallCensus, n: int) -> bool:
    excess = sum(k - 1 for _, k in special_balls(census, n))
    return excess == census.b[n + 1] - census.b[n]


@dataclass(frozen=True)
class TypeSet:
    vertex: str
    members: frozenset[int]
    tau: int
    censored: bool


def type_sets(census: BallCensus, vertices=None) -> list[TypeSet]:
    """Radii at which each vertex's ball is special; ``tau = -1`` when none are.

    A type set is censored when the vertex's balls are only known below
    radius ``N - 1`` or when its largest member is the last radius the census
    can decide.
    """
    g = census.graph
    if vertices is None:
        vertices = range(len(g))
    top = census.N - 1
    out = []
    for v in vertices:
        if isinstance(v, str):
            v = g.index[v]
        known = int(min(top, g.reach[v]))
        members = frozenset(
            n for n in range(known + 1)
            if census.classes[n][census.codes[n][v]].is_special
        )
        tau = max(members, default=-1)
        censored = known < top or tau == top
        out.append(TypeSet(g.vertices[v].label, members, tau, bool(censored)))
    return out
