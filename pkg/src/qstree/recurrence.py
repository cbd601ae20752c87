"""Recurrence functions R''(n) and R(n) and their closed-form predictions.

A radius-``r`` ball around a lift of ``x`` projects onto the radius-``r``
ball around ``x`` in the quotient, so the ``n``-ball classes inside an
``(n + r)``-ball around ``x`` are exactly the classes of quotient vertices
within distance ``r`` of ``x``. Both searches run on the expanded quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .census import BallCensus
from .errors import CapExceededError, HorizonError, InconsistencyError
from .factor_graph import CASE_I, EvolutionTrace
from .structure import StructureReport
from .unfolding import BallCode, ball_of, interior_classes, unfold_ball


def default_cap(census: BallCensus, n: int) -> int:
    if census.spec.tails and not census.spec.periodic_tails:
        return 3 * (n + census.b[n]) + 4
    return n + census.b[n] + 4


def _cover_radius(census: BallCensus, n: int, x: int, limit: int) -> tuple[int | None, int]:
    """Smallest ``r <= limit`` whose quotient ball at ``x`` shows every ``n``-class.

    Returns ``(None, best)`` when the ball runs past the known region or the
    limit first; ``best`` is the largest number of classes seen.
    """
    g = census.graph
    codes = census.codes[n]
    want = len(census.classes[n])
    seen: set[BallCode] = set()
    layer, dist = [x], {x: 0}
    r = 0
    while True:
        if g.reach[x] < n + r:
            # the ball reaches past the expanded region
            return None, len(seen)
        for y in layer:
            c = codes.get(y)
            if c is None:
                return None, len(seen)
            seen.add(c)
        if len(seen) == want:
            return r, want
        if r == limit:
            return None, len(seen)
        nxt = []
        for y in layer:
            for z, _ in g.adj[y]:
                if z not in dist:
                    dist[z] = r + 1
                    nxt.append(z)
        layer, r = nxt, r + 1


@dataclass(frozen=True)
class RppResult:
    n: int
    value: int
    center: str


def recurrence_Rpp(census: BallCensus, n: int, cap: int | None = None) -> RppResult:
    """Smallest ``m`` such that one ``m``-ball holds every ``n``-ball class."""
    cap = default_cap(census, n) if cap is None else cap
    g = census.graph
    best, best_cov = None, 0
    for x in census.codes[n]:
        r, cov = _cover_radius(census, n, x, cap - n)
        best_cov = max(best_cov, cov)
        if r is not None and (best is None or r < best[0]):
            best = (r, x)
    if best is None:
        raise CapExceededError(
            f"R''({n}) exceeds cap {cap}; best coverage {best_cov}/{census.b[n]}",
            best_coverage=best_cov,
        )
    return RppResult(n, n + best[0], g.vertices[best[1]].label)


def verify_cover(census: BallCensus, res: RppResult) -> bool:
    """Check the witness ball directly by unfolding it and listing its interior classes."""
    g = census.graph
    x = g.index[res.center]
    if g.reach[x] < res.value:
        return False
    inside = interior_classes(unfold_ball(g, x, res.value), res.n)
    return set(inside) == set(census.classes[res.n])


@dataclass(frozen=True)
class RResult:
    n: int
    value: int | None
    status: str
    missing: tuple[str, ...] = ()


def _periodic_region(census: BallCensus, n: int) -> set[int]:
    """Tail vertices whose ``n``-class repeats with the period forever after."""
    g = census.graph
    out = set()
    for ti, tail in enumerate(census.spec.tails):
        p = tail.period or 1
        for j in range(n, n + p):
            out.add(g.tail_vertex(ti, j))
    return out


def recurrence_R(census: BallCensus, n: int, cap: int | None = None) -> RResult:
    """Smallest ``m`` such that every ``m``-ball holds every ``n``-ball class.

    With periodic tails, balls far out on a tail only ever meet the classes of
    one tail period; a class outside that set proves ``R(n)`` is never
    attained. Substitution tails only give a value over the window.
    """
    spec = census.spec
    cap = default_cap(census, n) if cap is None else cap
    allc = set(census.classes[n])
    g = census.graph
    if spec.tails and spec.periodic_tails:
        far = {census.codes[n][v] for v in _periodic_region(census, n)}
        missing = allc - far
        if missing:
            labels = tuple(sorted(census.label(c) for c in missing))
            return RResult(n, None, "not-attained", labels)
    worst = n
    for x in census.codes[n]:
        if spec.tails and spec.periodic_tails:
            v = g.vertices[x]
            if v.tail is not None and v.position >= n + 2 * (spec.tails[v.tail].period or 1) + cap:
                continue
        r, _ = _cover_radius(census, n, x, cap - n)
        if r is None:
            if g.reach[x] >= cap:
                raise CapExceededError(f"R({n}) exceeds cap {cap}")
            continue
        worst = max(worst, n + r)
    status = "exact" if not spec.tails or spec.periodic_tails else "window"
    return RResult(n, worst, status)


# ---------------------------------------------------------------------------
# predictions

@dataclass(frozen=True)
class Prediction:
    value: int
    branch: str
    n_k: int | None


def quasi_nk(trace: EvolutionTrace, n: int) -> int | None:
    """Smallest labeled radius ``>= n`` that is Case I or still before ``K``.

    Before ``K`` the markers coincide and the factor graph stays a path, so
    those radii play the role of ``n_k``.
    """
    for m in sorted(trace.labels):
        if m >= n and (trace.labels[m] in CASE_I or trace.labels[m] == "pre-K"):
            return m
    return None


def formula_value(branch: str, n: int, b_nk: int, size_G: int = 0, radius: int = 0) -> int:
    if branch == "(1)":
        return n + b_nk // 2
    return n + (b_nk - size_G + radius + 1) // 2


def predict_Rpp(report: StructureReport, trace: EvolutionTrace | None, census: BallCensus,
                n: int, z_topology: str | None) -> Prediction:
    if report.bounded == "bounded":
        if report.radius_G is None:
            raise InconsistencyError("x_N1 is undefined")
        if z_topology == "cycle":
            return Prediction(formula_value("(2b)", n, census.b[n], len(report.G),
                                            report.radius_G), "(2b)", None)
        branch = "(2a)"
    else:
        branch = "(1)"
    if trace is None:
        raise InconsistencyError("branch undeterminable: no evolution trace")
    nk = quasi_nk(trace, n)
    if nk is None or nk > census.N:
        raise HorizonError(f"branch undeterminable: no n_k >= {n} in the window")
    b_nk = census.b[nk]
    if branch == "(1)":
        return Prediction(formula_value(branch, n, b_nk), branch, nk)
    return Prediction(formula_value(branch, n, b_nk, len(report.G), report.radius_G), branch, nk)


@dataclass
class RecurrenceRow:
    n: int
    Rpp: int | None
    predicted: int | None
    branch: str
    R: int | None
    status: str

    def csv(self) -> str:
        def f(x):
            return "" if x is None else str(x)
        return f"{self.n},{f(self.Rpp)},{f(self.predicted)},{self.branch},{f(self.R)},{self.status}"


@dataclass
class RecurrenceProfile:
    rows: list[RecurrenceRow] = field(default_factory=list)

    def csv(self) -> str:
        head = "n,Rpp,Rpp_predicted,branch,R,status"
        return "\n".join([head] + [r.csv() for r in self.rows]) + "\n"


def _predict_from(report: StructureReport) -> float:
    """Radii above this get a prediction: N1 for bounded type, N0 otherwise."""
    if report.bounded == "bounded":
        return report.N1 if report.N1 is not None else float("inf")
    if report.bounded == "unbounded-heuristic" and report.N0 is not None:
        return report.N0
    return float("inf")


def recurrence_profile(census: BallCensus, n_max: int, *, report: StructureReport | None = None,
                       trace: EvolutionTrace | None = None, z_topology: str | None = None,
                       predict: bool = False) -> RecurrenceProfile:
    prof = RecurrenceProfile()
    for n in range(n_max + 1):
        status = []
        try:
            rpp = recurrence_Rpp(census, n).value
        except CapExceededError:
            rpp = None
            status.append("Rpp-cap-exceeded")
        try:
            rr = recurrence_R(census, n)
            R = rr.value
            status.append(rr.status)
        except CapExceededError:
            R = None
            status.append("R-cap-exceeded")
        pred, branch = None, ""
        if predict and report is not None and n > _predict_from(report):
            try:
                p = predict_Rpp(report, trace, census, n, z_topology)
                pred, branch = p.value, p.branch
            except (InconsistencyError, HorizonError):
                branch = "undetermined"
        prof.rows.append(RecurrenceRow(n, rpp, pred, branch, R, "+".join(status)))
    return prof


def uniform_recurrence_probe(census: BallCensus, n_max: int | None = None) -> bool:
    """True when ``R(n)`` is attained for every ``n`` the window can test."""
    if census.spec.tails and census.spec.periodic_tails:
        return False
    top = census.N - 2 if n_max is None else n_max
    for n in range(max(top, 0) + 1):
        try:
            if recurrence_R(census, n).value is None:
                return False
        except CapExceededError:
            return False
    return True
