"""Factor graphs on ball classes, the S/A/B/C markers and their evolution."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .census import BallCensus, build_census, complexity_profile
from .errors import InconsistencyError
from .quotient import QuotientSpec
from .unfolding import BallCode, ball_of, canonical_code, interior_classes, restrict_ball

CASE_I = ("I-a", "I-b", "I-c")


@dataclass(frozen=True)
class Markers:
    n: int
    S: BallCode
    A: BallCode
    B: BallCode
    C: BallCode


@dataclass
class FactorGraph:
    n: int
    vertices: tuple[BallCode, ...]
    edges: frozenset[frozenset[BallCode]]
    labels: dict[BallCode, str]
    specials: tuple[BallCode, ...] = ()
    markers: Markers | None = None
    case: str | None = None
    _nbrs: dict = field(default=None, init=False, repr=False)

    def neighbors(self, code: BallCode) -> set[BallCode]:
        """Adjacent classes other than ``code`` itself."""
        if self._nbrs is None:
            nb = defaultdict(set)
            for e in self.edges:
                if len(e) == 2:
                    x, y = tuple(e)
                    nb[x].add(y)
                    nb[y].add(x)
            self._nbrs = nb
        return self._nbrs.get(code, set())

    def degree(self, code: BallCode) -> int:
        return len(self.neighbors(code))

    def has_self_loop(self, code: BallCode) -> bool:
        return frozenset([code]) in self.edges

    def is_linear(self, ignore: set[BallCode] | None = None) -> bool:
        """Path shape once self-loops (and the classes in ``ignore``) are dropped."""
        keep = [v for v in self.vertices if not ignore or v not in ignore]
        if not keep:
            return True
        keepset = set(keep)
        degs = {v: len(self.neighbors(v) & keepset) for v in keep}
        if any(d > 2 for d in degs.values()):
            return False
        edges = sum(degs.values()) // 2
        return edges == len(keep) - 1 and self._connected(keepset)

    def _connected(self, keep: set[BallCode]) -> bool:
        start = next(iter(keep))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x) & keep:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen == keep

    def component_through(self, start: BallCode, removed: BallCode) -> set[BallCode]:
        """Classes reachable from ``start`` without passing ``removed``."""
        if start == removed:
            return set()
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y != removed and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def on_cycle(self, code: BallCode) -> bool:
        """Whether ``code`` lies on a cycle of length >= 3 (self-loops ignored)."""
        nb = sorted(self.neighbors(code), key=lambda c: self.labels[c])
        for i, a in enumerate(nb):
            comp = self.component_through(a, code)
            if any(b in comp for b in nb[i + 1:]):
                return True
        return False

    def to_dot(self) -> str:
        roles = defaultdict(list)
        if self.markers is not None:
            m = self.markers
            for name, code in (("S", m.S), ("A", m.A), ("B", m.B), ("C", m.C)):
                roles[code].append(name)
        else:
            for code in self.specials:
                roles[code].append("S")
        lines = [f"graph G{self.n} {{"]
        lines.append(f'  graph [n={self.n}, case="{self.case or "none"}"];')
        for v in self.vertices:
            lab = self.labels[v]
            extra = f', marker="{",".join(roles[v])}"' if roles[v] else ""
            lines.append(f'  "{lab}" [label="{lab}"{extra}];')
        pairs = []
        for e in self.edges:
            ends = sorted((self.labels[c] for c in e), key=_label_key)
            pairs.append((ends[0], ends[-1]))
        for a, b in sorted(pairs, key=lambda p: (_label_key(p[0]), _label_key(p[1]))):
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _label_key(label: str) -> tuple[int, int]:
    n, k = label.split(".")
    return int(n), int(k)


def _sorted_codes(census: BallCensus, n: int) -> tuple[BallCode, ...]:
    return tuple(sorted(census.classes[n], key=lambda c: _label_key(census.label(c))))


def _pairs(census: BallCensus, n: int):
    """Adjacent materialized vertex pairs whose ``n``-balls are both known."""
    g = census.graph
    codes = census.codes[n]
    for v, cv in codes.items():
        for y, _ in g.adj[v]:
            cy = codes.get(y)
            if cy is not None:
                yield v, y, cv, cy


def build_factor_graph(census: BallCensus, n: int) -> FactorGraph:
    """The graph on ``n``-ball classes joined by adjacent centers."""
    if n > census.N:
        raise ValueError(f"census stops at radius {census.N}")
    edges = {frozenset((cv, cy)) for _, _, cv, cy in _pairs(census, n)}
    verts = _sorted_codes(census, n)
    labels = {c: census.label(c) for c in verts}
    specials = ()
    if census.extensions_known(n):
        specials = tuple(c for c in verts if census.record(c).is_special)
    return FactorGraph(n, verts, frozenset(edges), labels, specials)


def _neighbor_classes(census: BallCensus, n: int) -> dict[BallCode, list[frozenset[BallCode]]]:
    """For each class, the neighbor-class set of every fully known witness."""
    g = census.graph
    codes = census.codes[n]
    out: dict[BallCode, list[frozenset[BallCode]]] = defaultdict(list)
    for v, cv in codes.items():
        if g.reach[v] < n + 1:
            continue
        out[cv].append(frozenset(codes[y] for y, _ in g.adj[v]))
    return out


def weak_strong_adjacency(census: BallCensus, n: int, D: BallCode, E: BallCode,
                          _cache: dict | None = None) -> str:
    """``none``, ``weak``, ``strong(D->E)``, ``strong(E->D)`` or ``strong(both)``."""
    nc = _cache if _cache is not None else _neighbor_classes(census, n)
    if D not in census.classes[n] or E not in census.classes[n]:
        raise ValueError("both classes must be present at radius n")
    weak = any(E in s for s in nc.get(D, ())) or any(D in s for s in nc.get(E, ()))
    if not weak:
        return "none"
    d_to_e = bool(nc.get(D)) and all(E in s for s in nc[D])
    e_to_d = bool(nc.get(E)) and all(D in s for s in nc[E])
    if d_to_e and e_to_d:
        return "strong(both)"
    if d_to_e:
        return "strong(D->E)"
    if e_to_d:
        return "strong(E->D)"
    return "weak"


def adjacency_table(census: BallCensus, n: int) -> dict[tuple[BallCode, BallCode], str]:
    fg = build_factor_graph(census, n)
    nc = _neighbor_classes(census, n)
    out = {}
    for e in fg.edges:
        ends = sorted(e, key=lambda c: _label_key(census.label(c)))
        D, E = ends[0], ends[-1]
        out[(D, E)] = weak_strong_adjacency(census, n, D, E, nc)
    return out


# ---------------------------------------------------------------------------
# markers

def _unique_special(census: BallCensus, n: int) -> BallCode:
    rec = [(c, r) for c, r in census.classes[n].items() if r.is_special]
    if len(rec) != 1 or len(rec[0][1].extensions) != 2:
        raise InconsistencyError(f"radius {n} does not have a unique special ball with 2 extensions")
    return rec[0][0]


def containment(big: BallCode, small: BallCode) -> int:
    """Number of ``small``-class balls centered at depth <= 1 inside ``big``."""
    return interior_classes(ball_of(big), small.radius)[small]


@dataclass(frozen=True)
class Lineage:
    N0: int
    A: dict[int, BallCode]
    B: dict[int, BallCode]
    S: dict[int, BallCode]
    C: dict[int, BallCode]
    seed_rule: str

    def markers(self, n: int) -> Markers | None:
        if n in self.A and n in self.C:
            return Markers(n, self.S[n], self.A[n], self.B[n], self.C[n])
        return None

    @property
    def radii(self) -> list[int]:
        return sorted(n for n in self.A if n in self.C)


def _run_lineage(census: BallCensus, N0: int, seed: BallCode, S: dict, top: int):
    A = {N0 + 1: seed}
    B = {N0 + 1: next(x for x in census.record(S[N0]).extensions if x != seed)}
    for n in range(N0 + 1, top):
        exts = sorted(census.record(S[n]).extensions, key=lambda c: c.string)
        counts = [containment(x, A[n]) for x in exts]
        if counts[0] == counts[1]:
            raise InconsistencyError(
                f"extensions of S_{n} contain the same number ({counts[0]}) of A_{n} balls"
            )
        hi = 0 if counts[0] > counts[1] else 1
        A[n + 1], B[n + 1] = exts[hi], exts[1 - hi]
    return A, B


def identify_lineage(census: BallCensus, N0: int) -> Lineage:
    """S, A, B, C over every radius the census decides.

    ``A_{n+1}`` is the extension of ``S_n`` holding more ``A_n`` balls. The
    seed follows the rule that makes ``A_n = S_n = C_n`` whenever some radius
    has ``S_n = C_n`` equal to an extension; otherwise the lexicographically
    smaller canonical string is taken.
    """
    top_s = census.N - 1
    S = {n: _unique_special(census, n) for n in range(N0, top_s + 1)}
    C = {n: canonical_code(restrict_ball(ball_of(S[n + 1]), n)) for n in range(N0, top_s)}
    if N0 + 1 > top_s:
        return Lineage(N0, {}, {}, S, C, "none")
    seeds = sorted(census.record(S[N0]).extensions, key=lambda c: c.string)
    runs = [_run_lineage(census, N0, s, S, top_s) for s in seeds]
    chosen, rule = 0, "lexicographic"
    for i, (A, _) in enumerate(runs):
        if any(A[n] == S[n] == C[n] for n in A if n in C):
            chosen, rule = i, "equal-markers"
            break
    A, B = runs[chosen]
    return Lineage(N0, A, B, S, C, rule)


def first_K(lineage: Lineage) -> int | None:
    for n in lineage.radii:
        m = lineage.markers(n)
        if not (m.A == m.S == m.C):
            return n
    return None


def classify_markers(m: Markers, K: int | None) -> str:
    if K is None or m.n < K:
        return "pre-K"
    S, A, B, C = m.S, m.A, m.B, m.C
    if S != C:
        if len({A, B, S}) == 3 and C in (A, B):
            return "I-a"
        if len({A, B, C}) == 3 and S in (A, B):
            return "I-b"
        if {S, C} == {A, B}:
            return "I-c"
        if len({S, A, B, C}) == 4:
            return "II"
    elif len({S, A, B}) == 3:
        return "III"
    return "not-applicable"


@dataclass(frozen=True)
class CaseCheck:
    label: str
    s_degree: int
    linear: bool
    linear_off_G: bool
    ok_strict: bool
    ok_off_G: bool


def classify_case(m: Markers, fg: FactorGraph, K: int | None,
                  g_classes: set[BallCode] | None = None) -> CaseCheck:
    """Case label plus the degree/linearity claims that come with it.

    ``linear_off_G`` drops classes whose every witness projects into the
    finite part ``G`` before testing the path shape.
    """
    label = classify_markers(m, K)
    deg = fg.degree(m.S)
    linear = fg.is_linear()
    off = fg.is_linear(ignore=set(g_classes or ()) - {m.S})
    if label == "II":
        ok, ok_off = deg == 3, deg == 3
    elif label in CASE_I or label == "III":
        ok = linear and deg <= 2
        ok_off = off and deg <= 2
    else:
        ok, ok_off = True, True
    return CaseCheck(label, deg, linear, off, ok, ok_off)


@dataclass
class EvolutionTrace:
    n_lo: int
    n_hi: int
    N0: int
    K: int | None
    seed_rule: str
    labels: dict[int, str]
    checks: dict[int, CaseCheck]
    n_k: list[int]
    m_values: dict[int, int]
    violations: list[tuple[int, str]]
    cyclic: str

    def pattern_ok(self) -> bool:
        return not self.violations


def _check_pattern(labels: dict[int, str], m_values: dict[int, int], K, n_hi) -> list:
    bad = []
    for n, lab in sorted(labels.items()):
        if lab == "not-applicable":
            bad.append((n, "markers fit no case"))
        if lab == "I-c" and n != K:
            bad.append((n, "Case I-c away from K"))
        if lab == "III" and n + 1 in labels and labels[n + 1] != "I-b":
            bad.append((n + 1, f"Case III at {n} not followed by I-b"))
        if lab in CASE_I:
            m = m_values[n]
            for k in range(1, m):
                if n + k in labels and labels[n + k] != "II":
                    bad.append((n + k, f"expected II after Case I at {n} (m={m})"))
            end = n + m
            if end in labels:
                nxt = labels[end]
                if nxt == "III":
                    if end + 1 in labels and labels[end + 1] not in CASE_I:
                        bad.append((end + 1, f"expected Case I after III at {end}"))
                elif nxt not in CASE_I:
                    bad.append((end, f"expected Case I or III at {end} (m={m})"))
    return bad


def detect_cyclic(census: BallCensus, N0: int | None, window: int | None = None) -> tuple[str, list[int]]:
    """``cyclic``, ``acyclic-up-to-window`` or ``not-applicable``.

    Also returns the radii where ``S_n`` carries a self-loop, which are not
    counted as cycles.
    """
    if N0 is None:
        return "not-applicable", []
    top = census.N - 1 if window is None else min(window, census.N - 1)
    loops = []
    verdict = "acyclic-up-to-window"
    for n in range(N0 + 1, top + 1):
        S = _unique_special(census, n)
        fg = build_factor_graph(census, n)
        if fg.has_self_loop(S):
            loops.append(n)
        if fg.on_cycle(S):
            verdict = "cyclic"
    return verdict, loops


def g_side_classes(census: BallCensus, n: int, g_labels: set[str]) -> set[BallCode]:
    """Classes at radius ``n`` all of whose witnesses lie in ``g_labels``."""
    verts = census.graph.vertices
    return {code for code, rec in census.classes[n].items()
            if all(verts[w].label in g_labels for w in rec.witnesses)}


def evolve(spec: QuotientSpec, n_lo: int, n_hi: int, *, census: BallCensus | None = None,
           g_labels: set[str] | None = None, workers: int | None = None) -> EvolutionTrace:
    """Case labels for ``n_lo..n_hi`` with the transition discipline checked."""
    if census is None or census.N < n_hi + 2:
        census = build_census(spec, n_hi + 2, workers=workers)
    prof = complexity_profile(census)
    if prof.N0 is None:
        raise InconsistencyError("no quasi-Sturmian window: case labels are undefined")
    lin = identify_lineage(census, prof.N0)
    K = first_K(lin)
    cyc, _ = detect_cyclic(census, prof.N0, n_hi)
    labels, checks, m_values = {}, {}, {}
    for n in range(max(n_lo, prof.N0 + 1), n_hi + 1):
        m = lin.markers(n)
        if m is None:
            continue
        fg = build_factor_graph(census, n)
        gset = g_side_classes(census, n, g_labels) if g_labels else set()
        chk = classify_case(m, fg, K, gset)
        labels[n], checks[n] = chk.label, chk
        if chk.label in CASE_I:
            m_values[n] = len(fg.component_through(m.C, m.S))
    violations = [] if cyc == "cyclic" else _check_pattern(labels, m_values, K, n_hi)
    n_k = [n for n, lab in labels.items() if lab in CASE_I]
    return EvolutionTrace(n_lo, n_hi, prof.N0, K, lin.seed_rule, labels, checks, n_k,
                          m_values, violations, cyc)
