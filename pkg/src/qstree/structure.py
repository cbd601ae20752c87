"""N1, the finite part G, the derived graph Z and the periodic extension."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .census import BallCensus, build_census, complexity_profile, type_sets
from .errors import InconsistencyError
from .quotient import FiniteVertex, IndexedEdge, Loop, QuotientSpec, promote_tail_prefix, recolor
from .unfolding import INTERNER, BallCode, canonical_code, unfold_ball


@dataclass
class StructureReport:
    N0: int | None
    c: int | None
    N1: int | None
    G: tuple[str, ...]
    x_N1: str | None
    shape: str
    bounded: str
    tau: dict[str, int]
    censored: tuple[str, ...]
    radius_G: int | None
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"N0={_fmt(self.N0)}",
            f"c={_fmt(self.c)}",
            f"N1={_fmt(self.N1)}",
            f"G={','.join(self.G) if self.G else '-'}",
            f"|G|={len(self.G)}",
            f"x_N1={_fmt(self.x_N1)}",
            f"r(x_N1,G)={_fmt(self.radius_G)}",
            f"shape={self.shape}",
            f"bounded={self.bounded}",
        ]
        out += [f"note={n}" for n in self.notes]
        return out


def _fmt(x) -> str:
    return "none" if x is None else str(x)


def _shape(spec: QuotientSpec, census: BallCensus, G: set[str]) -> str:
    if not spec.tails:
        return "other"
    if len(spec.tails) == 2:
        return "biinfinite"
    finite = {v.id for v in spec.vertices}
    if not finite <= G:
        return "other"
    g = census.graph
    tail_in_G = sorted(g.vertices[g.index[x]].position for x in G if x not in finite)
    if tail_in_G != list(range(len(tail_in_G))):
        return "other"
    return "finite-part-plus-ray" if G else "ray"


def structure_report(spec: QuotientSpec, census: BallCensus) -> StructureReport:
    """N1, G and x_N1 from the census type sets, with the shape verdict.

    Type sets that the census cannot decide (balls cut by the horizon, or a
    special ball at the last decidable radius) are left out of ``min tau``;
    along a periodic tail ``tau`` grows, so the minimum sits near the
    finite part.
    """
    prof = complexity_profile(census)
    ts = type_sets(census)
    tau = {t.vertex: t.tau for t in ts if not t.censored}
    censored = tuple(t.vertex for t in ts if t.censored)
    bounded = "bounded" if spec.tails and spec.periodic_tails else "undetermined"
    if prof.verdict != "quasi-Sturmian-up-to-N" or not tau:
        return StructureReport(prof.N0, prof.c, None, (), None, "other", bounded, tau,
                               censored, None, ["not quasi-Sturmian over the window"])
    N1 = max(prof.N0, min(tau.values()))
    g = census.graph
    G = tuple(v for v in (x.label for x in g.vertices) if v in tau and tau[v] <= N1)
    notes = []
    top_ok = [t for t in ts if t.censored and t.tau != -1 and t.tau <= N1]
    if top_ok:
        notes.append("censored vertices with tau <= N1: " + ",".join(t.vertex for t in top_ok))
    xs = [v for v in G if tau[v] == N1]
    x_N1 = xs[0] if xs else None
    if len(xs) > 1:
        notes.append("several vertices of maximal type N1: " + ",".join(xs))
    radius = None
    if x_N1 is not None:
        dist = g.distances(g.index[x_N1])
        radius = max(dist[g.index[v]] for v in G)
    shape = _shape(spec, census, set(G))
    gset = set(G)
    for v in range(len(g)):
        lab = g.vertices[v].label
        if lab in gset or g.reach[v] < 1:
            continue
        if len(g.neighbors(v)) > 2:
            raise InconsistencyError(f"vertex {lab} outside G has {len(g.neighbors(v))} neighbors")
    if spec.tails and not spec.periodic_tails:
        from .recurrence import uniform_recurrence_probe
        bounded = "unbounded-heuristic" if uniform_recurrence_probe(census) else "undetermined"
    return StructureReport(prof.N0, prof.c, N1, G, x_N1, shape, bounded, tau, censored,
                           radius, notes)


# ---------------------------------------------------------------------------
# Z

@dataclass
class ZGraph:
    N1: int
    classes: tuple[BallCode, ...]
    colors: tuple[str, ...]
    index: dict[tuple[int, int], int]
    witnesses: dict[int, list[str]]

    @property
    def size(self) -> int:
        return len(self.classes)

    def loops(self) -> dict[int, int]:
        return {a: k for (a, b), k in self.index.items() if a == b}

    def simple_edges(self) -> set[tuple[int, int]]:
        return {(a, b) for (a, b) in self.index if a < b}

    @property
    def topology(self) -> str:
        n = self.size
        if n == 1:
            return "single-vertex"
        edges = self.simple_edges()
        deg = Counter()
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        if not _connected(n, edges):
            return "other"
        if len(edges) == n - 1 and max(deg.values()) <= 2:
            return "segment"
        if len(edges) == n and all(deg[v] == 2 for v in range(n)):
            return "cycle"
        return "other"

    def degree_sums(self) -> list[int]:
        sums = [0] * self.size
        for (a, _), k in self.index.items():
            sums[a] += k
        return sums

    def describe(self) -> str:
        topo = self.topology
        if topo == "single-vertex":
            return f"single-vertex(loop={self.loops().get(0, 0)})"
        return f"{topo}({self.size})"

    def to_spec(self, degree: int, colors: tuple[str, ...] | None = None) -> QuotientSpec:
        """Z as a tail-free quotient, colored by center colors unless told otherwise."""
        names = [f"z{i}" for i in range(self.size)]
        cols = colors or self.colors
        verts = tuple(FiniteVertex(nm, c) for nm, c in zip(names, cols))
        edges = tuple(IndexedEdge(names[a], names[b], self.index[(a, b)], self.index[(b, a)])
                      for a, b in sorted(self.simple_edges()))
        loops = tuple(Loop(names[a], k) for a, k in sorted(self.loops().items()))
        alphabet = tuple(dict.fromkeys(cols))
        return QuotientSpec(degree, alphabet, verts, edges, loops)


def _connected(n: int, edges) -> bool:
    nb = defaultdict(set)
    for a, b in edges:
        nb[a].add(b)
        nb[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for y in nb[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def derive_Z(spec: QuotientSpec, census: BallCensus, report: StructureReport) -> ZGraph:
    """Quotient of the tail side ``Y = X - G`` by ``N1``-ball classes."""
    if report.bounded != "bounded" or report.N1 is None:
        raise InconsistencyError("Z is only defined for bounded-type colorings")
    N1 = report.N1
    if N1 + 1 > census.N:
        raise InconsistencyError(f"census radius {census.N} is below N1+1={N1 + 1}")
    g = census.graph
    gset = set(report.G)
    y_verts = [v for v in range(len(g)) if g.vertices[v].label not in gset
               and g.reach[v] >= N1 + 1]
    codes = census.codes[N1]
    # each N1-class on Y must have a single (N1+1)-class
    up = {}
    for v in y_verts:
        cur, nxt = codes[v], census.codes[N1 + 1][v]
        if up.setdefault(cur, nxt) != nxt:
            raise InconsistencyError(
                f"N1-class {census.label(cur)} has two (N1+1)-classes on Y"
            )
    order = sorted({codes[v] for v in y_verts}, key=lambda c: _lab_key(census.label(c)))
    idx = {c: i for i, c in enumerate(order)}
    index: dict[tuple[int, int], int] = {}
    seen_counts: dict[int, Counter] = {}
    witnesses: dict[int, list[str]] = defaultdict(list)
    for v in y_verts:
        a = idx[codes[v]]
        cnt = Counter()
        for y, k in g.adj[v]:
            cy = codes[y]
            if cy not in idx:
                raise InconsistencyError(
                    f"neighbor {g.vertices[y].label} of {g.vertices[v].label} has an N1-class not on Y"
                )
            cnt[idx[cy]] += k
        prev = seen_counts.setdefault(a, cnt)
        if prev != cnt:
            raise InconsistencyError(
                f"Z index of class {census.label(order[a])} differs across witnesses"
            )
        witnesses[a].append(g.vertices[v].label)
    for a, cnt in seen_counts.items():
        for b, k in cnt.items():
            index[(a, b)] = k
    colors = tuple(INTERNER.color(c.key) for c in order)
    z = ZGraph(N1, tuple(order), colors, index, dict(witnesses))
    if any(s != spec.degree for s in z.degree_sums()):
        raise InconsistencyError(f"Z degree sums {z.degree_sums()} differ from d={spec.degree}")
    for (a, b) in list(index):
        if (b, a) not in index:
            raise InconsistencyError("Z adjacency is not symmetric")
    if z.topology not in ("segment", "cycle", "single-vertex"):
        raise InconsistencyError(f"Z is neither a segment nor a cycle ({z.topology})")
    return z


def _lab_key(label: str):
    n, k = label.split(".")
    return int(n), int(k)


# ---------------------------------------------------------------------------
# periodic extension

@dataclass
class PeriodicExtension:
    spec: QuotientSpec
    z: ZGraph
    b: tuple[int, ...]
    stable_value: int | None
    stable_from: int | None
    y_agreement_radius: int
    psi_checked_radius: int


def psi_ball(z: ZGraph, root: int, k: int) -> int:
    """Interned node of the ``k``-ball of the limit coloring built outward from ``root``.

    Children of a node colored ``E`` entered from ``F`` take the classes
    ``D`` in sorted order, ``i_Z(E, D)`` times each, with one ``F`` removed.
    The node colors are the center colors of the Z-classes.
    """
    memo: dict[tuple[int, int | None, int], int] = {}

    def build(e: int, parent: int | None, depth: int) -> int:
        key = (e, parent, depth)
        if key in memo:
            return memo[key]
        kids = []
        if depth > 0:
            slots = []
            for dcls in range(z.size):
                slots += [dcls] * z.index.get((e, dcls), 0)
            if parent is not None:
                if parent not in slots:
                    raise InconsistencyError("index bookkeeping infeasible in the extension")
                slots.remove(parent)
            kids = [build(dc, e, depth - 1) for dc in slots]
        out = INTERNER.node(z.colors[e], kids)
        memo[key] = out
        return out

    return build(root, None, k)


def build_periodic_extension(spec: QuotientSpec, census: BallCensus, report: StructureReport,
                             z: ZGraph, check_radius: int | None = None) -> PeriodicExtension:
    ext = z.to_spec(spec.degree)
    top = check_radius if check_radius is not None else 2 * z.size + 2
    ext_census = build_census(ext, top)
    b = tuple(ext_census.b)
    stable_from = None
    for s in range(len(b)):
        if all(x == b[s] for x in b[s:]):
            stable_from = s
            break
    # the psi construction agrees with the unfolding of Z
    eg = ext_census.graph
    k_max = min(top, census.N)
    for a in range(z.size):
        for k in range(k_max + 1):
            want = unfold_ball(eg, f"z{a}", k).node
            if psi_ball(z, a, k) != want:
                raise InconsistencyError(f"psi_{k} disagrees with the Z unfolding at class {a}")
    # agreement with the input coloring on Y, away from G
    g = census.graph
    gset = set(report.G)
    gidx = [g.index[x] for x in report.G]
    far = {}
    if gidx:
        for s in gidx:
            for v, dv in g.distances(s).items():
                far[v] = min(far.get(v, dv), dv)
    idx = {c: i for i, c in enumerate(z.classes)}
    agree = 0
    for n in range(census.N + 1):
        for v, code in census.codes[n].items():
            if g.vertices[v].label in gset or far.get(v, 10 ** 9) <= n:
                continue
            zc = census.codes[z.N1].get(v)
            if zc is None or zc not in idx:
                continue
            if canonical_code(unfold_ball(eg, f"z{idx[zc]}", n)) != code:
                raise InconsistencyError(
                    f"extension differs from the coloring at {g.vertices[v].label}, radius {n}"
                )
        agree = n
    return PeriodicExtension(ext, z, b, b[stable_from] if stable_from is not None else None,
                             stable_from, agree, k_max)


# ---------------------------------------------------------------------------
# round trip through the bounded-type characterization

@dataclass
class MainCheck:
    direction_a: str
    direction_b: str
    marked_b: tuple[int, ...]
    marked_expected: tuple[int, ...]
    marked_ok: bool
    details: list[str]

    @property
    def ok(self) -> bool:
        return self.direction_a != "fail" and self.direction_b != "fail" and self.marked_ok


def marked_recoloring(spec: QuotientSpec, report: StructureReport) -> QuotientSpec:
    """Give every vertex of G a fresh color of its own."""
    finite = {v.id for v in spec.vertices}
    tail_part = [x for x in report.G if x not in finite]
    promoted = promote_tail_prefix(spec, len(tail_part)) if tail_part else spec
    rename = {f"T0[{j}]": f"t0_{j}" for j in range(len(tail_part))}
    ids = [rename.get(x, x) for x in report.G]
    taken = set(spec.alphabet)
    colors = {}
    for vid in ids:
        name = f"g_{vid}"
        while name in taken:
            name += "_"
        taken.add(name)
        colors[vid] = name
    return recolor(promoted, colors)


def theorem_main3_check(spec: QuotientSpec, N: int = 10, census: BallCensus | None = None) -> MainCheck:
    """Both directions of the bounded-type characterization on a window."""
    if census is None or census.N < N + 2:
        census = build_census(spec, N + 2)
    prof = complexity_profile(census)
    details = []
    if prof.verdict != "quasi-Sturmian-up-to-N" or not spec.tails or not spec.periodic_tails:
        details.append("direction (a) vacuous: not a quasi-Sturmian periodic-tail window")
        return MainCheck("vacuous", "vacuous", (), (), True, details)
    rep = structure_report(spec, census)
    a = "pass"
    try:
        if rep.shape != "finite-part-plus-ray":
            raise InconsistencyError(f"X - G is not a ray (shape {rep.shape})")
        z = derive_Z(spec, census, rep)
        ext = build_periodic_extension(spec, census, rep, z)
        if ext.stable_from is None or ext.stable_from > 2 * z.size:
            raise InconsistencyError("extension census does not stabilize within 2|VZ| radii")
    except InconsistencyError as exc:
        a = "fail"
        details.append(f"direction (a): {exc}")
    marked = marked_recoloring(spec, rep)
    mb = tuple(build_census(marked, N).b)
    expected = tuple(n + len(spec.alphabet) + len(rep.G) for n in range(N + 1))
    # (2) => (1): with G and the extension in hand, the window must be quasi-Sturmian
    b_dir = "pass" if a == "pass" and prof.verdict == "quasi-Sturmian-up-to-N" else "fail"
    if b_dir == "fail":
        details.append("direction (b): structure present but the window is not quasi-Sturmian")
    marked_ok = mb == expected
    if not marked_ok:
        details.append(f"marked recoloring b={list(mb)} vs n+|A|+|VG|={list(expected)}")
    return MainCheck(a, b_dir, mb, expected, marked_ok, details)
