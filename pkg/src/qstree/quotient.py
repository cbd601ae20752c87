"""Edge-indexed colored quotient graphs: data model, qst text format, expansion.

A quotient is a finite colored graph whose directed edges carry indices
``i(x, y)`` (how many lifts of ``y`` sit next to one lift of ``x``), plus up
to two infinite tails described by a periodic or substitutive sequence of
vertex templates. The universal cover of such a graph is a ``d``-regular
colored tree.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import HorizonError, ParseError

_TOKEN = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class FiniteVertex:
    id: str
    color: str


@dataclass(frozen=True)
class IndexedEdge:
    src: str
    dst: str
    fwd: int
    bwd: int


@dataclass(frozen=True)
class Loop:
    at: str
    index: int


@dataclass(frozen=True)
class Template:
    """One vertex of a tail; ``fwd``/``bwd`` index the edge to the next vertex."""

    name: str
    color: str
    loop: int
    fwd: int
    bwd: int


@dataclass(frozen=True)
class TailSpec:
    attach: str
    attach_fwd: int
    attach_bwd: int
    kind: str
    templates: tuple[Template, ...]
    rules: tuple[tuple[str, str], ...] = ()
    seed: str | None = None

    @property
    def period(self) -> int | None:
        return len(self.templates) if self.kind == "periodic" else None

    def template(self, name: str) -> Template:
        for t in self.templates:
            if t.name == name:
                return t
        raise KeyError(name)

    def symbols(self, count: int) -> list[str]:
        """Template names of tail occurrences ``0 .. count-1``."""
        if count <= 0:
            return []
        if self.kind == "periodic":
            p = len(self.templates)
            return [self.templates[j % p].name for j in range(count)]
        rules = dict(self.rules)
        word = self.seed or ""
        if not word or not rules.get(word[0], "").startswith(word):
            raise HorizonError(
                f"substitution rules do not fix a word starting with seed {self.seed!r}"
            )
        while len(word) < count:
            longer = "".join(rules[s] for s in word)
            if len(longer) <= len(word):
                raise HorizonError(
                    f"substitution stalls at length {len(word)} < {count}"
                )
            word = longer
        return list(word[:count])


@dataclass(frozen=True)
class QuotientSpec:
    degree: int
    alphabet: tuple[str, ...]
    vertices: tuple[FiniteVertex, ...]
    edges: tuple[IndexedEdge, ...] = ()
    loops: tuple[Loop, ...] = ()
    tails: tuple[TailSpec, ...] = ()
    source_lines: dict | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        validate(self, self.source_lines)

    def vertex(self, vid: str) -> FiniteVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    @property
    def max_period(self) -> int:
        return max((t.period or 1 for t in self.tails), default=0)

    @property
    def periodic_tails(self) -> bool:
        return all(t.kind == "periodic" for t in self.tails)


# ---------------------------------------------------------------------------
# validation

def validate(spec: QuotientSpec, lines: dict | None = None) -> None:
    lines = lines or {}

    def fail(msg, key=None):
        raise ParseError(msg, lines.get(key))

    d = spec.degree
    if d < 2:
        fail(f"degree must be >= 2, got {d}", "degree")
    if not spec.alphabet:
        fail("empty alphabet", "alphabet")
    if len(set(spec.alphabet)) != len(spec.alphabet):
        fail("duplicate color in alphabet", "alphabet")
    for c in spec.alphabet:
        if not _TOKEN.match(c):
            fail(f"bad color name {c!r}", "alphabet")
    colors = set(spec.alphabet)
    if not spec.vertices:
        fail("the finite part needs at least one vertex")

    ids: dict[str, FiniteVertex] = {}
    for v in spec.vertices:
        if not _TOKEN.match(v.id):
            fail(f"bad vertex id {v.id!r}", ("vertex", v.id))
        if v.id in ids:
            fail(f"duplicate vertex id {v.id!r}", ("vertex", v.id))
        if v.color not in colors:
            fail(f"vertex {v.id} uses undeclared color {v.color!r}", ("vertex", v.id))
        ids[v.id] = v

    degree = {vid: 0 for vid in ids}
    pairs = set()
    for e in spec.edges:
        key = ("edge", e.src, e.dst)
        for end in (e.src, e.dst):
            if end not in ids:
                fail(f"unknown vertex {end!r} in edge", key)
        if e.src == e.dst:
            fail(f"edge {e.src}-{e.dst} is a loop; declare it with 'loop'", key)
        if e.fwd < 1 or e.bwd < 1:
            fail(f"edge {e.src}-{e.dst} needs positive indices", key)
        pair = frozenset((e.src, e.dst))
        if pair in pairs:
            fail(f"second edge between {e.src} and {e.dst}", key)
        pairs.add(pair)
        degree[e.src] += e.fwd
        degree[e.dst] += e.bwd
    looped = set()
    for lp in spec.loops:
        key = ("loop", lp.at)
        if lp.at not in ids:
            fail(f"unknown vertex {lp.at!r} in loop", key)
        if lp.index < 1:
            fail(f"loop at {lp.at} needs a positive index", key)
        if lp.at in looped:
            fail(f"second loop at {lp.at}", key)
        looped.add(lp.at)
        degree[lp.at] += lp.index

    if len(spec.tails) > 2:
        fail("at most two tails are supported")
    used = {v.color for v in spec.vertices}
    for ti, tail in enumerate(spec.tails):
        key = ("tail", ti)
        if tail.attach not in ids:
            fail(f"tail attaches to unknown vertex {tail.attach!r}", key)
        if tail.attach_fwd < 1 or tail.attach_bwd < 1:
            fail("tail attachment needs positive indices", key)
        if tail.kind not in ("periodic", "substitution"):
            fail(f"unknown tail kind {tail.kind!r}", key)
        if not tail.templates:
            fail("tail without templates", key)
        names = [t.name for t in tail.templates]
        if len(set(names)) != len(names):
            fail("duplicate template name", key)
        for t in tail.templates:
            if t.color not in colors:
                fail(f"template {t.name} uses undeclared color {t.color!r}", key)
            if t.loop < 0 or t.fwd < 1 or t.bwd < 1:
                fail(f"template {t.name} has a bad index", key)
        degree[tail.attach] += tail.attach_fwd
        tpl = tail.templates
        if tail.kind == "periodic":
            if tail.rules or tail.seed:
                fail("periodic tail cannot carry substitution rules", key)
            if tail.attach_bwd != tpl[-1].bwd:
                fail(
                    f"tail attach bwd={tail.attach_bwd} must equal the last "
                    f"template's bwd={tpl[-1].bwd}",
                    key,
                )
            p = len(tpl)
            for a, t in enumerate(tpl):
                s = t.loop + t.fwd + tpl[(a - 1) % p].bwd
                if s != d:
                    fail(f"degree mismatch at template {t.name}: sum {s} != {d}", key)
            used.update(t.color for t in tpl)
        else:
            triples = {(t.loop, t.fwd, t.bwd) for t in tpl}
            if len(triples) != 1:
                fail("substitution templates must share loop/fwd/bwd indices", key)
            loop_, fwd, bwd = triples.pop()
            if tail.attach_bwd != bwd:
                fail("tail attach bwd must equal the template bwd", key)
            if loop_ + fwd + bwd != d:
                fail(f"degree mismatch in substitution templates: sum "
                     f"{loop_ + fwd + bwd} != {d}", key)
            rules = dict(tail.rules)
            if set(rules) != set(names):
                fail("substitution rules must cover exactly the template names", key)
            for sym, word in tail.rules:
                if not word or any(ch not in rules for ch in word):
                    fail(f"rule {sym}->{word} uses unknown symbols", key)
            if tail.seed not in rules:
                fail(f"unknown seed {tail.seed!r}", key)
            if any(len(n) != 1 for n in names):
                fail("substitution template names must be single characters", key)
            try:
                seen = set(tail.symbols(4 * len(names) + 8))
            except HorizonError as exc:
                fail(str(exc), key)
            used.update(tail.template(s).color for s in seen)

    for vid, total in degree.items():
        if total != d:
            fail(f"degree mismatch at vertex {vid}: sum {total} != {d}", ("vertex", vid))

    adj = {vid: set() for vid in ids}
    for e in spec.edges:
        adj[e.src].add(e.dst)
        adj[e.dst].add(e.src)
    start = spec.vertices[0].id
    seen_v = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen_v:
                seen_v.add(y)
                queue.append(y)
    if len(seen_v) != len(ids):
        missing = sorted(set(ids) - seen_v)
        fail(f"graph is disconnected: {', '.join(missing)} unreachable")

    unused = [c for c in spec.alphabet if c not in used]
    if unused:
        fail(f"unused alphabet color(s): {', '.join(unused)}", "alphabet")


# ---------------------------------------------------------------------------
# qst text format

_KV = re.compile(r"^([a-z_]+)=(\S+)$")


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno) from None


def _kv(tokens: list[str], allowed: tuple[str, ...], lineno: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        m = _KV.match(tok)
        if not m:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        k, v = m.groups()
        if k not in allowed:
            raise ParseError(f"unknown key {k!r}", lineno)
        if k in out:
            raise ParseError(f"repeated key {k!r}", lineno)
        out[k] = v
    missing = [k for k in allowed if k not in out]
    if missing:
        raise ParseError(f"missing key(s): {', '.join(missing)}", lineno)
    return out


def parse_spec(text: str) -> QuotientSpec:
    """Parse and validate a qst document."""
    degree = None
    alphabet: list[str] = []
    vertices: list[FiniteVertex] = []
    edges: list[IndexedEdge] = []
    loops: list[Loop] = []
    tails: list[dict] = []
    lines: dict = {}
    header_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        toks = line.split()
        if not header_seen:
            if toks != ["qst", "1"]:
                raise ParseError("document must start with 'qst 1'", lineno)
            header_seen = True
            continue
        head, rest = toks[0], toks[1:]
        if indented:
            if not tails:
                raise ParseError("indented line outside a tail block", lineno)
            tail = tails[-1]
            if head == "template":
                if not rest:
                    raise ParseError("template needs a name", lineno)
                kv = _kv(rest[1:], ("color", "loop", "fwd", "bwd"), lineno)
                tail["templates"].append(Template(
                    rest[0], kv["color"],
                    _int(kv["loop"], lineno, "loop"),
                    _int(kv["fwd"], lineno, "fwd"),
                    _int(kv["bwd"], lineno, "bwd"),
                ))
            elif head == "rules":
                if tail["kind"] != "substitution":
                    raise ParseError("rules only allowed in substitution tails", lineno)
                if len(rest) != 3 or rest[1] != "seed":
                    raise ParseError("expected 'rules <A>-><w>,... seed <A>'", lineno)
                rules = []
                for part in rest[0].split(","):
                    if "->" not in part:
                        raise ParseError(f"bad rule {part!r}", lineno)
                    sym, word = part.split("->", 1)
                    rules.append((sym, word))
                tail["rules"] = tuple(rules)
                tail["seed"] = rest[2]
            else:
                raise ParseError(f"unknown tail directive {head!r}", lineno)
            continue

        if head == "degree":
            if len(rest) != 1:
                raise ParseError("expected 'degree <d>'", lineno)
            degree = _int(rest[0], lineno, "degree")
            lines["degree"] = lineno
        elif head == "alphabet":
            if not rest:
                raise ParseError("empty alphabet", lineno)
            alphabet.extend(rest)
            lines["alphabet"] = lineno
        elif head == "vertex":
            if len(rest) != 2:
                raise ParseError("expected 'vertex <id> color=<c>'", lineno)
            kv = _kv(rest[1:], ("color",), lineno)
            vertices.append(FiniteVertex(rest[0], kv["color"]))
            lines.setdefault(("vertex", rest[0]), lineno)
        elif head == "edge":
            if len(rest) != 4:
                raise ParseError("expected 'edge <id1> <id2> <fwd> <bwd>'", lineno)
            edges.append(IndexedEdge(rest[0], rest[1],
                                     _int(rest[2], lineno, "fwd"),
                                     _int(rest[3], lineno, "bwd")))
            lines[("edge", rest[0], rest[1])] = lineno
        elif head == "loop":
            if len(rest) != 2:
                raise ParseError("expected 'loop <id> <k>'", lineno)
            loops.append(Loop(rest[0], _int(rest[1], lineno, "loop index")))
            lines[("loop", rest[0])] = lineno
        elif head == "tail":
            kv = _kv(rest, ("attach", "fwd", "bwd", "kind"), lineno)
            lines[("tail", len(tails))] = lineno
            tails.append(dict(
                attach=kv["attach"],
                attach_fwd=_int(kv["fwd"], lineno, "fwd"),
                attach_bwd=_int(kv["bwd"], lineno, "bwd"),
                kind=kv["kind"], templates=[], rules=(), seed=None,
            ))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    if not header_seen:
        raise ParseError("empty document")
    if degree is None:
        raise ParseError("missing 'degree' line")
    if not alphabet:
        raise ParseError("missing 'alphabet' line")
    tail_specs = tuple(
        TailSpec(t["attach"], t["attach_fwd"], t["attach_bwd"], t["kind"],
                 tuple(t["templates"]), t["rules"], t["seed"])
        for t in tails
    )
    return QuotientSpec(degree, tuple(alphabet), tuple(vertices), tuple(edges),
                        tuple(loops), tail_specs, source_lines=lines)


def serialize(spec: QuotientSpec) -> str:
    out = ["qst 1", f"degree {spec.degree}", "alphabet " + " ".join(spec.alphabet)]
    out += [f"vertex {v.id} color={v.color}" for v in spec.vertices]
    out += [f"edge {e.src} {e.dst} {e.fwd} {e.bwd}" for e in spec.edges]
    out += [f"loop {lp.at} {lp.index}" for lp in spec.loops]
    for t in spec.tails:
        out.append(f"tail attach={t.attach} fwd={t.attach_fwd} bwd={t.attach_bwd} kind={t.kind}")
        for tp in t.templates:
            out.append(f"  template {tp.name} color={tp.color} loop={tp.loop} "
                       f"fwd={tp.fwd} bwd={tp.bwd}")
        if t.kind == "substitution":
            rules = ",".join(f"{s}->{w}" for s, w in t.rules)
            out.append(f"  rules {rules} seed {t.seed}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# spec transforms

def promote_tail_prefix(spec: QuotientSpec, count: int, tail_index: int = 0) -> QuotientSpec:
    """Turn the first ``count`` occurrences of a periodic tail into finite vertices."""
    if count <= 0:
        return spec
    tail = spec.tails[tail_index]
    if tail.kind != "periodic":
        raise ValueError("only periodic tails can be promoted")
    taken = {v.id for v in spec.vertices}
    ids = []
    for j in range(count):
        base = f"t{tail_index}_{j}"
        while base in taken:
            base += "_"
        taken.add(base)
        ids.append(base)
    p = len(tail.templates)
    tpl = [tail.templates[j % p] for j in range(count)]
    vertices = list(spec.vertices) + [FiniteVertex(i, t.color) for i, t in zip(ids, tpl)]
    edges = list(spec.edges) + [IndexedEdge(tail.attach, ids[0], tail.attach_fwd, tail.attach_bwd)]
    for j in range(count - 1):
        edges.append(IndexedEdge(ids[j], ids[j + 1], tpl[j].fwd, tpl[j].bwd))
    loops = list(spec.loops) + [Loop(i, t.loop) for i, t in zip(ids, tpl) if t.loop]
    rotated = tuple(tail.templates[(count + a) % p] for a in range(p))
    new_tail = replace(tail, attach=ids[-1], attach_fwd=tpl[-1].fwd,
                       attach_bwd=tpl[-1].bwd, templates=rotated)
    tails = list(spec.tails)
    tails[tail_index] = new_tail
    return QuotientSpec(spec.degree, spec.alphabet, tuple(vertices), tuple(edges),
                        tuple(loops), tuple(tails))


def recolor(spec: QuotientSpec, colors: dict[str, str]) -> QuotientSpec:
    """Give the listed finite vertices new colors; the alphabet becomes the used colors."""
    vertices = tuple(FiniteVertex(v.id, colors.get(v.id, v.color)) for v in spec.vertices)
    used = [v.color for v in vertices]
    for t in spec.tails:
        used += [tp.color for tp in t.templates]
    alphabet = tuple(dict.fromkeys(c for c in list(spec.alphabet) + sorted(set(colors.values()))
                                   if c in used))
    return QuotientSpec(spec.degree, alphabet, vertices, spec.edges, spec.loops, spec.tails)


# ---------------------------------------------------------------------------
# expansion

@dataclass(frozen=True)
class ExpandedVertex:
    label: str
    color: str
    tail: int | None = None
    position: int | None = None
    template: str | None = None

    @property
    def origin(self) -> str:
        return "finite" if self.tail is None else "tail"


@dataclass(eq=False)
class ExpandedGraph:
    """Finite part plus tail occurrences ``0..horizon`` as concrete vertices.

    ``adj[v]`` lists ``(neighbor, index)`` pairs; a loop appears as ``(v, k)``.
    ``reach[v]`` is the graph distance from ``v`` to the nearest vertex whose
    forward neighbor was cut off, so balls of radius ``<= reach[v]`` around
    ``v`` are fully determined.
    """

    spec: QuotientSpec
    horizon: int
    vertices: list[ExpandedVertex]
    adj: list[tuple[tuple[int, int], ...]]
    index: dict[str, int]
    frontier: frozenset[int]
    reach: list[float]
    limb_cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.vertices)

    def tail_vertex(self, tail: int, position: int) -> int:
        return self.index[tail_label(tail, position)]

    def color(self, v: int) -> str:
        return self.vertices[v].color

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self.adj[v] if w != v]

    def index_sum(self, v: int) -> int:
        return sum(k for _, k in self.adj[v])

    def distances(self, source: int, limit: float = float("inf")) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            if dist[x] >= limit:
                continue
            for y, _ in self.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist


def tail_label(tail: int, position: int) -> str:
    return f"T{tail}[{position}]"


def expand_quotient(spec: QuotientSpec, horizon: int) -> ExpandedGraph:
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    vertices: list[ExpandedVertex] = []
    index: dict[str, int] = {}
    links: list[dict[int, int]] = []

    def add(v: ExpandedVertex) -> int:
        index[v.label] = len(vertices)
        vertices.append(v)
        links.append({})
        return index[v.label]

    def link(a: int, b: int, fwd: int, bwd: int):
        links[a][b] = fwd
        links[b][a] = bwd

    for v in spec.vertices:
        add(ExpandedVertex(v.id, v.color))
    for e in spec.edges:
        link(index[e.src], index[e.dst], e.fwd, e.bwd)
    for lp in spec.loops:
        links[index[lp.at]][index[lp.at]] = lp.index

    frontier = set()
    for ti, tail in enumerate(spec.tails):
        names = tail.symbols(horizon + 1)
        prev, prev_tpl = index[tail.attach], None
        for j, name in enumerate(names):
            tpl = tail.template(name)
            cur = add(ExpandedVertex(tail_label(ti, j), tpl.color, ti, j, name))
            if tpl.loop:
                links[cur][cur] = tpl.loop
            if prev_tpl is None:
                link(prev, cur, tail.attach_fwd, tail.attach_bwd)
            else:
                link(prev, cur, prev_tpl.fwd, prev_tpl.bwd)
            prev, prev_tpl = cur, tpl
        frontier.add(prev)

    adj = [tuple(sorted(d.items())) for d in links]
    reach = [float("inf")] * len(vertices)
    queue = deque()
    for f in frontier:
        reach[f] = 0
        queue.append(f)
    while queue:
        x = queue.popleft()
        for y, _ in adj[x]:
            if reach[y] == float("inf"):
                reach[y] = reach[x] + 1
                queue.append(y)
    return ExpandedGraph(spec, horizon, vertices, adj, index, frozenset(frontier), reach)


def finite_eccentricity(spec: QuotientSpec, sources: Iterable[str] | None = None) -> int:
    """Largest distance inside the finite part from any tail attachment vertex."""
    adj = {v.id: set() for v in spec.vertices}
    for e in spec.edges:
        adj[e.src].add(e.dst)
        adj[e.dst].add(e.src)
    sources = list(sources) if sources is not None else [t.attach for t in spec.tails]
    best = 0
    for s in sources or [spec.vertices[0].id]:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        best = max(best, max(dist.values()))
    return best
