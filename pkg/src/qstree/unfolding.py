"""Colored balls of the covering tree and their canonical codes.

Balls are stored as hash-consed rooted trees: a node is ``(color, children)``
with the children kept as a sorted tuple of node ids, so two nodes share an id
exactly when the rooted colored trees below them are isomorphic. A ball's code
is therefore just the id of its root node together with its radius.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import HorizonError
from .quotient import ExpandedGraph


class Interner:
    """Process-wide table of canonical tree nodes."""

    def __init__(self):
        self._ids: dict[tuple, int] = {}
        self._nodes: list[tuple[str, tuple[int, ...]]] = []
        self._strings: dict[int, str] = {}
        self._lock = threading.Lock()

    def node(self, color: str, children) -> int:
        key = (color, tuple(sorted(children)))
        found = self._ids.get(key)
        if found is not None:
            return found
        with self._lock:
            found = self._ids.get(key)
            if found is None:
                found = len(self._nodes)
                self._nodes.append(key)
                self._ids[key] = found
            return found

    def color(self, nid: int) -> str:
        return self._nodes[nid][0]

    def children(self, nid: int) -> tuple[int, ...]:
        return self._nodes[nid][1]

    def string(self, nid: int) -> str:
        """Canonical bracket form ``(<color> <child>...)`` with children sorted lexicographically."""
        cached = self._strings.get(nid)
        if cached is not None:
            return cached
        # iterative post-order keeps deep trees off the recursion limit
        stack = [nid]
        while stack:
            top = stack[-1]
            if top in self._strings:
                stack.pop()
                continue
            pending = [c for c in set(self.children(top)) if c not in self._strings]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            parts = sorted(self._strings[c] for c in self.children(top))
            body = " ".join([self.color(top)] + parts)
            self._strings[top] = f"({body})"
        return self._strings[nid]

    def size(self, nid: int) -> int:
        @lru_cache(maxsize=None)
        def count(x):
            return 1 + sum(count(c) for c in self.children(x))
        return count(nid)

    def truncate(self, nid: int, depth: int) -> int:
        """The subtree of ``nid`` cut at ``depth`` levels below it."""
        return _truncate(self, nid, depth)


_truncate_cache: dict[tuple[int, int, int], int] = {}


def _truncate(interner: Interner, nid: int, depth: int) -> int:
    key = (id(interner), nid, depth)
    hit = _truncate_cache.get(key)
    if hit is not None:
        return hit
    if depth == 0:
        out = interner.node(interner.color(nid), ())
    else:
        kids = interner.children(nid)
        out = interner.node(interner.color(nid), [_truncate(interner, c, depth - 1) for c in kids])
    _truncate_cache[key] = out
    return out


INTERNER = Interner()


@dataclass(frozen=True)
class BallCode:
    radius: int
    key: int

    @property
    def string(self) -> str:
        return INTERNER.string(self.key)


@dataclass(frozen=True)
class ColoredBall:
    radius: int
    node: int
    provenance: str | None = None

    @property
    def color(self) -> str:
        return INTERNER.color(self.node)

    @property
    def subtrees(self) -> tuple[int, ...]:
        return INTERNER.children(self.node)

    def size(self) -> int:
        return INTERNER.size(self.node)


def _limb(graph: ExpandedGraph, x: int, parent: int, depth: int) -> int:
    """Node id of the branch at ``x`` entered from ``parent``, ``depth`` levels deep."""
    cache = graph.limb_cache
    key = (x, parent, depth)
    hit = cache.get(key)
    if hit is not None:
        return hit
    color = graph.vertices[x].color
    if depth == 0:
        out = INTERNER.node(color, ())
    else:
        if x in graph.frontier:
            raise HorizonError(f"vertex {graph.vertices[x].label} lies on the expansion frontier")
        kids = []
        for y, k in graph.adj[x]:
            count = k - 1 if y == parent else k
            if count:
                kids.extend([_limb(graph, y, x, depth - 1)] * count)
        out = INTERNER.node(color, kids)
    cache[key] = out
    return out


def unfold_ball(graph: ExpandedGraph, base: int | str, n: int) -> ColoredBall:
    """Radius-``n`` ball around a lift of ``base`` in the covering tree."""
    if isinstance(base, str):
        base = graph.index[base]
    if n < 0:
        raise ValueError("radius must be >= 0")
    if graph.reach[base] < n:
        raise HorizonError(
            f"horizon {graph.horizon} too short for radius {n} at {graph.vertices[base].label}"
        )
    key = (base, -1, n)
    node = graph.limb_cache.get(key)
    if node is None:
        color = graph.vertices[base].color
        if n == 0:
            node = INTERNER.node(color, ())
        else:
            kids = []
            for y, k in graph.adj[base]:
                kids.extend([_limb(graph, y, base, n - 1)] * k)
            node = INTERNER.node(color, kids)
        graph.limb_cache[key] = node
    return ColoredBall(n, node, graph.vertices[base].label)


def canonical_code(ball: ColoredBall) -> BallCode:
    return BallCode(ball.radius, ball.node)


def ball_of(code: BallCode) -> ColoredBall:
    return ColoredBall(code.radius, code.key)


def restrict_ball(ball: ColoredBall, m: int) -> ColoredBall:
    if m > ball.radius or m < 0:
        raise ValueError(f"cannot restrict a radius-{ball.radius} ball to radius {m}")
    if m == ball.radius:
        return ball
    return ColoredBall(m, INTERNER.truncate(ball.node, m), ball.provenance)


def interior_classes(ball: ColoredBall, n: int) -> Counter:
    """Codes of the radius-``n`` balls centered at nodes of depth ``<= radius - n``."""
    R = ball.radius
    if n > R or n < 0:
        raise ValueError(f"cannot take radius-{n} balls inside a radius-{R} ball")
    it = INTERNER
    out: Counter = Counter()
    span = R - n

    if n == 0:
        @lru_cache(maxsize=None)
        def colors(nid, depth):
            c = Counter({it.color(nid): 1})
            if depth < span:
                for ch in it.children(nid):
                    c.update(colors(ch, depth + 1))
            return c
        for color, cnt in colors(ball.node, 0).items():
            out[BallCode(0, it.node(color, ()))] += cnt
        return out

    @lru_cache(maxsize=None)
    def walk(nid: int, up: int | None, depth: int) -> Counter:
        down = it.children(nid)
        around = list(down) + ([up] if up is not None else [])
        center = it.node(it.color(nid), [it.truncate(c, n - 1) for c in around])
        acc = Counter({center: 1})
        if depth < span:
            for i, child in enumerate(down):
                if i and down[i - 1] == child:
                    acc.update(last)
                    continue
                rest = list(down[:i]) + list(down[i + 1:])
                if up is not None:
                    rest.append(up)
                if n == 1:
                    new_up = it.node(it.color(nid), ())
                else:
                    new_up = it.node(it.color(nid), [it.truncate(c, n - 2) for c in rest])
                last = walk(child, new_up, depth + 1)
                acc.update(last)
        return acc

    for key, cnt in walk(ball.node, None, 0).items():
        out[BallCode(n, key)] += cnt
    return out


def ball_node_count(d: int, n: int) -> int:
    if d == 2:
        return 2 * n + 1
    return 1 + d * ((d - 1) ** n - 1) // (d - 2)
