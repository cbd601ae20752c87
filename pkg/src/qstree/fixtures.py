"""Embedded qst documents for the worked examples.

Colors: ``b`` is a filled dot, ``w`` a hollow dot, ``x`` a crossed dot.
Every edge index is read off the example figures (the label next to ``x``
on the edge ``x - y`` is ``i(x, y)``).
"""

from __future__ import annotations

from .quotient import QuotientSpec, parse_spec

EX_NONRAY = """\
qst 1
# two leaves hanging off the root of a ray
degree 3
alphabet b w x
vertex w0 color=w
vertex x0 color=x
vertex b1 color=b
edge w0 b1 3 1
edge x0 b1 3 1
tail attach=b1 fwd=1 bwd=1 kind=periodic
  template r color=b loop=0 fwd=2 bwd=1
"""

EX_N0EQ1 = """\
qst 1
degree 3
alphabet b w x
vertex x0 color=x
vertex b0 color=b
vertex w0 color=w
edge x0 b0 3 1
edge b0 w0 1 2
loop b0 1
tail attach=w0 fwd=1 bwd=1 kind=periodic
  template t0 color=b loop=0 fwd=2 bwd=1
  template t1 color=w loop=0 fwd=2 bwd=1
  template t2 color=b loop=1 fwd=1 bwd=2
  template t3 color=w loop=0 fwd=1 bwd=2
  template t4 color=b loop=0 fwd=1 bwd=1
  template t5 color=w loop=0 fwd=2 bwd=1
  template t6 color=b loop=1 fwd=1 bwd=2
  template t7 color=w loop=0 fwd=1 bwd=1
"""

EX_LOOPS_N0EQ1 = """\
qst 1
degree 3
alphabet b w x
vertex bt color=b
vertex bb color=b
vertex w0 color=w
vertex b1 color=b
edge bt w0 1 1
edge bb w0 2 1
edge w0 b1 1 1
loop bt 2
loop bb 1
tail attach=b1 fwd=2 bwd=1 kind=periodic
  template r color=x loop=0 fwd=2 bwd=1
"""

EX_CYCLE_G = """\
qst 1
degree 3
alphabet b w x
vertex xt color=x
vertex bt color=b
vertex bb color=b
vertex w0 color=w
vertex x1 color=x
edge xt bt 3 1
edge bt w0 1 1
edge bb w0 1 2
edge bt x1 1 1
edge bb x1 2 1
tail attach=x1 fwd=1 bwd=1 kind=periodic
  template r color=x loop=0 fwd=2 bwd=1
"""

EX_N0_NE_N1 = """\
qst 1
degree 3
alphabet b w x
vertex x0 color=x
tail attach=x0 fwd=3 bwd=2 kind=periodic
  template t0 color=b loop=0 fwd=1 bwd=2
  template t1 color=w loop=0 fwd=1 bwd=2
  template t2 color=b loop=0 fwd=1 bwd=2
  template t3 color=x loop=0 fwd=1 bwd=2
"""

# two Fibonacci tails read outward from the middle pair ``ab``: the
# bi-infinite word is a singular Sturmian word, an unbounded-type example
STURMIAN_FIB = """\
qst 1
degree 3
alphabet a b
vertex v1 color=a
vertex v2 color=b
edge v1 v2 1 1
loop v1 1
loop v2 1
tail attach=v1 fwd=1 bwd=1 kind=substitution
  template A color=a loop=1 fwd=1 bwd=1
  template B color=b loop=1 fwd=1 bwd=1
  rules A->AB,B->A seed A
tail attach=v2 fwd=1 bwd=1 kind=substitution
  template A color=a loop=1 fwd=1 bwd=1
  template B color=b loop=1 fwd=1 bwd=1
  rules A->AB,B->A seed A
"""


def ex_basic(c: int = 3) -> str:
    if c < 3:
        raise ValueError("the first example needs c >= 3")
    colors = [f"a{i}" for i in range(1, c + 1)]
    lines = ["qst 1", "degree 3", "alphabet " + " ".join(colors)]
    lines += [f"vertex v{i} color=a{i}" for i in range(1, c)]
    lines.append("edge v1 v2 3 1")
    lines += [f"edge v{i} v{i + 1} 2 1" for i in range(2, c - 1)]
    lines.append(f"tail attach=v{c - 1} fwd=2 bwd=1 kind=periodic")
    lines.append(f"  template r color=a{c} loop=0 fwd=2 bwd=1")
    return "\n".join(lines) + "\n"


def mono(d: int = 3) -> str:
    return f"qst 1\ndegree {d}\nalphabet a\nvertex v color=a\nloop v {d}\n"


STATIC = {
    "ex-nonray": EX_NONRAY,
    "ex-n0eq1": EX_N0EQ1,
    "ex-loops-n0eq1": EX_LOOPS_N0EQ1,
    "ex-cycleG": EX_CYCLE_G,
    "ex-n0-ne-n1": EX_N0_NE_N1,
    "sturmian-fib": STURMIAN_FIB,
}

BOUNDED = ("ex-basic", "ex-nonray", "ex-n0eq1", "ex-loops-n0eq1", "ex-cycleG", "ex-n0-ne-n1")


def fixture_text(name: str) -> str:
    """qst text for ``ex-basic[:c]``, ``mono[:d]`` or one of the static examples."""
    base, _, arg = name.partition(":")
    if base == "ex-basic":
        return ex_basic(int(arg) if arg else 3)
    if base == "mono":
        return mono(int(arg) if arg else 3)
    if base in STATIC and not arg:
        return STATIC[base]
    raise KeyError(name)


def fixture(name: str) -> QuotientSpec:
    return parse_spec(fixture_text(name))
