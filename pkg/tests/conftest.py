from functools import lru_cache

import pytest

from qstree.census import build_census
from qstree.fixtures import BOUNDED, fixture

FIB = """\
qst 1
degree 3
alphabet a b
vertex v color=a
loop v 2
tail attach=v fwd=1 bwd=1 kind=substitution
  template A color=a loop=1 fwd=1 bwd=1
  template B color=b loop=1 fwd=1 bwd=1
  rules A->AB,B->A seed A
"""


@lru_cache(maxsize=None)
def census_of(name: str, N: int):
    return build_census(fixture(name), N)


@pytest.fixture(params=BOUNDED)
def bounded_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    rows = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when == "call" and "test_criterion_" in rep.nodeid:
                name = rep.nodeid.split("test_criterion_")[1]
                rows.append((int(name.split("_")[0]), status, name))
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for num, status, name in sorted(rows):
            terminalreporter.write_line(f"criterion {num}: {'PASS' if status == 'passed' else 'FAIL'}  ({name})")
