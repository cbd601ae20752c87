"""Command-line front end.

Exit codes: 0 success, 1 parse/validation error, 2 inconsistency with a
structural claim, 3 horizon or search-cap insufficiency.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import checks
from .census import build_census, complexity_profile
from .errors import QstError
from .factor_graph import adjacency_table, build_factor_graph, evolve, identify_lineage
from .fixtures import fixture_text
from .quotient import QuotientSpec, parse_spec
from .recurrence import recurrence_profile
from .structure import build_periodic_extension, derive_Z, structure_report
from .words import X_word, word_adapter

EPILOG = """\
<spec> is a path to a qst document, '-' for stdin, or a fixture id:
ex-basic[:c], ex-nonray, ex-n0eq1, ex-loops-n0eq1, ex-cycleG, ex-n0-ne-n1,
mono[:d], sturmian-fib, word:k (word fixtures only work with 'example').

Environment: QSTREE_HORIZON_SLACK (integer >= 0, default 0) widens the tail
horizon used for every census.
"""


def load_spec(ref: str) -> QuotientSpec:
    if ref == "-":
        return parse_spec(sys.stdin.read())
    path = Path(ref)
    if path.exists():
        return parse_spec(path.read_text(encoding="utf-8"))
    try:
        text = fixture_text(ref)
    except (KeyError, ValueError):
        raise QstError(f"no such file or fixture: {ref}") from None
    return parse_spec(text)


def _out(lines) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_validate(args) -> int:
    spec = load_spec(args.spec)
    kinds = ",".join(t.kind for t in spec.tails) or "none"
    _out([f"ok degree={spec.degree} colors={len(spec.alphabet)} "
          f"vertices={len(spec.vertices)} tails={len(spec.tails)} kinds={kinds}"])
    return 0


def cmd_example(args) -> int:
    name = args.fixture
    if name.startswith("word"):
        _, _, k = name.partition(":")
        k = int(k) if k else 3
        w = word_adapter(k + 5)
        lines = [f"# word fixture X_{k} (2-regular tree)", X_word(k)]
        lines.append(f"# n_k={2 ** k - 1} |X_k|={len(X_word(k))} b(n_k)={w.b(2 ** k - 1)}")
        _out(lines)
        return 0
    try:
        sys.stdout.write(fixture_text(name))
    except (KeyError, ValueError):
        raise QstError(f"unknown fixture: {name}") from None
    return 0


def cmd_complexity(args) -> int:
    spec = load_spec(args.spec)
    census = build_census(spec, args.max_n + 1, workers=args.workers)
    b = census.b
    rows = ["n,b,specials,increment"]
    for n in range(args.max_n + 1):
        spec_count = sum(1 for r in census.classes[n].values() if r.is_special)
        rows.append(f"{n},{b[n]},{spec_count},{b[n + 1] - b[n]}")
    text = "\n".join(rows) + "\n"
    prof = complexity_profile(census)
    summary = [f"N0={prof.N0 if prof.N0 is not None else 'none'}",
               f"c={prof.c if prof.c is not None else 'none'}",
               f"verdict={prof.verdict}", "window-relative=yes"]
    if args.csv:
        Path(args.csv).write_text(text)
        _out(summary)
    else:
        sys.stdout.write(text)
    return 0


def cmd_balls(args) -> int:
    spec = load_spec(args.spec)
    census = build_census(spec, args.n + 1, workers=args.workers)
    lines = []
    for code, rec in sorted(census.classes[args.n].items(),
                            key=lambda kv: [int(x) for x in kv[1].label.split(".")]):
        wit = ",".join(census.witness_labels(code)[:6])
        more = "" if len(rec.witnesses) <= 6 else f",+{len(rec.witnesses) - 6}"
        line = f"{rec.label} ext={len(rec.extensions)} special={'yes' if rec.is_special else 'no'} witnesses={wit}{more}"
        if args.codes:
            line += f" code={code.string}"
        lines.append(line)
    _out(lines)
    return 0


def cmd_factor_graph(args) -> int:
    spec = load_spec(args.spec)
    n = args.n
    census = build_census(spec, n + 2, workers=args.workers)
    fg = build_factor_graph(census, n)
    prof = complexity_profile(census)
    if prof.N0 is not None and n > prof.N0:
        lin = identify_lineage(census, prof.N0)
        fg.markers = lin.markers(n)
        if fg.markers is not None:
            from .factor_graph import classify_markers, first_K
            fg.case = classify_markers(fg.markers, first_K(lin))
    lines = [f"n={n} vertices={len(fg.vertices)} case={fg.case or 'none'}"]
    if fg.markers is not None:
        m = fg.markers
        lines.append("markers " + " ".join(f"{k}={census.label(getattr(m, k))}" for k in "SABC"))
    for (D, E), kind in sorted(adjacency_table(census, n).items(),
                               key=lambda kv: (census.label(kv[0][0]), census.label(kv[0][1]))):
        lines.append(f"edge {census.label(D)} {census.label(E)} {kind}")
    _out(lines)
    if args.dot:
        Path(args.dot).write_text(fg.to_dot())
    return 0


def cmd_evolve(args) -> int:
    spec = load_spec(args.spec)
    census = build_census(spec, args.to + 2, workers=args.workers)
    g_labels = None
    rep = structure_report(spec, census)
    if rep.G:
        g_labels = set(rep.G)
    tr = evolve(spec, args.start, args.to, census=census, g_labels=g_labels)
    lines = [f"N0={tr.N0} K={tr.K if tr.K is not None else 'beyond-window'} "
             f"seed={tr.seed_rule} coloring={tr.cyclic}"]
    for n, lab in tr.labels.items():
        chk = tr.checks[n]
        extra = f" m={tr.m_values[n]}" if n in tr.m_values else ""
        lines.append(f"{n},{lab},deg_S={chk.s_degree},linear={'yes' if chk.linear else 'no'},"
                     f"linear_off_G={'yes' if chk.linear_off_G else 'no'}{extra}")
    lines.append("n_k=" + (",".join(map(str, tr.n_k)) or "-"))
    for n, msg in tr.violations:
        lines.append(f"violation {n}: {msg}")
    _out(lines)
    return 2 if tr.violations else 0


def cmd_structure(args) -> int:
    spec = load_spec(args.spec)
    census = build_census(spec, args.max_n, workers=args.workers)
    rep = structure_report(spec, census)
    lines = rep.lines()
    if rep.bounded == "bounded" and rep.N1 is not None:
        z = derive_Z(spec, census, rep)
        lines.append(f"Z={z.describe()}")
        lines.append("Z_loops_as_cycles=no")
        ext = build_periodic_extension(spec, census, rep, z)
        lines.append(f"extension_b={','.join(map(str, ext.b))}")
        from .factor_graph import detect_cyclic
        cyc, loops = detect_cyclic(census, rep.N0)
        lines.append(f"coloring={cyc}")
        if loops:
            lines.append("self_loop_at_S=" + ",".join(map(str, loops)))
        if (cyc == "cyclic") != (z.topology == "cycle"):
            lines.append("mismatch=cyclic-coloring-vs-Z-topology")
        if args.z_out:
            from .quotient import serialize
            Path(args.z_out).write_text(serialize(ext.spec))
    _out(lines)
    return 0


def cmd_recurrence(args) -> int:
    spec = load_spec(args.spec)
    # predictions look ahead to the next n_k, which can sit near 2n
    top = 2 * args.max_n + 4 if args.predict else args.max_n + 4
    census = build_census(spec, top, workers=args.workers)
    rep = trace = topo = None
    if args.predict:
        rep = structure_report(spec, census)
        if rep.bounded == "bounded" and rep.N1 is not None:
            topo = derive_Z(spec, census, rep).topology
        if rep.N0 is not None:
            trace = evolve(spec, rep.N0 + 1, census.N - 2, census=census)
    prof = recurrence_profile(census, args.max_n, report=rep, trace=trace,
                              z_topology=topo, predict=args.predict)
    sys.stdout.write(prof.csv())
    return 0


def cmd_check(args) -> int:
    spec = load_spec(args.spec)
    results = checks.run_all(spec, args.max_n, workers=args.workers)
    _out([r.line() for r in results])
    failed = [r for r in results if r.status == "FAIL"]
    return 2 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qstree", description=__doc__.splitlines()[0],
                                epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--workers", type=int, default=None,
                   help="threads for per-vertex unfolding (default: serial)")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("validate", help="parse and validate a qst document")
    s.add_argument("spec")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("example", help="print an embedded fixture")
    s.add_argument("fixture")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("complexity", help="b(n) table as CSV")
    s.add_argument("spec")
    s.add_argument("--max-n", type=int, default=12, help="largest radius (default 12)")
    s.add_argument("--csv", help="write the table here instead of stdout")
    s.set_defaults(func=cmd_complexity)

    s = sub.add_parser("balls", help="list the ball classes of one radius")
    s.add_argument("spec")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--codes", action="store_true", help="print canonical strings")
    s.set_defaults(func=cmd_balls)

    s = sub.add_parser("factor-graph", help="factor graph of one radius")
    s.add_argument("spec")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--dot", help="write DOT here")
    s.set_defaults(func=cmd_factor_graph)

    s = sub.add_parser("evolve", help="case labels over a radius range")
    s.add_argument("spec")
    s.add_argument("--from", dest="start", type=int, required=True)
    s.add_argument("--to", type=int, required=True)
    s.set_defaults(func=cmd_evolve)

    s = sub.add_parser("structure", help="N1, G, Z and the periodic extension")
    s.add_argument("spec")
    s.add_argument("--max-n", type=int, default=12, help="census radius (default 12)")
    s.add_argument("--z-out", help="write the periodic extension (Z) as qst here")
    s.set_defaults(func=cmd_structure)

    s = sub.add_parser("recurrence", help="R'' and R as CSV")
    s.add_argument("spec")
    s.add_argument("--max-n", type=int, default=10, help="largest radius (default 10)")
    s.add_argument("--predict", action="store_true", help="add closed-form predictions")
    s.set_defaults(func=cmd_recurrence)

    s = sub.add_parser("check", help="run every invariant and structural claim")
    s.add_argument("spec")
    s.add_argument("--max-n", type=int, default=10, help="largest radius (default 10)")
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QstError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
