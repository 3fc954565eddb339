"""Command-line entry point.

    fwloops solve FILE --order ijk --repeats 3 [--trace]
    fwloops search --family perm-path --n 7 --order ijk [--cap 5] [--out PATH]
    fwloops fuzz --n 10 --count 1000 --seed 1 [--out PATH]

Exit codes: 0 success, 1 correctness or bound mismatch, 2 bad input or budget.
"""

from __future__ import annotations

import argparse
import sys
from typing import Iterable, TextIO

from fwloops.core import INF, DistMatrix, GraphInstance, Weight, init_matrix, validate_no_negative_cycle
from fwloops.oracle import apsp_bellman_ford
from fwloops.search import (
    BudgetExceededError,
    FamilyKind,
    FuzzReport,
    InstanceFamily,
    SearchReport,
    find_min_repeats_extremum,
    fuzz_theorems,
)
from fwloops.variants import PassOrder, run_repeated

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class EdgeListError(ValueError):
    def __init__(self, lineno: int | None, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise EdgeListError(lineno, f"non-integer {what} {tok!r}") from None


def parse_edge_list(text: str) -> GraphInstance:
    """Parse ``n m`` followed by ``m`` lines of ``tail head weight``.

    Blank lines and lines starting with ``#`` are skipped.
    """
    lines = [
        (no, ln.split())
        for no, ln in enumerate(text.splitlines(), 1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise EdgeListError(None, "empty document")
    no, head = lines[0]
    if len(head) != 2:
        raise EdgeListError(no, "header must be 'n m'")
    n, m = _int(head[0], no, "vertex count"), _int(head[1], no, "edge count")
    if n < 1 or m < 0:
        raise EdgeListError(no, f"bad header n={n} m={m}")
    body = lines[1:]
    if len(body) != m:
        raise EdgeListError(None, f"header declares {m} edges, found {len(body)}")
    edges = []
    for no, toks in body:
        if len(toks) != 3:
            raise EdgeListError(no, "expected 'tail head weight'")
        u = _int(toks[0], no, "tail")
        v = _int(toks[1], no, "head")
        w = _int(toks[2], no, "weight")
        if not (1 <= u <= n and 1 <= v <= n):
            raise EdgeListError(no, f"vertex out of range 1..{n}")
        edges.append((u, v, w))
    try:
        return GraphInstance.from_edges(n, edges)
    except (ValueError, OverflowError) as e:
        raise EdgeListError(None, str(e)) from None


def format_edge_list(g: GraphInstance) -> str:
    edges = list(g.edges())
    return "\n".join([f"{g.n} {len(edges)}"] + [f"{u} {v} {w}" for u, v, w in edges]) + "\n"


def _cell(x: Weight) -> str:
    return "INF" if x == INF else str(x)


def format_matrix(d: DistMatrix) -> str:
    cells = [[_cell(x) for x in row] for row in d.rows()]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def command_solve(path: str, order: PassOrder, repeats: int, trace: bool, out: TextIO) -> int:
    try:
        with open(path, encoding="utf-8") as fh:
            g = parse_edge_list(fh.read())
    except (OSError, EdgeListError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    cycle = validate_no_negative_cycle(g)
    if cycle is not None:
        print(f"error: negative cycle {list(cycle)}", file=sys.stderr)
        return EXIT_INPUT
    if repeats < 1:
        print("error: --repeats must be >= 1", file=sys.stderr)
        return EXIT_INPUT

    run = run_repeated(init_matrix(g), order, repeats)
    if trace:
        for k, (snap, changed) in enumerate(zip(run.snapshots, run.changed), 1):
            print(f"pass {k} changed={str(changed).lower()}", file=out)
            print(format_matrix(snap), file=out)
    print(f"final ({order} x {repeats})", file=out)
    print(format_matrix(run.final), file=out)
    diff = run.final.diff(apsp_bellman_ford(g))
    if not diff:
        print("matches shortest-path distances", file=out)
        return EXIT_OK
    print(f"{len(diff)} entries differ from shortest-path distances:", file=out)
    for i, j, got, want in diff:
        print(f"  d[{i},{j}] = {_cell(got)}, expected {_cell(want)}", file=out)
    return EXIT_MISMATCH


def _witness_value(g: GraphInstance) -> str:
    return format_edge_list(g).strip().replace("\n", "|")


def witness_documents(report_text: str) -> list[str]:
    """Edge-list documents of the ``witness.*`` lines in a report."""
    docs = []
    for line in report_text.splitlines():
        key, _, value = line.partition("=")
        if key.startswith("witness.") and key.endswith(".edges"):
            docs.append(value.replace("|", "\n") + "\n")
    return docs


def _histogram_table(hist: dict[int, int], over: int) -> list[str]:
    rows = ["repeats  instances"]
    rows += [f"{k:>7}  {v:>9}" for k, v in hist.items()]
    if over:
        rows.append(f"{'>cap':>7}  {over:>9}")
    return rows


def _report_lines(rep: SearchReport, prefix: str = "") -> list[str]:
    fam = rep.family
    kv = [
        ("family", fam.kind.value),
        ("n", fam.n),
        ("order", rep.order.value),
        ("cap", rep.cap),
        ("instances_examined", rep.instances_examined),
        ("max_repeats", rep.max_repeats_observed),
        ("bound", rep.order.bound),
        ("bound_respected", str(rep.bound_respected).lower()),
    ]
    kv += [(f"histogram.{k}", v) for k, v in rep.histogram.items()]
    kv.append(("cap_exceeded", len(rep.cap_exceeded)))
    kv.append(("witness_count", rep.witness_count))
    for idx, (g, r) in enumerate(rep.witnesses, 1):
        kv.append((f"witness.{idx}.repeats", r))
        kv.append((f"witness.{idx}.edges", _witness_value(g)))
    for idx, g in enumerate(rep.cap_exceeded, 1):
        kv.append((f"violation.{idx}.edges", _witness_value(g)))
    return [f"{prefix}{k}={v}" for k, v in kv]


def render_search_report(rep: SearchReport) -> str:
    lines = [
        "# exhaustive search",
        f"family: {rep.family.describe()} (minimality claims hold within this family only)",
        f"order: {rep.order}  cap: {rep.cap}  instances: {rep.instances_examined}",
        "",
        *_histogram_table(rep.histogram, len(rep.cap_exceeded)),
        "",
        "[machine]",
        *_report_lines(rep),
    ]
    return "\n".join(lines) + "\n"


def render_fuzz_report(rep: FuzzReport) -> str:
    lines = [
        "# fuzz",
        f"family: {rep.family.describe()}  seed: {rep.seed}",
        f"instances: {rep.instances_examined}  discarded (negative cycle): {rep.discarded}",
        f"violations: {len(rep.violations)}",
    ]
    for order, sub in rep.reports.items():
        lines += ["", f"{order} (bound {order.bound})"]
        lines += _histogram_table(sub.histogram, len(sub.cap_exceeded))
    lines += [
        "",
        "[machine]",
        f"seed={rep.seed}",
        f"instances_examined={rep.instances_examined}",
        f"discarded={rep.discarded}",
        f"violations={len(rep.violations)}",
    ]
    for order, sub in rep.reports.items():
        lines += _report_lines(sub, prefix=f"{order}.")
    for idx, v in enumerate(rep.violations, 1):
        lines.append(f"violation.{idx}.order={v.order}")
        lines.append(f"violation.{idx}.repeats={v.repeats if v.repeats else 'cap'}")
        lines.append(f"violation.{idx}.edges={_witness_value(v.instance)}")
        if v.minimized is not None:
            lines.append(f"violation.{idx}.minimized={_witness_value(v.minimized)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None, out: TextIO) -> None:
    out.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def command_search(
    family: InstanceFamily,
    order: PassOrder,
    cap: int | None,
    out_path: str | None,
    out: TextIO,
    max_witnesses: int | None = 20,
) -> int:
    try:
        rep = find_min_repeats_extremum(family, order, cap, max_witnesses=max_witnesses)
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    _emit(render_search_report(rep), out_path, out)
    return EXIT_OK if rep.bound_respected else EXIT_MISMATCH


def command_fuzz(family: InstanceFamily, count: int, seed: int, out_path: str | None, out: TextIO) -> int:
    rep = fuzz_theorems(family, count, seed)
    _emit(render_fuzz_report(rep), out_path, out)
    return EXIT_OK if rep.ok else EXIT_MISMATCH


_FAMILIES = {k.value: k for k in FamilyKind}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fwloops", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    orders = [o.value for o in PassOrder]

    s = sub.add_parser("solve", help="run a loop order on an edge-list file")
    s.add_argument("file")
    s.add_argument("--order", choices=orders, default="kij")
    s.add_argument("--repeats", type=int, default=1)
    s.add_argument("--trace", action="store_true", help="print every pass")

    s = sub.add_parser("search", help="exhaustive repeat-count search")
    s.add_argument("--family", choices=["perm-path", "unit-digraphs"], default="perm-path")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--order", choices=orders, default="ijk")
    s.add_argument("--cap", type=int)
    s.add_argument("--max-witnesses", type=int, default=20)
    s.add_argument("--out")

    s = sub.add_parser("fuzz", help="random differential test of the repeat bounds")
    s.add_argument("--family", choices=["random"], default="random")
    s.add_argument("--n", type=int, default=10, help="largest vertex count")
    s.add_argument("--n-min", type=int, default=1)
    s.add_argument("--density", type=float, default=0.4)
    s.add_argument("--wmin", type=int, default=-5)
    s.add_argument("--wmax", type=int, default=20)
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    return p


def main(argv: Iterable[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(None if argv is None else list(argv))
    if args.command == "solve":
        return command_solve(args.file, PassOrder(args.order), args.repeats, args.trace, out)
    try:
        if args.command == "search":
            family = InstanceFamily(_FAMILIES[args.family], args.n)
            return command_search(
                family, PassOrder(args.order), args.cap, args.out, out, args.max_witnesses
            )
        family = InstanceFamily(
            FamilyKind.RANDOM_WEIGHTED,
            args.n,
            density=args.density,
            w_min=args.wmin,
            w_max=args.wmax,
            n_min=min(args.n_min, args.n),
        )
        if args.count < 0:
            raise ValueError("--count must be >= 0")
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return command_fuzz(family, args.count, args.seed, args.out, out)


if __name__ == "__main__":
    sys.exit(main())
