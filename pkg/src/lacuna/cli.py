"""Command-line interface.

Subcommands: poly (lacking polynomial of a graph), sto (recurrent states),
scan (log-concavity/unimodality sweep over bipartite cells), verify (built-in
golden suite), analyze (diagnostics for a polynomial or graph).

Exit codes: 0 success / all checks pass, 1 verification or scan violation,
2 usage or validation error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import golden
from .analysis import (
    bounds_report,
    conjecture_scan,
    is_log_concave,
    is_unimodal,
    roots,
    RootConvergenceError,
    sector_check,
    write_scan_csv,
)
from .errors import BudgetExceededError
from .graphs import (
    BipartiteSpec,
    Graph,
    GraphError,
    make_complete_bipartite,
    parse_edge_list_text,
)
from .orientations import (
    DEFAULT_ORACLE_EDGE_CAP,
    Orientation,
    comp_box,
    out_degrees,
    sto_by_union,
)
from .polynomials import (
    LackingPolynomial,
    closed_form_2n,
    closed_form_m2,
    lacking_polynomial,
    lacking_polynomial_auto,
    level,
    reverse_coefficients,
)
from .recurrence import sto_bipartite_symmetric, sto_fast

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DEFAULT_LIST_CAP = 10**6


def _default_workers() -> int:
    env = os.environ.get("LACUNA_THREADS")
    if env is not None:
        try:
            value = int(env)
            if value >= 1:
                return value
        except ValueError:
            pass
    return os.cpu_count() or 1


def _add_graph_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--bipartite",
        nargs=2,
        type=int,
        metavar=("M", "N"),
        help="complete bipartite graph K_{M,N} with sink in the M part",
    )
    group.add_argument(
        "--edges",
        type=Path,
        metavar="PATH",
        help="edge-list file: 'V E S' header then E lines 'u v'",
    )


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="worker count (default: LACUNA_THREADS or available parallelism)",
    )
    parser.add_argument(
        "--output",
        type=Path,
        default=None,
        help="write output to this path instead of stdout",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lacuna",
        description=(
            "Exact enumeration of stochastically recurrent sandpile states and "
            "lacking polynomials of sinked graphs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    poly = sub.add_parser("poly", help="compute the lacking polynomial of a graph")
    _add_graph_source(poly)
    poly.add_argument(
        "--engine",
        choices=("auto", "oracle", "flow", "symmetric"),
        default="auto",
        help="auto picks symmetric for bipartite specs, flow for edge lists",
    )
    poly.add_argument("--format", choices=("text", "json"), default="text")
    poly.add_argument(
        "--max-oracle-edges",
        type=int,
        default=DEFAULT_ORACLE_EDGE_CAP,
        help="edge cap for the 2^|E| orientation sweep",
    )
    _add_common(poly)

    sto = sub.add_parser("sto", help="list or count the recurrent states of a graph")
    _add_graph_source(sto)
    mode = sto.add_mutually_exclusive_group(required=True)
    mode.add_argument("--list", action="store_true", help="one configuration per line")
    mode.add_argument("--count", action="store_true", help="print only the cardinality")
    sto.add_argument(
        "--engine",
        choices=("auto", "oracle", "flow", "symmetric"),
        default="auto",
    )
    sto.add_argument(
        "--max-lines",
        type=int,
        default=DEFAULT_LIST_CAP,
        help="refuse list mode above this many configurations",
    )
    sto.add_argument(
        "--max-oracle-edges", type=int, default=DEFAULT_ORACLE_EDGE_CAP
    )
    _add_common(sto)

    scan = sub.add_parser(
        "scan", help="log-concavity/unimodality scan over K_{m,n} cells"
    )
    scan.add_argument(
        "--max-total",
        type=int,
        required=True,
        help="scan every cell with m,n >= 2 and m + n <= this value",
    )
    scan.add_argument(
        "--engine-budget",
        type=float,
        default=None,
        help="per-cell wall-clock soft cap in seconds",
    )
    _add_common(scan)

    verify = sub.add_parser("verify", help="run the built-in golden suite")
    verify.add_argument(
        "--only",
        choices=("table2", "closed", "example", "bounds", "roots"),
        default=None,
        help="restrict to one group of checks",
    )
    _add_common(verify)

    analyze = sub.add_parser(
        "analyze", help="sequence and root diagnostics for a polynomial or graph"
    )
    source = analyze.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--coeffs",
        type=str,
        metavar="C0,C1,...",
        help="comma-separated exact integer coefficients, low degree first",
    )
    source.add_argument("--bipartite", nargs=2, type=int, metavar=("M", "N"))
    source.add_argument("--edges", type=Path, metavar="PATH")
    analyze.add_argument("--format", choices=("text", "json"), default="text")
    _add_common(analyze)

    return parser


def _resolve_workers(args: argparse.Namespace) -> int:
    if getattr(args, "workers", None):
        if args.workers < 1:
            raise GraphError(f"--workers must be >= 1, got {args.workers}")
        return args.workers
    return _default_workers()


def _load_graph_source(args: argparse.Namespace) -> BipartiteSpec | Graph:
    if getattr(args, "bipartite", None):
        m, n = args.bipartite
        return BipartiteSpec(m=m, n=n)
    return parse_edge_list_text(Path(args.edges).read_text())


def _graph_label(source: BipartiteSpec | Graph, args: argparse.Namespace) -> str:
    if isinstance(source, BipartiteSpec):
        return source.label()
    return str(args.edges)


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_poly(args: argparse.Namespace) -> int:
    workers = _resolve_workers(args)
    source = _load_graph_source(args)
    label = _graph_label(source, args)

    started = time.perf_counter()
    if args.engine == "oracle":
        g = make_complete_bipartite(source) if isinstance(source, BipartiteSpec) else source
        if len(g.edges) > args.max_oracle_edges:
            raise BudgetExceededError(
                f"{len(g.edges)} edges exceeds the oracle cap of {args.max_oracle_edges}"
            )
        poly = lacking_polynomial(g, engine="oracle", workers=workers)
        engine = "oracle"
    else:
        poly, engine = lacking_polynomial_auto(source, engine=args.engine, workers=workers)
    elapsed = time.perf_counter() - started

    if args.format == "json":
        payload = poly.to_json_dict(label)
        payload["degree"] = poly.degree
        payload["value_at_one"] = str(poly.evaluate(1))
        payload["engine"] = engine
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [
            poly.to_text(),
            f"degree: {poly.degree}",
            f"L(1): {poly.evaluate(1)}",
            f"engine: {engine}",
        ]
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


def _graph_from_source(source: BipartiteSpec | Graph) -> Graph:
    if isinstance(source, BipartiteSpec):
        return make_complete_bipartite(source)
    return source


def cmd_sto(args: argparse.Namespace) -> int:
    workers = _resolve_workers(args)
    source = _load_graph_source(args)

    if args.count:
        if isinstance(source, BipartiteSpec) and args.engine in ("auto", "symmetric"):
            total = sto_bipartite_symmetric(source, workers=workers).total()
        else:
            g = _graph_from_source(source)
            if args.engine == "oracle":
                total = len(sto_by_union(g, max_edges=args.max_oracle_edges, workers=workers))
            else:
                total = sto_fast(g, workers=workers).total()
        _emit(args, f"{total}\n")
        return EXIT_OK

    g = _graph_from_source(source)
    if isinstance(source, BipartiteSpec):
        predicted = sto_bipartite_symmetric(source, workers=workers).total()
        if predicted > args.max_lines:
            raise BudgetExceededError(
                f"{predicted} configurations exceed the listing cap of "
                f"{args.max_lines}; use --count instead"
            )
    if args.engine == "oracle":
        configs = sto_by_union(g, max_edges=args.max_oracle_edges, workers=workers)
    else:
        _, configs = sto_fast(g, workers=workers, collect=True)
    if len(configs) > args.max_lines:
        raise BudgetExceededError(
            f"{len(configs)} configurations exceed the listing cap of "
            f"{args.max_lines}; use --count instead"
        )
    lines = [f"{' '.join(str(x) for x in c)} : {level(g, c)}" for c in configs]
    _emit(args, "\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    workers = _resolve_workers(args)
    import io

    buffer = io.StringIO()
    if args.max_total < 4:
        # no cell satisfies m,n >= 2 with m + n <= 3: header only
        write_scan_csv([], buffer)
        _emit(args, buffer.getvalue())
        return EXIT_OK
    cells = conjecture_scan(
        args.max_total, engine_budget=args.engine_budget, workers=workers
    )
    write_scan_csv(cells, buffer)
    _emit(args, buffer.getvalue())
    violated = any(cell.violated() for cell in cells)
    return EXIT_VIOLATION if violated else EXIT_OK


def _verify_items(only: str | None, workers: int):
    """Yield (group, name, callable) triples for the golden suite."""
    items = []

    def table2_item(cell: tuple[int, int]):
        def run() -> tuple[bool, str]:
            expected = golden.TABLE2[cell]
            spec = BipartiteSpec(m=cell[0], n=cell[1])
            g = make_complete_bipartite(spec)
            flow_poly = lacking_polynomial(g, engine="flow", workers=workers)
            oracle_poly = lacking_polynomial(g, engine="oracle", workers=workers)
            if flow_poly.coefficients != expected:
                return False, f"flow engine got {flow_poly.coefficients}"
            if oracle_poly.coefficients != expected:
                return False, f"oracle got {oracle_poly.coefficients}"
            return True, "flow and oracle both match"

        return run

    for cell in golden.TABLE2_ORDER:
        items.append(("table2", f"table2 K_{{{cell[0]},{cell[1]}}}", table2_item(cell)))

    def closed_2n() -> tuple[bool, str]:
        for n in range(1, 6):
            closed = closed_form_2n(n)
            engine = lacking_polynomial(
                make_complete_bipartite(BipartiteSpec(m=2, n=n)),
                engine="flow",
                workers=workers,
            )
            if closed != engine:
                return False, f"mismatch against engine at n={n}"
            literal = golden.TABLE2.get((2, n))
            if literal is not None and closed.coefficients != literal:
                return False, f"mismatch against the reference table at n={n}"
        return True, "matches engine (n=1..5) and the reference table"

    def closed_m2() -> tuple[bool, str]:
        for m in range(1, 6):
            closed = closed_form_m2(m)
            engine = lacking_polynomial(
                make_complete_bipartite(BipartiteSpec(m=m, n=2)),
                engine="flow",
                workers=workers,
            )
            if closed != engine:
                return False, f"mismatch against engine at m={m}"
            literal = golden.TABLE2.get((m, 2))
            if literal is not None and closed.coefficients != literal:
                return False, f"mismatch against the reference table at m={m}"
        return True, "matches engine (m=1..5) and the reference table"

    items.append(("closed", "closed-form K_{2,n} family", closed_2n))
    items.append(("closed", "closed-form K_{m,2} family", closed_m2))

    def example_k22() -> tuple[bool, str]:
        g = make_complete_bipartite(BipartiteSpec(m=2, n=2))
        sto = tuple(sto_by_union(g))
        if sto != tuple(sorted(golden.K22_STO)):
            return False, f"recurrent set mismatch: {sto}"
        for bits, expected_out, contribution in golden.K22_WORKED_ROWS:
            o = Orientation(bits=bits, width=4)
            out = out_degrees(g, o)
            if tuple(out[v] for v in (1, 2, 3)) != expected_out:
                return False, f"out-degrees mismatch for orientation {bits:04b}"
            box = comp_box(g, o)
            if tuple(box.configurations()) != contribution:
                return False, f"box contribution mismatch for orientation {bits:04b}"
        return True, "recurrent set and all five worked orientations match"

    items.append(("example", "K_{2,2} worked example", example_k22))

    def bounds_all() -> tuple[bool, str]:
        for (m, n), coefficients in sorted(golden.TABLE2.items()):
            sto_count = sum(coefficients)
            report = bounds_report(BipartiteSpec(m=m, n=n), sto_count)
            if not (report.lower_ok and report.upper_ok):
                return False, f"bound violated at K_{{{m},{n}}}"
        return True, "spanning-tree lower and stable upper bounds hold on all cells"

    items.append(("bounds", "counting bounds on the reference table", bounds_all))

    def root_counterexample() -> tuple[bool, str]:
        poly = LackingPolynomial(coefficients=golden.TABLE2[(2, 4)])
        report = roots(poly)
        remaining = list(range(len(report.roots)))
        for target in golden.K24_ROOTS:
            nearest = min(remaining, key=lambda i: abs(report.roots[i] - target))
            if abs(report.roots[nearest] - target) > 1e-8:
                return False, f"no root within 1e-8 of {target}"
            remaining.remove(nearest)
        sector = sector_check(report)
        for z, inside in zip(report.roots, sector.per_root):
            if abs(z.imag) < 1e-6:
                if inside is not True:
                    return False, "real root should sit inside the sector"
            elif inside is not False:
                return False, "both complex roots should sit outside the sector"
        return True, "roots match and the complex pair falls outside the sector"

    items.append(("roots", "K_{2,4} root counterexample", root_counterexample))

    if only is not None:
        items = [item for item in items if item[0] == only]
    return items


def cmd_verify(args: argparse.Namespace) -> int:
    workers = _resolve_workers(args)
    items = _verify_items(args.only, workers)
    passed = 0
    width = len(str(len(items)))
    lines = []
    for index, (group, name, run) in enumerate(items, start=1):
        ok, detail = run()
        passed += ok
        status = "ok" if ok else "FAIL"
        lines.append(f"[{index:>{width}}/{len(items)}] {name} ... {status} ({detail})")
    lines.append(f"{passed}/{len(items)} passed")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if passed == len(items) else EXIT_VIOLATION


def _parse_coefficients(raw: str) -> tuple[int, ...]:
    coeffs = []
    position = 0
    for token in raw.split(","):
        stripped = token.strip()
        try:
            coeffs.append(int(stripped, 10))
        except ValueError:
            raise ValueError(
                f"--coeffs: position {position}: {stripped!r} is not a decimal integer"
            ) from None
        position += len(token) + 1
    return tuple(coeffs)


def cmd_analyze(args: argparse.Namespace) -> int:
    workers = _resolve_workers(args)
    bounds = None
    label = None
    if args.coeffs is not None:
        poly = LackingPolynomial(coefficients=_parse_coefficients(args.coeffs))
        label = "coeffs"
    else:
        source = _load_graph_source(args)
        label = _graph_label(source, args)
        poly, _ = lacking_polynomial_auto(source, workers=workers)
        if isinstance(source, BipartiteSpec):
            bounds = bounds_report(source, poly.evaluate(1))

    log_concave = is_log_concave(poly.coefficients)
    unimodal = is_unimodal(poly.coefficients)
    reversed_coeffs = reverse_coefficients(poly, poly.degree)

    root_report = None
    sector = None
    root_error = None
    if poly.degree >= 1:
        try:
            root_report = roots(poly)
            sector = sector_check(root_report)
        except RootConvergenceError as exc:
            root_error = str(exc)

    if args.format == "json":
        payload = {
            "graph": label,
            "coeffs": [str(c) for c in poly.coefficients],
            "log_concave": log_concave.holds,
            "unimodal": unimodal.holds,
            "level_coeffs_reversed": [str(c) for c in reversed_coeffs],
        }
        if log_concave.witness:
            payload["log_concave_witness"] = {
                "index": log_concave.witness.index,
                "values": [str(v) for v in log_concave.witness.values],
                "internal_zero": log_concave.internal_zero,
            }
        if unimodal.witness:
            payload["unimodal_witness"] = {
                "index": unimodal.witness.index,
                "values": [str(v) for v in unimodal.witness.values],
            }
        if root_report is not None:
            payload["roots"] = [
                {
                    "re": f"{z.real:.12g}",
                    "im": f"{z.imag:.12g}",
                    "residual": f"{r:.3e}",
                    "in_sector": inside,
                }
                for z, r, inside in zip(
                    root_report.roots, root_report.residuals, sector.per_root
                )
            ]
            payload["all_roots_in_sector"] = sector.all_inside
        if root_error is not None:
            payload["root_error"] = root_error
        if bounds is not None:
            payload["bounds"] = {
                "sto_count": str(bounds.sto_count),
                "stable_count": str(bounds.stable_count),
                "spanning_tree_count": str(bounds.spanning_tree_count),
                "lower_ok": bounds.lower_ok,
                "upper_ok": bounds.upper_ok,
                "dominates": bounds.dominates,
            }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"coeffs: {poly.to_text()}"]
        if log_concave.holds:
            lines.append("log-concave: true")
        else:
            w = log_concave.witness
            zero_note = ", internal zero" if log_concave.internal_zero else ""
            lines.append(
                f"log-concave: false, witness k={w.index} ({w.detail}{zero_note})"
            )
        if unimodal.holds:
            lines.append("unimodal: true")
        else:
            w = unimodal.witness
            lines.append(f"unimodal: false, witness k={w.index} ({w.detail})")
        lines.append(
            "level coefficients (reversed): "
            + ",".join(str(c) for c in reversed_coeffs)
        )
        if root_report is not None:
            for z, r, inside in zip(
                root_report.roots, root_report.residuals, sector.per_root
            ):
                where = {True: "inside", False: "outside", None: "indeterminate"}[inside]
                lines.append(
                    f"root: {z.real:.12g}{z.imag:+.12g}i "
                    f"(residual {r:.3e}, sector: {where})"
                )
            aggregate = {True: "true", False: "false", None: "indeterminate"}[
                sector.all_inside
            ]
            lines.append(f"all roots in sector: {aggregate}")
        if root_error is not None:
            lines.append(f"roots: failed ({root_error})")
        if bounds is not None:
            lines.append(
                f"bounds: sto={bounds.sto_count} stable={bounds.stable_count} "
                f"trees={bounds.spanning_tree_count} "
                f"lower_ok={str(bounds.lower_ok).lower()} "
                f"upper_ok={str(bounds.upper_ok).lower()} "
                f"dominates={bounds.dominates}"
            )
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "poly": cmd_poly,
        "sto": cmd_sto,
        "scan": cmd_scan,
        "verify": cmd_verify,
        "analyze": cmd_analyze,
    }
    try:
        return handlers[args.command](args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
