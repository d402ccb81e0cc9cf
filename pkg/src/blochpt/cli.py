"""Command-line front end.

Subcommands: enumerate | coeff | count | series | render | verify.
Tabular output is for humans; --format json emits canonical, byte-stable
reports (fixed key order, 17-significant-digit floats, version + input hash
in the meta block).  Validation and consistency failures exit nonzero with a
JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import jsonio
from .coefficients import (
    CoefficientEngine,
    c_closed,
    e_closed,
    format_rational,
)
from .diagrams import (
    BlochSequence,
    CapExceeded,
    count_convex,
    count_sequences,
    crossing_numbers,
    is_convex,
    iter_sequences,
)
from .grouping import term_count_report
from .hamiltonian import HamiltonianError, load_file
from .render import RenderSpec, render
from .series import (
    ROUTE_BLOCH,
    ROUTE_DIAGRAMMATIC,
    ROUTE_TEXTBOOK,
    bloch_series,
    diagrammatic_series,
    route_deviation,
    textbook_series,
    verify,
)

DEFAULT_EPS_GRID = [round(10 ** (-3 + k / 6), 12) for k in range(7)]  # one decade, 7 points
from .version import __version__


class ConsistencyError(RuntimeError):
    """The two coefficient routes disagreed; this is a hard failure."""


def _print_table(headers: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    for row in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())


def _eps_arg(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def cmd_enumerate(args) -> int:
    rows = []
    for seq in iter_sequences(args.n, args.cap):
        convex = is_convex(seq)
        if args.convex_only and not convex:
            continue
        rows.append(
            {
                "sequence": list(seq.parts),
                "c": c_closed(seq),
                "e": e_closed(seq),
                "convex": convex,
                "crossing_numbers": list(crossing_numbers(seq).flat),
            }
        )
    if args.format == "json":
        payload = {
            "meta": jsonio.report_meta(f"enumerate:{args.n}:{args.convex_only}"),
            "order": args.n,
            "convex_only": args.convex_only,
            "count": len(rows),
            "rows": rows,
        }
        print(jsonio.dumps(payload))
    else:
        table = [
            [
                ",".join(str(k) for k in row["sequence"]),
                format_rational(row["c"]),
                format_rational(row["e"]),
                "yes" if row["convex"] else "no",
                ",".join(str(x) for x in row["crossing_numbers"]),
            ]
            for row in rows
        ]
        _print_table(["sequence", "c", "e", "convex", "crossings"], table)
        print(f"{len(rows)} sequences")
    return 0


def cmd_coeff(args) -> int:
    seq = BlochSequence.parse(args.sequence)
    values = {}
    if args.method in ("closed", "both"):
        values["closed"] = (c_closed(seq), e_closed(seq))
    if args.method in ("recurrence", "both"):
        engine = CoefficientEngine()
        values["recurrence"] = (engine.vector_coeff(seq), engine.energy_coeff(seq))
    if args.method == "both" and values["closed"] != values["recurrence"]:
        raise ConsistencyError(
            f"coefficient routes disagree on {seq}: closed {values['closed']} "
            f"vs recurrence {values['recurrence']}"
        )
    c_val, e_val = next(iter(values.values()))
    if args.format == "json":
        payload = {
            "meta": jsonio.report_meta(f"coeff:{seq}:{args.method}"),
            "sequence": list(seq.parts),
            "method": args.method,
            "c": c_val,
            "e": e_val,
            "crossing_numbers": list(crossing_numbers(seq).flat),
        }
        print(jsonio.dumps(payload))
    else:
        print(f"sequence {seq}")
        print(f"c = {format_rational(c_val)}")
        print(f"e = {format_rational(e_val)}")
        if args.method == "both":
            print("methods agree: closed == recurrence")
    return 0


def _asymptotic_ratio(n: int, sequences: int) -> float:
    return sequences / (4.0**n / (2.0 * math.sqrt(math.pi * n)))


def cmd_count(args) -> int:
    class_max = min(args.n_max, args.class_max)
    class_rows = {row.order: row for row in term_count_report(class_max, args.cap)}
    rows = []
    for n in range(1, args.n_max + 1):
        grouped = class_rows.get(n)
        rows.append(
            {
                "order": n,
                "sequences": count_sequences(n),
                "convex": count_convex(n),
                "vector_classes": grouped.vector_classes if grouped else None,
                "energy_classes": grouped.energy_classes if grouped else None,
                "vector_offdiag": grouped.vector_offdiag if grouped else None,
                "energy_offdiag": grouped.energy_offdiag if grouped else None,
                "sequences_over_asymptotic": _asymptotic_ratio(n, count_sequences(n)),
            }
        )
    if args.format == "json":
        payload = {
            "meta": jsonio.report_meta(f"count:{args.n_max}:{args.class_max}"),
            "n_max": args.n_max,
            "rows": rows,
        }
        print(jsonio.dumps(payload))
    else:
        table = [
            [
                str(r["order"]),
                str(r["sequences"]),
                str(r["convex"]),
                "-" if r["vector_classes"] is None else str(r["vector_classes"]),
                "-" if r["energy_classes"] is None else str(r["energy_classes"]),
                "-" if r["vector_offdiag"] is None else str(r["vector_offdiag"]),
                "-" if r["energy_offdiag"] is None else str(r["energy_offdiag"]),
                f"{r['sequences_over_asymptotic']:.4f}",
            ]
            for r in rows
        ]
        _print_table(
            [
                "n",
                "sequences",
                "convex",
                "min vector",
                "min energy",
                "offdiag vector",
                "offdiag energy",
                "seq/asym",
            ],
            table,
        )
    return 0


def _vector_payload(vectors: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in vectors]


def _build_routes(spec, order: int, route: str, grouped: bool):
    routes = {}
    wanted = (
        [ROUTE_TEXTBOOK, ROUTE_DIAGRAMMATIC, ROUTE_BLOCH]
        if route == "all"
        else [{"textbook": ROUTE_TEXTBOOK, "diagrammatic": ROUTE_DIAGRAMMATIC, "bloch": ROUTE_BLOCH}[route]]
    )
    for name in wanted:
        if name == ROUTE_TEXTBOOK:
            routes[name] = textbook_series(spec, order)
        elif name == ROUTE_DIAGRAMMATIC:
            routes[name] = diagrammatic_series(spec, order, use_grouping=grouped)
        else:
            routes[name] = bloch_series(spec, order)
    return routes


def _series_report(args, with_verification: bool):
    with open(args.hamiltonian, "rb") as fh:
        raw = fh.read()
    spec = load_file(args.hamiltonian)
    routes = _build_routes(spec, args.order, args.route, args.group)
    payload = {
        "meta": jsonio.report_meta(raw),
        "order": args.order,
        "target": spec.target,
        "grouped": args.group,
        "routes": {},
    }
    for name, series in routes.items():
        entry = {"energies": [float(x) for x in series.energies]}
        if series.evaluated_terms is not None:
            entry["evaluated_terms"] = series.evaluated_terms
        if args.vectors:
            entry["vectors"] = _vector_payload(series.vectors)
        payload["routes"][name] = entry
    series_list = list(routes.values())
    if args.eps or with_verification:
        eps = args.eps or DEFAULT_EPS_GRID
        report = verify(spec, series_list, eps)
        payload["verification"] = report.to_dict()
    elif len(series_list) > 1:
        deltas = {}
        for i, a in enumerate(series_list):
            for b in series_list[i + 1 :]:
                dev = route_deviation(a, b)
                deltas[f"{a.route}|{b.route}"] = {
                    "max_energy": dev["max_energy"],
                    "max_vector": dev["max_vector"],
                }
        payload["route_deltas"] = deltas
    return payload


def cmd_series(args) -> int:
    print(jsonio.dumps(_series_report(args, with_verification=False)))
    return 0


def cmd_verify(args) -> int:
    print(jsonio.dumps(_series_report(args, with_verification=True)))
    return 0


def cmd_render(args) -> int:
    sequences = tuple(BlochSequence.parse(text) for text in args.sequences)
    spec = RenderSpec(sequences=sequences, fmt=args.render_format, annotations=args.annotations)
    print(render(spec, out=args.out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochpt",
        description="Staircase-diagram perturbation series: exact coefficients, "
        "equivalence classes, and verified eigenvalue/eigenvector corrections.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list all sequences of one order with coefficients")
    p.add_argument("n", type=int, help="diagram order")
    p.add_argument("--convex-only", action="store_true", help="keep only convex diagrams")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--cap", type=int, default=None, help="override the enumeration cap")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("coeff", help="coefficients of one sequence")
    p.add_argument("sequence", help="comma-separated steps, e.g. 2,0,0,2")
    p.add_argument("--method", choices=["closed", "recurrence", "both"], default="both")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("count", help="term-count table by order")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument(
        "--class-max",
        type=int,
        default=8,
        help="largest order for which class columns are computed by enumeration",
    )
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("series", help="correction series from a Hamiltonian file (JSON report)")
    p.add_argument("hamiltonian", help="JSON file with h0, v, target")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--route", choices=["diagrammatic", "textbook", "bloch", "all"], default="all")
    p.add_argument("--eps", type=_eps_arg, default=None, help="comma-separated couplings to verify at")
    p.add_argument("--group", action="store_true", help="sum over equivalence classes")
    p.add_argument("--vectors", action="store_true", help="include vector components in the report")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", help="series plus residual/normalisation verification report")
    p.add_argument("hamiltonian")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--route", choices=["diagrammatic", "textbook", "bloch", "all"], default="all")
    p.add_argument("--eps", type=_eps_arg, default=None)
    p.add_argument("--group", action="store_true")
    p.add_argument("--vectors", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw staircase diagrams (ascii to stdout, svg/png to file)")
    p.add_argument("sequences", nargs="+", help="one or more step lists")
    p.add_argument("--format", dest="render_format", choices=["ascii", "svg", "png"], default="ascii")
    p.add_argument("--out", default=None, help="output file (required for svg/png)")
    p.add_argument("--annotations", action="store_true", help="label with c, e, crossings, convexity")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CapExceeded, HamiltonianError, ConsistencyError, ValueError, OSError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(jsonio.dumps(error), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
