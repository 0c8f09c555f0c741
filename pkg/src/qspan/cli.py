"""Command line front end.

Subcommands: spectral, check-tree, extremal, verify-theorem, proof-sweep.
Exit codes: 0 success, 1 verification failure (counterexample, failed sweep,
internal defect), 2 input error. JSON reports carry "schema": "1" and print
floats with 12 significant digits in fixed notation so outputs diff cleanly.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from decimal import ROUND_HALF_EVEN, Decimal

from . import verify
from .errors import CapacityError, InputError, InternalError, NumericalError
from .extremal import (
    ExtremalParams,
    build_family,
    family_char_coeffs,
    family_quotient,
    family_root,
    spectral_threshold,
)
from .graph_core import (
    DegreeDemand,
    format_graph,
    read_demands,
    read_graph,
    write_graph,
)
from .spectral import signless_laplacian, spectral_radius
from .trees import construct_tree


def format_float(x: float) -> str:
    """12 significant digits, fixed notation, for stable report diffs."""
    if not math.isfinite(x):
        raise InternalError(f"cannot format non-finite value {x!r}")
    if x == 0.0:
        return "0.000000000000"
    d = Decimal(x)
    quantum = Decimal(1).scaleb(d.adjusted() - 11)
    return format(d.quantize(quantum, rounding=ROUND_HALF_EVEN), "f")


def _emit(value, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_emit(v, indent + 1)}' for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        items = list(value)
        if not items:
            return "[]"
        if any(isinstance(v, dict) for v in items):
            inner = ",\n".join(f"{pad}  {_emit(v, indent + 1)}" for v in items)
            return "[\n" + inner + "\n" + pad + "]"
        return "[" + ", ".join(_emit(v, indent) for v in items) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, int):
        return str(value)
    if value is None:
        return "null"
    return json.dumps(value)


def emit_json(report: dict) -> str:
    return _emit(report, 0)


def _load_demand(args, m: int) -> DegreeDemand:
    if args.k is not None:
        return DegreeDemand.uniform(m, args.k)
    f = read_demands(args.f)
    if len(f) != m:
        raise InputError(f"{args.f}: {len(f)} demands for a graph with m={m} A-vertices")
    return f


def _cmd_spectral(args) -> int:
    g = read_graph(args.graph)
    est = spectral_radius(signless_laplacian(g), tol=args.tol)
    report = {
        "schema": "1",
        "m": g.m,
        "n": g.n,
        "q": est.value,
        "residual": est.residual,
        "iterations": est.iterations,
        "method": est.method,
    }
    print(emit_json(report))
    return 0


def _cmd_check_tree(args) -> int:
    g = read_graph(args.graph)
    f = _load_demand(args, g.m)
    result = construct_tree(g, f)
    if result.feasible:
        report = {
            "schema": "1",
            "feasible": True,
            "tree": [[a, b] for a, b in result.tree.edges],
        }
    else:
        report = {
            "schema": "1",
            "feasible": False,
            "violating_set": list(result.violation.vertices),
        }
    print(emit_json(report))
    return 0


def _cmd_extremal(args) -> int:
    p = ExtremalParams(args.k, args.m, args.n, args.s)
    g = build_family(p)
    qm = family_quotient(p)
    coeffs = family_char_coeffs(p)
    q1 = family_root(p)
    qstar = spectral_threshold(p.k, p.m, p.n)
    checks = verify.point_checks(p, random.Random(0))

    lines = [
        f"family member: k={p.k} m={p.m} n={p.n} s={p.s}",
        f"graph: {g.m}+{g.n} vertices, {g.edge_count} edges",
    ]
    if args.out:
        write_graph(g, args.out)
        lines.append(f"graph file written to {args.out}")
    else:
        lines.append("graph file:")
        lines.extend("  " + ln for ln in format_graph(g).splitlines())
    lines.append(f"quotient matrix (block sizes {', '.join(str(b) for b in qm.block_sizes)}):")
    width = max(len(str(x)) for row in qm.entries for x in row)
    for row in qm.entries:
        lines.append("  " + "  ".join(str(x).rjust(width) for x in row))
    lines.append(f"characteristic coefficients (ascending): {list(coeffs.coeffs)}")
    lines.append(f"largest quotient root: {format_float(q1)}")
    lines.append(f"threshold at s=1:      {format_float(qstar)}")
    all_ok = True
    for name, ok in checks.items():
        lines.append(f"check {name}: {'PASS' if ok else 'FAIL'}")
        all_ok = all_ok and ok
    print("\n".join(lines))
    return 0 if all_ok else 1


def _cmd_verify_theorem(args) -> int:
    report = verify.certify_threshold(args.k, args.m, args.n, tol=args.tol, jobs=args.jobs)
    payload = {
        "schema": "1",
        "params": report.params,
        "qstar": report.qstar,
        "graphs_total": report.graphs_total,
        "graphs_connected": report.graphs_connected,
        "graphs_above_bound": report.graphs_above_bound,
        "counterexamples": report.counterexamples,
        "extremal_found": report.extremal_found,
    }
    print(emit_json(payload))
    ok = not report.counterexamples and report.extremal_found
    print(
        f"checked {report.graphs_total} graphs ({report.graphs_connected} connected), "
        f"{report.graphs_above_bound} at or above the threshold, "
        f"{len(report.counterexamples)} counterexamples, "
        f"extremal graph {'found' if report.extremal_found else 'MISSING'}: "
        f"{'OK' if ok else 'FAILED'}",
        file=sys.stderr,
    )
    return 0 if ok else 1


def _parse_range(text: str, name: str) -> tuple[int, int]:
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise InputError(f"{name}: expected A..B or a single integer, got {text!r}") from None
    if lo > hi:
        raise InputError(f"{name}: empty range {text!r}")
    return lo, hi


def _cmd_proof_sweep(args) -> int:
    k_lo, k_hi = _parse_range(args.k_range, "--k-range")
    m_lo, m_hi = _parse_range(args.m_range, "--m-range")
    e_lo, e_hi = _parse_range(args.n_extra, "--n-extra")
    report = verify.separation_sweep(
        range(k_lo, k_hi + 1),
        range(m_lo, m_hi + 1),
        range(e_lo, e_hi + 1),
        seed=args.seed,
    )
    payload = {
        "schema": "1",
        "grid": report.grid,
        "points": report.points,
        "failures": report.failures,
    }
    print(emit_json(payload))
    boundary = sum(1 for pt in report.points if pt["expected_boundary"])
    print(
        f"swept {len(report.points)} points ({boundary} expected boundary), "
        f"{len(report.failures)} failures: "
        f"{'OK' if not report.failures else 'FAILED'}",
        file=sys.stderr,
    )
    return 0 if not report.failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspan",
        description="Certify degree-demanded spanning trees and the spectral "
                    "threshold that forces them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectral", help="signless Laplacian spectral radius of a graph file")
    p.add_argument("graph", help="graph file (p bip header plus e lines)")
    p.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
    p.set_defaults(func=_cmd_spectral)

    p = sub.add_parser("check-tree", help="decide demanded spanning tree feasibility")
    p.add_argument("graph", help="graph file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="uniform demand for every A-vertex")
    group.add_argument("--f", help="demand file, one integer >= 2 per line, m lines")
    p.set_defaults(func=_cmd_check_tree)

    p = sub.add_parser("extremal", help="build a family member and report its data")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--out", help="write the graph file here instead of inlining it")
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("verify-theorem", help="exhaustive threshold census at one point")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    p.set_defaults(func=_cmd_verify_theorem)

    p = sub.add_parser("proof-sweep", help="verify identities and inequalities over a grid")
    p.add_argument("--k-range", default="3..5", help="A..B inclusive (default 3..5)")
    p.add_argument("--m-range", default="3..5", help="A..B inclusive (default 3..5)")
    p.add_argument("--n-extra", default="1..5",
                   help="offsets added to (k-1)*m; 0 is the expected boundary (default 1..5)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled join-chain checks")
    p.set_defaults(func=_cmd_proof_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (InputError, CapacityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InternalError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
