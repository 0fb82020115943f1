"""Command-line front end: verify, refine, rigidity, construct, enumerate,
coverage, and catalog subcommands over segment files and the bundled corpus.

Output is deterministic (no timestamps, floats at 12 significant digits) so
runs are reproducible and diffable.  Exit codes: 0 success, 1 domain failure
(verification or coverage failed), 2 usage or input parse error, 3 numerical
failure (a solver did not converge).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .construct import (
    ChainSpec,
    ConstructError,
    PartSpec,
    PlanError,
    RealizationFailedError,
    chain_plan,
    degree2_vertices,
    mirror_double,
    plan_from_json,
    realize,
    ring_plan,
)
from .counting import (
    DEFAULT_COVERAGE,
    Inventory,
    below_63_catalog,
    combinations_table,
    theorem1_coverage,
)
from .ingest import emit_segments, graph_from_text
from .model import EmbeddedGraph, ModelError, degree_profile, edge_count_identity
from .refine import RefineOptions, ZeroLengthEdgeError, refine
from .rigidity import DisconnectedGraphError, analyze_rigidity
from .verify import Tolerances, verify_matchstick

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class _UsageError(Exception):
    """Bad input outside argparse's reach (missing file, parse failure, ...)."""


class _NumericalError(Exception):
    """A solver failed on otherwise well-formed input."""


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _load_graph(ref: str) -> EmbeddedGraph:
    """Load a graph from a segment file path or a bundled corpus name."""
    path = Path(ref)
    if path.exists():
        try:
            return graph_from_text(path.read_text())
        except (ValueError, ModelError) as exc:
            raise _UsageError(f"{ref}: {exc}")
    if ref in corpus.corpus_names():
        return corpus.load_graph(ref)
    raise _UsageError(f"{ref}: no such file or corpus graph")


def _refined(g: EmbeddedGraph) -> EmbeddedGraph:
    result = refine(g)
    if not result.converged:
        raise _NumericalError(
            f"refinement did not converge (residual {_fmt(result.final_residual)})"
        )
    return result.graph


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


# -- subcommands --------------------------------------------------------------


def _cmd_verify(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if not args.raw:
        g = _refined(g)
    if args.eps_length is not None or args.eps_separation is not None:
        base = Tolerances.raw() if args.raw else Tolerances()
        tol = Tolerances(
            args.eps_length if args.eps_length is not None else base.eps_length,
            args.eps_separation
            if args.eps_separation is not None
            else base.eps_separation,
        )
    else:
        tol = Tolerances.raw() if args.raw else Tolerances()
    report = verify_matchstick(g, tol)
    label = f"{report.classification}, {g.vertex_count} vertices"
    if args.json:
        payload = report.to_json_dict()
        payload["graph"] = {
            "name": g.name,
            "vertices": g.vertex_count,
            "edges": g.edge_count,
        }
        _print_json(payload)
    else:
        print(f"graph: {g.name or '(unnamed)'} "
              f"({g.vertex_count} vertices, {g.edge_count} edges)")
        print(f"unit length: worst deviation {_fmt(report.worst_deviation)} "
              f"(eps {_fmt(tol.eps_length)}) -> "
              f"{'ok' if report.unit_length_ok else 'FAIL'}")
        if report.crossing_ok:
            print(f"separation: ok (eps {_fmt(tol.eps_separation)})")
        else:
            print(f"separation: {len(report.crossing_violations)} edge pair(s) "
                  f"conflict (eps {_fmt(tol.eps_separation)})")
            for i, j, d in report.crossing_violations[:10]:
                print(f"  edges {i} and {j}: distance {_fmt(d)}")
        if report.vertex_clearance_ok:
            print("clearance: ok")
        else:
            print(f"clearance: {len(report.clearance_violations)} violation(s)")
            for kind, a, b, d in report.clearance_violations[:10]:
                print(f"  {kind} {a} and {b}: distance {_fmt(d)}")
        print(f"classification: {label}")
    return EXIT_OK if report.is_matchstick else EXIT_DOMAIN


def _cmd_refine(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    opts = RefineOptions(
        max_iterations=args.max_iterations, target_residual=args.target_residual
    )
    result = refine(g, opts)
    if args.json:
        _print_json(
            {
                "name": g.name,
                "iterations": result.iterations,
                "initial_residual": result.initial_residual,
                "final_residual": result.final_residual,
                "converged": result.converged,
            }
        )
    else:
        print(f"graph: {g.name or '(unnamed)'} ({g.vertex_count} vertices)")
        print(f"iterations: {result.iterations}")
        print(f"residual: {_fmt(result.initial_residual)} -> "
              f"{_fmt(result.final_residual)}")
        print(f"converged: {'yes' if result.converged else 'NO'}")
    if args.output:
        Path(args.output).write_text(emit_segments(result.graph))
        if not args.json:
            print(f"wrote {args.output}")
    if not result.converged:
        raise _NumericalError(
            f"refinement did not converge (residual {_fmt(result.final_residual)})"
        )
    return EXIT_OK


def _cmd_rigidity(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if not args.raw:
        g = _refined(g)
    report = analyze_rigidity(g, args.rank_tol)
    if args.json:
        payload = report.to_json_dict()
        payload["graph"] = {"name": g.name, "vertices": g.vertex_count}
        _print_json(payload)
    else:
        print(f"graph: {g.name or '(unnamed)'} "
              f"({g.vertex_count} vertices, {g.edge_count} edges)")
        print(f"rank: {report.rank} of {report.dof_bound} "
              f"(2v-3 internal degrees of freedom)")
        print(f"internal flexes: {report.internal_flexes}")
        print(f"classification: {report.classification}")
        tail = ", ".join(_fmt(s) for s in report.singular_tail(6))
        print(f"smallest singular values: {tail}")
    return EXIT_OK


def _write_or_print(g: EmbeddedGraph, output: str | None, as_json: bool) -> dict:
    report = verify_matchstick(g)
    summary = {
        "name": g.name,
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "classification": report.classification,
        "is_matchstick": report.is_matchstick,
    }
    if output:
        Path(output).write_text(emit_segments(g))
    if as_json:
        payload = dict(summary)
        if output:
            payload["output"] = output
        _print_json(payload)
    else:
        print(f"built: {g.name} ({g.vertex_count} vertices, {g.edge_count} edges)")
        print(f"classification: {report.classification}, {g.vertex_count} vertices")
        if output:
            print(f"wrote {output}")
    summary["exit"] = EXIT_OK if report.is_matchstick else EXIT_DOMAIN
    return summary


def _cmd_construct_mirror(args: argparse.Namespace) -> int:
    g = _refined(_load_graph(args.graph))
    if args.ports:
        try:
            a, b = (int(x) for x in args.ports.split(","))
        except ValueError:
            raise _UsageError("--ports expects two comma-separated vertex indices")
    else:
        ports = degree2_vertices(g)
        if len(ports) != 2:
            raise _UsageError(
                f"graph has {len(ports)} degree-2 vertices; pass --ports a,b"
            )
        a, b = ports
    doubled = mirror_double(g, a, b, args.mode)
    return _write_or_print(_refined(doubled), args.output, args.json)["exit"]


def _cmd_construct_ring(args: argparse.Namespace) -> int:
    parts = [PartSpec(_load_graph(ref), label=ref) for ref in args.graphs]
    built = realize(ring_plan(parts))
    return _write_or_print(built, args.output, args.json)["exit"]


def _cmd_construct_chain(args: argparse.Namespace) -> int:
    left = PartSpec(_load_graph(args.left), label=args.left)
    right = PartSpec(_load_graph(args.right), label=args.right)
    spacer = _refined(_load_graph(args.spacer)) if args.spacer else None
    built = realize(chain_plan(ChainSpec(left, right, args.spacers, spacer)))
    return _write_or_print(built, args.output, args.json)["exit"]


def _cmd_construct_from_plan(args: argparse.Namespace) -> int:
    try:
        text = Path(args.plan).read_text()
    except OSError as exc:
        raise _UsageError(f"{args.plan}: {exc}")
    plan = plan_from_json(text, _resolver)
    built = realize(plan)
    return _write_or_print(built, args.output, args.json)["exit"]


def _resolver(ref: str) -> EmbeddedGraph:
    return _refined(_load_graph(ref))


def _cmd_enumerate(args: argparse.Namespace) -> int:
    try:
        sizes = tuple(int(x) for x in args.inventory.split(","))
        inv = Inventory(sizes)
    except ValueError as exc:
        raise _UsageError(f"bad inventory: {exc}")
    table = combinations_table(inv, args.parts)
    if args.json:
        _print_json(table.to_json_dict())
    else:
        print(table.to_text())
    return EXIT_OK


def _cmd_coverage(args: argparse.Namespace) -> int:
    cert = theorem1_coverage(args.max)
    if args.json:
        _print_json(cert.to_json_dict())
    else:
        print(f"range: [63, {cert.max_check}]")
        if cert.complete:
            print("missing: none")
        else:
            print("missing: " + ", ".join(str(v) for v in cert.missing))
        if args.witnesses:
            for v in range(63, cert.max_check + 1):
                if v in cert.witnesses:
                    print(f"  {v}: {cert.witnesses[v]}")
    return EXIT_OK if cert.complete else EXIT_DOMAIN


def _cmd_catalog(args: argparse.Namespace) -> int:
    rows = []
    all_verified = True
    for name in corpus.corpus_names():
        g = corpus.load_graph(name)
        sf = corpus.load_segments(name)
        claimed_rigidity = sf.metadata.get("claimed_rigidity", "unknown")
        result = refine(g)
        refined = result.graph if result.converged else g
        report = verify_matchstick(refined)
        rig = analyze_rigidity(refined)
        verified = result.converged and report.is_matchstick
        all_verified &= verified
        deviations = []
        if not verified:
            deviations.append("verification failed")
        if claimed_rigidity == "rigid" and not rig.rigid:
            deviations.append(f"{rig.internal_flexes} flex(es) at first order")
        if claimed_rigidity == "flexible" and rig.rigid:
            deviations.append("no flex found")
        rows.append(
            {
                "name": name,
                "vertices": g.vertex_count,
                "edges": g.edge_count,
                "profile": str(degree_profile(g)),
                "claimed_rigidity": claimed_rigidity,
                "residual": result.final_residual,
                "verified": verified,
                "internal_flexes": rig.internal_flexes,
                "status": "ok" if not deviations else "; ".join(deviations),
            }
        )
    if args.json:
        _print_json({"corpus": rows})
    else:
        header = (f"{'name':8s} {'v':>4s} {'e':>4s} {'profile':18s} "
                  f"{'claimed':9s} {'residual':>10s} {'verified':8s} "
                  f"{'flexes':>6s} status")
        print(header)
        for r in rows:
            print(f"{r['name']:8s} {r['vertices']:4d} {r['edges']:4d} "
                  f"{r['profile']:18s} {r['claimed_rigidity']:9s} "
                  f"{r['residual']:10.2e} {'yes' if r['verified'] else 'NO':8s} "
                  f"{r['internal_flexes']:6d} {r['status']}")
    return EXIT_OK if all_verified else EXIT_DOMAIN


# -- argument parsing ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchsticks",
        description="Verify, refine, analyze, and build 4-regular matchstick graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("graph", help="segment file path or bundled corpus name")

    p = sub.add_parser("verify", help="check the matchstick property")
    add_graph_arg(p)
    p.add_argument("--raw", action="store_true",
                   help="skip refinement; default tolerances loosen to drawing accuracy")
    p.add_argument("--eps-length", type=float, default=None,
                   help="unit-length tolerance override")
    p.add_argument("--eps-separation", type=float, default=None,
                   help="edge separation tolerance override")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("refine", help="drive edge lengths to the unit value")
    add_graph_arg(p)
    p.add_argument("-o", "--output", help="write the refined graph as a segment file")
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--target-residual", type=float, default=1e-12)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_refine)

    p = sub.add_parser("rigidity", help="first-order rigidity analysis")
    add_graph_arg(p)
    p.add_argument("--raw", action="store_true", help="analyze without refining first")
    p.add_argument("--rank-tol", type=float, default=1e-8,
                   help="singular values below this fraction of the largest count as zero")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_rigidity)

    p = sub.add_parser("construct", help="build a larger graph from parts")
    construct_sub = p.add_subparsers(dest="construct_command", required=True)

    c = construct_sub.add_parser("mirror", help="double a part across its two ports")
    add_graph_arg(c)
    c.add_argument("--mode", choices=("line", "point"), default="line")
    c.add_argument("--ports", help="comma-separated join vertex indices (default: auto)")
    c.add_argument("-o", "--output")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_construct_mirror)

    c = construct_sub.add_parser("ring", help="join parts in a cycle")
    c.add_argument("graphs", nargs="+", metavar="graph")
    c.add_argument("-o", "--output")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_construct_ring)

    c = construct_sub.add_parser("chain", help="join two end parts through spacers")
    c.add_argument("left")
    c.add_argument("right")
    c.add_argument("--spacers", type=int, default=1,
                   help="number of 5-vertex spacers between the ends")
    c.add_argument("--spacer", help="spacer graph override (default: bundled)")
    c.add_argument("-o", "--output")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_construct_chain)

    c = construct_sub.add_parser("from-plan", help="realize a JSON composition plan")
    c.add_argument("plan", help="plan JSON file")
    c.add_argument("-o", "--output")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_construct_from_plan)

    p = sub.add_parser("enumerate", help="table of ring-composition vertex counts")
    p.add_argument("--inventory", default="22,30,31,34,35,36,40,41",
                   help="comma-separated part sizes")
    p.add_argument("--parts", type=int, default=3, help="parts per ring")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("coverage", help="certify reachable vertex counts from 63 up")
    p.add_argument("--max", type=int, default=10000, help="upper end of the range")
    p.add_argument("--witnesses", action="store_true",
                   help="print one witness construction per count")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("catalog", help="list the bundled corpus with check status")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ModelError, PlanError, corpus.CorpusError,
            DisconnectedGraphError, ZeroLengthEdgeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_NumericalError, RealizationFailedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ConstructError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
