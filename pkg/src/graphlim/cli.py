"""Command-line interface.

Data goes to stdout or --out; diagnostics go to stderr.  Exit codes: 0 on
success, 2 on usage errors, 3 when an exact routine is over its size cap,
4 on infeasible constraints.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import families, fileio
from .errors import CapacityError, InfeasibleError, ParameterError
from .experiments import ExperimentConfig, rows_to_csv, run_converge
from .fields import LabelModel, PartitionSpec
from .functionals import kkt_residual
from .graphons import (
    cut_norm,
    hom_density_graph,
    hom_density_graphon,
    motif_cycle4,
    motif_edge,
    motif_path3,
    motif_triangle,
    step_from_graph,
    StepGraphon,
)
from .solvers import brute_bisection, local_search_partition, minimize_limit_energy

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_INFEASIBLE = 4

_MOTIFS = {
    "edge": motif_edge,
    "path3": motif_path3,
    "triangle": motif_triangle,
    "cycle4": motif_cycle4,
}


def _common(parser):
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--out", help="write data to this path instead of stdout")
    parser.add_argument(
        "--format", choices=("csv", "json"), default=None, help="output format"
    )


def _parse_floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_ints(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ParameterError(f"expected comma-separated integers, got {text!r}") from None


def _emit(args, payload, default_format="json"):
    fmt = args.format or default_format
    if fmt == "json":
        text = fileio.dumps(payload)
    else:
        lines = []
        for key, value in payload.items():
            if isinstance(value, (list, tuple, np.ndarray)):
                rendered = ";".join(fileio.format_float(v) for v in np.ravel(value))
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            elif isinstance(value, float):
                rendered = fileio.format_float(value)
            else:
                rendered = str(value)
            lines.append(f"{key},{rendered}")
        text = "\n".join(lines) + "\n"
    if args.out:
        fileio.write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args):
    if args.family == "checkerboard":
        kernel = families.checkerboard(args.n)
        if not args.out:
            raise ParameterError("gen --family checkerboard requires --out")
        fileio.write_graphon(args.out, kernel)
        return EXIT_OK
    if args.family == "wrandom":
        if not args.kernel:
            raise ParameterError("gen --family wrandom requires --kernel")
        source = fileio.read_graphon(args.kernel)
        graph = families.w_random(source, args.n, args.seed)
        limit = source
    else:
        if args.family == "complete":
            inst = families.complete(args.n)
        elif args.family == "blocks":
            if not args.lambdas:
                raise ParameterError("gen --family blocks requires --lambdas")
            inst = families.block_family(_parse_floats(args.lambdas), args.n)
        elif args.family == "bipartite":
            inst = families.bipartite(args.gamma, args.n)
        else:
            inst = families.halfgraph(args.n)
        graph, limit = inst.graph, inst.limit
    if not args.out:
        raise ParameterError("gen requires --out for the graph file")
    fileio.write_graph(args.out, graph)
    if args.limit_out:
        fileio.write_graphon(args.limit_out, limit)
    return EXIT_OK


def _cmd_graphon(args):
    graph = fileio.read_graph(args.graph)
    step = step_from_graph(graph)
    if args.out:
        fileio.write_graphon(args.out, step)
    else:
        sys.stdout.write(fileio.dumps(fileio.graphon_to_dict(step)))
    return EXIT_OK


def _difference_kernel(a, b):
    """Step kernel of a - b, flagged exact when no averaging was needed."""
    if isinstance(a, StepGraphon) and b is None:
        return a, True
    if isinstance(a, StepGraphon) and isinstance(b, StepGraphon):
        return a - b, True
    if isinstance(a, StepGraphon):
        averaged = b.step_on(a.block_count) if a.equal_width() else None
        if averaged is None:
            raise ParameterError("mixed differences need an equal-width step grid")
        return a - averaged, b.is_step_on(a.boundaries)
    raise ParameterError("--a must be a step graphon file")


def _cmd_cutnorm(args):
    a = fileio.read_graphon(args.a)
    b = fileio.read_graphon(args.b) if args.b else None
    diff, representable = _difference_kernel(a, b)
    result = cut_norm(diff, mode=args.mode, restarts=args.restarts, seed=args.seed)
    payload = {
        "value": result.value,
        "s": list(result.s),
        "t": list(result.t),
        "exact": bool(result.exact and representable),
    }
    _emit(args, payload)
    return EXIT_OK


def _cmd_homdensity(args):
    motif = _MOTIFS[args.motif]()
    if bool(args.graph) == bool(args.graphon):
        raise ParameterError("homdensity needs exactly one of --graph/--graphon")
    if args.graph:
        graph = fileio.read_graph(args.graph)
        value = hom_density_graph(motif, graph)
        payload = {
            "motif": args.motif,
            "value": float(value),
            "exact": f"{value.numerator}/{value.denominator}",
        }
    else:
        kernel = fileio.read_graphon(args.graphon)
        if not isinstance(kernel, StepGraphon):
            raise ParameterError("homdensity --graphon expects a step graphon file")
        payload = {"motif": args.motif, "value": hom_density_graphon(motif, kernel)}
    _emit(args, payload)
    return EXIT_OK


def _cmd_solve_discrete(args):
    graph = fileio.read_graph(args.graph)
    if args.method == "brute":
        report = brute_bisection(graph)
    else:
        sizes = _parse_ints(args.sizes) if args.sizes else None
        if sizes is None:
            spec = PartitionSpec.bisection()
            model = LabelModel.spin()
        else:
            masses = tuple(s / graph.n for s in sizes)
            spec = PartitionSpec(masses, sizes=sizes)
            if len(sizes) == 2:
                model = LabelModel.spin()
            else:
                model = LabelModel.unit_cut(tuple(float(k + 1) for k in range(len(sizes))))
        report = local_search_partition(
            graph, spec, model, seed=args.seed, restarts=args.restarts
        )
    _emit(args, report.to_dict())
    return EXIT_OK


def _cmd_solve_limit(args):
    kernel = fileio.read_graphon(args.graphon)
    masses = _parse_floats(args.masses)
    if len(masses) == 2:
        model = LabelModel.spin()
    else:
        model = LabelModel.unit_cut(tuple(float(k + 1) for k in range(len(masses))))
    report = minimize_limit_energy(
        kernel,
        model,
        masses,
        args.grid,
        method=args.method,
        seed=args.seed,
        restarts=args.restarts,
    )
    _emit(args, report.to_dict())
    return EXIT_OK


def _cmd_kkt(args):
    kernel = fileio.read_graphon(args.graphon)
    theta = fileio.read_theta(args.theta)
    report = kkt_residual(kernel, theta)
    payload = {
        "phi": list(report.phi),
        "multiplier": report.multiplier,
        "residual": report.residual,
        "vacuous": report.vacuous,
    }
    _emit(args, payload)
    return EXIT_OK


def _config_from_args(args):
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            try:
                base = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParameterError(f"config file line {exc.lineno}: {exc.msg}") from exc
    merged = {
        "family": args.family or base.get("family"),
        "ns": _parse_ints(args.n) if args.n else tuple(base.get("n", ())),
        "grid": args.grid if args.grid is not None else base.get("grid", 48),
        "gamma": args.gamma if args.gamma is not None else base.get("gamma", 0.5),
        "lambdas": (
            _parse_floats(args.lambdas) if args.lambdas else tuple(base.get("lambdas", ()))
        ),
        "masses": (
            _parse_floats(args.masses) if args.masses else tuple(base.get("masses", (0.5, 0.5)))
        ),
        "method": args.method or base.get("method", "pgd"),
        "restarts": args.restarts if args.restarts is not None else base.get("restarts", 8),
        "seed": args.seed if args.seed is not None else base.get("seed", 0),
        "out": args.out or base.get("out"),
    }
    if merged["family"] is None:
        raise ParameterError("config field 'family': required")
    if not merged["ns"]:
        raise ParameterError("config field 'n': required")
    return ExperimentConfig(**merged)


def _cmd_converge(args):
    config = _config_from_args(args)
    rows = run_converge(config)
    if config.out is None:
        fmt = args.format or "csv"
        if fmt == "csv":
            sys.stdout.write(rows_to_csv(rows))
        else:
            sys.stdout.write(
                fileio.dumps([
                    {
                        "n": r.n,
                        "F_n": r.f_n,
                        "F_exact_flag": r.f_exact,
                        "J_star": r.j_star,
                        "gap": r.gap,
                        "cutnorm": r.cutnorm,
                        "cutnorm_exact_flag": r.cutnorm_exact,
                        "seconds": r.seconds,
                    }
                    for r in rows
                ])
            )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="graphlim",
        description="Graph-limit toolkit: kernels, cut norms, and cut minimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate family graphs and limit kernels")
    p.add_argument(
        "--family",
        required=True,
        choices=("complete", "blocks", "bipartite", "halfgraph", "checkerboard", "wrandom"),
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambdas", help="comma-separated block fractions")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--kernel", help="source graphon file for wrandom")
    p.add_argument("--limit-out", dest="limit_out", help="also write the limit kernel")
    _common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("graphon", help="step graphon of a graph file")
    p.add_argument("--graph", required=True)
    _common(p)
    p.set_defaults(func=_cmd_graphon)

    p = sub.add_parser("cutnorm", help="cut norm of a kernel or difference")
    p.add_argument("--a", required=True, help="step graphon file")
    p.add_argument("--b", help="kernel to subtract (step or analytic)")
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--restarts", type=int, default=32)
    _common(p)
    p.set_defaults(func=_cmd_cutnorm)

    p = sub.add_parser("homdensity", help="homomorphism density of a motif")
    p.add_argument("--motif", required=True, choices=sorted(_MOTIFS))
    p.add_argument("--graph")
    p.add_argument("--graphon")
    _common(p)
    p.set_defaults(func=_cmd_homdensity)

    p = sub.add_parser("solve-discrete", help="minimal balanced cuts of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--method", choices=("brute", "local"), default="brute")
    p.add_argument("--sizes", help="comma-separated part sizes for local search")
    p.add_argument("--restarts", type=int, default=8)
    _common(p)
    p.set_defaults(func=_cmd_solve_discrete)

    p = sub.add_parser("solve-limit", help="minimize the continuum cut energy")
    p.add_argument("--graphon", required=True)
    p.add_argument("--grid", type=int, default=48)
    p.add_argument("--masses", default="0.5,0.5")
    p.add_argument("--method", choices=("pgd", "frank_wolfe"), default="pgd")
    p.add_argument("--restarts", type=int, default=8)
    _common(p)
    p.set_defaults(func=_cmd_solve_limit)

    p = sub.add_parser("kkt", help="stationarity diagnostic of a spin field")
    p.add_argument("--graphon", required=True)
    p.add_argument("--theta", required=True)
    _common(p)
    p.set_defaults(func=_cmd_kkt)

    p = sub.add_parser("converge", help="discrete-to-continuum convergence table")
    p.add_argument("--family", choices=("complete", "blocks", "bipartite", "halfgraph"))
    p.add_argument("--n", help="comma-separated even node counts")
    p.add_argument("--grid", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--lambdas")
    p.add_argument("--masses")
    p.add_argument("--method", choices=("pgd", "frank_wolfe"))
    p.add_argument("--restarts", type=int)
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.set_defaults(func=_cmd_converge)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParameterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
