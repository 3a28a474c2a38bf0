"""Command-line front end.

Subcommands: ``dist`` (graph-to-graph distances), ``order`` (DAG-to-order
distance), ``gen`` (random DAG files), ``bench`` (runtime-complexity
projection) and ``compare`` (distance-comparison study). Exit codes:
0 success, 2 parse/usage error, 3 graph validation error.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .distances import PairFilter, aid, order_aid, shd
from .graph import ParseError, ValidationError, parse_graph, parse_order, serialize_graph
from .simbench import GenConfig, gen_random_dag, run_comparison, run_complexity_bench
from .strategies import Strategy


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("GAID_THREADS", "1")))
    except ValueError:
        return 1


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(2, f"{path}: {exc.strerror or exc}") from exc


def _load_graph(path: str, fmt: str, kind: str | None, header: bool):
    text = _read_text(path)
    try:
        return parse_graph(text, format=fmt, kind=kind, header=header)
    except ParseError as exc:
        location = f"{path}:{exc.line}" if exc.line is not None else path
        raise _CliError(2, f"{location}: {exc}") from exc
    except ValidationError as exc:
        raise _CliError(3, f"{path}: {exc}") from exc


def _load_order(path: str):
    text = _read_text(path)
    try:
        return parse_order(text)
    except ParseError as exc:
        location = f"{path}:{exc.line}" if exc.line is not None else path
        raise _CliError(2, f"{location}: {exc}") from exc
    except ValidationError as exc:
        raise _CliError(3, f"{path}: {exc}") from exc


def _versions() -> dict:
    import numba

    return {"gaid": __version__, "numpy": np.__version__, "numba": numba.__version__}


def _parse_id_list(text: str | None):
    if text is None:
        return None
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise _CliError(2, f"bad node id list {text!r}") from exc


def _emit_result(args, distance: str, result, p: int, elapsed_ms: float, threads: int) -> None:
    if args.json:
        payload = {
            "distance": distance,
            "count": result.count,
            "normalized": result.normalized,
            "p": p,
            "pair_total": result.pair_total,
            "elapsed_ms": elapsed_ms,
            "threads": threads,
            "versions": _versions(),
        }
        print(json.dumps(payload))
    else:
        print(f"count={result.count} normalized={result.normalized:g}")


def _cmd_dist(args) -> int:
    g_true = _load_graph(args.true, args.format, args.kind, args.header)
    g_guess = _load_graph(args.guess, args.format, args.kind, args.header)
    threads = args.threads
    try:
        t0 = time.perf_counter()
        if args.distance == "shd":
            result = shd(g_true, g_guess)
        else:
            pair_filter = PairFilter(
                treatments=_parse_id_list(args.treatments), targets=_parse_id_list(args.targets)
            )
            result = aid(g_true, g_guess, Strategy(args.distance), filter=pair_filter, threads=threads)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
    except ValidationError as exc:
        raise _CliError(3, str(exc)) from exc
    except ValueError as exc:
        raise _CliError(2, str(exc)) from exc
    _emit_result(args, args.distance, result, g_true.p, elapsed_ms, threads)
    return 0


def _cmd_order(args) -> int:
    g_true = _load_graph(args.true, args.format, "dag", args.header)
    order = _load_order(args.order)
    try:
        t0 = time.perf_counter()
        result = order_aid(g_true, order, threads=args.threads)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
    except ValidationError as exc:
        raise _CliError(3, str(exc)) from exc
    _emit_result(args, "order", result, g_true.p, elapsed_ms, args.threads)
    return 0


def _cmd_gen(args) -> int:
    density = args.density
    if density not in ("sparse", "dense"):
        try:
            density = float(density)
        except ValueError:
            raise _CliError(2, f"bad density {args.density!r}: use sparse, dense or a probability") from None
    try:
        g = gen_random_dag(GenConfig(p=args.nodes, density=density, seed=args.seed))
    except ValueError as exc:
        raise _CliError(2, str(exc)) from exc
    text = serialize_graph(g, format=args.format)
    Path(args.output).write_text(text, encoding="utf-8")
    print(f"wrote {args.output} (p={g.p}, m={g.m})")
    return 0


def _write_report(args, report) -> int:
    if args.output:
        Path(args.output).write_text(report.to_csv(), encoding="utf-8")
        print(f"wrote {args.output}")
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(report.to_json(), indent=2), encoding="utf-8")
        print(f"wrote {args.json_out}")
    if not args.output and not args.json_out:
        sys.stdout.write(report.to_csv())
    return 0


def _cmd_bench(args) -> int:
    sizes = _parse_id_list(args.sizes)
    if not sizes:
        raise _CliError(2, "bench requires --sizes")
    try:
        report = run_complexity_bench(
            sizes,
            density=args.density,
            strategy=Strategy(args.distance),
            reps=args.reps,
            seed=args.seed,
            workers=args.threads,
        )
    except ValueError as exc:
        raise _CliError(2, str(exc)) from exc
    return _write_report(args, report)


def _cmd_compare(args) -> int:
    try:
        report = run_comparison(
            p=args.nodes,
            density=args.density,
            mode=args.mode,
            n_pairs=args.pairs,
            seed=args.seed,
            workers=args.threads,
        )
    except ValueError as exc:
        raise _CliError(2, str(exc)) from exc
    return _write_report(args, report)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaid", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gaid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_io(p):
        p.add_argument("--format", choices=["adj", "edgelist"], default="adj")
        p.add_argument("--header", action="store_true", help="skip a header row in adjacency CSV input")
        p.add_argument("--threads", type=int, default=_default_threads())
        p.add_argument("--json", action="store_true")

    p_dist = sub.add_parser("dist", help="distance between two graph files")
    p_dist.add_argument("--distance", required=True, choices=["parent", "ancestor", "oset", "shd"])
    p_dist.add_argument("--true", required=True)
    p_dist.add_argument("--guess", required=True)
    p_dist.add_argument("--kind", choices=["dag", "cpdag"], default=None)
    p_dist.add_argument("--treatments", default=None, help="comma-separated treatment node ids")
    p_dist.add_argument("--targets", default=None, help="comma-separated target node ids")
    add_graph_io(p_dist)
    p_dist.set_defaults(func=_cmd_dist)

    p_order = sub.add_parser("order", help="ancestor distance from a true DAG to a causal order")
    p_order.add_argument("--true", required=True)
    p_order.add_argument("--order", required=True, help="file of 'a b' lines meaning a precedes b")
    add_graph_io(p_order)
    p_order.set_defaults(func=_cmd_order)

    p_gen = sub.add_parser("gen", help="generate a seeded random DAG file")
    p_gen.add_argument("--nodes", type=int, required=True)
    p_gen.add_argument("--density", default="sparse", help="sparse, dense, or an edge probability")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.add_argument("--format", choices=["adj", "edgelist"], default="adj")
    p_gen.set_defaults(func=_cmd_gen)

    p_bench = sub.add_parser("bench", help="runtime-complexity projection study")
    p_bench.add_argument("--sizes", required=True, help="comma-separated ascending node counts")
    p_bench.add_argument("--density", default="sparse")
    p_bench.add_argument("--distance", default="ancestor", choices=["parent", "ancestor", "oset"])
    p_bench.add_argument("--reps", type=int, default=3)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--threads", type=int, default=_default_threads())
    p_bench.add_argument("-o", "--output", default=None, help="CSV output path")
    p_bench.add_argument("--json", dest="json_out", default=None, help="JSON output path")
    p_bench.set_defaults(func=_cmd_bench)

    p_cmp = sub.add_parser("compare", help="distance-comparison study over random pairs")
    p_cmp.add_argument("--nodes", type=int, required=True)
    p_cmp.add_argument("--density", default="dense")
    p_cmp.add_argument("--mode", choices=["edge-removal", "independent"], default="edge-removal")
    p_cmp.add_argument("--pairs", type=int, default=300)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--threads", type=int, default=_default_threads())
    p_cmp.add_argument("-o", "--output", default=None, help="CSV output path")
    p_cmp.add_argument("--json", dest="json_out", default=None, help="JSON output path")
    p_cmp.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
