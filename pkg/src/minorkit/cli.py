"""Command-line entry point: ``minorkit <subcommand> ...``.

Exit codes: 0 success or certified model, 1 certified absence or a failure
report, 2 usage error (bad flags, unreadable or malformed input).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .extremal import ExtremalClassParams, compute_alpha, extract_minor_minimal, in_class
from .failure import FailureReport
from .gamma import compute_gamma
from .graph import format_edge_list, read_edge_list
from .oracle import BudgetExceeded, dumps_model, has_minor_exact
from .pipeline import PipelineConfig, run_auto, run_experiment

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _graph(path: str):
    try:
        return read_edge_list(sys.stdin if path == "-" else path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _plain(x):
    # numpy scalars in report details
    return x.item() if hasattr(x, "item") else str(x)


def _report_json(report: FailureReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=1, default=_plain)


def cmd_embed(args) -> int:
    G, H = _graph(args.host), _graph(args.target)
    try:
        cfg = PipelineConfig(eps=args.eps, mode=args.mode, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    run = run_auto(G, H, cfg)
    derived = {k: v for k, v in run.derived.items() if isinstance(v, (int, float, str, bool)) or v is None}
    print(json.dumps({"derived": derived, "stages": run.stages}, sort_keys=True), file=sys.stderr)
    if run.report is not None:
        _emit(_report_json(run.report), args.out)
        return EXIT_NO
    _emit(dumps_model(run.model), args.out)
    return EXIT_OK


def cmd_minimal(args) -> int:
    G = _graph(args.host)
    try:
        params = ExtremalClassParams(args.m, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not in_class(G, params):
        print(f"graph with n={G.n}, e={G.num_edges} is not in E({args.m}, {args.k})", file=sys.stderr)
        return EXIT_NO
    ext = extract_minor_minimal(G, params)
    print(json.dumps(ext.certificate.to_dict(), sort_keys=True), file=sys.stderr)
    _emit(format_edge_list(ext.graph), args.out)
    return EXIT_OK if ext.certificate.passed else EXIT_NO


def cmd_oracle(args) -> int:
    G, H = _graph(args.host), _graph(args.target)
    roots = None
    if args.roots:
        try:
            roots = [int(x) for x in args.roots.split(",")]
        except ValueError as exc:
            raise UsageError("--roots takes comma-separated integers") from exc
    try:
        model = has_minor_exact(G, H, roots, budget=args.budget)
    except BudgetExceeded as exc:
        report = FailureReport("oracle", "search budget exhausted", [f"nodes = {exc.nodes} > {args.budget}"])
        _emit(_report_json(report), args.out)
        return EXIT_NO
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if model is None:
        _emit(json.dumps({"minor": False}), args.out)
        return EXIT_NO
    _emit(dumps_model(model), args.out)
    return EXIT_OK


def cmd_alpha(args) -> int:
    res = compute_alpha()
    print(json.dumps({"alpha": res.alpha, "p_star": res.p_star}))
    return EXIT_OK


def cmd_gamma(args) -> int:
    H = _graph(args.target)
    try:
        wv = compute_gamma(H, tolerance=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(json.dumps(wv.to_dict()), args.out)
    return EXIT_OK if wv.feasible else EXIT_NO


def cmd_experiment(args) -> int:
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}: {exc}") from exc
    try:
        records = run_experiment(config, args.out_dir, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = sum(r.success for r in records)
    print(f"{len(records)} rows, {ok} certified, written to {args.out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minorkit", description="Certified graph-minor embeddings.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="top-level dense/sparse embedding")
    p.add_argument("--host", required=True, help="host edge-list file ('-' for stdin)")
    p.add_argument("--target", required=True, help="target edge-list file")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--mode", choices=["relaxed", "paper_faithful"], default="relaxed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the model (or failure report) here")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("minimal", help="extract a minor-minimal member of E(m, k)")
    p.add_argument("--host", default="-", help="edge-list file ('-' for stdin)")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--out", help="write the minimal graph here")
    p.set_defaults(func=cmd_minimal)

    p = sub.add_parser("oracle", help="exact minor test")
    p.add_argument("--host", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--roots", help="comma-separated roots, one per target vertex")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("alpha", help="print alpha and its maximiser")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("gamma", help="solve the weight program for a target graph")
    p.add_argument("--target", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("experiment", help="run a grid config")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"minorkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
