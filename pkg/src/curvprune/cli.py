"""Command line front end.

Four subcommands: generate (graph files), rank (edge score CSV), prune
(full experiments), report (aggregate summaries and plot data). Exit
codes: 0 success, 2 configuration problem, 3 evaluator failure, 4 I/O
failure. A JSON config file can seed the prune command; explicitly
passed flags override the file, which overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ConfigurationError, CurvpruneError, EvaluationError
from .graphs import GeneratorConfig, UndirectedGraph, generate
from .measures import rank_edges, score_table, write_scores_csv
from .pruning import ExperimentConfig, ExperimentReport, run_single_seed
from .reporting import write_report_outputs, write_summary_outputs

__all__ = ["main"]

# Default family parameters used when flags leave them unset.
FAMILY_DEFAULTS = {
    "er": {"p": 0.2},
    "ws": {"k": 4, "p": 0.75},
    "ba": {"m": 5},
}
DEFAULT_N = 32


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvprune",
        description="Curvature- and centrality-guided pruning of randomly wired networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write random graph JSON files")
    p_gen.add_argument("--model", choices=("er", "ws", "ba"), required=True)
    p_gen.add_argument("--n", type=int, default=DEFAULT_N)
    p_gen.add_argument("--p", type=float, default=None)
    p_gen.add_argument("--k", type=int, default=None)
    p_gen.add_argument("--m", type=int, default=None)
    p_gen.add_argument("--seeds", type=int, default=1, help="number of seeds, 0..seeds-1")
    p_gen.add_argument("--out", type=Path, required=True, help="output directory")

    p_rank = sub.add_parser("rank", help="score and rank the edges of a graph file")
    p_rank.add_argument("graph", type=Path)
    p_rank.add_argument("--measure", choices=("frc", "orc", "ebc"), required=True)
    p_rank.add_argument("--direction", choices=("default", "inverted"), default="default")
    p_rank.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")

    p_prune = sub.add_parser("prune", help="run binary-search pruning experiments")
    p_prune.add_argument("--config", type=Path, default=None, help="experiment config JSON")
    p_prune.add_argument("--model", choices=("er", "ws", "ba"), default=None)
    p_prune.add_argument("--n", type=int, default=None)
    p_prune.add_argument("--p", type=float, default=None)
    p_prune.add_argument("--k", type=int, default=None)
    p_prune.add_argument("--m", type=int, default=None)
    p_prune.add_argument("--seeds", type=str, default=None,
                         help="count (e.g. 10) or comma list (e.g. 3,16,34)")
    p_prune.add_argument("--measure", choices=("frc", "orc", "ebc"), default=None)
    p_prune.add_argument("--direction", choices=("default", "inverted"), default=None)
    p_prune.add_argument("--evaluator", choices=("surrogate", "external"), default=None)
    p_prune.add_argument("--external-cmd", type=str, default=None,
                         help="trainer command line for the external evaluator")
    p_prune.add_argument("--depth", type=int, default=None)
    p_prune.add_argument("--jobs", type=int, default=1)
    p_prune.add_argument("--out", type=Path, required=True, help="output directory")

    p_rep = sub.add_parser("report", help="aggregate experiment reports into summaries")
    p_rep.add_argument("reports", type=Path, nargs="+")
    p_rep.add_argument("--out", type=Path, required=True, help="output directory")
    return parser


def _cmd_generate(args) -> int:
    params = dict(FAMILY_DEFAULTS[args.model])
    for name in params:
        if getattr(args, name) is not None:
            params[name] = getattr(args, name)
    if args.seeds < 1:
        raise ConfigurationError("--seeds must be at least 1")
    args.out.mkdir(parents=True, exist_ok=True)
    for seed in range(args.seeds):
        config = GeneratorConfig(kind=args.model.upper(), n=args.n, seed=seed, **params)
        graph = generate(config)
        path = args.out / f"{args.model}_n{args.n}_seed{seed}.json"
        path.write_bytes(graph.to_json_bytes())
        print(f"wrote {path} ({graph.edge_count} edges)")
    return 0


def _cmd_rank(args) -> int:
    graph = UndirectedGraph.from_json_bytes(args.graph.read_bytes())
    measure = args.measure.upper()
    table = score_table(graph, measure)
    ranking = rank_edges(graph, measure, args.direction, table)
    if args.out is None:
        write_scores_csv(table, ranking, sys.stdout)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", newline="") as fh:
            write_scores_csv(table, ranking, fh)
        print(f"wrote {args.out}")
    return 0


def _parse_seeds(text: str) -> list[int]:
    try:
        if "," in text:
            return [int(part) for part in text.split(",") if part.strip() != ""]
        count = int(text)
        if count < 1:
            raise ConfigurationError("--seeds count must be positive")
        return list(range(count))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse --seeds {text!r}: {exc}") from exc


def _prune_config(args) -> ExperimentConfig:
    config_dict: dict = {}
    if args.config is not None:
        try:
            config_dict = json.loads(args.config.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(config_dict, dict):
            raise ConfigurationError("config file must hold a JSON object")

    generator = dict(config_dict.get("generator", {}))
    if args.model is not None:
        generator["kind"] = args.model.upper()
        # switching family invalidates the other family's parameters
        generator = {k: v for k, v in generator.items() if k in ("kind", "n")}
    if "kind" not in generator:
        raise ConfigurationError("a generator family is required (--model or config file)")
    kind = str(generator["kind"]).lower()
    if kind in FAMILY_DEFAULTS:
        for name, value in FAMILY_DEFAULTS[kind].items():
            generator.setdefault(name, value)
    generator.setdefault("n", DEFAULT_N)
    for name in ("n", "p", "k", "m"):
        if getattr(args, name, None) is not None:
            generator[name] = getattr(args, name)

    config_dict["generator"] = generator
    if args.measure is not None:
        config_dict["measure"] = args.measure.upper()
    if args.direction is not None:
        config_dict["direction"] = args.direction
    if args.depth is not None:
        config_dict["depth"] = args.depth
    if args.seeds is not None:
        config_dict["seeds"] = _parse_seeds(args.seeds)
    config_dict.setdefault("seeds", list(range(10)))
    config_dict.setdefault("measure", "FRC")

    evaluator = dict(config_dict.get("evaluator", {"kind": "surrogate"}))
    if args.evaluator is not None:
        if args.evaluator != evaluator.get("kind", "surrogate"):
            evaluator = {"kind": args.evaluator}
        evaluator["kind"] = args.evaluator
    if args.external_cmd is not None:
        evaluator["kind"] = "external"
        evaluator["cmd"] = shlex.split(args.external_cmd)
    if evaluator.get("kind") == "external" and not evaluator.get("cmd"):
        raise ConfigurationError("external evaluator needs --external-cmd or config 'cmd'")
    config_dict["evaluator"] = evaluator
    return ExperimentConfig.from_dict(config_dict)


def _run_seed_task(config_dict: dict, seed: int):
    # module-level entry point so process pools can pickle it
    return run_single_seed(ExperimentConfig.from_dict(config_dict), seed)


def _cmd_prune(args) -> int:
    config = _prune_config(args)
    if args.jobs < 1:
        raise ConfigurationError("--jobs must be at least 1")
    if args.jobs == 1 or len(config.seeds) == 1:
        runs = tuple(run_single_seed(config, seed) for seed in config.seeds)
    else:
        config_dict = config.to_dict()
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_run_seed_task, config_dict, seed) for seed in config.seeds]
            runs = tuple(f.result() for f in futures)  # seed order, not completion order
    report = ExperimentReport(config, runs)
    write_report_outputs(report, args.out)
    for r in report.runs:
        print(f"seed {r.seed}: best fraction {r.prune.best_fraction}%, "
              f"compression {r.compression:.3f}, speedup {r.speedup:.3f}")
    return 0


def _cmd_report(args) -> int:
    reports = []
    for path in args.reports:
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path} is not valid report JSON: {exc}") from exc
        reports.append(obj)
    write_summary_outputs(reports, args.out)
    print(f"wrote summaries for {len(reports)} report(s) to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "rank": _cmd_rank,
        "prune": _cmd_prune,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except EvaluationError as exc:
        print(f"evaluator error: {exc}", file=sys.stderr)
        if exc.diagnostics:
            print(f"diagnostics: {exc.diagnostics}", file=sys.stderr)
        return 3
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except CurvpruneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
