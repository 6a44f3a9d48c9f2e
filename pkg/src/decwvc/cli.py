"""Command-line entry point: generate, solve, experiment, validate."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .baselines import GraphTooLargeError, brute_force_mwvc, greedy_pruned_mwvc
from .engine import Schedule, run, validate_cover
from .experiments import ExperimentConfig, apw, emit_csv, emit_json, run_experiment
from .graph import (
    GraphFormatError,
    Topology,
    TopologyKind,
    WeightDistribution,
    WeightKind,
    assign_weights,
    generate,
    load_graph,
    save_graph,
)
from .protocol import OptimizeRule

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_INVALID_COVER = 2


class InvalidInput(Exception):
    pass


def read_cover(path: str | Path) -> list[int]:
    cover = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            cover.append(int(line))
        except ValueError:
            raise InvalidInput(f"{path}:{lineno}: not a vertex ID: {line!r}") from None
    return cover


def cmd_generate(args: argparse.Namespace) -> int:
    topology = Topology(TopologyKind(args.topology), args.nodes, args.avg_degree)
    graph = generate(topology, args.seed)
    graph = assign_weights(graph, WeightDistribution(WeightKind(args.weights)), args.seed)
    save_graph(graph, args.out)
    print(f"wrote {args.out}: {graph.order} vertices, {graph.num_edges} edges, "
          f"average degree {graph.average_degree():.2f}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    report = run(graph, OptimizeRule(args.rule), Schedule(args.schedule))
    payload = report.to_dict()
    if args.baseline:
        if args.baseline == "exact":
            result = brute_force_mwvc(graph)
        else:
            result = greedy_pruned_mwvc(graph)
        payload["baseline"] = {"solver": args.baseline, **result.to_dict(),
                               "apw": apw(graph, result.cover)}
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_file(args.config)
    rows = run_experiment(config, workers=args.workers)
    emit_csv(rows, args.out_csv, timing=args.timing)
    if args.out_json:
        emit_json(rows, args.out_json, timing=args.timing)
    failed = sum(row.failed for row in rows)
    print(f"{len(rows)} cells written to {args.out_csv} ({failed} failed)")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    cover = read_cover(args.cover)
    unknown = [v for v in cover if not 1 <= v <= graph.order]
    if unknown:
        raise InvalidInput(f"cover lists vertices outside 1..{graph.order}: {unknown[:5]}")
    if validate_cover(graph, cover):
        print("valid cover")
        return EXIT_OK
    uncovered = next((u, v) for u, v in graph.edges() if u not in set(cover) and v not in set(cover))
    print(f"invalid cover: edge {uncovered} is uncovered")
    return EXIT_INVALID_COVER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decwvc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a weighted synthetic graph")
    p.add_argument("--topology", choices=[t.value for t in TopologyKind], required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--avg-degree", type=int, required=True)
    p.add_argument("--weights", choices=[w.value for w in WeightKind], default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run the protocol on a graph file, emit a JSON report")
    p.add_argument("--graph", required=True)
    p.add_argument("--rule", choices=[r.value for r in OptimizeRule], default="safe")
    p.add_argument("--schedule", choices=[s.value for s in Schedule], default="sequential")
    p.add_argument("--baseline", choices=["greedy", "exact"])
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment", help="run an experiment matrix from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include mean elapsed time columns")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("validate", help="check that a cover file covers every edge")
    p.add_argument("--graph", required=True)
    p.add_argument("--cover", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (InvalidInput, GraphFormatError, GraphTooLargeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
