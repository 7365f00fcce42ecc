"""Command-line entry points: plan the workflow parameters, serve the API, run
simulated experiments, score clusterings, and fetch run reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from random import Random

from . import metrics as metrics_mod, sampling
from .client import ApiClient, run_simulation
from .model import WorkflowConfig
from .simulation import (
    Perspective,
    ShapesSpec,
    WorkerModel,
    default_shapes_worker_model,
    flat_perspective,
    generate_flat_corpus,
    generate_shapes_corpus,
    load_corpus,
    load_worker_model,
)


def cmd_plan(args: argparse.Namespace) -> int:
    n_exact = sampling.solve_sample_size(args.delta, args.f)
    n = args.n if args.n is not None else n_exact
    tau = sampling.solve_iterations(n, args.f, args.h)
    report = sampling.CoverageReport.for_parameters(n, args.f)
    out = {
        "delta": args.delta,
        "f": args.f,
        "h": args.h,
        "m": args.m,
        "n": n,
        "n_exact_for_delta": n_exact,
        "published_operating_point": sampling.PUBLISHED_OPERATING_POINT,
        "tau": tau,
        "expected_coverage_lower_bound": report.expected_coverage_lower_bound,
        "variance_upper_bound": report.variance_upper_bound,
        "planned_clustering_assignments": sampling.planned_task_assignments(n, args.f, args.h, args.m),
    }
    print(json.dumps(out, indent=2))
    return 0


def _load_config(args: argparse.Namespace) -> WorkflowConfig:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    config = WorkflowConfig.from_dict(data)
    for key in ("delta", "f", "n", "h", "m", "theta"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    config.rng_seed = args.seed
    return config


def cmd_run(args: argparse.Namespace) -> int:
    if not args.simulate:
        print("only --simulate runs are driven from the CLI; live runs are created via the API", file=sys.stderr)
        return 2
    config = _load_config(args)
    rng = Random(config.rng_seed)
    if args.corpus:
        corpus = load_corpus(args.corpus)
        if not args.worker_model:
            print("--worker-model is required with a corpus manifest", file=sys.stderr)
            return 2
        model = load_worker_model(args.worker_model)
    elif args.preset == "shapes":
        spec = ShapesSpec(count=args.count)
        corpus = generate_shapes_corpus(spec, rng)
        model = default_shapes_worker_model(
            spec, split_probability=args.split_probability, noise_rate=args.noise_rate
        )
    elif args.preset == "flat":
        concepts = [f"concept-{i:02d}" for i in range(args.concepts)]
        corpus = generate_flat_corpus(concepts, args.count, rng)
        model = WorkerModel(
            perspectives=[flat_perspective(concepts)],
            hierarchy_weights=[1.0],
            split_probability=args.split_probability,
            noise_rate=args.noise_rate,
        )
    else:
        print("choose --preset shapes|flat or pass --corpus/--worker-model", file=sys.stderr)
        return 2

    client = ApiClient(args.server) if args.server else ApiClient.in_process()
    report = run_simulation(config, corpus, model, client=client)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"report written to {args.out}")
    else:
        print(text)
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    rng = Random(args.seed)
    if args.preset == "shapes":
        spec = ShapesSpec(count=args.count)
        corpus = generate_shapes_corpus(spec, rng)
        model = default_shapes_worker_model(spec)
    else:
        concepts = [f"concept-{i:02d}" for i in range(args.concepts)]
        corpus = generate_flat_corpus(concepts, args.count, rng)
        model = WorkerModel([flat_perspective(concepts)], [1.0])
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(corpus.to_dict(), fh, indent=2)
    if args.worker_model_out:
        with open(args.worker_model_out, "w", encoding="utf-8") as fh:
            json.dump(model.to_dict(), fh, indent=2)
    print(f"corpus of {len(corpus)} items written to {args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(data_dir=args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _read_clusters(path: str) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data["clusters"]
    return [list(c) for c in data]


def cmd_score(args: argparse.Namespace) -> int:
    a = _read_clusters(args.clustering_a)
    b = _read_clusters(args.clustering_b)
    out = {
        "vi_bits": metrics_mod.variation_of_information(a, b),
        "nmi": metrics_mod.normalized_mutual_information(a, b),
    }
    if args.corpus and args.perspectives:
        corpus = load_corpus(args.corpus)
        with open(args.perspectives, encoding="utf-8") as fh:
            perspectives = [Perspective.from_dict(p) for p in json.load(fh)]
        out["hierarchy_count_a"] = metrics_mod.clustering_hierarchy_count(a, corpus, perspectives).to_dict()
        out["hierarchy_count_b"] = metrics_mod.clustering_hierarchy_count(b, corpus, perspectives).to_dict()
    print(json.dumps(out, indent=2))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    client = ApiClient(args.server)
    print(json.dumps(client.report(args.run_id), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quorum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve n, tau and the cost bounds for workflow parameters")
    p.add_argument("--delta", type=float, default=0.95)
    p.add_argument("--f", type=int, default=16)
    p.add_argument("--h", type=int, default=35)
    p.add_argument("--m", type=int, default=15)
    p.add_argument("--n", type=int, default=None, help="override the solved sample size")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("run", help="create a run and (with --simulate) drive it with simulated workers")
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--seed", type=int, required=True, help="run seed (mandatory for reproducibility)")
    p.add_argument("--preset", choices=["shapes", "flat"], default=None)
    p.add_argument("--count", type=int, default=500, help="corpus size for presets")
    p.add_argument("--concepts", type=int, default=20, help="concept count for the flat preset")
    p.add_argument("--split-probability", type=float, default=0.5)
    p.add_argument("--noise-rate", type=float, default=0.0)
    p.add_argument("--corpus", help="corpus manifest JSON (alternative to presets)")
    p.add_argument("--worker-model", help="worker model JSON (required with --corpus)")
    p.add_argument("--config", help="workflow config JSON; flags override")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--f", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--h", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--theta", type=int, default=None)
    p.add_argument("--server", help="remote service URL; defaults to an in-process service")
    p.add_argument("--out", help="write the final report JSON here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("corpus", help="generate a synthetic corpus manifest (and worker model)")
    p.add_argument("--preset", choices=["shapes", "flat"], default="shapes")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--concepts", type=int, default=20)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--worker-model-out", help="also write the matching worker model JSON")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", default=None, help="directory for event logs and snapshots")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("score", help="compare two clustering files (VI bits, NMI)")
    p.add_argument("clustering_a")
    p.add_argument("clustering_b")
    p.add_argument("--corpus", help="corpus manifest with ground-truth labels")
    p.add_argument("--perspectives", help="perspective definitions JSON for hierarchy counting")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("report", help="fetch a run report from a server")
    p.add_argument("run_id")
    p.add_argument("--server", default="http://127.0.0.1:8000")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
