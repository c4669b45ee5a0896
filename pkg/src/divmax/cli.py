"""Command-line front end: ``divmax <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 infeasible instance, 3 budget or
capability limit.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .core import DiversityKind, DivMaxError, MetricKind
from .coreset import Coreset, seq_coreset
from .harness import (
    DEFAULT_TAUS,
    EXIT_OK,
    RunConfig,
    bench,
    exit_code_for,
    format_table,
    report_exit_code,
    run,
)
from .io import SynthSpec, finite_or_none, gen, ingest, iter_points, load_matroid, write_json
from .matroid import rank
from .oracle import OPTIMUM_BUDGET, brute_force_optimum, check_matroid_axioms, half_diameter_pair
from .parallel import parallel_coreset
from .solvers import DEFAULT_BUDGET, PIPELINES, SOLVERS, exhaustive_search
from .stream import DEFAULT_C, consume

log = logging.getLogger("divmax")


def _stop_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--epsilon", type=float, help="target precision in (0, 1)")
    g.add_argument("--tau", type=int, help="number of clusters")


def _data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="points file (JSON lines)")
    p.add_argument("--matroid", required=True, help="matroid config (JSON)")
    p.add_argument("--metric", choices=[m.value for m in MetricKind], default=MetricKind.ANGULAR_COSINE.value)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output", default="-", help="report path, '-' for stdout")


def _solve_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--diversity", choices=[k.value for k in DiversityKind], default="sum")
    p.add_argument("--solver", choices=SOLVERS, default="local-search")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--pipeline", choices=PIPELINES, default="seq")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divmax", description="Diversity maximization under matroid constraints.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coreset-seq", help="sequential coreset (GMM clustering)")
    _data_flags(p)
    _stop_flags(p)

    p = sub.add_parser("coreset-stream", help="one-pass streaming coreset, reads the file line by line")
    _data_flags(p)
    _stop_flags(p)
    p.add_argument("--c", type=float, default=DEFAULT_C, help="threshold constant (epsilon mode)")

    p = sub.add_parser("coreset-parallel", help="union of per-shard coresets")
    _data_flags(p)
    _stop_flags(p)
    p.add_argument("--parallelism", type=int, default=2)

    p = sub.add_parser("solve", help="coreset plus final solver, repeated over seeded permutations")
    _data_flags(p)
    _stop_flags(p)
    _solve_flags(p)

    p = sub.add_parser("verify", help="brute-force audit of a small instance")
    _data_flags(p)
    p.add_argument("--diversity", choices=[k.value for k in DiversityKind], default="sum")
    p.add_argument("--tau", type=int, help="also check the sequential coreset with this many clusters")
    p.add_argument("--budget", type=int, default=OPTIMUM_BUDGET)

    p = sub.add_parser("gen", help="write a synthetic points file and matroid config")
    p.add_argument("--output", required=True, help="points file to write")
    p.add_argument("--matroid", required=True, help="matroid config to write")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--clusters", type=int, default=10)
    p.add_argument("--categories", type=int, default=16)
    p.add_argument("--type", dest="matroid_type", choices=["partition", "transversal"], default="partition")
    p.add_argument("--rank", type=int, help="partition rank (sum of quotas)")
    p.add_argument("--max-categories", type=int, default=3, help="transversal: categories per point")
    p.add_argument("--spread", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="tau sweep and parallelism sweep")
    _data_flags(p)
    _solve_flags(p)
    p.add_argument("--taus", type=int, nargs="+", default=list(DEFAULT_TAUS))
    p.add_argument("--ells", type=int, nargs="+", default=[1, 2, 4])
    p.add_argument("--parallel-tau", type=int, default=64)
    return parser


def _coreset_json(core: Coreset, d, elapsed: float) -> dict:
    return {
        "size": len(core),
        "tau": core.tau,
        "radius": finite_or_none(core.radius),
        "centers": [d.points[i].id for i in core.centers],
        "ids": [d.points[i].id for i in core.ids],
        "shard_radii": [finite_or_none(r) for r in core.shard_radii],
        "time": elapsed,
    }


def _config(args) -> RunConfig:
    return RunConfig(
        k=args.k,
        kind=DiversityKind(args.diversity),
        pipeline=args.pipeline,
        epsilon=getattr(args, "epsilon", None),
        tau=getattr(args, "tau", None),
        solver=args.solver,
        gamma=args.gamma,
        parallelism=args.parallelism,
        seed=args.seed,
        repetitions=args.reps,
        budget=args.budget,
        input=args.input,
        matroid=args.matroid,
        output=args.output,
    )


def _cmd_coreset(args) -> int:
    metric = MetricKind(args.metric)
    t0 = time.perf_counter()
    if args.command == "coreset-stream":
        # the points file is consumed lazily; only delegates are kept
        m = load_matroid(args.matroid)
        res = consume(iter_points(args.input), m, args.k, epsilon=args.epsilon, tau=args.tau, c=args.c, metric=metric)
        out = {
            "size": len(res.points),
            "tau": len(res.centers),
            "radius_bound": finite_or_none(res.radius_bound),
            "R": res.R,
            "count": res.count,
            "centers": [z.id for z in res.centers],
            "ids": sorted(p.id for p in res.points),
            "time": time.perf_counter() - t0,
        }
        write_json(args.output, out)
        return EXIT_OK
    d, m = ingest(args.input, args.matroid, metric)
    if args.command == "coreset-seq":
        core = seq_coreset(d, m, args.k, epsilon=args.epsilon, tau=args.tau)
    else:
        core = parallel_coreset(d, m, args.k, args.parallelism, epsilon=args.epsilon, tau=args.tau)
    write_json(args.output, _coreset_json(core, d, time.perf_counter() - t0))
    return EXIT_OK


def _cmd_solve(args) -> int:
    cfg = _config(args)
    cfg.validate()
    d, m = ingest(args.input, args.matroid, MetricKind(args.metric))
    report = run(cfg, d, m)
    write_json(args.output, report.to_json())
    return report_exit_code(report)


def _cmd_verify(args) -> int:
    d, m = ingest(args.input, args.matroid, MetricKind(args.metric))
    kind = DiversityKind(args.diversity)
    ids, value = brute_force_optimum(d, m, args.k, kind, args.budget)
    witness = half_diameter_pair(d, m)
    out = {
        "n": len(d),
        "rank": rank(m, d),
        "optimum": value,
        "solution": [d.points[i].id for i in ids],
        "half_diameter_pair": None if witness is None else [d.points[i].id for i in witness],
    }
    if len(d) <= 12:
        out["axiom_violations"] = check_matroid_axioms(m, d)
    if args.tau is not None:
        core = seq_coreset(d, m, args.k, tau=args.tau)
        on_core = exhaustive_search(d, m, core.ids, args.k, kind, args.budget)
        out["coreset"] = {"size": len(core), "radius": core.radius, "value": on_core.value}
    write_json(args.output, out)
    return EXIT_OK


def _cmd_gen(args) -> int:
    spec = SynthSpec(
        n=args.n,
        dim=args.dim,
        clusters=args.clusters,
        categories=args.categories,
        matroid=args.matroid_type,
        rank=args.rank,
        max_categories=args.max_categories,
        spread=args.spread,
        seed=args.seed,
    )
    gen(spec, args.output, args.matroid)
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = _config(args)
    d, m = ingest(args.input, args.matroid, MetricKind(args.metric))
    result = bench(cfg, d, m, tuple(args.taus), tuple(args.ells), args.parallel_tau)
    print(format_table(result), file=sys.stderr)
    write_json(args.output, result)
    return EXIT_OK


COMMANDS = {
    "coreset-seq": _cmd_coreset,
    "coreset-stream": _cmd_coreset,
    "coreset-parallel": _cmd_coreset,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage; that is an input error here
        return EXIT_OK if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except DivMaxError as exc:
        print(f"divmax: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"divmax: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
