"""Repeated, seeded runs of the full pipeline and the tau / parallelism sweeps."""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, replace

import numpy as np

from .core import CapabilityError, Dataset, DiversityKind, DivMaxError, InfeasibleError, InputError
from .io import Report, RunRecord
from .matroid import Matroid
from .parallel import parallel_coreset
from .solvers import DEFAULT_BUDGET, PIPELINES, SOLVERS, solve

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_CAPABILITY = 0, 1, 2, 3

DEFAULT_TAUS = (8, 16, 32, 64, 128, 256)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, InfeasibleError):
        return EXIT_INFEASIBLE
    if isinstance(exc, CapabilityError):
        return EXIT_CAPABILITY
    return EXIT_INPUT


@dataclass(frozen=True)
class RunConfig:
    k: int
    kind: DiversityKind = DiversityKind.SUM
    pipeline: str = "seq"
    epsilon: float | None = None
    tau: int | None = None
    solver: str = "local-search"
    gamma: float = 0.0
    parallelism: int = 1
    seed: int = 0
    repetitions: int = 1
    budget: int = DEFAULT_BUDGET
    input: str | None = None
    matroid: str | None = None
    output: str | None = None

    def validate(self) -> None:
        if (self.epsilon is None) == (self.tau is None):
            raise InputError("exactly one of epsilon and tau must be set")
        if self.solver not in SOLVERS:
            raise InputError(f"unknown solver {self.solver!r}")
        if self.pipeline not in PIPELINES:
            raise InputError(f"unknown pipeline {self.pipeline!r}")
        if self.solver == "local-search" and DiversityKind(self.kind) is not DiversityKind.SUM:
            raise InputError("local search only supports the sum diversity")
        if self.repetitions < 1:
            raise InputError("repetitions must be positive")

    def as_dict(self) -> dict:
        out = asdict(self)
        out["kind"] = DiversityKind(self.kind).value
        return out


def run(cfg: RunConfig, d: Dataset, m: Matroid) -> Report:
    """One record per repetition; repetition ``r`` permutes the data with ``seed + r``."""
    cfg.validate()
    report = Report(cfg.as_dict())
    for rep in range(cfg.repetitions):
        seed = cfg.seed + rep
        rec = RunRecord(seed=seed)
        try:
            dp = d.permuted(seed)
            res = solve(
                dp,
                m,
                cfg.k,
                cfg.kind,
                cfg.pipeline,
                epsilon=cfg.epsilon,
                tau=cfg.tau,
                solver=cfg.solver,
                gamma=cfg.gamma,
                ell=cfg.parallelism,
                budget=cfg.budget,
            )
        except DivMaxError as exc:
            log.error("repetition %d failed: %s", rep, exc)
            rec.error, rec.error_kind = str(exc), type(exc).__name__
        else:
            rec.diversity = res.solution.value
            rec.solution = sorted(res.solution.point_ids(dp))
            rec.coreset_size = res.coreset_size
            rec.radius = res.radius
            rec.coreset_time = res.coreset_time
            rec.solver_time = res.solver_time
            rec.swaps = res.swaps
            rec.hit_cap = res.hit_cap
        report.records.append(rec)
    return report


def report_exit_code(report: Report) -> int:
    kinds = [r.error_kind for r in report.records if r.error is not None]
    if not kinds:
        return EXIT_OK
    if "InfeasibleError" in kinds:
        return EXIT_INFEASIBLE
    if "CapabilityError" in kinds:
        return EXIT_CAPABILITY
    return EXIT_INPUT


def tau_sweep(cfg: RunConfig, d: Dataset, m: Matroid, taus=DEFAULT_TAUS) -> list[dict]:
    """Quality and timing per tau: one row per value, averaged over the repetitions."""
    rows = []
    for tau in taus:
        rep = run(replace(cfg, tau=tau, epsilon=None), d, m)
        row = {"tau": tau, **rep.summary()}
        rows.append(row)
        log.info("tau=%d mean diversity %.6g", tau, row.get("mean_diversity", float("nan")))
    return rows


def parallel_sweep(cfg: RunConfig, d: Dataset, m: Matroid, ells=(1, 2, 4), tau: int = 64) -> list[dict]:
    """Coreset construction time per parallelism level at a fixed total tau."""
    rows = []
    for ell in ells:
        times, sizes = [], []
        for rep in range(cfg.repetitions):
            dp = d.permuted(cfg.seed + rep)
            t0 = time.perf_counter()
            core = parallel_coreset(dp, m, cfg.k, ell, tau=tau)
            times.append(time.perf_counter() - t0)
            sizes.append(len(core))
        rows.append(
            {
                "parallelism": ell,
                "tau": tau,
                "mean_coreset_time": float(np.mean(times)),
                "mean_coreset_size": float(np.mean(sizes)),
            }
        )
    return rows


def monotone_on_average(values) -> bool:
    """Mean diversity never decreases as tau grows."""
    return all(b >= a for a, b in zip(values, values[1:]))


def bench(cfg: RunConfig, d: Dataset, m: Matroid, taus=DEFAULT_TAUS, ells=(1, 2, 4), parallel_tau: int = 64) -> dict:
    t0 = time.perf_counter()
    sweep = tau_sweep(cfg, d, m, taus)
    par = parallel_sweep(cfg, d, m, ells, parallel_tau)
    means = [row.get("mean_diversity", float("nan")) for row in sweep]
    by_ell = {row["parallelism"]: row["mean_coreset_time"] for row in par}
    return {
        "config": cfg.as_dict(),
        "n": len(d),
        "tau_sweep": sweep,
        "parallel_sweep": par,
        "monotone_diversity": monotone_on_average(means),
        "parallel_not_slower": all(by_ell[e] <= by_ell[min(by_ell)] for e in by_ell),
        "elapsed": time.perf_counter() - t0,
    }


def format_table(result: dict) -> str:
    lines = ["  tau  mean_div     min_div     max_div   |T|      coreset_s  solver_s"]
    for row in result["tau_sweep"]:
        lines.append(
            f"{row['tau']:5d}  {row.get('mean_diversity', float('nan')):10.5g}  {row.get('min_diversity', float('nan')):10.5g}"
            f"  {row.get('max_diversity', float('nan')):10.5g}  {row.get('mean_coreset_size', float('nan')):7.1f}"
            f"  {row.get('mean_coreset_time', float('nan')):9.3f}  {row.get('mean_solver_time', float('nan')):8.3f}"
        )
    lines.append("")
    lines.append("  ell  tau  coreset_s  |T|")
    for row in result["parallel_sweep"]:
        lines.append(f"{row['parallelism']:5d}  {row['tau']:3d}  {row['mean_coreset_time']:9.3f}  {row['mean_coreset_size']:.1f}")
    return "\n".join(lines)
