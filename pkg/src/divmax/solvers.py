"""Final solution extraction: local search for sum diversity, exhaustive search for all.

:func:`solve` chains a coreset pipeline with one of the two solvers and
records where the time went.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import CapabilityError, Dataset, DiversityKind, InfeasibleError, InputError, Solution
from .coreset import Coreset, seq_coreset
from .diversity import binom, evaluate_batch
from .matroid import Matroid, greedy_independent
from .parallel import parallel_coreset
from .stream import stream_coreset

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
_CHUNK = 1 << 15


@dataclass(frozen=True)
class LocalSearchResult:
    solution: Solution
    swaps: int
    hit_cap: bool


def local_search_sum(
    d: Dataset,
    m: Matroid,
    pool: Iterable[int],
    k: int,
    gamma: float = 0.0,
    max_swaps: int | None = None,
) -> LocalSearchResult:
    """Swap-based local search for sum diversity under a matroid constraint.

    Starts from the greedy independent subset of ``pool`` (index order) and
    repeatedly applies the first swap, in index order, that multiplies the
    objective by more than ``1 + gamma``.  With ``gamma == 0`` the number of
    swaps is capped at ``k * |pool|**2`` by default; hitting the cap is logged
    and reported.
    """
    if gamma < 0:
        raise InputError("gamma must be non-negative")
    pool = sorted(set(d.check_indices(pool)))
    if k < 2:
        raise InputError("sum diversity needs k >= 2")
    start = greedy_independent(m, [d.points[i] for i in pool], k)
    if len(start) < k:
        raise InfeasibleError(f"the pool holds no independent set of size {k}")
    if max_swaps is None:
        max_swaps = k * len(pool) ** 2
    pos = {i: p for p, i in enumerate(pool)}
    sol = [pool[j] for j in start]
    in_sol = np.zeros(len(pool), dtype=bool)
    in_sol[start] = True
    # contrib[x] = sum of distances from pool point x to the current solution
    rows = {i: d.dists_from(i, pool) for i in sol}
    contrib = np.sum([rows[i] for i in sol], axis=0)
    value = float(contrib[in_sol].sum() / 2)
    swaps, hit_cap = 0, False
    improved = True
    while improved:
        improved = False
        if swaps >= max_swaps:
            hit_cap = True
            log.warning("local search stopped at the swap cap (%d swaps)", max_swaps)
            break
        for s_slot in sorted(range(k), key=lambda t: sol[t]):
            s = sol[s_slot]
            row_s = rows[s]
            # value after swapping s for x: value - contrib[s] + contrib[x] - d(x, s)
            new_vals = value - contrib[pos[s]] + contrib - row_s
            cand = np.flatnonzero((new_vals > (1 + gamma) * value) & ~in_sol)
            if not len(cand):
                continue
            others = [d.points[i] for i in sol if i != s]
            for c in cand:
                x = pool[c]
                if not m.independent(others + [d.points[x]]):
                    continue
                row_x = d.dists_from(x, pool)
                contrib = contrib - row_s + row_x
                in_sol[pos[s]] = False
                in_sol[c] = True
                del rows[s]
                rows[x] = row_x
                sol[s_slot] = x
                value = float(new_vals[c])
                swaps += 1
                improved = True
                break
            if improved:
                break
    ids = sorted(sol)
    exact = float(evaluate_batch(d.distance_matrix(ids), [list(range(k))], DiversityKind.SUM)[0])
    return LocalSearchResult(Solution(tuple(ids), k, DiversityKind.SUM, exact), swaps, hit_cap)


def _independent_combos(m: Matroid, points, k: int):
    """Yield ``(m, k)`` arrays of independent k-subsets in lexicographic order."""
    n = len(points)
    buf: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(start: int, builder):
        depth = len(prefix)
        if depth == k:
            buf.append(tuple(prefix))
            return
        for i in range(start, n - (k - depth) + 1):
            b = builder.copy()
            if not b.try_add(points[i]):
                continue
            prefix.append(i)
            yield from rec(i + 1, b)
            prefix.pop()
            if len(buf) >= _CHUNK:
                yield np.array(buf, dtype=np.intp)
                buf.clear()

    yield from rec(0, m.builder())
    if buf:
        yield np.array(buf, dtype=np.intp)


def exhaustive_search(
    d: Dataset,
    m: Matroid,
    pool: Iterable[int],
    k: int,
    kind: DiversityKind,
    budget: int = DEFAULT_BUDGET,
) -> Solution:
    """Exact optimum over the independent k-subsets of ``pool``.

    Ties go to the lexicographically smallest index set.
    """
    kind = DiversityKind(kind)
    pool = sorted(set(d.check_indices(pool)))
    if k < kind.min_size:
        raise InputError(f"{kind.value} diversity needs k >= {kind.min_size}")
    count = binom(len(pool), k)
    if count > budget:
        raise CapabilityError(
            f"exhaustive search over C({len(pool)}, {k}) = {count} sets exceeds the budget {budget}; "
            "use a smaller coreset"
        )
    dmat = d.distance_matrix(pool)
    points = [d.points[i] for i in pool]
    best_val, best = -np.inf, None
    for combos in _independent_combos(m, points, k):
        vals = evaluate_batch(dmat, combos, kind)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best = float(vals[j]), combos[j]
    if best is None:
        raise InfeasibleError(f"the pool holds no independent set of size {k}")
    return Solution(tuple(pool[i] for i in best), k, kind, best_val)


@dataclass(frozen=True)
class SolveReport:
    solution: Solution
    coreset: Coreset
    coreset_time: float
    solver_time: float
    swaps: int = 0
    hit_cap: bool = False

    @property
    def coreset_size(self) -> int:
        return len(self.coreset)

    @property
    def radius(self) -> float:
        return self.coreset.radius


PIPELINES = ("seq", "stream", "parallel")
SOLVERS = ("local-search", "exhaustive")


def build_coreset(
    d: Dataset,
    m: Matroid,
    k: int,
    pipeline: str,
    *,
    epsilon: float | None = None,
    tau: int | None = None,
    ell: int = 1,
) -> Coreset:
    if pipeline == "seq":
        return seq_coreset(d, m, k, epsilon=epsilon, tau=tau)
    if pipeline == "stream":
        return stream_coreset(d, m, k, epsilon=epsilon, tau=tau)
    if pipeline == "parallel":
        return parallel_coreset(d, m, k, ell, epsilon=epsilon, tau=tau)
    raise InputError(f"unknown pipeline {pipeline!r}; expected one of {PIPELINES}")


def solve(
    d: Dataset,
    m: Matroid,
    k: int,
    kind: DiversityKind,
    pipeline: str = "seq",
    *,
    epsilon: float | None = None,
    tau: int | None = None,
    solver: str = "local-search",
    gamma: float = 0.0,
    ell: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> SolveReport:
    """Build a coreset with ``pipeline`` and extract a solution from it."""
    kind = DiversityKind(kind)
    if solver not in SOLVERS:
        raise InputError(f"unknown solver {solver!r}; expected one of {SOLVERS}")
    if solver == "local-search" and kind is not DiversityKind.SUM:
        raise InputError("local search only supports the sum diversity")
    t0 = time.perf_counter()
    core = build_coreset(d, m, k, pipeline, epsilon=epsilon, tau=tau, ell=ell)
    t1 = time.perf_counter()
    swaps, hit_cap = 0, False
    if solver == "local-search":
        res = local_search_sum(d, m, core.ids, k, gamma)
        sol, swaps, hit_cap = res.solution, res.swaps, res.hit_cap
    else:
        sol = exhaustive_search(d, m, core.ids, k, kind, budget)
    t2 = time.perf_counter()
    return SolveReport(sol, core, t1 - t0, t2 - t1, swaps, hit_cap)
