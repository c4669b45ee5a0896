"""Composable coresets: independent constructions on shards, then a union.

Shards are contiguous index ranges of the dataset and are processed by a
thread pool; each worker only reads its own slice.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

from .core import Dataset, InputError
from .coreset import Coreset, build_seq, check_stop
from .matroid import Matroid, rank


def shard_bounds(n: int, ell: int) -> list[tuple[int, int]]:
    """``ell`` contiguous ranges covering ``range(n)`` with sizes differing by at most one."""
    if not 1 <= ell <= n:
        raise InputError(f"parallelism must lie in [1, n={n}], got {ell}")
    base, extra = divmod(n, ell)
    bounds, start = [], 0
    for i in range(ell):
        size = base + (1 if i < extra else 0)
        bounds.append((start, start + size))
        start += size
    return bounds


def split_tau(tau: int, ell: int) -> list[int]:
    base, extra = divmod(tau, ell)
    return [max(1, base + (1 if i < extra else 0)) for i in range(ell)]


def default_parallelism(n: int, k: int, workers: int | None = None) -> int:
    workers = workers or os.cpu_count() or 1
    return max(1, min(int(math.sqrt(n / k)), workers, n))


def union(parts: list[Coreset]) -> Coreset:
    return Coreset(
        tuple(z for p in parts for z in p.centers),
        tuple(g for p in parts for g in p.per_cluster),
        max(p.radius for p in parts),
        tuple(s for p in parts for s in p.shards),
        tuple(r for p in parts for r in p.shard_radii),
    )


def parallel_coreset(
    d: Dataset,
    m: Matroid,
    k: int,
    ell: int,
    *,
    epsilon: float | None = None,
    tau: int | None = None,
    workers: int | None = None,
) -> Coreset:
    """Union of per-shard sequential coresets.

    In tau mode ``tau`` is the total number of clusters, spread evenly over the
    shards; in epsilon mode every shard uses its own ``delta``.
    """
    check_stop(epsilon, tau)
    bounds = shard_bounds(len(d), ell)
    r = rank(m, d)
    if k > r:
        raise InputError(f"k={k} exceeds the matroid rank {r}")
    taus = split_tau(tau, ell) if tau is not None else [None] * ell

    def work(i: int) -> Coreset:
        lo, hi = bounds[i]
        shard = d if ell == 1 else d.subset(range(lo, hi))
        part = build_seq(shard, m, k, epsilon, taus[i])
        return part.remap(range(lo, hi), shard=i)

    if ell == 1:
        return work(0)
    with ThreadPoolExecutor(max_workers=min(ell, workers or ell)) as pool:
        parts = list(pool.map(work, range(ell)))
    return union(parts)


def reduce_coreset(
    t: Coreset,
    d: Dataset,
    m: Matroid,
    k: int,
    *,
    epsilon: float | None = None,
    tau: int | None = None,
) -> Coreset:
    """Second-level sequential construction on the points of ``t``."""
    check_stop(epsilon, tau)
    if not len(t):
        raise InputError("cannot reduce an empty coreset")
    ids = list(t.ids)
    sub = d.subset(ids)
    return build_seq(sub, m, k, epsilon, tau).remap(ids)
