"""Exact evaluation of the five diversity objectives.

Every evaluator works on a batch: ``dmat`` is the distance matrix of a pool of
points and ``combos`` is an ``(m, k)`` integer array whose rows are subsets of
the pool.  Single-set evaluation is the batch of size one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .core import CapabilityError, Dataset, DiversityKind, InputError

MAX_TSP_SIZE = 18
MAX_BIPARTITION_SIZE = 20

# cells of the batched Held-Karp table kept in memory at once
_HK_CELLS = 1 << 22


@dataclass(frozen=True)
class PairCount:
    kind: DiversityKind
    k: int
    f: int


def pair_count(kind: DiversityKind, k: int) -> PairCount:
    """Number of distance terms summed by the objective on ``k`` points."""
    kind = DiversityKind(kind)
    if k < 2:
        raise InputError("k must be at least 2")
    f = {
        DiversityKind.SUM: k * (k - 1) // 2,
        DiversityKind.STAR: k - 1,
        DiversityKind.TREE: k - 1,
        DiversityKind.CYCLE: k,
        DiversityKind.BIPARTITION: (k // 2) * ((k + 1) // 2),
    }[kind]
    return PairCount(kind, k, f)


def _gather(dmat: np.ndarray, combos: np.ndarray) -> np.ndarray:
    # (m, k, k) block of pairwise distances for every combo
    return dmat[combos[:, :, None], combos[:, None, :]]


def sum_batch(dmat, combos):
    block = _gather(dmat, combos)
    iu, ju = np.triu_indices(combos.shape[1], 1)
    return block[:, iu, ju].sum(axis=1)


def star_batch(dmat, combos):
    return _gather(dmat, combos).sum(axis=2).min(axis=1)


def mst_batch(dmat, combos):
    """Dense Prim, vectorized over the batch."""
    block = _gather(dmat, combos)
    m, k, _ = block.shape
    rows = np.arange(m)
    in_tree = np.zeros((m, k), dtype=bool)
    in_tree[:, 0] = True
    key = block[:, 0, :].copy()
    total = np.zeros(m)
    for _ in range(k - 1):
        masked = np.where(in_tree, np.inf, key)
        nxt = masked.argmin(axis=1)
        total += masked[rows, nxt]
        in_tree[rows, nxt] = True
        key = np.minimum(key, block[rows, nxt, :])
    return total


def tsp_batch(dmat, combos):
    """Held-Karp over subsets, layered by subset size and vectorized over the batch."""
    k = combos.shape[1]
    if k > MAX_TSP_SIZE:
        raise CapabilityError(f"exact cycle weight is limited to {MAX_TSP_SIZE} points, got {k}")
    if k == 3:
        b = _gather(dmat, combos)
        return b[:, 0, 1] + b[:, 1, 2] + b[:, 2, 0]
    chunk = max(1, _HK_CELLS // ((1 << (k - 1)) * (k - 1)))
    if len(combos) > chunk:
        return np.concatenate([tsp_batch(dmat, combos[s : s + chunk]) for s in range(0, len(combos), chunk)])
    block = _gather(dmat, combos)
    m = len(combos)
    h = k - 1  # node 0 is the fixed start; nodes 1..k-1 map to bits 0..h-1
    full = 1 << h
    dp = np.full((m, full, h), np.inf)
    for j in range(h):
        dp[:, 1 << j, j] = block[:, 0, j + 1]
    masks = np.arange(full)
    popcount = np.array([bin(x).count("1") for x in range(full)])
    inner = block[:, 1:, 1:]  # inner[b, i, j] = dist(node i+1, node j+1)
    for size in range(2, h + 1):
        layer = masks[popcount == size]
        for j in range(h):
            sel = layer[(layer >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            # dp[b, prev, i] + dist(i, j), minimized over i; absent i are inf
            cand = dp[:, prev, :] + inner[:, None, :, j]
            dp[:, sel, j] = cand.min(axis=2)
    closing = dp[:, full - 1, :] + block[:, 1:, 0]
    return closing.min(axis=1)


def _split_indicators(k: int) -> np.ndarray:
    half = k // 2
    splits = list(combinations(range(k), half))
    ind = np.zeros((len(splits), k))
    for r, q in enumerate(splits):
        ind[r, list(q)] = 1.0
    return ind


def bipartition_batch(dmat, combos):
    k = combos.shape[1]
    if k > MAX_BIPARTITION_SIZE:
        raise CapabilityError(f"bipartition is limited to {MAX_BIPARTITION_SIZE} points, got {k}")
    block = _gather(dmat, combos)
    x = _split_indicators(k)
    # cut(Q) = x^T D (1 - x) for the indicator x of Q
    dx = np.einsum("mij,sj->msi", block, 1.0 - x)
    return np.einsum("si,msi->ms", x, dx).min(axis=1)


_BATCH = {
    DiversityKind.SUM: sum_batch,
    DiversityKind.STAR: star_batch,
    DiversityKind.TREE: mst_batch,
    DiversityKind.CYCLE: tsp_batch,
    DiversityKind.BIPARTITION: bipartition_batch,
}


def evaluate_batch(dmat: np.ndarray, combos, kind: DiversityKind) -> np.ndarray:
    """Objective value of each row of ``combos`` (indices into ``dmat``)."""
    kind = DiversityKind(kind)
    combos = np.asarray(combos, dtype=np.intp)
    if combos.ndim != 2:
        raise InputError("combos must be a 2-d array")
    if combos.shape[1] < kind.min_size:
        raise InputError(f"{kind.value} diversity needs at least {kind.min_size} points")
    if len(combos) == 0:
        return np.zeros(0)
    return _BATCH[kind](dmat, combos)


def evaluate_matrix(dmat: np.ndarray, kind: DiversityKind) -> float:
    """Objective value of the whole point set described by ``dmat``."""
    k = len(dmat)
    return float(evaluate_batch(dmat, np.arange(k)[None, :], kind)[0])


def _local_matrix(d: Dataset, ids: Iterable[int], need: int) -> np.ndarray:
    ids = sorted(set(d.check_indices(ids)))
    if len(ids) < need:
        raise InputError(f"need at least {need} points, got {len(ids)}")
    return d.distance_matrix(ids)


def evaluate(d: Dataset, kind: DiversityKind, ids: Iterable[int]) -> float:
    kind = DiversityKind(kind)
    return evaluate_matrix(_local_matrix(d, ids, kind.min_size), kind)


def mst_weight(d: Dataset, ids: Iterable[int]) -> float:
    return evaluate_matrix(_local_matrix(d, ids, 2), DiversityKind.TREE)


def tsp_weight(d: Dataset, ids: Iterable[int]) -> float:
    return evaluate_matrix(_local_matrix(d, ids, 3), DiversityKind.CYCLE)


def lower_bound_factor(kind: DiversityKind, k: int) -> float:
    """``c`` such that the average farness is at least ``c`` times the diameter."""
    kind = DiversityKind(kind)
    return {
        DiversityKind.SUM: 1.0 / (2 * k),
        DiversityKind.STAR: 1.0 / (4 * (k - 1)),
        DiversityKind.TREE: 1.0 / (2 * (k - 1)),
        DiversityKind.CYCLE: 1.0 / k,
        DiversityKind.BIPARTITION: 1.0 / (2 * (k + 1)),
    }[kind]


def binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
