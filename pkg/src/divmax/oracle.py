"""Slow, simple reference implementations used to validate everything else.

Nothing here reuses the production evaluators or the matching-based
independence test: transversal independence is decided by Hall's condition,
trees are enumerated through Pruefer sequences, tours through permutations and
bipartitions through explicit subsets.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

import numpy as np

from .core import CapabilityError, Dataset, DiversityKind, InfeasibleError, InputError
from .diversity import binom, pair_count
from .matroid import Matroid, PartitionMatroid, TransversalMatroid

OPTIMUM_BUDGET = 10**7
RADIUS_BUDGET = 10**6


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x) if hasattr(np, "bitwise_count") else np.vectorize(lambda v: bin(int(v)).count("1"))(x)


def independent_mask(m: Matroid, d: Dataset, combos: np.ndarray) -> np.ndarray:
    """Independence of every row of ``combos`` (dataset indices)."""
    combos = np.asarray(combos, dtype=np.intp)
    if combos.size == 0:
        return np.ones(len(combos), dtype=bool)
    if isinstance(m, PartitionMatroid):
        cats = sorted(m.quotas)
        code = np.array([cats.index(m.category_of(p)) for p in d.points])
        quota = np.array([m.quotas[c] for c in cats])
        labels = code[combos]
        counts = np.stack([(labels == c).sum(axis=1) for c in range(len(cats))], axis=1)
        return np.all(counts <= quota, axis=1) & _distinct(combos)
    if isinstance(m, TransversalMatroid):
        return hall_independent(m, d, combos)
    return np.array([m.independent(d.points[i] for i in row) for row in combos]) & _distinct(combos)


def _distinct(combos):
    s = np.sort(combos, axis=1)
    return np.all(s[:, 1:] != s[:, :-1], axis=1) if combos.shape[1] > 1 else np.ones(len(combos), dtype=bool)


def hall_independent(m: TransversalMatroid, d: Dataset, combos: np.ndarray) -> np.ndarray:
    """Hall's condition: every subset Y of the row reaches at least |Y| categories."""
    cats = sorted(m.categories)
    if len(cats) > 63:
        return np.array([brute_matchable(m, [d.points[i].categories for i in row]) for row in combos])
    bit = {c: 1 << j for j, c in enumerate(cats)}
    masks = np.array(
        [sum(bit[c] for c in p.categories if c in bit) for p in d.points], dtype=np.uint64
    )
    rows = masks[combos]
    k = combos.shape[1]
    ok = _distinct(combos)
    for sub in range(1, 1 << k):
        members = [j for j in range(k) if sub >> j & 1]
        reach = np.bitwise_or.reduce(rows[:, members], axis=1)
        ok &= _popcount(reach) >= len(members)
    return ok


def brute_matchable(m: TransversalMatroid, category_sets) -> bool:
    """Try every assignment of one active category per point and look for an injective one."""
    options = [sorted(set(c) & m.categories) for c in category_sets]
    if any(not o for o in options):
        return False
    return any(len(set(choice)) == len(choice) for choice in product(*options))


def _prufer_trees(k: int) -> np.ndarray:
    """Edge lists ``(t, k-1, 2)`` of every labelled tree on ``k`` nodes."""
    if k == 2:
        return np.array([[[0, 1]]])
    seqs = np.array(list(product(range(k), repeat=k - 2)), dtype=np.intp)
    t = len(seqs)
    degree = np.ones((t, k), dtype=np.intp)
    for col in range(k - 2):
        np.add.at(degree, (np.arange(t), seqs[:, col]), 1)
    edges = np.empty((t, k - 1, 2), dtype=np.intp)
    rows = np.arange(t)
    for col in range(k - 2):
        leaf = np.argmax(degree == 1, axis=1)  # smallest current leaf
        edges[:, col, 0] = leaf
        edges[:, col, 1] = seqs[:, col]
        degree[rows, leaf] = 0
        degree[rows, seqs[:, col]] -= 1
    last = np.argsort(degree != 1, axis=1, kind="stable")[:, :2]
    edges[:, k - 2] = last
    return edges


def _tours(k: int) -> list[tuple[int, ...]]:
    # node 0 fixed first; keep one orientation of each cycle
    return [(0,) + p for p in permutations(range(1, k)) if p[0] < p[-1]] if k > 3 else [(0, 1, 2)]


def diversity_values(dmat: np.ndarray, combos: np.ndarray, kind: DiversityKind) -> np.ndarray:
    """Objective of every row of ``combos`` by explicit enumeration of structures."""
    kind = DiversityKind(kind)
    combos = np.asarray(combos, dtype=np.intp)
    m, k = combos.shape
    if k < kind.min_size:
        raise InputError(f"{kind.value} diversity needs at least {kind.min_size} points")

    def pair(a, b):
        return dmat[combos[:, a], combos[:, b]]

    if kind is DiversityKind.SUM:
        total = np.zeros(m)
        for a in range(k):
            for b in range(k):
                if a != b:
                    total += pair(a, b)
        return total / 2
    if kind is DiversityKind.STAR:
        return np.min([sum(pair(c, u) for u in range(k) if u != c) for c in range(k)], axis=0)
    if kind is DiversityKind.TREE:
        trees = _prufer_trees(k)
        best = np.full(m, np.inf)
        for start in range(0, len(trees), 4096):
            chunk = trees[start : start + 4096]
            # (m, trees, edges)
            w = dmat[combos[:, chunk[:, :, 0]], combos[:, chunk[:, :, 1]]].sum(axis=2)
            best = np.minimum(best, w.min(axis=1))
        return best
    if kind is DiversityKind.CYCLE:
        best = np.full(m, np.inf)
        for tour in _tours(k):
            w = sum(pair(tour[i], tour[(i + 1) % k]) for i in range(k))
            best = np.minimum(best, w)
        return best
    best = np.full(m, np.inf)
    for q in combinations(range(k), k // 2):
        rest = [v for v in range(k) if v not in q]
        w = sum(pair(u, v) for u in q for v in rest)
        best = np.minimum(best, w)
    return best


def brute_force_optimum(
    d: Dataset, m: Matroid, k: int, kind: DiversityKind, budget: int = OPTIMUM_BUDGET, pool=None
) -> tuple[tuple[int, ...], float]:
    """Best independent k-subset of the dataset (or of ``pool``) by full enumeration."""
    kind = DiversityKind(kind)
    pool = list(range(len(d))) if pool is None else sorted(set(pool))
    if binom(len(pool), k) > budget:
        raise CapabilityError(f"C({len(pool)}, {k}) exceeds the oracle budget {budget}")
    if k < kind.min_size:
        raise InputError(f"{kind.value} diversity needs k >= {kind.min_size}")
    dmat = np.zeros((len(d), len(d)))
    for i in pool:
        for j in pool:
            dmat[i, j] = d.dist(i, j)
    best_val, best = -np.inf, None
    it = combinations(pool, k)
    while True:
        chunk = np.array([c for _, c in zip(range(1 << 15), it)], dtype=np.intp).reshape(-1, k)
        if not len(chunk):
            break
        chunk = chunk[independent_mask(m, d, chunk)]
        if len(chunk):
            vals = diversity_values(dmat, chunk, kind)
            j = int(np.argmax(vals))
            if vals[j] > best_val:
                best_val, best = float(vals[j]), tuple(int(x) for x in chunk[j])
    if best is None:
        raise InfeasibleError(f"no independent set of size {k}")
    return best, best_val


def average_farness(d: Dataset, m: Matroid, k: int, kind: DiversityKind, budget: int = OPTIMUM_BUDGET) -> float:
    _, value = brute_force_optimum(d, m, k, kind, budget)
    return value / pair_count(kind, k).f


def brute_force_optimal_radius(d: Dataset, tau: int, budget: int = RADIUS_BUDGET) -> float:
    """Smallest radius of any clustering with ``tau`` centers chosen among the points."""
    n = len(d)
    if not 1 <= tau <= n:
        raise InputError("tau must lie in [1, n]")
    if binom(n, tau) > budget:
        raise CapabilityError(f"C({n}, {tau}) exceeds the oracle budget {budget}")
    dmat = np.array([[d.dist(i, j) for j in range(n)] for i in range(n)])
    best = np.inf
    for centers in combinations(range(n), tau):
        best = min(best, float(dmat[list(centers)].min(axis=0).max()))
    return best


def brute_force_diameter(d: Dataset) -> float:
    return max((d.dist(i, j) for i in range(len(d)) for j in range(len(d))), default=0.0)


def brute_force_rank(m: Matroid, d: Dataset) -> int:
    """Largest independent subset, by enumerating subsets from the top size down."""
    n = len(d)
    for size in range(n, 0, -1):
        combos = np.array(list(combinations(range(n), size)), dtype=np.intp)
        if independent_mask(m, d, combos).any():
            return size
    return 0


def check_matroid_axioms(m: Matroid, d: Dataset) -> list[str]:
    """Exhaustively test the matroid axioms on ``d`` (small n only); returns violations."""
    n = len(d)
    if n > 12:
        raise CapabilityError("axiom check is limited to 12 points")
    indep = set()
    for size in range(n + 1):
        for c in combinations(range(n), size):
            if m.independent(d.points[i] for i in c):
                indep.add(frozenset(c))
    problems = []
    if frozenset() not in indep:
        problems.append("empty set is dependent")
    for s in indep:
        for x in s:
            if s - {x} not in indep:
                problems.append(f"hereditary: {sorted(s)} minus {x}")
    for a in indep:
        for b in indep:
            if len(a) > len(b) and not any(b | {x} in indep for x in a - b):
                problems.append(f"augmentation: {sorted(a)} vs {sorted(b)}")
    return problems


def half_diameter_pair(d: Dataset, m: Matroid) -> tuple[int, int] | None:
    """An independent pair at distance at least half the diameter, if any."""
    delta = brute_force_diameter(d)
    for i, j in combinations(range(len(d)), 2):
        if d.dist(i, j) >= delta / 2 and m.independent([d.points[i], d.points[j]]):
            return i, j
    return None

