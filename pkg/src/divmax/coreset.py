"""Sequential coreset construction: GMM clustering plus per-cluster extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clustering import Clustering, gmm, gmm_radius
from .core import Dataset, InputError
from .matroid import Matroid, PartitionMatroid, TransversalMatroid, maximal_independent_subset, rank


@dataclass(frozen=True)
class Coreset:
    """Selected point indices, grouped by the cluster they were drawn from.

    ``centers[i]`` is the center of cluster ``i`` and ``per_cluster[i]`` the
    points kept from it.  ``shards[i]`` tells which shard produced the cluster
    (always 0 for a single-machine construction).
    """

    centers: tuple[int, ...]
    per_cluster: tuple[tuple[int, ...], ...]
    radius: float
    shards: tuple[int, ...] = ()
    shard_radii: tuple[float, ...] = ()
    ids: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if not self.shards:
            object.__setattr__(self, "shards", (0,) * len(self.centers))
        if not self.shard_radii:
            object.__setattr__(self, "shard_radii", (self.radius,))
        ids = sorted({i for members in self.per_cluster for i in members})
        object.__setattr__(self, "ids", tuple(ids))

    @property
    def tau(self) -> int:
        return len(self.centers)

    def __len__(self) -> int:
        return len(self.ids)

    def remap(self, index: list[int] | np.ndarray, shard: int | None = None) -> "Coreset":
        """Translate local indices through ``index`` (e.g. shard to global)."""
        index = [int(i) for i in index]
        return Coreset(
            tuple(index[c] for c in self.centers),
            tuple(tuple(index[i] for i in members) for members in self.per_cluster),
            self.radius,
            self.shards if shard is None else (shard,) * len(self.centers),
            self.shard_radii,
        )


def extract(d: Dataset, m: Matroid, cluster, k: int) -> list[int]:
    """Points kept from one cluster, sorted by dataset index."""
    cluster = sorted(set(d.check_indices(cluster)))
    if not cluster:
        raise InputError("cluster must be non-empty")
    u = maximal_independent_subset(m, d, cluster, k)
    if len(u) == k or isinstance(m, PartitionMatroid):
        return u
    if isinstance(m, TransversalMatroid):
        return _fill_categories(d, m, cluster, u, k)
    return cluster


def _fill_categories(d: Dataset, m: TransversalMatroid, cluster: list[int], u: list[int], k: int) -> list[int]:
    # each category of a point of u ends with min(k, |A & cluster|) members; a
    # point counts toward every one of its categories
    cats = {i: m.categories_of(d.points[i]) for i in cluster}
    members: dict[str, list[int]] = {}
    for i in cluster:
        for a in cats[i]:
            members.setdefault(a, []).append(i)
    chosen = set(u)
    count: dict[str, int] = {}
    for i in u:
        for a in cats[i]:
            count[a] = count.get(a, 0) + 1
    wanted = sorted({a for i in u for a in cats[i]})
    for a in wanted:
        need = min(k, len(members[a]))
        for i in members[a]:
            if count.get(a, 0) >= need:
                break
            if i in chosen:
                continue
            chosen.add(i)
            for b in cats[i]:
                count[b] = count.get(b, 0) + 1
    return sorted(chosen)


def coreset_from_clustering(d: Dataset, m: Matroid, k: int, c: Clustering) -> Coreset:
    per_cluster = tuple(tuple(extract(d, m, members, k)) for members in c.clusters())
    return Coreset(c.centers, per_cluster, c.radius)


def check_stop(epsilon: float | None, tau: int | None) -> None:
    if (epsilon is None) == (tau is None):
        raise InputError("exactly one of epsilon and tau must be given")
    if epsilon is not None and not 0 < epsilon < 1:
        raise InputError("epsilon must lie in (0, 1)")
    if tau is not None and tau < 1:
        raise InputError("tau must be positive")


def build_seq(d: Dataset, m: Matroid, k: int, epsilon: float | None = None, tau: int | None = None) -> Coreset:
    """Sequential construction without the rank precondition check."""
    if len(d) == 1:
        return Coreset((0,), ((0,),), 0.0)
    if epsilon is not None:
        c, _ = gmm_radius(d, epsilon, k)
    else:
        c = gmm(d, min(tau, len(d)))
    return coreset_from_clustering(d, m, k, c)


def seq_coreset(d: Dataset, m: Matroid, k: int, epsilon: float | None = None, tau: int | None = None) -> Coreset:
    """Coreset from a GMM clustering.

    With ``epsilon`` GMM runs until its radius is at most ``epsilon*delta/(16k)``;
    with ``tau`` it stops at exactly ``tau`` clusters (capped at ``n``).
    """
    check_stop(epsilon, tau)
    if len(d) < 2:
        raise InputError("the sequential construction needs at least two points")
    if k < 1:
        raise InputError("k must be positive")
    r = rank(m, d)
    if k > r:
        raise InputError(f"k={k} exceeds the matroid rank {r}")
    return build_seq(d, m, k, epsilon, tau)
