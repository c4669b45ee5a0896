"""Random instances shared by the test modules."""

from __future__ import annotations

import numpy as np

from divmax import Dataset, MetricKind, PartitionMatroid, TransversalMatroid
from divmax.matroid import rank

KINDS = ("sum", "star", "tree", "cycle", "bipartition")

# every coreset built by the suite is logged here; the size-bound criterion
# reads it at the end of the session
SIZE_LOG: list[dict] = []

# criterion number -> one-line summary, filled in by the acceptance tests
ACCEPTANCE_NOTES: dict[int, str] = {}


def size_bound(core, d, m, k) -> int:
    if isinstance(m, TransversalMatroid):
        return m.max_categories_per_point(d) * k * k * core.tau
    return k * core.tau


def record_size(core, d, m, k, source: str) -> bool:
    ok = len(core) <= size_bound(core, d, m, k)
    SIZE_LOG.append({"source": source, "size": len(core), "bound": size_bound(core, d, m, k), "ok": ok})
    return ok


def random_vectors(rng, n, dim=2, blobs=None, spread=0.05):
    if blobs is None:
        return rng.uniform(-1, 1, size=(n, dim))
    centers = rng.uniform(-1, 1, size=(blobs, dim))
    return centers[rng.integers(blobs, size=n)] + spread * rng.normal(size=(n, dim))


def partition_instance(rng, n, k, dim=2, blobs=None, spread=0.05, metric=MetricKind.EUCLIDEAN, n_cats=None):
    """Random partition matroid whose rank is at least ``k``."""
    n_cats = n_cats or int(rng.integers(2, 5))
    while True:
        labels = rng.integers(n_cats, size=n)
        sizes = np.bincount(labels, minlength=n_cats)
        quotas = {f"g{c}": int(rng.integers(1, k + 1)) for c in range(n_cats) if sizes[c]}
        attainable = sum(min(q, sizes[int(c[1:])]) for c, q in quotas.items())
        if attainable >= k:
            break
    vecs = random_vectors(rng, n, dim, blobs, spread)
    d = Dataset.from_arrays(vecs, [f"g{c}" for c in labels], metric=metric)
    return d, PartitionMatroid(quotas)


def transversal_instance(rng, n, k, dim=2, blobs=None, spread=0.05, metric=MetricKind.EUCLIDEAN, max_cats=3):
    """Random transversal matroid with up to ``max_cats`` categories per point and rank >= k."""
    while True:
        n_cats = int(rng.integers(max(2, k), k + 4))
        names = [f"t{c}" for c in range(n_cats)]
        cats = [
            rng.choice(names, size=int(rng.integers(1, min(max_cats, n_cats) + 1)), replace=False).tolist() for _ in range(n)
        ]
        vecs = random_vectors(rng, n, dim, blobs, spread)
        d = Dataset.from_arrays(vecs, cats, metric=metric)
        m = TransversalMatroid(names)
        if rank(m, d) >= k:
            return d, m


def instance(rng, kind: str, n, k, **kw):
    if kind == "partition":
        kw.pop("max_cats", None)
        return partition_instance(rng, n, k, **kw)
    return transversal_instance(rng, n, k, **kw)


def stream_invariant_violations(points, m, k, epsilon, c=32.0, metric=None):
    """Push ``points`` one by one and check the three stream invariants after every prefix.

    Distances come from an independent full matrix; the prefix diameter is the
    exact maximum over all pairs seen so far.  Returns human-readable
    violations (empty when all hold).
    """
    from divmax import Dataset, StreamState

    metric = metric or MetricKind.EUCLIDEAN
    d = Dataset(tuple(points), metric)
    dmat = np.array([[d.dist(i, j) for j in range(len(d))] for i in range(len(d))])
    index = {p.id: i for i, p in enumerate(points)}
    st = StreamState(m, k, epsilon=epsilon, c=c, metric=metric, track_references=True)
    st.start(points[0], points[1])
    problems = []
    slack = 1e-12
    for i in range(2, len(points) + 1):
        if i > 2:
            st.push(points[i - 1])
        diam = dmat[:i, :i].max()
        R = st.R
        if not (diam / 4 <= R * (1 + slack) and R <= diam * (1 + slack)):
            problems.append(f"prefix {i}: R={R} diameter={diam}")
        sep = epsilon * R / (c * k)
        cidx = np.array([index[z.id] for z in st.centers])
        pair = dmat[np.ix_(cidx, cidx)][np.triu_indices(len(cidx), 1)]
        if np.any(pair <= sep):
            problems.append(f"prefix {i}: two centers within {sep}")
        pts = np.array([index[p] for p in st.references])
        refs = np.array([index[z] for z in st.references.values()])
        far = dmat[pts, refs] > 2 * sep * (1 + slack)
        if np.any(far):
            problems.append(f"prefix {i}: {int(far.sum())} points beyond {2 * sep} of their reference")
        if len(pts) != i or set(pts.tolist()) != set(range(i)):
            problems.append(f"prefix {i}: references cover {len(pts)} points")
    return problems
