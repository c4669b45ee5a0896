"""One-pass coreset construction over a stream of points.

The state keeps a set of centers, each with a set of *delegates* (points kept
by value), plus a scale estimate ``R``.  Two modes exist:

* epsilon mode: ``R`` estimates the diameter of the prefix; a point farther
  than ``2 eps R / (c k)`` from every center opens a new cluster, and every
  time ``R`` grows the centers are thinned so that they stay more than
  ``eps R / (c k)`` apart.
* tau mode: ``R`` estimates the clustering radius; a point farther than
  ``2R`` from every center opens a new cluster, and whenever there are more
  than ``tau`` clusters ``R`` doubles and the centers are thinned to be more
  than ``R`` apart.

Nothing but centers and delegates is retained, unless ``track_references``
is set, in which case the id of every consumed point is mapped to the center
currently representing it (used to measure the clustering radius).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .core import Dataset, InputError, MetricKind, Point, StateError, _row_distances, _unit_rows
from .coreset import Coreset, check_stop
from .matroid import Matroid, PartitionMatroid, TransversalMatroid, greedy_independent

DEFAULT_C = 32.0


@dataclass(frozen=True)
class StreamResult:
    centers: tuple[Point, ...]
    delegates: tuple[tuple[Point, ...], ...]
    R: float
    count: int
    radius_bound: float
    references: dict | None = None

    @property
    def points(self) -> list[Point]:
        seen, out = set(), []
        for group in self.delegates:
            for p in group:
                if p.id not in seen:
                    seen.add(p.id)
                    out.append(p)
        return out

    def to_coreset(self, d: Dataset) -> Coreset:
        """Express the result in the indices of ``d`` (which must hold every delegate)."""
        radius = self.radius_bound
        if self.references is not None:
            radius = reference_radius(d, self.references)
        return Coreset(
            tuple(d.index_of(z.id) for z in self.centers),
            tuple(tuple(sorted(d.index_of(p.id) for p in group)) for group in self.delegates),
            radius,
        )


def reference_radius(d: Dataset, references: dict) -> float:
    """Largest distance between a consumed point and its reference center."""
    worst = 0.0
    for pid, zid in references.items():
        worst = max(worst, d.dist(d.index_of(pid), d.index_of(zid)))
    return worst


class StreamState:
    """Single-owner state of the streaming construction.

    Call :meth:`start` with the first two points, then :meth:`push` for every
    further point and :meth:`finalize` at the end; :func:`consume` wraps the
    three steps.
    """

    def __init__(
        self,
        matroid: Matroid,
        k: int,
        *,
        epsilon: float | None = None,
        tau: int | None = None,
        c: float = DEFAULT_C,
        metric: MetricKind = MetricKind.EUCLIDEAN,
        track_references: bool = False,
    ):
        check_stop(epsilon, tau)
        if k < 1:
            raise InputError("k must be positive")
        if c <= 0:
            raise InputError("c must be positive")
        self.matroid = matroid
        self.k = k
        self.epsilon = epsilon
        self.tau = tau
        self.c = float(c)
        self.metric = MetricKind(metric)
        self.R = 0.0
        self.first: Point | None = None
        self._first_row: np.ndarray | None = None
        self.centers: list[Point] = []
        self.delegates: list[list[Point]] = []
        self._full: list[bool] = []  # delegate set is an independent k-set
        self._rows: list[np.ndarray] = []
        self._row_block: np.ndarray | None = None
        self.count = 0
        self.dim: int | None = None
        self.track_references = track_references
        self.references: dict[str, str] | None = {} if track_references else None
        self._members: dict[str, list[str]] = {}

    @property
    def tau_mode(self) -> bool:
        return self.tau is not None

    @property
    def started(self) -> bool:
        return self.first is not None

    def _row(self, p: Point) -> np.ndarray:
        if self.dim is None:
            self.dim = p.vector.size
        elif p.vector.size != self.dim:
            raise InputError(f"point {p.id!r}: dimension {p.vector.size}, expected {self.dim}")
        row = p.vector[None, :]
        if self.metric is MetricKind.ANGULAR_COSINE:
            row = _unit_rows(row)
        return row[0]

    def _center_dists(self, row: np.ndarray) -> np.ndarray:
        if self._row_block is None:
            self._row_block = np.stack(self._rows)
        return _row_distances(self._row_block, row, self.metric)

    def _dist(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(_row_distances(a[None, :], b, self.metric)[0])

    def _add_center(self, p: Point, row: np.ndarray) -> None:
        self.centers.append(p)
        self.delegates.append([p])
        self._full.append(self.k == 1)
        self._rows.append(row)
        self._row_block = None
        self._refer(p.id, p.id)

    def _refer(self, pid: str, zid: str) -> None:
        if self.references is not None:
            self.references[pid] = zid
            self._members.setdefault(zid, []).append(pid)

    def start(self, x1: Point, x2: Point) -> None:
        if self.started:
            raise StateError("stream already started")
        r1, r2 = self._row(x1), self._row(x2)
        self.first, self._first_row = x1, r1
        self.R = self._dist(r1, r2)
        self._add_center(x1, r1)
        self._add_center(x2, r2)
        self.count = 2
        if self.tau_mode:
            self._shrink_to_tau()
        elif self.R == 0.0:
            # coincident start: keep centers strictly separated
            self.restructure(0.0)

    def push(self, x: Point) -> None:
        if not self.started:
            raise StateError("push before start: the first two points initialize the stream")
        row = self._row(x)
        dists = self._center_dists(row)
        j = int(np.argmin(dists))
        if self.tau_mode:
            if dists[j] <= 2 * self.R:
                self.handle(x, j)
                self._refer(x.id, self.centers[j].id)
            else:
                self._add_center(x, row)
            self._shrink_to_tau()
        else:
            if dists[j] > self.new_center_threshold():
                self._add_center(x, row)
            else:
                self.handle(x, j)
                self._refer(x.id, self.centers[j].id)
            dx1 = self._dist(row, self._first_row)
            if dx1 > 2 * self.R:
                self.R = dx1
                self.restructure(self.epsilon * self.R / (self.c * self.k))
        self.count += 1

    def new_center_threshold(self) -> float:
        if self.tau_mode:
            return 2 * self.R
        return 2 * self.epsilon * self.R / (self.c * self.k)

    def _shrink_to_tau(self) -> None:
        while len(self.centers) > self.tau:
            if self.R == 0.0:
                block = np.stack(self._rows)
                positive = [
                    self._dist(block[a], block[b])
                    for a in range(len(block))
                    for b in range(a + 1, len(block))
                ]
                self.R = min(v for v in positive if v > 0) / 2
            self.R *= 2
            self.restructure(self.R)

    def handle(self, x: Point, j: int) -> bool:
        """Offer ``x`` to the delegate set of center ``j``; returns whether it was kept."""
        if self._full[j]:
            return False
        group = self.delegates[j]
        m = self.matroid
        if isinstance(m, PartitionMatroid):
            if not m.independent(group + [x]):
                return False
            group.append(x)
            self._full[j] = len(group) == self.k
            return True
        if isinstance(m, TransversalMatroid):
            cats = m.categories_of(x)
            if not any(sum(a in p.categories for p in group) < self.k for a in cats):
                return False
        group.append(x)
        kept = greedy_independent(m, group, self.k)
        if len(kept) == self.k:
            self.delegates[j] = [group[i] for i in kept]
            self._full[j] = True
        return True

    def restructure(self, threshold: float) -> None:
        """Keep a maximal set of centers pairwise farther than ``threshold``; merge the rest."""
        block = np.stack(self._rows)
        kept: list[int] = []
        for pos in range(len(self.centers)):
            if not kept or np.all(_row_distances(block[kept], block[pos], self.metric) > threshold):
                kept.append(pos)
        if len(kept) == len(self.centers):
            return
        kept_block = block[kept]
        old_centers, old_delegates, old_full = self.centers, self.delegates, self._full
        self.centers = [old_centers[p] for p in kept]
        self.delegates = [old_delegates[p] for p in kept]
        self._full = [old_full[p] for p in kept]
        self._rows = [block[p] for p in kept]
        self._row_block = None
        kept_set = set(kept)
        for pos in range(len(old_centers)):
            if pos in kept_set:
                continue
            target = int(np.argmin(_row_distances(kept_block, block[pos], self.metric)))
            for x in old_delegates[pos]:
                self.handle(x, target)
            if self.references is not None:
                zid, tid = old_centers[pos].id, self.centers[target].id
                moved = self._members.pop(zid, [])
                for pid in moved:
                    self.references[pid] = tid
                self._members.setdefault(tid, []).extend(moved)

    def finalize(self) -> StreamResult:
        if self.count < 2:
            raise InputError("a stream needs at least two points")
        if self.tau_mode:
            bound = 2 * self.R
        else:
            bound = 2 * self.epsilon * self.R / (self.c * self.k)
        return StreamResult(
            tuple(self.centers),
            tuple(tuple(g) for g in self.delegates),
            self.R,
            self.count,
            bound,
            dict(self.references) if self.references is not None else None,
        )


def consume(
    points: Iterable[Point],
    matroid: Matroid,
    k: int,
    *,
    epsilon: float | None = None,
    tau: int | None = None,
    c: float = DEFAULT_C,
    metric: MetricKind = MetricKind.EUCLIDEAN,
    track_references: bool = False,
) -> StreamResult:
    """Run the streaming construction over an iterable of points in one pass."""
    it: Iterator[Point] = iter(points)
    st = StreamState(matroid, k, epsilon=epsilon, tau=tau, c=c, metric=metric, track_references=track_references)
    head = [p for _, p in zip(range(2), it)]
    if len(head) < 2:
        raise InputError("a stream needs at least two points")
    st.start(*head)
    for p in it:
        st.push(p)
    return st.finalize()


def stream_coreset(
    d: Dataset,
    m: Matroid,
    k: int,
    *,
    epsilon: float | None = None,
    tau: int | None = None,
    c: float = DEFAULT_C,
) -> Coreset:
    """Stream the dataset in index order and return the coreset in its indices.

    References are tracked so that the reported radius is the measured one.
    """
    res = consume(d.points, m, k, epsilon=epsilon, tau=tau, c=c, metric=d.metric, track_references=True)
    return res.to_coreset(d)
