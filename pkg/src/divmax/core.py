"""Domain types shared by every module: points, datasets, metrics, objectives.

Points inside a :class:`Dataset` are addressed by their integer position
(the dataset index).  All algorithms break ties by this index, so the order
of the points is the only source of randomness in a run.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class DivMaxError(Exception):
    """Base class for all library errors."""


class InputError(DivMaxError, ValueError):
    """Malformed or inconsistent input."""


class InfeasibleError(DivMaxError):
    """No independent set of the requested size exists."""


class CapabilityError(DivMaxError):
    """The request exceeds a documented limit (enumeration budget, TSP size, ...)."""


class InvariantViolation(DivMaxError, RuntimeError):
    """An internal guarantee failed; usually a broken custom independence oracle."""


class StateError(DivMaxError, RuntimeError):
    """Operation called on an object in the wrong state."""


class MetricKind(str, enum.Enum):
    ANGULAR_COSINE = "angular"
    EUCLIDEAN = "euclidean"


class DiversityKind(str, enum.Enum):
    SUM = "sum"
    STAR = "star"
    TREE = "tree"
    CYCLE = "cycle"
    BIPARTITION = "bipartition"

    @property
    def min_size(self) -> int:
        return 3 if self is DiversityKind.CYCLE else 2


@dataclass(frozen=True)
class Point:
    id: str
    vector: np.ndarray
    categories: frozenset[str]

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float64)
        if vec.ndim != 1 or vec.size == 0:
            raise InputError(f"point {self.id!r}: vector must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(vec)):
            raise InputError(f"point {self.id!r}: vector has non-finite coordinates")
        vec = vec.copy()
        vec.flags.writeable = False
        object.__setattr__(self, "vector", vec)
        cats = frozenset(self.categories)
        if not cats:
            raise InputError(f"point {self.id!r}: at least one category is required")
        object.__setattr__(self, "categories", cats)

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return (
            self.id == other.id
            and self.categories == other.categories
            and np.array_equal(self.vector, other.vector)
        )

    def __hash__(self):
        return hash((self.id, self.categories))


def _unit_rows(x: np.ndarray) -> np.ndarray:
    norms = np.sqrt((x * x).sum(axis=1))
    if np.any(norms == 0):
        raise InputError("zero vector is not allowed under the angular cosine metric")
    return x / norms[:, None]


def _row_distances(base: np.ndarray, row: np.ndarray, metric: MetricKind) -> np.ndarray:
    # base: (m, dim) preprocessed rows; row: (dim,) preprocessed row
    if metric is MetricKind.EUCLIDEAN:
        diff = base - row
        return np.sqrt((diff * diff).sum(axis=1))
    # angle = 2 atan2(|u - v|, |u + v|) is arccos(u.v) without the cancellation near 0
    diff = base - row
    summ = base + row
    return 2.0 * np.arctan2(np.sqrt((diff * diff).sum(axis=1)), np.sqrt((summ * summ).sum(axis=1))) / math.pi


def distance(a: Point, b: Point, metric: MetricKind = MetricKind.EUCLIDEAN) -> float:
    """Distance between two points under ``metric``.

    Angular cosine distance is the angle between the vectors divided by pi,
    so it lies in [0, 1] and is a true metric.
    """
    metric = MetricKind(metric)
    if a.vector.shape != b.vector.shape:
        raise InputError(f"dimension mismatch: {a.vector.size} vs {b.vector.size}")
    rows = np.stack([a.vector, b.vector])
    if metric is MetricKind.ANGULAR_COSINE:
        rows = _unit_rows(rows)
    return float(_row_distances(rows[:1], rows[1], metric)[0])


@dataclass(frozen=True, eq=False)
class Dataset:
    """Indexed, immutable collection of points sharing one dimensionality."""

    points: tuple[Point, ...]
    metric: MetricKind = MetricKind.EUCLIDEAN
    _rows: np.ndarray = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise InputError("a dataset needs at least one point")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "metric", MetricKind(self.metric))
        dim = points[0].vector.size
        index = {}
        for i, p in enumerate(points):
            if p.vector.size != dim:
                raise InputError(f"point {p.id!r}: dimension {p.vector.size}, expected {dim}")
            if p.id in index:
                raise InputError(f"duplicate point id {p.id!r}")
            index[p.id] = i
        rows = np.stack([p.vector for p in points])
        if self.metric is MetricKind.ANGULAR_COSINE:
            rows = _unit_rows(rows)
        rows.flags.writeable = False
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_arrays(
        cls,
        vectors,
        categories: Sequence[Iterable[str]] | None = None,
        ids: Sequence[str] | None = None,
        metric: MetricKind = MetricKind.EUCLIDEAN,
    ) -> "Dataset":
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        n = len(vectors)
        if ids is None:
            ids = [str(i) for i in range(n)]
        if categories is None:
            categories = [("all",)] * n
        cats = [[c] if isinstance(c, str) else c for c in categories]
        return cls(
            tuple(Point(str(i), v, frozenset(c)) for i, v, c in zip(ids, vectors, cats)),
            metric,
        )

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self._rows.shape[1]

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.points]

    def index_of(self, point_id: str) -> int:
        try:
            return self._index[point_id]
        except KeyError:
            raise InputError(f"unknown point id {point_id!r}") from None

    def check_indices(self, idx: Iterable[int]) -> list[int]:
        out = []
        for i in idx:
            i = int(i)
            if not 0 <= i < len(self.points):
                raise InputError(f"unknown point index {i}")
            out.append(i)
        return out

    def subset(self, idx: Sequence[int]) -> "Dataset":
        """Sub-dataset of the given indices, in the given order."""
        return Dataset(tuple(self.points[i] for i in idx), self.metric)

    def permuted(self, seed: int) -> "Dataset":
        rng = np.random.default_rng(seed)
        return self.subset(rng.permutation(len(self.points)).tolist())

    def dist(self, i: int, j: int) -> float:
        return float(_row_distances(self._rows[i : i + 1], self._rows[j], self.metric)[0])

    def dists_from(self, i: int, idx=None) -> np.ndarray:
        """Distances from point ``i`` to ``idx`` (all points when ``None``)."""
        base = self._rows if idx is None else self._rows[np.asarray(idx, dtype=np.intp)]
        return _row_distances(base, self._rows[i], self.metric)

    def distance_matrix(self, idx=None) -> np.ndarray:
        idx = np.arange(len(self.points)) if idx is None else np.asarray(idx, dtype=np.intp)
        out = np.empty((len(idx), len(idx)))
        for r, i in enumerate(idx):
            out[r] = self.dists_from(int(i), idx)
        return out


def diameter(d: Dataset) -> float:
    """Exact diameter by a quadratic scan over all pairs."""
    best = 0.0
    for i in range(len(d) - 1):
        row = d.dists_from(i, np.arange(i + 1, len(d)))
        best = max(best, float(row.max()))
    return best


@dataclass(frozen=True)
class Solution:
    """Independent set of exactly ``k`` dataset indices and its diversity."""

    ids: tuple[int, ...]
    k: int
    kind: DiversityKind
    value: float

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(sorted(int(i) for i in self.ids)))
        if len(set(self.ids)) != self.k:
            raise InvariantViolation(f"solution has {len(set(self.ids))} distinct ids, expected {self.k}")

    def point_ids(self, d: Dataset) -> list[str]:
        return [d.points[i].id for i in self.ids]
