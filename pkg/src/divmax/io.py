"""File formats: JSON-lines points, JSON matroid configs, synthetic generation, run reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .core import Dataset, InputError, MetricKind, Point
from .matroid import Matroid, PartitionMatroid, TransversalMatroid, from_config, to_config


def iter_points(path) -> Iterator[Point]:
    """Points of a JSON-lines file, one at a time (the file is never buffered whole)."""
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise InputError(f"{path}:{lineno}: expected a JSON object")
            pid, vec, cats = obj.get("id"), obj.get("vector"), obj.get("categories")
            if not isinstance(pid, str):
                raise InputError(f"{path}:{lineno}: 'id' must be a string")
            if not isinstance(vec, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in vec
            ):
                raise InputError(f"{path}:{lineno}: 'vector' must be an array of numbers")
            if not isinstance(cats, list) or not all(isinstance(c, str) for c in cats):
                raise InputError(f"{path}:{lineno}: 'categories' must be an array of strings")
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise InputError(f"{path}:{lineno}: dimension {len(vec)}, expected {dim}")
            try:
                yield Point(pid, np.array(vec, dtype=np.float64), frozenset(cats))
            except InputError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None


def load_matroid(path) -> Matroid:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg})") from None
    if not isinstance(cfg, dict):
        raise InputError(f"{path}: expected a JSON object")
    return from_config(cfg)


def ingest(points_path, matroid_path, metric: MetricKind = MetricKind.ANGULAR_COSINE) -> tuple[Dataset, Matroid]:
    """Load and cross-validate a points file and its matroid config."""
    m = load_matroid(matroid_path)
    d = Dataset(tuple(iter_points(points_path)), metric)
    m.validate(d)
    return d, m


def write_points(path, points) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in points:
            rec = {"id": p.id, "vector": [float(v) for v in p.vector], "categories": sorted(p.categories)}
            fh.write(json.dumps(rec) + "\n")


def write_matroid(path, m: Matroid) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_config(m), fh, indent=1, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class SynthSpec:
    n: int = 1000
    dim: int = 8
    clusters: int = 10
    categories: int = 16
    matroid: str = "partition"
    rank: int | None = None  # partition only: sum of the quotas
    max_categories: int = 3  # transversal only
    spread: float = 0.3
    seed: int = 0


def _proportional_quotas(sizes: np.ndarray, total: int) -> np.ndarray:
    # smallest non-zero quotas proportional to block sizes, summing to total
    nonempty = sizes > 0
    total = min(total, int(sizes.sum()))
    if total < nonempty.sum():
        raise InputError("rank is smaller than the number of non-empty categories")
    target = total * sizes / sizes.sum()
    quota = nonempty.astype(int)
    for _ in range(total - int(quota.sum())):
        gap = np.where(quota < sizes, target - quota, -np.inf)
        quota[int(np.argmax(gap))] += 1
    return quota


def generate(spec: SynthSpec) -> tuple[list[Point], Matroid]:
    """Gaussian blobs with random category labels, deterministic in ``spec.seed``."""
    if spec.n < 1 or spec.dim < 1 or spec.clusters < 1 or spec.categories < 1:
        raise InputError("n, dim, clusters and categories must be positive")
    rng = np.random.default_rng(spec.seed)
    centers = rng.normal(size=(spec.clusters, spec.dim))
    labels = rng.integers(spec.clusters, size=spec.n)
    vectors = centers[labels] + spec.spread * rng.normal(size=(spec.n, spec.dim))
    weights = 1.0 / np.arange(1, spec.categories + 1) ** 0.8
    weights /= weights.sum()
    names = [f"c{j:03d}" for j in range(spec.categories)]
    if spec.matroid == "partition":
        cat = rng.choice(spec.categories, size=spec.n, p=weights)
        cat_sets = [frozenset([names[c]]) for c in cat]
        sizes = np.bincount(cat, minlength=spec.categories)
        total = spec.rank if spec.rank is not None else spec.categories
        quota = _proportional_quotas(sizes, total)
        m: Matroid = PartitionMatroid({names[j]: int(quota[j]) for j in range(spec.categories) if sizes[j] > 0})
    elif spec.matroid == "transversal":
        counts = rng.integers(1, spec.max_categories + 1, size=spec.n)
        cat_sets = [frozenset(names[c] for c in rng.choice(spec.categories, size=c, replace=False, p=weights)) for c in counts]
        used = sorted(set().union(*cat_sets))
        m = TransversalMatroid(used)
    else:
        raise InputError(f"unknown matroid type {spec.matroid!r}")
    width = len(str(spec.n - 1))
    points = [Point(f"p{i:0{width}d}", vectors[i], cat_sets[i]) for i in range(spec.n)]
    return points, m


def gen(spec: SynthSpec, points_path, matroid_path) -> None:
    points, m = generate(spec)
    write_points(points_path, points)
    write_matroid(matroid_path, m)


@dataclass
class RunRecord:
    seed: int
    diversity: float | None = None
    solution: list[str] = field(default_factory=list)
    coreset_size: int | None = None
    radius: float | None = None
    coreset_time: float | None = None
    solver_time: float | None = None
    swaps: int = 0
    hit_cap: bool = False
    error: str | None = None
    error_kind: str | None = None


TIMING_FIELDS = ("coreset_time", "solver_time")


@dataclass
class Report:
    config: dict
    records: list[RunRecord] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(r.error is not None for r in self.records)

    def summary(self) -> dict:
        ok = [r for r in self.records if r.error is None]
        if not ok:
            return {"runs": len(self.records), "failures": self.failures}
        div = [r.diversity for r in ok]
        return {
            "runs": len(self.records),
            "failures": self.failures,
            "mean_diversity": float(np.mean(div)),
            "min_diversity": float(np.min(div)),
            "max_diversity": float(np.max(div)),
            "mean_coreset_size": float(np.mean([r.coreset_size for r in ok])),
            "mean_coreset_time": float(np.mean([r.coreset_time for r in ok])),
            "mean_solver_time": float(np.mean([r.solver_time for r in ok])),
        }

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "records": [asdict(r) for r in self.records],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "Report":
        return cls(dict(obj["config"]), [RunRecord(**r) for r in obj["records"]])

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def without_timing(self) -> dict:
        out = self.to_dict()
        for r in out["records"]:
            for f in TIMING_FIELDS:
                r.pop(f, None)
        for key in ("mean_coreset_time", "mean_solver_time"):
            out["summary"].pop(key, None)
        return out


def write_json(path, obj) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=1, sort_keys=True)
    if path is None or str(path) == "-":
        print(text)
        return
    Path(path).write_text(text + "\n", encoding="utf-8")


def finite_or_none(x: float) -> float | None:
    return None if x is None or not math.isfinite(x) else float(x)
