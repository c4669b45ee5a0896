"""Independence oracles for partition, transversal and user-supplied matroids.

A matroid object only knows about categories (or an arbitrary predicate); it is
evaluated against points, so the same object serves an in-memory
:class:`~divmax.core.Dataset` and the delegate sets of the streaming
construction.  Every oracle also exposes an incremental :meth:`builder` used by
the greedy helpers: adding elements one at a time and keeping those that
preserve independence yields a maximal (hence maximum) independent set.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .core import Dataset, InputError, InvariantViolation, Point


class Matroid:
    """Interface shared by the concrete oracles."""

    kind = "custom"

    def builder(self) -> "IndependentSetBuilder":
        raise NotImplementedError

    def validate(self, d: Dataset) -> None:
        """Raise :class:`InputError` if ``d`` violates the matroid's assumptions."""

    def independent(self, points: Iterable[Point]) -> bool:
        b = self.builder()
        return all(b.try_add(p) for p in points)

    def max_categories_per_point(self, d: Dataset) -> int:
        return 1


class IndependentSetBuilder:
    """Grows an independent set one point at a time."""

    def __init__(self):
        self.members: list[Point] = []

    def __len__(self):
        return len(self.members)

    def can_add(self, p: Point) -> bool:
        raise NotImplementedError

    def try_add(self, p: Point) -> bool:
        raise NotImplementedError

    def copy(self) -> "IndependentSetBuilder":
        raise NotImplementedError


class PartitionMatroid(Matroid):
    """At most ``quotas[c]`` points of each category ``c``.

    Every point must carry exactly one category listed in ``quotas``.
    """

    kind = "partition"

    def __init__(self, quotas: Mapping[str, int]):
        q = {}
        for cat, bound in quotas.items():
            if int(bound) != bound or bound < 0:
                raise InputError(f"quota for {cat!r} must be a non-negative integer, got {bound!r}")
            q[str(cat)] = int(bound)
        self.quotas = q

    def __repr__(self):
        return f"PartitionMatroid({self.quotas!r})"

    def category_of(self, p: Point) -> str:
        cats = [c for c in p.categories if c in self.quotas]
        if len(cats) != 1:
            if not cats:
                raise InputError(f"point {p.id!r}: category {sorted(p.categories)} absent from matroid config")
            raise InputError(f"point {p.id!r}: belongs to several partition blocks {sorted(cats)}")
        return cats[0]

    def validate(self, d: Dataset) -> None:
        for p in d.points:
            self.category_of(p)

    def builder(self):
        return _PartitionBuilder(self)


class _PartitionBuilder(IndependentSetBuilder):
    def __init__(self, m: PartitionMatroid):
        super().__init__()
        self.m = m
        self.counts: dict[str, int] = {}

    def can_add(self, p):
        c = self.m.category_of(p)
        return self.counts.get(c, 0) < self.m.quotas[c]

    def try_add(self, p):
        c = self.m.category_of(p)
        if self.counts.get(c, 0) >= self.m.quotas[c]:
            return False
        self.counts[c] = self.counts.get(c, 0) + 1
        self.members.append(p)
        return True

    def copy(self):
        b = _PartitionBuilder(self.m)
        b.counts = dict(self.counts)
        b.members = list(self.members)
        return b


class TransversalMatroid(Matroid):
    """Sets of points that can be matched to distinct active categories."""

    kind = "transversal"

    def __init__(self, categories: Iterable[str]):
        self.categories = frozenset(str(c) for c in categories)
        if not self.categories:
            raise InputError("transversal matroid needs at least one category")

    def __repr__(self):
        return f"TransversalMatroid({sorted(self.categories)!r})"

    def categories_of(self, p: Point) -> list[str]:
        return sorted(p.categories & self.categories)

    def validate(self, d: Dataset) -> None:
        for p in d.points:
            if not p.categories & self.categories:
                raise InputError(f"point {p.id!r}: no category among the matroid's categories")

    def max_categories_per_point(self, d: Dataset) -> int:
        return max(len(p.categories & self.categories) for p in d.points)

    def builder(self):
        return _MatchingBuilder(self)


class _MatchingBuilder(IndependentSetBuilder):
    """Kuhn-style augmenting paths over a matching local to this builder."""

    def __init__(self, m: TransversalMatroid):
        super().__init__()
        self.m = m
        self.adj: list[list[str]] = []
        self.owner: dict[str, int] = {}  # category -> member position

    def _augment(self, u: int, seen: set) -> bool:
        for c in self.adj[u]:
            if c in seen:
                continue
            seen.add(c)
            v = self.owner.get(c)
            if v is None or self._augment(v, seen):
                self.owner[c] = u
                return True
        return False

    def can_add(self, p):
        saved = dict(self.owner)
        self.adj.append(self.m.categories_of(p))
        ok = self._augment(len(self.adj) - 1, set())
        self.adj.pop()
        self.owner = saved
        return ok

    def try_add(self, p):
        self.adj.append(self.m.categories_of(p))
        if self._augment(len(self.adj) - 1, set()):
            self.members.append(p)
            return True
        self.adj.pop()
        return False

    def copy(self):
        b = _MatchingBuilder(self.m)
        b.adj = list(self.adj)
        b.owner = dict(self.owner)
        b.members = list(self.members)
        return b


class CustomMatroid(Matroid):
    """Matroid given by a predicate over frozensets of point ids.

    The predicate is trusted to satisfy the matroid axioms; use
    :func:`divmax.oracle.check_matroid_axioms` to test it on small inputs.
    """

    kind = "custom"

    def __init__(self, oracle: Callable[[frozenset], bool], name: str = "custom"):
        self.oracle = oracle
        self.name = name

    def __repr__(self):
        return f"CustomMatroid({self.name})"

    def independent(self, points):
        return bool(self.oracle(frozenset(p.id for p in points)))

    def builder(self):
        return _OracleBuilder(self)


class _OracleBuilder(IndependentSetBuilder):
    def __init__(self, m: CustomMatroid):
        super().__init__()
        self.m = m
        self.ids: set[str] = set()

    def can_add(self, p):
        return p.id not in self.ids and bool(self.m.oracle(frozenset(self.ids | {p.id})))

    def try_add(self, p):
        if not self.can_add(p):
            return False
        self.ids.add(p.id)
        self.members.append(p)
        return True

    def copy(self):
        b = _OracleBuilder(self.m)
        b.ids = set(self.ids)
        b.members = list(self.members)
        return b


def uniform_matroid(rank: int) -> CustomMatroid:
    """Every set of at most ``rank`` points is independent."""
    return CustomMatroid(lambda ids: len(ids) <= rank, name=f"uniform({rank})")


def is_independent(m: Matroid, d: Dataset, ids: Iterable[int]) -> bool:
    ids = d.check_indices(ids)
    if len(set(ids)) != len(ids):
        return False
    return m.independent(d.points[i] for i in sorted(ids))


def greedy_independent(m: Matroid, points: Sequence[Point], cap: int | None = None, base=()) -> list[int]:
    """Positions (into ``points``) kept by a greedy scan, after seeding with ``base``.

    ``base`` must itself be independent; the returned positions exclude it.
    ``cap`` bounds the total size, seed included.
    """
    b = m.builder()
    for p in base:
        if not b.try_add(p):
            raise InvariantViolation("greedy seed is not independent")
    kept = []
    for pos, p in enumerate(points):
        if cap is not None and len(b) >= cap:
            break
        if b.try_add(p):
            kept.append(pos)
    return kept


def rank(m: Matroid, d: Dataset) -> int:
    """Size of a maximal independent set of the whole dataset."""
    return len(greedy_independent(m, d.points))


def maximal_independent_subset(m: Matroid, d: Dataset, pool: Iterable[int], cap: int) -> list[int]:
    """Greedy maximal independent subset of ``pool`` with at most ``cap`` elements.

    The pool is scanned in dataset index order, so the result is deterministic.
    """
    if cap < 1:
        raise InputError("cap must be positive")
    pool = sorted(set(d.check_indices(pool)))
    kept = greedy_independent(m, [d.points[i] for i in pool], cap)
    return [pool[j] for j in kept]


def augment(m: Matroid, d: Dataset, base: Iterable[int], donor: Iterable[int], target: int) -> list[int]:
    """Extend independent ``base`` to ``target`` elements using elements of ``donor``."""
    base = sorted(set(d.check_indices(base)))
    donor = sorted(set(d.check_indices(donor)))
    if not target >= len(base):
        raise InputError("target must be at least |base|")
    if len(donor) < target:
        raise InputError("donor must have at least target elements")
    in_base = set(base)
    extra_pool = [i for i in donor if i not in in_base]
    kept = greedy_independent(m, [d.points[i] for i in extra_pool], target, [d.points[i] for i in base])
    if len(base) + len(kept) < target:
        raise InvariantViolation(
            "augmentation failed: donor independent set cannot extend base; the oracle is not a matroid"
        )
    return sorted(base + [extra_pool[j] for j in kept])


def from_config(cfg: Mapping) -> Matroid:
    """Build a matroid from its JSON configuration object."""
    kind = cfg.get("type")
    if kind == "partition":
        quotas = cfg.get("quotas")
        if not isinstance(quotas, Mapping):
            raise InputError("partition matroid config needs a 'quotas' object")
        return PartitionMatroid(quotas)
    if kind == "transversal":
        cats = cfg.get("categories")
        if not isinstance(cats, list) or not all(isinstance(c, str) for c in cats):
            raise InputError("transversal matroid config needs a 'categories' list of strings")
        return TransversalMatroid(cats)
    raise InputError(f"unknown matroid type {kind!r}")


def to_config(m: Matroid) -> dict:
    if isinstance(m, PartitionMatroid):
        return {"type": "partition", "quotas": dict(sorted(m.quotas.items()))}
    if isinstance(m, TransversalMatroid):
        return {"type": "transversal", "categories": sorted(m.categories)}
    raise InputError(f"{m!r} has no file representation")
