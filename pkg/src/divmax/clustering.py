"""Farthest-first traversal (GMM) with incremental iterations.

Each point caches the distance to its closest center, so one iteration costs
one pass over the data and ``tau`` iterations cost ``O(n tau)`` distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import CapabilityError, Dataset, InputError


@dataclass(frozen=True)
class Clustering:
    centers: tuple[int, ...]
    assignment: np.ndarray  # position of the closest center, per point
    radius: float
    nearest: np.ndarray  # distance to the assigned center, per point

    @property
    def tau(self) -> int:
        return len(self.centers)

    def clusters(self) -> list[np.ndarray]:
        """Member indices of each cluster, in dataset order."""
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.searchsorted(self.assignment[order], np.arange(self.tau + 1))
        return [order[bounds[c] : bounds[c + 1]] for c in range(self.tau)]


def _first_center(d: Dataset) -> Clustering:
    dist = d.dists_from(0)
    dist[0] = 0.0
    return Clustering((0,), np.zeros(len(d), dtype=np.intp), float(dist.max()), dist)


def gmm_iteration(d: Dataset, c: Clustering) -> Clustering:
    """Add the point farthest from its closest center (lowest index on ties)."""
    if c.tau >= len(d):
        raise CapabilityError("every point is already a center")
    y = int(np.argmax(c.nearest))
    if y in c.centers:
        # only possible when the remaining points duplicate existing centers
        taken = np.zeros(len(d), dtype=bool)
        taken[list(c.centers)] = True
        y = int(np.flatnonzero(~taken)[0])
    dist = d.dists_from(y)
    dist[y] = 0.0
    closer = dist < c.nearest
    nearest = np.where(closer, dist, c.nearest)
    assignment = np.where(closer, c.tau, c.assignment)
    assignment[y] = c.tau
    nearest[y] = 0.0
    return Clustering(c.centers + (y,), assignment, float(nearest.max()), nearest)


def gmm_init(d: Dataset) -> tuple[Clustering, float]:
    """Two-center clustering and ``delta``, the distance between the two centers."""
    if len(d) < 2:
        raise InputError("GMM needs at least two points")
    c = gmm_iteration(d, _first_center(d))
    return c, d.dist(c.centers[0], c.centers[1])


def gmm_until(d: Dataset, stop: Callable[[Clustering, int], bool]) -> Clustering:
    """Run GMM from two centers until ``stop(clustering, tau)`` holds.

    Stops unconditionally once every point is a center.
    """
    c, _ = gmm_init(d)
    while not stop(c, c.tau) and c.tau < len(d):
        c = gmm_iteration(d, c)
    return c


def gmm(d: Dataset, tau: int) -> Clustering:
    """Exactly ``min(tau, n)`` centers (a single center when ``tau == 1``)."""
    if tau < 1:
        raise InputError("tau must be positive")
    if tau == 1 or len(d) == 1:
        return _first_center(d)
    return gmm_until(d, lambda c, t: t >= tau)


def gmm_radius(d: Dataset, epsilon: float, k: int) -> tuple[Clustering, float]:
    """GMM until the radius is at most ``epsilon * delta / (16 k)``."""
    first, delta = gmm_init(d)
    threshold = epsilon * delta / (16 * k)
    c = first
    while c.radius > threshold and c.tau < len(d):
        c = gmm_iteration(d, c)
    return c, delta
