from itertools import combinations

import numpy as np
import pytest

from divmax import CapabilityError, Dataset, DiversityKind, InputError, MetricKind, evaluate, mst_weight, pair_count, tsp_weight
from divmax.diversity import evaluate_batch, lower_bound_factor
from divmax.oracle import _prufer_trees, diversity_values

from helpers import KINDS


def unit_triangle():
    h = np.sqrt(3) / 2
    return Dataset.from_arrays([[0, 0], [1, 0], [0.5, h]])


@pytest.mark.parametrize("kind, expected", [("sum", 3), ("star", 2), ("tree", 2), ("cycle", 3), ("bipartition", 2)])
def test_unit_triangle(kind, expected):
    assert evaluate(unit_triangle(), kind, [0, 1, 2]) == pytest.approx(expected)


def test_two_identical_points():
    d = Dataset.from_arrays([[1.0, 1.0], [1.0, 1.0]], ids=["a", "b"])
    assert evaluate(d, "sum", [0, 1]) == 0.0


def test_mst_and_tsp_examples():
    assert mst_weight(unit_triangle(), [0, 1, 2]) == pytest.approx(2)
    assert mst_weight(Dataset.from_arrays([[0.0], [1.0], [2.0], [3.0]]), range(4)) == pytest.approx(3)
    assert tsp_weight(unit_triangle(), [0, 1, 2]) == pytest.approx(3)
    square = Dataset.from_arrays([[0, 0], [1, 1], [1, 0], [0, 1]])
    assert tsp_weight(square, range(4)) == pytest.approx(4)


def test_size_limits():
    d = Dataset.from_arrays(np.random.default_rng(0).normal(size=(22, 2)))
    with pytest.raises(CapabilityError):
        tsp_weight(d, range(19))
    assert tsp_weight(d, range(18)) > 0
    with pytest.raises(CapabilityError):
        evaluate(d, "bipartition", range(21))
    with pytest.raises(InputError):
        evaluate(d, "cycle", [0, 1])
    with pytest.raises(InputError):
        evaluate(d, "sum", [0])


@pytest.mark.parametrize(
    "kind, k, f", [("sum", 4, 6), ("cycle", 4, 4), ("bipartition", 5, 6), ("star", 5, 4), ("tree", 3, 2)]
)
def test_pair_count(kind, k, f):
    assert pair_count(kind, k).f == f


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("k", range(3, 10))
def test_evaluator_matches_enumeration(kind, k):
    rng = np.random.default_rng(k)
    n = 11
    d = Dataset.from_arrays(rng.normal(size=(n, 3)), metric=MetricKind.ANGULAR_COSINE)
    dmat = np.array([[d.dist(i, j) for j in range(n)] for i in range(n)])
    count = 4 if kind == "tree" and k == 9 else 60  # 9**7 labelled trees per set
    combos = np.array(list(combinations(range(n), k))[:count])
    assert np.allclose(evaluate_batch(dmat, combos, kind), diversity_values(dmat, combos, kind), rtol=1e-12)


def test_prufer_enumeration_counts_all_trees():
    trees = _prufer_trees(8)
    assert len(trees) == 8**6
    sample = trees[np.random.default_rng(0).integers(len(trees), size=200)]
    for edges in sample:
        parent = list(range(8))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b in edges:
            ra, rb = find(a), find(b)
            assert ra != rb
            parent[ra] = rb


def test_tree_random_8_and_tsp_random_9():
    rng = np.random.default_rng(1)
    d = Dataset.from_arrays(rng.normal(size=(9, 2)))
    dmat = d.distance_matrix()
    assert mst_weight(d, range(8)) == pytest.approx(diversity_values(dmat, np.array([range(8)]), "tree")[0])
    assert tsp_weight(d, range(9)) == pytest.approx(diversity_values(dmat, np.array([range(9)]), "cycle")[0])


@pytest.mark.parametrize("kind", KINDS)
def test_permutation_invariance(kind):
    rng = np.random.default_rng(5)
    d = Dataset.from_arrays(rng.normal(size=(7, 2)))
    ids = list(range(7))
    ref = evaluate(d, kind, ids)
    for _ in range(5):
        assert evaluate(d, kind, rng.permutation(ids)) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize(
    "kind, k, factor",
    [("sum", 4, 1 / 8), ("star", 4, 1 / 12), ("tree", 4, 1 / 6), ("cycle", 4, 1 / 4), ("bipartition", 4, 1 / 10)],
)
def test_lower_bound_factors(kind, k, factor):
    assert lower_bound_factor(kind, k) == pytest.approx(factor)


def test_kind_accepts_strings_and_enum():
    assert DiversityKind("tree") is DiversityKind.TREE
    assert DiversityKind.CYCLE.min_size == 3
