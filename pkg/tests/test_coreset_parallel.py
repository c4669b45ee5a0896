import numpy as np
import pytest

from divmax import InputError, parallel_coreset, reduce_coreset, seq_coreset
from divmax.diversity import pair_count
from divmax.oracle import brute_force_optimum
from divmax.parallel import default_parallelism, shard_bounds, split_tau
from divmax.solvers import exhaustive_search

from helpers import KINDS, instance, record_size


def test_shard_bounds():
    assert shard_bounds(10, 3) == [(0, 4), (4, 7), (7, 10)]
    assert shard_bounds(4, 4) == [(0, 1), (1, 2), (2, 3), (3, 4)]
    with pytest.raises(InputError):
        shard_bounds(3, 4)
    with pytest.raises(InputError):
        shard_bounds(3, 0)


def test_split_tau():
    assert split_tau(64, 4) == [16] * 4
    assert split_tau(10, 4) == [3, 3, 2, 2]


def test_default_parallelism():
    assert default_parallelism(10000, 4, workers=8) == 8
    assert default_parallelism(20, 5, workers=8) == 2


@pytest.mark.parametrize("matroid", ["partition", "transversal"])
def test_single_shard_is_sequential(matroid):
    rng = np.random.default_rng(0)
    d, m = instance(rng, matroid, 80, 3)
    assert parallel_coreset(d, m, 3, 1, tau=8) == seq_coreset(d, m, 3, tau=8)
    assert parallel_coreset(d, m, 3, 1, epsilon=0.5) == seq_coreset(d, m, 3, epsilon=0.5)


def test_four_shards_sixty_four_centers():
    rng = np.random.default_rng(1)
    d, m = instance(rng, "partition", 400, 3)
    core = parallel_coreset(d, m, 3, 4, tau=64)
    assert core.tau == 64
    assert sorted(set(core.shards)) == [0, 1, 2, 3]
    assert all(core.shards.count(s) <= 16 for s in range(4))
    assert len(core.shard_radii) == 4
    assert record_size(core, d, m, 3, "test_coreset_parallel")


def test_parallelism_above_n():
    rng = np.random.default_rng(2)
    d, m = instance(rng, "partition", 3, 1)
    with pytest.raises(InputError):
        parallel_coreset(d, m, 1, 4, tau=2)


@pytest.mark.parametrize("ell", [2, 4])
@pytest.mark.parametrize("seed", range(5))
def test_composability(ell, seed):
    rng = np.random.default_rng(seed)
    k = 3
    d, m = instance(rng, "partition" if seed % 2 else "transversal", 40, k, blobs=5, spread=0.01)
    core = parallel_coreset(d, m, k, ell, tau=16)
    r = max(core.shard_radii)
    for kind in KINDS:
        _, opt = brute_force_optimum(d, m, k, kind)
        rho = opt / pair_count(kind, k).f
        got = exhaustive_search(d, m, core.ids, k, kind).value
        assert got >= (1 - 4 * r / rho) * opt * (1 - 1e-9)


def test_reduce_small_coreset_keeps_everything():
    rng = np.random.default_rng(3)
    d, m = instance(rng, "partition", 40, 2)
    t = seq_coreset(d, m, 2, tau=5)
    again = reduce_coreset(t, d, m, 2, tau=len(t))
    assert again.ids == t.ids


def test_reduce_size_bound():
    rng = np.random.default_rng(4)
    d, m = instance(rng, "partition", 2000, 4, n_cats=4)
    t = parallel_coreset(d, m, 4, 4, tau=128)
    assert len(t) >= 400
    r = reduce_coreset(t, d, m, 4, tau=32)
    assert len(r) <= 32 * 4
    assert set(r.ids) <= set(t.ids)


@pytest.mark.parametrize("seed", range(4))
def test_two_level_quality(seed):
    rng = np.random.default_rng(seed)
    k = 2
    d, m = instance(rng, "partition", 36, k, blobs=4, spread=0.005)
    t = parallel_coreset(d, m, k, 3, tau=12)
    r = reduce_coreset(t, d, m, k, tau=8)
    _, opt = brute_force_optimum(d, m, k, "sum")
    rho = opt / pair_count("sum", k).f
    eps = 4 * max(max(t.shard_radii), r.radius) / rho
    got = exhaustive_search(d, m, r.ids, k, "sum").value
    assert got >= (1 - eps) ** 2 * opt * (1 - 1e-9)


def test_determinism():
    rng = np.random.default_rng(5)
    d, m = instance(rng, "transversal", 200, 3)
    assert parallel_coreset(d, m, 3, 4, tau=20) == parallel_coreset(d, m, 3, 4, tau=20)
