from itertools import combinations

import numpy as np
import pytest

from divmax import (
    CapabilityError,
    Dataset,
    InfeasibleError,
    InputError,
    PartitionMatroid,
    evaluate,
    exhaustive_search,
    is_independent,
    local_search_sum,
    solve,
)
from divmax.oracle import brute_force_optimum
from divmax.solvers import _independent_combos

from helpers import KINDS, instance


def no_improving_swap(d, m, pool, sol, gamma=0.0):
    value = evaluate(d, "sum", sol)
    for s in sol:
        for x in set(pool) - set(sol):
            cand = [i for i in sol if i != s] + [x]
            if is_independent(m, d, cand) and evaluate(d, "sum", cand) > (1 + gamma) * value:
                return False
    return True


def test_single_independent_set_pool():
    d = Dataset.from_arrays([[0.0], [1.0], [5.0]], ["a", "b", "b"])
    m = PartitionMatroid({"a": 1, "b": 1})
    res = local_search_sum(d, m, [0, 1], 2)
    assert res.solution.ids == (0, 1) and res.swaps == 0
    sol = exhaustive_search(d, m, [0, 1], 2, "sum")
    assert sol.ids == (0, 1) and sol.value == pytest.approx(1.0)


def test_farthest_pair():
    d = Dataset.from_arrays([[0.0], [1.0], [5.0]], ["a"] * 3)
    m = PartitionMatroid({"a": 2})
    assert exhaustive_search(d, m, range(3), 2, "sum").ids == (0, 2)
    assert local_search_sum(d, m, range(3), 2).solution.ids == (0, 2)


def test_ties_prefer_lexicographic_smallest():
    d = Dataset.from_arrays([[0.0], [1.0], [2.0], [3.0]], ["a"] * 4)
    m = PartitionMatroid({"a": 2})
    assert exhaustive_search(d, m, [0, 1, 2], 2, "star").ids == (0, 2)
    assert exhaustive_search(d, m, [1, 2, 3], 2, "sum").ids == (1, 3)
    # both diagonals of the square tie
    sq = Dataset.from_arrays([[0, 0], [1, 0], [1, 1], [0, 1]], ["a"] * 4)
    assert exhaustive_search(sq, PartitionMatroid({"a": 4}), range(4), 2, "sum").ids == (0, 2)


def test_errors():
    d = Dataset.from_arrays(np.arange(6.0), ["a"] * 3 + ["b"] * 3)
    m = PartitionMatroid({"a": 1, "b": 1})
    with pytest.raises(InfeasibleError):
        local_search_sum(d, m, [0, 1, 2], 2)
    with pytest.raises(InfeasibleError):
        exhaustive_search(d, m, [0, 1, 2], 2, "sum")
    with pytest.raises(CapabilityError, match="smaller coreset"):
        exhaustive_search(d, m, range(6), 2, "sum", budget=3)
    with pytest.raises(InputError):
        exhaustive_search(d, m, range(6), 2, "cycle")
    with pytest.raises(InputError):
        local_search_sum(d, m, range(6), 2, gamma=-0.1)
    with pytest.raises(InputError):
        solve(d, m, 2, "tree", tau=2, solver="local-search")


@pytest.mark.parametrize("matroid", ["partition", "transversal"])
@pytest.mark.parametrize("seed", range(12))
def test_exhaustive_matches_oracle(matroid, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(3, 5))
    d, m = instance(rng, matroid, 14, k)
    for kind in KINDS:
        sol = exhaustive_search(d, m, range(len(d)), k, kind)
        ids, value = brute_force_optimum(d, m, k, kind)
        assert sol.value == pytest.approx(value, rel=1e-9)
        assert is_independent(m, d, sol.ids)
        assert sol.value == pytest.approx(evaluate(d, kind, sol.ids), rel=1e-9)


@pytest.mark.parametrize("matroid", ["partition", "transversal"])
@pytest.mark.parametrize("seed", range(15))
def test_local_search_half_approx_and_local_optimality(matroid, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 5))
    n = int(rng.integers(k + 2, 13))
    d, m = instance(rng, matroid, n, k)
    res = local_search_sum(d, m, range(n), k)
    _, opt = brute_force_optimum(d, m, k, "sum")
    assert res.solution.value >= 0.5 * opt
    assert is_independent(m, d, res.solution.ids) and len(res.solution.ids) == k
    assert no_improving_swap(d, m, range(n), list(res.solution.ids))
    assert exhaustive_search(d, m, range(n), k, "sum").value >= res.solution.value - 1e-12
    assert not res.hit_cap


def test_gamma_limits_swaps():
    rng = np.random.default_rng(0)
    d, m = instance(rng, "partition", 40, 4)
    loose = local_search_sum(d, m, range(40), 4, gamma=0.5)
    tight = local_search_sum(d, m, range(40), 4)
    assert loose.swaps <= tight.swaps
    assert no_improving_swap(d, m, range(40), list(loose.solution.ids), gamma=0.5)


def test_swap_cap_is_reported(caplog):
    rng = np.random.default_rng(1)
    d, m = instance(rng, "partition", 30, 3)
    res = local_search_sum(d, m, range(30), 3, max_swaps=0)
    assert res.hit_cap
    assert "swap cap" in caplog.text


@pytest.mark.parametrize("pipeline", ["seq", "stream", "parallel"])
def test_solve_full_coreset_is_exact(pipeline):
    rng = np.random.default_rng(2)
    d, m = instance(rng, "transversal", 30, 3)
    rep = solve(d, m, 3, "bipartition", pipeline, tau=30, solver="exhaustive", ell=1)
    _, opt = brute_force_optimum(d, m, 3, "bipartition")
    if pipeline != "stream":
        assert rep.solution.value == pytest.approx(opt)
    assert rep.coreset_time >= 0 and rep.solver_time >= 0


def test_solve_stream_local_search():
    rng = np.random.default_rng(3)
    d, m = instance(rng, "partition", 12, 3, blobs=4, spread=0.01)
    rep = solve(d, m, 3, "sum", "stream", tau=8)
    _, opt = brute_force_optimum(d, m, 3, "sum")
    rho = opt / 3
    assert rep.solution.value >= 0.5 * (1 - 4 * rep.radius / rho) * opt


def test_solve_parallel_vs_seq():
    rng = np.random.default_rng(4)
    d, m = instance(rng, "partition", 400, 4)
    a = solve(d, m, 4, "sum", "seq", tau=32)
    b = solve(d, m, 4, "sum", "parallel", tau=32, ell=4)
    assert a.solution.value > 0 and b.solution.value > 0
    assert b.coreset.tau == 32


def test_exhaustive_pool_order_irrelevant():
    rng = np.random.default_rng(5)
    d, m = instance(rng, "partition", 12, 3)
    pool = list(range(12))
    a = exhaustive_search(d, m, pool, 3, "tree")
    b = exhaustive_search(d, m, pool[::-1], 3, "tree")
    assert a == b


def test_independent_enumeration_complete():
    rng = np.random.default_rng(6)
    d, m = instance(rng, "transversal", 10, 3)
    got = {tuple(r) for chunk in _independent_combos(m, list(d.points), 3) for r in chunk}
    expect = {c for c in combinations(range(10), 3) if is_independent(m, d, c)}
    assert got == expect
