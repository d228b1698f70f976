import numpy as np
import pytest

from oracles import brute_force, direct_segment_cost, rel_gap
from prunedseg.classical import PrefixStats, classical_dp, segment_cost
from prunedseg.errors import InputError
from prunedseg.pruned import backtrack


@pytest.fixture
def stats(example_signal):
    return PrefixStats.from_signal(example_signal)


def test_segment_cost_examples(stats, example_signal):
    assert segment_cost(stats, 1, 2) == pytest.approx(0.125, abs=1e-15)
    assert segment_cost(stats, 4, 4) == 0.0
    # oracle: direct mean computation
    assert direct_segment_cost(example_signal[:3]) == pytest.approx(0.14, abs=1e-15)
    assert segment_cost(stats, 1, 3) == pytest.approx(0.14, abs=1e-15)


@pytest.mark.parametrize("i,j", [(0, 1), (3, 2), (1, 5)])
def test_segment_cost_range(stats, i, j):
    with pytest.raises(InputError):
        segment_cost(stats, i, j)


def test_prefix_stats_layout(stats):
    assert stats.cum_count.tolist() == [0, 1, 2, 3, 4]
    assert stats.cum_sum[0] == 0.0 and stats.cum_sumsq[0] == 0.0


def test_poisson_segment_cost():
    y = [0, 2, 4, 0, 0]
    st = PrefixStats.from_signal(y, "poisson")
    assert segment_cost(st, 4, 5) == 0.0
    assert segment_cost(st, 1, 3) == pytest.approx(direct_segment_cost(y[:3], "poisson"), rel=1e-14)


def test_worked_example(example_signal):
    t = classical_dp(example_signal, "quadratic", 2)
    assert t.cost[2, 4] == pytest.approx(0.14, abs=1e-15)
    assert t.backpointer[2, 4] == 3
    # oracle: the two 2-segmentations of the first three points
    assert brute_force(example_signal[:3], 2) == (pytest.approx(0.005, abs=1e-15), [1])
    assert t.cost[2, 3] == pytest.approx(0.005, abs=1e-15)
    assert t.backpointer[2, 3] == 1


def test_every_point_its_own_segment():
    y = np.random.default_rng(3).normal(size=7)
    t = classical_dp(y, "quadratic", 7)
    assert t.cost[7, 7] == pytest.approx(0.0, abs=1e-12)
    assert backtrack(t, 7) == [1, 2, 3, 4, 5, 6]


def test_table_contract():
    y = np.random.default_rng(4).normal(size=30)
    t = classical_dp(y, "quadratic", 5)
    assert t.cost.shape == (6, 31) and t.k_max == 5 and t.n == 30
    for k in range(1, 6):
        assert np.all(np.isfinite(t.cost[k, k:]))
        assert np.all(np.isinf(t.cost[k, :k]))
        for tt in range(k, 31):
            assert k - 1 <= t.backpointer[k, tt] <= tt - 1


def test_ties_go_to_smallest_index():
    t = classical_dp([1.0, 1.0, 1.0, 1.0], "quadratic", 2)
    assert t.cost[2, 4] == 0.0
    assert t.backpointer[2, 4] == 1


@pytest.mark.parametrize("k_max", [0, 5, 2.5])
def test_bad_k_max(example_signal, k_max):
    with pytest.raises(InputError):
        classical_dp(example_signal, "quadratic", k_max)


def test_empty_signal():
    with pytest.raises(InputError):
        classical_dp([], "quadratic", 1)


@pytest.mark.parametrize("seed", range(10))
def test_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 11))
    y = rng.normal(size=n) + rng.integers(0, 3, size=n)
    t = classical_dp(y, "quadratic", 4)
    for k in range(1, min(4, n) + 1):
        best, cps = brute_force(y, k)
        assert rel_gap(t.cost[k, n], best) <= 1e-10
        assert backtrack(t, k) == cps


def test_monotone_in_k():
    y = np.random.default_rng(11).standard_cauchy(300)
    t = classical_dp(y, "quadratic", 6)
    for k in range(1, 6):
        assert np.all(t.cost[k + 1, k + 1:] <= t.cost[k, k + 1:] + 1e-12)


def test_permutation_within_segments_keeps_cost():
    rng = np.random.default_rng(12)
    y = np.concatenate([rng.normal(0, 1, 40), rng.normal(4, 1, 30), rng.normal(-2, 1, 50)])
    t = classical_dp(y, "quadratic", 3)
    cps = backtrack(t, 3)
    bounds = [0, *cps, y.size]
    z = y.copy()
    for a, b in zip(bounds, bounds[1:]):
        z[a:b] = rng.permutation(z[a:b])
    t2 = classical_dp(z, "quadratic", 3)
    assert t2.cost[3, y.size] == pytest.approx(t.cost[3, y.size], rel=1e-10)
