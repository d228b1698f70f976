import numpy as np
import pytest

from prunedseg.classical import classical_dp
from prunedseg.errors import InputError
from prunedseg.grid import default_grid, grid_heuristic, uniform_grid
from prunedseg.pruned import backtrack, pruned_dp


def _hand_rolled(y, grid, c_prev):
    """Direct one-comparison recursion for k=2, written out without arrays."""
    best = np.inf
    for mu in grid:
        h = c_prev[1] + (y[1] - mu) ** 2
        for t in range(2, len(y)):
            h = min(h, c_prev[t]) + (y[t] - mu) ** 2
        best = min(best, h)
    return best


def test_two_point_grid_example(example_signal, backend):
    res = grid_heuristic(example_signal, "quadratic", 2, [-0.5, 0.5], backend=backend)
    c1 = classical_dp(example_signal, "quadratic", 1).cost[1]
    assert _hand_rolled(example_signal, [-0.5, 0.5], c1) == pytest.approx(0.14, abs=1e-15)
    assert res.cost[2] == pytest.approx(0.14, abs=1e-15)
    assert res.best_mu[2] == -0.5
    assert res.change_points(2) == [3]


def test_exact_mean_in_grid_recovers_optimum(backend):
    y = np.random.default_rng(5).normal(size=60) + np.repeat([0.0, 3.0, -1.0], 20)
    exact = pruned_dp(y, "quadratic", 3)
    for k in (2, 3):
        cps = backtrack(exact, k)
        mu = float(np.mean(y[cps[-1]:]))
        res = grid_heuristic(y, "quadratic", k, [mu], exact=exact, backend=backend)
        assert res.cost[k] == pytest.approx(exact.cost[k, -1], rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_refinement_never_hurts(seed, backend):
    y = np.random.default_rng(seed).standard_cauchy(150)
    exact = pruned_dp(y, "quadratic", 4)
    coarse = default_grid(y, "quadratic", 10)
    fine = np.union1d(coarse, default_grid(y, "quadratic", 97))
    a = grid_heuristic(y, "quadratic", 4, coarse, exact=exact, backend=backend)
    b = grid_heuristic(y, "quadratic", 4, fine, exact=exact, backend=backend)
    for k in range(1, 5):
        assert b.cost[k] <= a.cost[k]
        assert b.cost[k] - exact.cost[k, -1] >= -1e-12
        assert a.cost[k] - exact.cost[k, -1] >= -1e-12


def test_poisson_grid_is_upper_bound(backend):
    y = np.random.default_rng(3).poisson(np.repeat([1.0, 5.0], 40)).astype(float)
    exact = pruned_dp(y, "poisson", 3)
    res = grid_heuristic(y, "poisson", 3, default_grid(y, "poisson", 50), exact=exact,
                         backend=backend)
    for k in range(1, 4):
        assert res.cost[k] >= exact.cost[k, -1] - 1e-12


def test_grid_errors(example_signal):
    with pytest.raises(InputError, match="empty"):
        grid_heuristic(example_signal, "quadratic", 2, [])
    with pytest.raises(InputError):
        grid_heuristic([1.0, 2.0], "poisson", 1, [0.0, 1.0])
    with pytest.raises(InputError):
        uniform_grid(0, 1, 0)
    with pytest.raises(InputError):
        grid_heuristic(example_signal, "quadratic", 3, [0.0],
                       exact=pruned_dp(example_signal, "quadratic", 1))


def test_backends_agree():
    y = np.random.default_rng(8).normal(size=300)
    g = default_grid(y, "quadratic", 33)
    a = grid_heuristic(y, "quadratic", 5, g, backend="python")
    b = grid_heuristic(y, "quadratic", 5, g)
    assert np.array_equal(a.cost, b.cost) and np.array_equal(a.last_change, b.last_change)
