import numpy as np
import pytest

from prunedseg.errors import InputError
from prunedseg.simulate import (SignalSpec, add_noise, default_grid_specs, generate_means,
                                noise_draws, simulate)


def test_means_examples():
    assert generate_means(SignalSpec("constant", 4, level=0.0)).tolist() == [0, 0, 0, 0]
    rect = SignalSpec("rectangular", 4, amplitude=1.0, frequency=1.0, level=0.0)
    assert generate_means(rect).tolist() == [1, 1, -1, -1]
    sine = SignalSpec("sine", 4, amplitude=1.0, frequency=1.0, level=0.0)
    np.testing.assert_allclose(generate_means(sine), [0, 1, 0, -1], atol=1e-12)


def test_ramp():
    assert generate_means(SignalSpec("ramp", 3, amplitude=2.0, level=1.0)).tolist() == [3, 5, 7]


@pytest.mark.parametrize("noise", ["gaussian", "uniform", "chisq", "cauchy"])
def test_deterministic(noise):
    m = np.linspace(0, 1, 500)
    a, b = add_noise(m, noise, 42), add_noise(m, noise, 42)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, add_noise(m, noise, 43))


def test_known_stream():
    # pins the generator algorithm: PCG64 seeded with 0
    ref = np.random.Generator(np.random.PCG64(0)).standard_normal(3)
    assert noise_draws("gaussian", 3, 0).tolist() == ref.tolist()


@pytest.mark.parametrize("noise", ["gaussian", "uniform", "chisq"])
def test_moments(noise):
    x = noise_draws(noise, 10**6, 2024)
    assert -0.01 <= x.mean() <= 0.01
    assert 0.99 <= x.var() <= 1.01


def test_uniform_support():
    x = noise_draws("uniform", 10**5, 1)
    assert np.abs(x).max() <= np.sqrt(3)


def test_none_noise():
    spec = SignalSpec("ramp", 5, noise="none")
    assert simulate(spec).tolist() == [1, 2, 3, 4, 5]


@pytest.mark.parametrize("kwargs", [
    {"shape": "triangle"}, {"noise": "pink"}, {"n": 0}, {"n": 2.5},
    {"amplitude": -1.0}, {"shape": "sine", "frequency": 0.0}, {"seed": -1},
])
def test_invalid_specs(kwargs):
    with pytest.raises(InputError):
        SignalSpec(**kwargs)


def test_add_noise_rejects_nonfinite():
    with pytest.raises(InputError):
        add_noise([0.0, np.nan], "gaussian", 0)


def test_default_grid_specs():
    specs = default_grid_specs(100)
    assert len(specs) == 4 * (1 + 2 * 3 * 2)
    assert len({s.seed for s in specs}) == len(specs)
    assert {s.amplitude for s in specs if s.shape == "sine"} == {0.5, 1.0, 2.0}
    assert {s.frequency for s in specs if s.shape == "rectangular"} == {10.0, 100.0}


def test_with_seed_and_dict():
    s = SignalSpec("sine", 10, seed=3)
    assert s.with_seed(9).seed == 9 and s.with_seed(9).shape == "sine"
    assert SignalSpec(**s.to_dict()) == s
