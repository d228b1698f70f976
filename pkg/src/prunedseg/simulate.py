"""Seeded synthetic signals: piecewise/periodic means plus unit-variance noise.

Random numbers come from NumPy's ``Generator`` over the PCG64 bit generator
(PCG-XSL-RR 128/64), seeded directly with the integer ``seed``.  The same
``(seed, noise, n)`` therefore reproduces the same draws for a given NumPy
release.

Noise kinds (all but Cauchy have mean 0 and variance 1):

``gaussian``  N(0, 1)
``uniform``   U(-sqrt 3, sqrt 3)
``chisq``     (chi2 with 1 dof - 1) / sqrt 2
``cauchy``    standard Cauchy
``none``      zeros, for noiseless worst-case and constant-signal demos
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InputError

SHAPES = ("constant", "sine", "rectangular", "ramp")
NOISES = ("gaussian", "uniform", "chisq", "cauchy", "none")


@dataclass(frozen=True)
class SignalSpec:
    """Description of one simulated signal.

    ``frequency`` counts periods over the whole signal.  ``ramp`` gives
    ``level + amplitude * i`` (``i`` 1-based), the quadratic-loss worst case
    when noiseless.
    """

    shape: str = "constant"
    n: int = 1000
    amplitude: float = 1.0
    frequency: float = 1.0
    level: float = 0.0
    noise: str = "gaussian"
    seed: int = 0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise InputError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if self.noise not in NOISES:
            raise InputError(f"unknown noise {self.noise!r}; expected one of {NOISES}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise InputError(f"amplitude must be finite and >= 0, got {self.amplitude!r}")
        if not math.isfinite(self.level):
            raise InputError(f"level must be finite, got {self.level!r}")
        if self.shape in ("sine", "rectangular") and not (
                math.isfinite(self.frequency) and self.frequency > 0):
            raise InputError(f"frequency must be > 0 for {self.shape}, got {self.frequency!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")

    def with_seed(self, seed: int) -> "SignalSpec":
        return SignalSpec(**{**asdict(self), "seed": int(seed)})

    def to_dict(self) -> dict:
        return asdict(self)


def generate_means(spec: SignalSpec) -> np.ndarray:
    n = int(spec.n)
    if spec.shape == "constant":
        return np.full(n, float(spec.level))
    i = np.arange(n, dtype=np.float64)
    if spec.shape == "ramp":
        return spec.level + spec.amplitude * (i + 1.0)
    phase = spec.frequency * i / n
    if spec.shape == "sine":
        return spec.level + spec.amplitude * np.sin(2.0 * np.pi * phase)
    first_half = np.mod(phase, 1.0) < 0.5
    return np.where(first_half, spec.level + spec.amplitude, spec.level - spec.amplitude)


def noise_draws(noise: str, n: int, seed: int) -> np.ndarray:
    if noise not in NOISES:
        raise InputError(f"unknown noise {noise!r}; expected one of {NOISES}")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    if noise == "gaussian":
        return rng.standard_normal(n)
    if noise == "uniform":
        r = math.sqrt(3.0)
        return rng.uniform(-r, r, n)
    if noise == "chisq":
        return (rng.chisquare(1.0, n) - 1.0) / math.sqrt(2.0)
    if noise == "cauchy":
        return rng.standard_cauchy(n)
    return np.zeros(n)


def add_noise(means, noise: str, seed: int) -> np.ndarray:
    means = np.asarray(means, dtype=np.float64)
    if not np.all(np.isfinite(means)):
        raise InputError("means must be finite")
    return means + noise_draws(noise, means.size, seed)


def simulate(spec: SignalSpec) -> np.ndarray:
    return add_noise(generate_means(spec), spec.noise, spec.seed)


def default_grid_specs(n: int, seed: int = 0) -> list[SignalSpec]:
    """Shapes x noises over amplitudes {0.5, 1, 2} and {10, 100} periods."""
    specs = []
    s = seed
    for noise in ("gaussian", "uniform", "chisq", "cauchy"):
        specs.append(SignalSpec("constant", n, 0.0, 1.0, 0.0, noise, s))
        s += 1
        for shape in ("sine", "rectangular"):
            for amp in (0.5, 1.0, 2.0):
                for freq in (10.0, 100.0):
                    specs.append(SignalSpec(shape, n, amp, freq, 0.0, noise, s))
                    s += 1
    return specs
