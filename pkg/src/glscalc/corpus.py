"""Seeded builders for the test corpus of grid and sequence functions."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.stats import norm

from .errors import ConfigError
from .oracle import GridFunction, SequenceFunction

TWO_PI = 2.0 * math.pi


def gaussian_profile(
    sigma: float = 1.0,
    box: tuple[float, float] = (-8.0, 8.0),
    n: int = 1024,
    measure: str = "lebesgue",
) -> GridFunction:
    """exp(-x**2 / (2 sigma**2)) sampled at cell midpoints."""
    g = GridFunction((box,), (n,), np.zeros(n), False, measure)
    x = g.centers()
    return GridFunction((box,), (n,), np.exp(-(x ** 2) / (2.0 * sigma ** 2)),
                        False, measure)


def gaussian_sample_function(n: int = 4096) -> GridFunction:
    """A function distributed as a standard normal under uniform probability.

    Values are normal quantiles at midpoint ranks, so the empirical tail
    of the grid function reproduces the normal tail.
    """
    u = (np.arange(n) + 0.5) / n
    return GridFunction(((0.0, 1.0),), (n,), norm.ppf(u), False, "uniprob")


def subgaussian_sample_function(n: int = 4096) -> GridFunction:
    """A function whose empirical tail is the Gaussian-shape exp(-y**2 / 2).

    Values are quantiles of the survival law T(y) = exp(-y**2 / 2) at
    midpoint ranks under uniform probability, so the two-sided empirical
    tail discretizes exp(-y**2 / 2) without the polynomial prefactor a
    normal density would introduce.
    """
    u = (np.arange(n) + 0.5) / n
    return GridFunction(((0.0, 1.0),), (n,), np.sqrt(2.0 * np.log(1.0 / u)),
                        False, "uniprob")


def indicator(
    fraction: float,
    n: int = 1024,
    box: tuple[float, float] = (0.0, 1.0),
    measure: str = "uniprob",
) -> GridFunction:
    """Indicator of the first `fraction` of cells."""
    k = int(round(fraction * n))
    vals = np.zeros(n)
    vals[:k] = 1.0
    return GridFunction((box,), (n,), vals, False, measure)


def power_profile(
    a: float,
    box: tuple[float, float] = (-1.0, 1.0),
    n: int = 1024,
    measure: str = "lebesgue",
) -> GridFunction:
    """|x|**a on the box; a = 2 gives the parabola used in sharpness checks."""
    g = GridFunction((box,), (n,), np.zeros(n), False, measure)
    x = g.centers()
    return GridFunction((box,), (n,), np.abs(x) ** a, False, measure)


def trig_polynomial(
    seed: int,
    degree: int = 4,
    n: int = 256,
    d: int = 1,
    nonnegative: bool = True,
) -> GridFunction:
    """A random trigonometric polynomial on the torus [0, 2 pi]**d."""
    rng = np.random.default_rng(seed)
    axes = [np.linspace(0.0, TWO_PI, n, endpoint=False) + TWO_PI / (2 * n)
            for _ in range(d)]
    vals = np.zeros((n,) * d)
    for _ in range(degree):
        k = rng.integers(1, degree + 1, size=d)
        a = rng.normal()
        b = rng.normal()
        phase = sum(ki * np.meshgrid(*axes, indexing="ij")[i]
                    for i, ki in enumerate(k))
        vals = vals + a * np.cos(phase) + b * np.sin(phase)
    vals = vals + rng.normal()
    if nonnegative:
        vals = vals - vals.min() + 0.1
    return GridFunction(((0.0, TWO_PI),) * d, (n,) * d, vals, True, "lebesgue")


def random_positive_grid(
    seed: int,
    n: int = 256,
    box: tuple[float, float] = (0.0, 1.0),
    measure: str = "uniprob",
) -> GridFunction:
    """Smooth positive random function: exponential of a low-pass field."""
    rng = np.random.default_rng(seed)
    freqs = rng.normal(size=6)
    x = np.linspace(0.0, 1.0, n, endpoint=False) + 0.5 / n
    field = sum(c * np.sin((i + 1) * math.pi * x) for i, c in enumerate(freqs))
    return GridFunction((box,), (n,), np.exp(field / 2.0), False, measure)


def random_sequence(
    seed: int,
    n_max: int = 256,
    support_size: int = 24,
    rationals: bool = False,
) -> SequenceFunction:
    """Random nonnegative finitely supported sequence.

    With ``rationals`` the indices are drawn from {n/k : n, k <= n_max},
    matching the index set a multiplicative Toeplitz symbol lives on.
    """
    rng = np.random.default_rng(seed)
    support: dict[Fraction, float] = {}
    while len(support) < support_size:
        if rationals:
            num = int(rng.integers(1, n_max + 1))
            den = int(rng.integers(1, n_max + 1))
            idx = Fraction(num, den)
        else:
            idx = Fraction(int(rng.integers(1, n_max + 1)))
        support[idx] = float(rng.uniform(0.1, 1.0))
    return SequenceFunction(support)


def build_input(spec: dict, seed: int = 1) -> GridFunction:
    """Build a grid function from a config input spec."""
    kind = spec.get("kind")
    n = int(spec.get("n", 256))
    if kind == "gaussian":
        return gaussian_profile(
            float(spec.get("sigma", 1.0)),
            (float(spec.get("lo", -8.0)), float(spec.get("hi", 8.0))),
            n,
            spec.get("measure", "lebesgue"),
        )
    if kind == "gaussian_sample":
        return gaussian_sample_function(n)
    if kind == "indicator":
        return indicator(float(spec.get("fraction", 0.5)), n,
                         measure=spec.get("measure", "uniprob"))
    if kind == "power":
        return power_profile(
            float(spec.get("a", 2.0)),
            (float(spec.get("lo", -1.0)), float(spec.get("hi", 1.0))),
            n,
            spec.get("measure", "lebesgue"),
        )
    if kind == "trig":
        return trig_polynomial(int(spec.get("seed", seed)),
                               int(spec.get("degree", 4)), n)
    if kind == "random":
        return random_positive_grid(int(spec.get("seed", seed)), n,
                                    measure=spec.get("measure", "uniprob"))
    if kind == "file":
        from .formats import parse_grid

        with open(spec["path"], encoding="utf-8") as fh:
            return parse_grid(fh.read())
    raise ConfigError(f"unknown input kind {kind!r}")
