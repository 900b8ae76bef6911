"""Seeded point corpora.

All draws use NumPy's ``PCG64`` bit generator (``numpy.random.default_rng``),
so a seed reproduces a corpus exactly on any platform NumPy supports.
"""
from __future__ import annotations

import numpy as np

from .errors import InputError
from .io import PointRecord
from .numerics import binomial
from .polydisc import SymPoint, symmetrize

KINDS = ("interior", "torus", "exterior", "uniform-box")


def uniform_disc(rng: np.random.Generator, size, radius: float = 1.0) -> np.ndarray:
    """Uniform draws from the open disc of the given radius."""
    r = radius * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


def uniform_circle(rng: np.random.Generator, size) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(size))


def exterior_preimage(rng: np.random.Generator, n: int) -> np.ndarray:
    """n points of the open disc, one of them replaced by modulus in (1, 2]."""
    z = uniform_disc(rng, n)
    j = rng.integers(n)
    z[j] = (2.0 - rng.random()) * np.exp(2j * np.pi * rng.random())
    return z


def preimage(kind: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "interior":
        return uniform_disc(rng, n)
    if kind == "torus":
        return uniform_circle(rng, n)
    if kind == "exterior":
        return exterior_preimage(rng, n)
    raise InputError(f"kind {kind!r} has no preimage draw")


def uniform_box_point(rng: np.random.Generator, n: int) -> SymPoint:
    """Real and imaginary parts of coordinate j uniform in [-C(n, j), C(n, j)]."""
    bounds = np.array([binomial(n, j) for j in range(1, n + 1)], dtype=float)
    re = rng.uniform(-bounds, bounds)
    im = rng.uniform(-bounds, bounds)
    return SymPoint.from_coords(re + 1j * im)


def sample_points(kind: str, n: int, count: int, seed: int = 42) -> list[PointRecord]:
    if kind not in KINDS:
        raise InputError(f"unknown sample kind {kind!r}; expected one of {', '.join(KINDS)}")
    if count < 1:
        raise InputError("count must be >= 1")
    if not 1 <= n <= 16:
        raise InputError("n must be in 1..16")
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        if kind == "uniform-box":
            pt = uniform_box_point(rng, n)
        else:
            pt = symmetrize(preimage(kind, n, rng))
        out.append(PointRecord.from_point(f"{kind}-{n}-{i}", pt))
    return out
