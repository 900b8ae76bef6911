"""Monic complex polynomials and an Aberth-Ehrlich root oracle.

A :class:`MonicPoly` of degree n stores ``[a1, ..., an]`` for
``z**n + a1 z**(n-1) + ... + an``; the leading 1 is implicit. Sign conventions
of particular families (the alternating signs of the associated polynomial of a
point) are applied by the callers that build them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from numba import njit

from .errors import InputError, OracleFailure
from .numerics import as_complex, as_complex_tuple

MAX_DEGREE = 16
EPS = float(np.finfo(np.float64).eps)
DEFAULT_MAX_ITERS = 500
ROOT_SEED = 20240601


@dataclass(frozen=True)
class MonicPoly:
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        coeffs = as_complex_tuple(self.coeffs, "coeffs")
        if not coeffs:
            raise InputError("MonicPoly needs degree >= 1")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "MonicPoly":
        e = elementary_symmetric(roots)
        return cls(tuple((-1) ** (j + 1) * c for j, c in enumerate(e)))

    def full_coeffs(self) -> np.ndarray:
        """All n+1 coefficients, highest degree first, leading 1 included."""
        return np.array((1.0,) + self.coeffs, dtype=np.complex128)

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)


@dataclass(frozen=True)
class RootSet:
    """Roots with a backward-error certificate.

    ``residual`` is the largest normwise backward error
    ``|p(r)| / sum_j |a_j| |r|**(n-j)`` over the returned roots (``a_0 = 1``).
    """

    roots: tuple[complex, ...]
    residual: float
    converged: bool
    iterations: int = 0


def elementary_symmetric(points: Sequence[complex]) -> list[complex]:
    """Return ``[e1, ..., en]`` of ``points``.

    Multiplies out ``(z - z1)...(z - zn)`` one factor at a time; ``e_j`` is
    ``(-1)**j`` times the coefficient of ``z**(n-j)``.
    """
    zs = as_complex_tuple(points, "points")
    if not zs:
        raise InputError("elementary_symmetric needs at least one point")
    if len(zs) > MAX_DEGREE:
        raise InputError(f"at most {MAX_DEGREE} points supported, got {len(zs)}")
    e = [1 + 0j] + [0j] * len(zs)
    for k, z in enumerate(zs, start=1):
        for j in range(k, 0, -1):
            e[j] = e[j] + z * e[j - 1]
    return e[1:]


def evaluate(poly: MonicPoly, z: complex) -> complex:
    z = as_complex(z, "z")
    acc = 1 + 0j
    for c in poly.coeffs:
        acc = acc * z + c
    return acc


@njit(cache=True)
def _eval_with_bound(c, z):
    # Horner for p and p', plus sum |c_j| |z|^(n-j) for backward errors
    p = c[0]
    dp = 0j
    az = abs(z)
    mag = abs(c[0])
    for j in range(1, c.size):
        dp = dp * z + p
        p = p * z + c[j]
        mag = mag * az + abs(c[j])
    return p, dp, mag


@njit(cache=True)
def _aberth(c, roots, max_iters):
    n = roots.size
    eps = 2.220446049250313e-16
    stop = 4.0 * n * eps
    active = np.ones(n, dtype=np.bool_)
    it = 0
    while it < max_iters:
        it += 1
        moved = False
        for i in range(n):
            if not active[i]:
                continue
            z = roots[i]
            p, dp, mag = _eval_with_bound(c, z)
            if abs(p) <= stop * mag:
                active[i] = False
                continue
            s = 0j
            for j in range(n):
                if j != i:
                    d = z - roots[j]
                    if d != 0:
                        s += 1.0 / d
            if dp == 0:
                w = 1e-3 * (1.0 + abs(z)) * np.exp(1j * (0.7 + i))
            else:
                ratio = p / dp
                den = 1.0 - ratio * s
                if den == 0:
                    w = ratio
                else:
                    w = ratio / den
            roots[i] = z - w
            moved = True
            if abs(w) <= eps * abs(roots[i]):
                active[i] = False
        if not moved:
            break
    return it


@njit(cache=True)
def _collapse_clusters(c, roots):
    """Replace each cluster of inclusion discs by its centroid.

    Disc i is centred at roots[i] with radius n |W_i|, W_i the Weierstrass
    correction with |p(r_i)| inflated by its Horner rounding bound. Each
    connected component of the union holds as many zeros as centres, and a
    component's centroid is well conditioned even when its members are not.
    """
    n = roots.size
    eps = 2.220446049250313e-16
    rad = np.empty(n)
    for i in range(n):
        p, dp, mag = _eval_with_bound(c, roots[i])
        prod = 1.0 + 0j
        for j in range(n):
            if j != i:
                prod *= roots[i] - roots[j]
        num = abs(p) + 4.0 * n * eps * mag
        if prod == 0:
            rad[i] = np.inf
        else:
            rad[i] = n * num / abs(prod)
    label = np.arange(n)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                if label[i] != label[j] and abs(roots[i] - roots[j]) <= rad[i] + rad[j]:
                    lo = min(label[i], label[j])
                    hi = max(label[i], label[j])
                    for k in range(n):
                        if label[k] == hi:
                            label[k] = lo
                    changed = True
    out = roots.copy()
    for g in range(n):
        cnt = 0
        acc = 0j
        for k in range(n):
            if label[k] == g:
                cnt += 1
                acc += roots[k]
        if cnt > 1:
            centre = _refine_cluster_centre(c, acc / cnt, cnt)
            for k in range(n):
                if label[k] == g:
                    out[k] = centre
    return out


@njit(cache=True)
def _taylor_pair(c, z, m):
    """Taylor coefficients m-1 and m of p about z (p^(j)(z) / j!)."""
    t = c.copy()
    n = c.size - 1
    # repeated synthetic division; after pass j, t[n - j] holds coefficient j
    for j in range(m + 1):
        for i in range(1, n + 1 - j):
            t[i] += z * t[i - 1]
    return t[n - (m - 1)], t[n - m]


@njit(cache=True)
def _refine_cluster_centre(c, centre, k):
    # a k-fold cluster is a simple zero of p^(k-1); Newton on that derivative
    spread = 0.0
    z = centre
    for _ in range(8):
        lo, hi = _taylor_pair(c, z, k)
        if hi == 0:
            break
        step = lo / (k * hi)
        z = z - step
        if abs(step) <= 2.220446049250313e-16 * (1.0 + abs(z)):
            break
        spread += abs(step)
    if spread > 1e-3 * (1.0 + abs(centre)):
        return centre
    return z


@njit(cache=True)
def _max_backward_error(c, roots):
    worst = 0.0
    for i in range(roots.size):
        p, dp, mag = _eval_with_bound(c, roots[i])
        if mag > 0:
            e = abs(p) / mag
            if e > worst:
                worst = e
    return worst


_ANGLE_JITTER = np.random.default_rng(ROOT_SEED).random((MAX_DEGREE + 1, MAX_DEGREE))


def _initial_guesses(c: np.ndarray, radius_scale: float) -> np.ndarray:
    n = c.size - 1
    k = np.arange(1, n + 1)
    tail = np.abs(c[1:])
    nz = tail > 0
    # max_k |a_k|^(1/k) is within a factor 2 of the largest root modulus
    radius = float(np.max(tail[nz] ** (1.0 / k[nz]))) if nz.any() else 1.0
    angles = 2 * np.pi * k / n + 0.4 + 0.05 * _ANGLE_JITTER[n, :n]
    return radius_scale * radius * np.exp(1j * angles)


def find_roots(poly: MonicPoly, residual_bound: float = 1e-12,
               max_iters: int = DEFAULT_MAX_ITERS) -> RootSet:
    """All roots of ``poly`` by Aberth-Ehrlich iteration.

    Starts from a deterministically perturbed circle centred at the origin;
    one retry from a different radius is made if the first run does not meet
    ``residual_bound``. Exact zero roots (trailing zero coefficients) are split
    off first. Clusters are reported at their centroid. Non-convergence is not
    an error: check ``converged``.
    """
    if poly.degree > MAX_DEGREE:
        raise InputError(f"degree {poly.degree} exceeds {MAX_DEGREE}")
    if not (residual_bound > 0):
        raise InputError("residual_bound must be positive")
    coeffs = list(poly.coeffs)
    zeros = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    if not coeffs:
        return RootSet(roots=(0j,) * zeros, residual=0.0, converged=True)
    c = np.array([1.0 + 0j] + coeffs, dtype=np.complex128)
    best = None
    total_iters = 0
    for scale in (1.0, 0.6):
        roots = _initial_guesses(c, scale)
        total_iters += _aberth(c, roots, max_iters)
        roots = _collapse_clusters(c, roots)
        res = _max_backward_error(c, roots)
        if best is None or res < best[1]:
            best = (roots, res)
        if res <= residual_bound:
            break
    roots, res = best
    found = tuple(complex(r) for r in roots) + (0j,) * zeros
    return RootSet(roots=found, residual=float(res), converged=bool(res <= residual_bound),
                   iterations=total_iters)


def _exact_value(coeffs: Sequence[complex], z: complex) -> complex:
    # Horner in rational arithmetic, rounded once at the end
    zr, zi = Fraction(z.real), Fraction(z.imag)
    ar, ai = Fraction(1), Fraction(0)
    for c in coeffs:
        ar, ai = ar * zr - ai * zi + Fraction(c.real), ar * zi + ai * zr + Fraction(c.imag)
    return complex(float(ar), float(ai))


def polish_roots(poly: MonicPoly, roots: Sequence[complex], indices: Sequence[int],
                 steps: int = 4) -> tuple[complex, ...]:
    """Newton steps on the selected roots with the residual evaluated exactly.

    Removes the forward error that floating-point evaluation leaves on roots
    of close pairs. A step that would leave the root's half-separation disc
    is rejected, so a root never migrates onto a neighbour.
    """
    out = list(roots)
    coeffs = poly.coeffs
    deriv = np.polyder(poly.full_coeffs())
    for i in indices:
        r0 = out[i]
        reach = 0.5 * nearest_distance(r0, [w for k, w in enumerate(out) if k != i])
        r = r0
        for _ in range(steps):
            d = complex(np.polyval(deriv, r))
            if d == 0:
                break
            step = _exact_value(coeffs, r) / d
            r -= step
            if abs(step) <= EPS * abs(r):
                break
        if math.isfinite(abs(r)) and abs(r - r0) < reach:
            out[i] = r
    return tuple(out)


def max_root_modulus(poly: MonicPoly, residual_bound: float = 1e-12) -> float:
    rs = find_roots(poly, residual_bound)
    if not rs.converged:
        raise OracleFailure(f"root finder residual {rs.residual:.3e} exceeds {residual_bound:.1e}")
    return max(abs(r) for r in rs.roots)


def count_inside(roots: Sequence[complex], radius: float) -> int:
    """Number of roots with modulus strictly below ``radius``."""
    return sum(1 for r in roots if abs(r) < radius)


def nearest_distance(z: complex, others: Sequence[complex]) -> float:
    return min((abs(z - w) for w in others), default=math.inf)
