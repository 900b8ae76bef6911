"""Membership in the symmetrized polydisc and its distinguished boundary.

A point ``(s1, ..., s_{n-1}, p)`` of C^n is the image of ``(z1, ..., zn)`` under
the symmetrization map (``s_j = e_j(z)``, ``p = e_n(z)``). It lies in the open
symmetrized polydisc G_n when every preimage coordinate is in the open unit
disc, in the closed one Gamma_n when they are in the closed disc, and on the
distinguished boundary when they all have modulus one. The preimage multiset is
the root set of the associated polynomial
``z**n - s1 z**(n-1) + ... + (-1)**n p``.

Three independent deciders are provided:

* the beta reduction, which maps a point with ``|p| < 1`` to the unique
  ``beta`` in C^(n-1) with ``s_j = beta_j + conj(beta_{n-j}) p`` and preserves
  membership, applied recursively down to the disc;
* positive definiteness of the Schur-Cohn matrix of the associated polynomial;
* the root oracle, which finds the preimage directly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import HypothesisViolation, InputError, OracleFailure, ReductionUndefinedError
from .numerics import Definiteness, HermitianMatrix, as_complex, as_complex_tuple, binomial, definiteness
from .polynomial import MAX_DEGREE, MonicPoly, elementary_symmetric, find_roots, polish_roots
from .schur import schur_cohn_matrix


class Region(enum.IntEnum):
    """Region codes; the integer values are the grid file codes."""

    OUTSIDE = 0
    INTERIOR = 1
    BOUNDARY = 2
    DISTINGUISHED = 3
    BAND = 4

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "Region":
        for r, name in _LABELS.items():
            if name == label:
                return r
        raise InputError(f"unknown region label {label!r}")

    @property
    def in_gamma(self) -> bool:
        return self in (Region.INTERIOR, Region.BOUNDARY, Region.DISTINGUISHED)


_LABELS = {
    Region.OUTSIDE: "Outside",
    Region.INTERIOR: "InteriorGn",
    Region.BOUNDARY: "BoundaryGamma",
    Region.DISTINGUISHED: "DistinguishedBoundary",
    Region.BAND: "ToleranceBand",
}


@dataclass(frozen=True)
class ToleranceConfig:
    """Every numerical threshold used by a membership decision.

    ``consensus_band`` is the half-width, in root modulus, of the zone around
    the unit circle where disagreement between methods is expected rounding
    rather than an anomaly.
    """

    boundary_band: float = 1e-9
    matrix_tol: float = 1e-10
    root_residual: float = 1e-12
    p_unimodular_band: float = 1e-9
    consensus_band: float = 1e-6

    def __post_init__(self):
        for name in ("boundary_band", "matrix_tol", "root_residual", "p_unimodular_band", "consensus_band"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InputError(f"{name} must be a positive finite real, got {v!r}")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class SymPoint:
    """``(s1, ..., s_{n-1}, p)``; for n = 1 the point is just ``p``."""

    s: tuple[complex, ...]
    p: complex

    def __post_init__(self):
        object.__setattr__(self, "s", as_complex_tuple(self.s, "s"))
        object.__setattr__(self, "p", as_complex(self.p, "p"))
        if self.n > MAX_DEGREE:
            raise InputError(f"dimension {self.n} exceeds {MAX_DEGREE}")

    @property
    def n(self) -> int:
        return len(self.s) + 1

    @property
    def coords(self) -> tuple[complex, ...]:
        return self.s + (self.p,)

    @classmethod
    def from_coords(cls, coords: Sequence[complex]) -> "SymPoint":
        coords = as_complex_tuple(coords, "coords")
        if not coords:
            raise InputError("a point needs at least one coordinate")
        return cls(coords[:-1], coords[-1])


@dataclass(frozen=True)
class RegionVerdict:
    region: Region
    method: str
    certificate: dict = field(default_factory=dict, compare=False)
    margin: float | None = None


def symmetrize(z: Sequence[complex]) -> SymPoint:
    return SymPoint.from_coords(elementary_symmetric(z))


def associated_polynomial(pt: SymPoint) -> MonicPoly:
    """``z**n - s1 z**(n-1) + ... + (-1)**n p``, whose roots are the preimage of ``pt``."""
    return MonicPoly(tuple((-1) ** (j + 1) * c for j, c in enumerate(pt.coords)))


def beta_reduce(pt: SymPoint, tol: ToleranceConfig = DEFAULT_TOL) -> SymPoint:
    """Solve ``s_j = beta_j + conj(beta_{n-j}) p`` for ``beta`` in C^(n-1).

    Eliminating within each pair ``(j, n-j)`` gives
    ``beta_j = (s_j - conj(s_{n-j}) p) / (1 - |p|**2)``, which also covers the
    self-paired middle index when n is even.
    """
    if pt.n < 2:
        raise InputError("beta reduction needs n >= 2")
    p = pt.p
    if abs(p) >= 1 - tol.p_unimodular_band:
        raise ReductionUndefinedError(f"|p| = {abs(p)!r} is within {tol.p_unimodular_band} of 1")
    s = pt.s
    m = len(s)
    denom = 1 - (p.real * p.real + p.imag * p.imag)
    beta = [(s[j] - s[m - 1 - j].conjugate() * p) / denom for j in range(m)]
    return SymPoint.from_coords(beta)


def reconstruct(beta: SymPoint, p: complex) -> SymPoint:
    """Inverse of :func:`beta_reduce`: ``s_j = beta_j + conj(beta_{n-j}) p``."""
    p = as_complex(p, "p")
    b = beta.coords
    m = len(b)
    return SymPoint(tuple(b[j] + b[m - 1 - j].conjugate() * p for j in range(m)), p)


def reduction_residual(pt: SymPoint, beta: SymPoint) -> float:
    """Largest ``|s_j - (beta_j + conj(beta_{n-j}) p)|`` relative to ``max(1, |s|)``."""
    back = reconstruct(beta, pt.p)
    scale = max([1.0] + [abs(c) for c in pt.s])
    return max((abs(a - b) for a, b in zip(pt.s, back.s)), default=0.0) / scale


# roots this close to the circle but outside the band get exact-residual polishing
POLISH_WINDOW = 1e-6


def _oracle_roots(pt: SymPoint, tol: ToleranceConfig) -> tuple[tuple[complex, ...], float]:
    poly = associated_polynomial(pt)
    rs = find_roots(poly, tol.root_residual)
    if not rs.converged:
        raise OracleFailure(f"roots not certified: backward error {rs.residual:.3e}")
    dev = [abs(abs(r) - 1) for r in rs.roots]
    if not any(tol.boundary_band < d <= POLISH_WINDOW for d in dev):
        return rs.roots, rs.residual
    # the partner of a split pair may sit inside the band; polish it too
    near = [i for i, d in enumerate(dev) if d <= POLISH_WINDOW]
    roots = polish_roots(poly, rs.roots, near)
    return roots, rs.residual


def _torus_backward_error(pt: SymPoint, roots: Sequence[complex]) -> float:
    """Relative coordinate distance from ``pt`` to the image of its roots pushed onto the circle.

    Root moduli of a close pair are ill conditioned, but this distance is not,
    so it decides the distinguished boundary for points whose roots sit just
    outside the modulus band.
    """
    if any(r == 0 for r in roots):
        return math.inf
    image = elementary_symmetric([r / abs(r) for r in roots])
    target = pt.coords
    scale = max(1.0, max(abs(c) for c in target))
    return max(abs(a - b) for a, b in zip(image, target)) / scale


def _near_torus(pt: SymPoint, roots: Sequence[complex], tol: ToleranceConfig) -> bool:
    return (all(abs(abs(r) - 1) <= POLISH_WINDOW for r in roots)
            and _torus_backward_error(pt, roots) <= tol.boundary_band)


def classify_oracle(pt: SymPoint, tol: ToleranceConfig = DEFAULT_TOL) -> RegionVerdict:
    """Locate the preimage roots directly and classify by their moduli."""
    roots, residual = _oracle_roots(pt, tol)
    moduli = [abs(r) for r in roots]
    m, lo = max(moduli), min(moduli)
    band = tol.boundary_band
    if m < 1 - band:
        region = Region.INTERIOR
    elif m <= 1 + band:
        region = Region.DISTINGUISHED if lo >= 1 - band else Region.BOUNDARY
    elif _near_torus(pt, roots, tol):
        region = Region.DISTINGUISHED
    else:
        region = Region.OUTSIDE
    cert = {"max_modulus": m, "min_modulus": lo, "roots": list(roots), "residual": residual}
    return RegionVerdict(region, "oracle", cert, margin=m - 1)


def in_gamma_recursive(pt: SymPoint, tol: ToleranceConfig = DEFAULT_TOL) -> RegionVerdict:
    """Closed-polydisc membership by repeated beta reduction.

    A level whose ``|p|`` is within ``p_unimodular_band`` of 1 is handed to
    the root oracle. There the member points are exactly those with every
    root on the unit circle, so the oracle decides exactly.
    """
    chain = [pt.coords]
    cur = pt
    depth = 0
    while True:
        a = abs(cur.p)
        if cur.n == 1:
            if a < 1 - tol.boundary_band:
                region = Region.INTERIOR
            elif a <= 1 + tol.boundary_band:
                region = Region.DISTINGUISHED if depth == 0 else Region.BOUNDARY
            else:
                region = Region.OUTSIDE
            return RegionVerdict(region, "gamma_recursive",
                                 {"chain": chain, "depth": depth}, margin=a - 1)
        if a > 1 + tol.p_unimodular_band:
            return RegionVerdict(Region.OUTSIDE, "gamma_recursive",
                                 {"chain": chain, "depth": depth}, margin=a - 1)
        if a >= 1 - tol.p_unimodular_band:
            sub = classify_oracle(cur, tol)
            region = sub.region
            if depth > 0 and region is Region.DISTINGUISHED:
                # circle zeros of a reduced level are circle zeros of the original
                region = Region.BOUNDARY
            cert = {"chain": chain, "depth": depth, "delegated": "oracle",
                    "max_modulus": sub.certificate["max_modulus"]}
            return RegionVerdict(region, "gamma_recursive", cert, margin=sub.margin)
        cur = beta_reduce(cur, tol)
        chain.append(cur.coords)
        depth += 1


def in_gn_recursive(pt: SymPoint, tol: ToleranceConfig = DEFAULT_TOL) -> RegionVerdict:
    """Open-polydisc membership by beta reduction with strict inequalities."""
    chain = [pt.coords]
    cur = pt
    depth = 0
    while True:
        a = abs(cur.p)
        band = tol.boundary_band if cur.n == 1 else tol.p_unimodular_band
        cert = {"chain": chain, "depth": depth}
        if a > 1 + band:
            return RegionVerdict(Region.OUTSIDE, "gn_recursive", cert, margin=a - 1)
        if a >= 1 - band:
            return RegionVerdict(Region.BAND, "gn_recursive", cert, margin=a - 1)
        if cur.n == 1:
            return RegionVerdict(Region.INTERIOR, "gn_recursive", cert, margin=a - 1)
        cur = beta_reduce(cur, tol)
        chain.append(cur.coords)
        depth += 1


def gn_matrix(pt: SymPoint) -> HermitianMatrix:
    """Schur-Cohn matrix of the associated polynomial of ``pt`` (n >= 2).

    Corners: ``(1,1) = 1 - |p|**2``, ``(2,2) = 1 + |s1|**2 - |s_{n-1}|**2 - |p|**2``,
    ``(1,n) = (-1)**(n-1) (conj(s_{n-1}) - s1 conj(p))``.
    """
    if pt.n < 2:
        raise InputError("gn_matrix needs n >= 2")
    return schur_cohn_matrix(associated_polynomial(pt))


def in_gn_schur(pt: SymPoint, tol: ToleranceConfig = DEFAULT_TOL) -> RegionVerdict | None:
    """Open-polydisc membership from the Schur-Cohn matrix; ``None`` unless ``|p| < 1 - band``."""
    if abs(pt.p) >= 1 - tol.p_unimodular_band:
        return None
    d = definiteness(schur_cohn_matrix(associated_polynomial(pt)), tol.matrix_tol)
    region = {
        Definiteness.POSITIVE_DEFINITE: Region.INTERIOR,
        Definiteness.SEMIDEFINITE_BAND: Region.BAND,
        # an indefinite form excludes the closed polydisc as well
        Definiteness.INDEFINITE: Region.OUTSIDE,
    }[d.kind]
    return RegionVerdict(region, "gn_schur", {"min_pivot_or_eig": d.min_pivot_or_eig},
                         margin=d.min_pivot_or_eig)


@dataclass(frozen=True)
class BoundaryVerdict:
    on_boundary: bool
    max_deviation: float
    certificate: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.on_boundary


def solve_beta_lstsq(pt: SymPoint) -> tuple[SymPoint, float]:
    """Least-squares ``beta`` for ``s_j = beta_j + conj(beta_{n-j}) p``; works at ``|p| = 1``.

    The system is real-linear in ``(Re beta, Im beta)``. Returns the minimum-norm
    solution and its reconstruction residual.
    """
    if pt.n < 2:
        raise InputError("beta needs n >= 2")
    m = pt.n - 1
    pr, pi = pt.p.real, pt.p.imag
    a = np.zeros((2 * m, 2 * m))
    rhs = np.empty(2 * m)
    for j in range(m):
        k = m - 1 - j
        a[j, j] += 1.0
        a[j, k] += pr
        a[j, m + k] += pi
        a[m + j, m + j] += 1.0
        a[m + j, k] += pi
        a[m + j, m + k] -= pr
        rhs[j] = pt.s[j].real
        rhs[m + j] = pt.s[j].imag
    x = np.linalg.lstsq(a, rhs, rcond=None)[0]
    beta = SymPoint.from_coords([complex(x[j], x[m + j]) for j in range(m)])
    return beta, reduction_residual(pt, beta)


def on_distinguished_boundary(pt: SymPoint, tol: ToleranceConfig = DEFAULT_TOL) -> BoundaryVerdict:
    """True when every root of the associated polynomial has modulus 1 within ``boundary_band``.

    Roots just outside that band (a close pair on the circle splits off it
    under coefficient rounding) are accepted when ``pt`` is within
    ``boundary_band``, relatively, of the image of the roots pushed onto the
    circle.

    When ``|p|`` is within ``p_unimodular_band`` of 1 the certificate also
    carries a solving ``beta`` two ways: least squares on the linear system,
    and the constructive one obtained by dropping a root (for unimodular roots
    ``e_j`` of the remaining roots solves the system).
    """
    roots, _ = _oracle_roots(pt, tol)
    dev = max(abs(abs(r) - 1) for r in roots)
    cert: dict = {"roots": list(roots), "max_deviation": dev}
    if pt.n >= 2 and abs(abs(pt.p) - 1) <= tol.p_unimodular_band:
        beta, res = solve_beta_lstsq(pt)
        cert["beta_lstsq"] = list(beta.coords)
        cert["beta_lstsq_residual"] = res
        dropped = symmetrize(roots[:-1])
        cert["beta_from_roots"] = list(dropped.coords)
        cert["beta_from_roots_residual"] = reduction_residual(pt, dropped)
    on = dev <= tol.boundary_band
    if not on and dev <= POLISH_WINDOW:
        cert["torus_backward_error"] = _torus_backward_error(pt, roots)
        on = cert["torus_backward_error"] <= tol.boundary_band
    return BoundaryVerdict(on, dev, cert)


def necessary_bounds(pt: SymPoint) -> bool:
    """Fast rejection for G_n: ``|s_j| < C(n, j)`` for all j and ``|p| < 1``."""
    n = pt.n
    return all(abs(c) < binomial(n, j) for j, c in enumerate(pt.s, start=1)) and abs(pt.p) < 1


def _first_bad_pair(z: Sequence[complex]) -> tuple[int, int, str] | None:
    for a in range(len(z)):
        for b in range(a + 1, len(z)):
            if not abs(z[a] + z[b]) < 2:
                return a, b, "sum"
            if not abs(z[a] * z[b]) < 1:
                return a, b, "product"
    return None


def pairwise_bounds(z: Sequence[complex]) -> bool:
    """``|z_a + z_b| < 2`` and ``|z_a z_b| < 1`` for every pair a < b."""
    return _first_bad_pair(as_complex_tuple(z, "z")) is None


@dataclass(frozen=True)
class KernelVerdict:
    inside: bool
    sign: int
    log_abs_product: float
    band: bool = False

    def __bool__(self) -> bool:
        return self.inside


def kernel_criterion(z: Sequence[complex], tol: ToleranceConfig = DEFAULT_TOL) -> KernelVerdict:
    """Decide G_n membership of ``symmetrize(z)`` from the sign of prod(1 - |z_j|**2).

    Only valid under the binomial bounds on the image and the pairwise bounds
    on ``z``; a violated bound raises :class:`HypothesisViolation`. The product
    is carried as a sign and a log-magnitude. A factor within
    ``2 * boundary_band`` of zero makes the product zero (band verdict).
    """
    z = as_complex_tuple(z, "z")
    if not necessary_bounds(symmetrize(z)):
        raise HypothesisViolation("binomial bounds |w_j| < C(n, j) fail for symmetrize(z)", "binomial")
    bad = _first_bad_pair(z)
    if bad is not None:
        a, b, which = bad
        raise HypothesisViolation(f"pairwise {which} bound fails for z[{a}], z[{b}]", "pairwise")
    sign = 1
    log_mag = 0.0
    for zj in z:
        f = 1.0 - (zj.real * zj.real + zj.imag * zj.imag)
        if abs(f) <= 2 * tol.boundary_band:
            return KernelVerdict(False, 0, -math.inf, band=True)
        if f < 0:
            sign = -sign
        log_mag += math.log(abs(f))
    return KernelVerdict(sign > 0, sign, log_mag)
