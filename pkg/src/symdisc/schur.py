"""Schur-Cohn Hermitian matrices and the zero-location test built on them.

For a polynomial with coefficients ``a0 = 1, a1, ..., an`` (highest degree
first) the quadratic form

    H(x) = sum_j |conj(a0) x_j + ... + conj(a_{n-j}) x_n|**2
         - sum_j |a_n x_j + a_{n-1} x_{j+1} + ... + a_j x_n|**2

is positive definite exactly when every zero lies in the open unit disc. Its
matrix is ``U^H U - L^H L`` with upper-triangular Toeplitz factors ``U`` (first
row ``conj(a0), ..., conj(a_{n-1})``) and ``L`` (first row ``a_n, ..., a_1``).
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from .numerics import Definiteness, DefinitenessVerdict, HermitianMatrix, definiteness
from .polynomial import MonicPoly


class DiscVerdict(enum.Enum):
    INSIDE = "Inside"
    BAND = "Band"
    NOT_INSIDE = "NotInside"


@dataclass(frozen=True)
class SchurMatrixPair:
    upper: np.ndarray
    lower: np.ndarray
    hermitian: HermitianMatrix


@functools.lru_cache(maxsize=None)
def _toeplitz_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    j, k = np.indices((n, n))
    return np.where(k >= j, k - j, 0), k >= j


def _upper_toeplitz(first_row: np.ndarray) -> np.ndarray:
    idx, mask = _toeplitz_index(first_row.size)
    return np.where(mask, first_row[idx], 0)


def schur_cohn_factors(poly: MonicPoly) -> SchurMatrixPair:
    """Toeplitz factors ``U``, ``L`` and ``H = U^H U - L^H L`` of ``poly``."""
    a = poly.full_coeffs()
    n = poly.degree
    u = _upper_toeplitz(np.conj(a[:n]))
    low = _upper_toeplitz(a[::-1][:n])
    h = u.conj().T @ u - low.conj().T @ low
    return SchurMatrixPair(u, low, HermitianMatrix(h))


def schur_cohn_matrix(poly: MonicPoly) -> HermitianMatrix:
    """The matrix of the Schur-Cohn form of ``poly``; dimension equals the degree."""
    return schur_cohn_factors(poly).hermitian


def schur_cohn_matrix_by_sums(poly: MonicPoly) -> HermitianMatrix:
    """Same matrix accumulated entry by entry from the form's coefficients.

    Entry (j, k), j <= k, is ``sum_{r<=j} a_{j-r} conj(a_{k-r}) - conj(a_{n-j+r}) a_{n-k+r}``.
    Kept as an independent construction for cross-checks.
    """
    a = poly.full_coeffs()
    n = poly.degree
    h = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(j, n):
            acc = 0j
            for r in range(j + 1):
                acc += a[j - r] * np.conj(a[k - r]) - np.conj(a[n - j + r]) * a[n - k + r]
            h[j, k] = acc
    return HermitianMatrix(h)


def zeros_in_open_disc_verdict(poly: MonicPoly, tol: float) -> tuple[DiscVerdict, DefinitenessVerdict]:
    d = definiteness(schur_cohn_matrix(poly), tol)
    kind = {
        Definiteness.POSITIVE_DEFINITE: DiscVerdict.INSIDE,
        Definiteness.SEMIDEFINITE_BAND: DiscVerdict.BAND,
        Definiteness.INDEFINITE: DiscVerdict.NOT_INSIDE,
    }[d.kind]
    return kind, d


def zeros_in_open_disc(poly: MonicPoly, tol: float = 1e-10) -> DiscVerdict:
    """Inside iff every zero of ``poly`` lies in the open unit disc, decided at ``tol``.

    ``Band`` means the Schur-Cohn matrix is numerically singular (a zero near
    the unit circle); ``NotInside`` means it is indefinite, which rules out
    even the closed disc.
    """
    return zeros_in_open_disc_verdict(poly, tol)[0]
