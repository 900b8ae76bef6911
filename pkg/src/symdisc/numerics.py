"""Complex scalar validation, small Hermitian matrices and definiteness tests."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .errors import InputError

MAX_BINOMIAL_N = 62


def as_complex(value, name: str = "value") -> complex:
    """Coerce ``value`` to a finite Python complex or raise :class:`InputError`."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        value = complex(float(value[0]), float(value[1]))
    try:
        z = complex(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: not a complex number: {value!r}") from exc
    if not cmath.isfinite(z):
        raise InputError(f"{name}: non-finite value {z!r}")
    return z


def as_complex_tuple(values: Iterable, name: str = "values") -> tuple[complex, ...]:
    return tuple(as_complex(v, f"{name}[{i}]") for i, v in enumerate(values))


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) for 0 <= k <= n <= 62."""
    if not (0 <= k <= n <= MAX_BINOMIAL_N):
        raise InputError(f"binomial({n}, {k}) outside 0 <= k <= n <= {MAX_BINOMIAL_N}")
    return math.comb(n, k)


class HermitianMatrix:
    """Dense Hermitian matrix, read-only once built.

    The constructor copies the upper triangle (diagonal included) onto the lower
    one, so the result is Hermitian bit-for-bit whatever rounding produced the
    input.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InputError(f"HermitianMatrix needs a non-empty square array, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InputError("HermitianMatrix entries must be finite")
        upper = np.triu(a, 1)
        a = upper + upper.conj().T + np.diag(a.diagonal().real).astype(np.complex128)
        a.setflags(write=False)
        self._a = a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._a

    def __getitem__(self, idx):
        return self._a[idx]

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def permuted(self, perm: Sequence[int]) -> "HermitianMatrix":
        """Return P^H H P for the permutation matrix of ``perm``."""
        idx = np.asarray(perm)
        return HermitianMatrix(self._a[np.ix_(idx, idx)])

    def quadratic_form(self, x) -> float:
        x = np.asarray(x, dtype=np.complex128)
        return float(np.real(np.vdot(x, self._a @ x)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return np.array_equal(self._a, other._a)

    def __repr__(self) -> str:
        return f"HermitianMatrix({self._a.tolist()!r})"


class Definiteness(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    SEMIDEFINITE_BAND = "SemidefiniteBand"
    INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class DefinitenessVerdict:
    kind: Definiteness
    min_pivot_or_eig: float


@njit(cache=True)
def _pivoted_cholesky(a, tol):
    """Diagonally pivoted Cholesky, stopped once the largest remaining pivot is <= tol.

    Returns the accepted pivots and the trailing Schur complement (possibly 0x0).
    By Sylvester's law of inertia, ``a`` is congruent to diag(pivots) (+) rest.
    """
    s = a.copy()
    m = s.shape[0]
    pivots = np.empty(m)
    done = 0
    while done < m:
        k = done
        for i in range(done + 1, m):
            if s[i, i].real > s[k, k].real:
                k = i
        d = s[k, k].real
        if d <= tol:
            break
        if k != done:
            for c in range(m):
                t = s[done, c]
                s[done, c] = s[k, c]
                s[k, c] = t
            for r in range(m):
                t = s[r, done]
                s[r, done] = s[r, k]
                s[r, k] = t
        pivots[done] = d
        for r in range(done + 1, m):
            for c in range(done + 1, m):
                s[r, c] -= s[r, done] * s[done, c] / d
        done += 1
    return pivots[:done].copy(), s[done:, done:].copy()


def definiteness(h: HermitianMatrix, tol: float) -> DefinitenessVerdict:
    """Three-valued sign test of a Hermitian matrix against the band ``[-tol, tol]``.

    Pivoted Cholesky runs while pivots exceed ``tol``. If it completes the
    matrix is positive definite and the smallest pivot is reported. Otherwise
    the sign of the leftover Schur complement, whose inertia is the rest of
    ``h``'s inertia, is read from its smallest eigenvalue.
    """
    if not (tol > 0 and math.isfinite(tol)):
        raise InputError(f"tol must be a positive finite real, got {tol!r}")
    if not isinstance(h, HermitianMatrix):
        h = HermitianMatrix(h)
    pivots, rest = _pivoted_cholesky(np.ascontiguousarray(h.entries), float(tol))
    if rest.shape[0] == 0:
        return DefinitenessVerdict(Definiteness.POSITIVE_DEFINITE, float(pivots.min()))
    # symmetrize against rounding in the rank-one updates
    rest = 0.5 * (rest + rest.conj().T)
    lam = float(np.linalg.eigvalsh(rest)[0])
    if lam < -tol:
        return DefinitenessVerdict(Definiteness.INDEFINITE, lam)
    return DefinitenessVerdict(Definiteness.SEMIDEFINITE_BAND, lam)
