import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from symdisc.errors import InputError, OracleFailure
from symdisc.polydisc import associated_polynomial, reconstruct, symmetrize
from symdisc.polynomial import (
    MonicPoly,
    elementary_symmetric,
    evaluate,
    find_roots,
    max_root_modulus,
)

from conftest import disc

OMEGA = cmath.exp(2j * math.pi / 3)

small_complex = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def brute_force_esp(z):
    return [sum(math.prod(c) for c in itertools.combinations(z, k)) for k in range(1, len(z) + 1)]


def match_distance(a, b):
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    i, j = linear_sum_assignment(cost)
    return cost[i, j].max()


@pytest.mark.parametrize("points, want", [
    ([0, 0], [0, 0]),
    ([1, 1], [2, 1]),
    ([1, OMEGA, OMEGA**2], [0, 0, 1]),
])
def test_elementary_symmetric_examples(points, want):
    assert np.allclose(elementary_symmetric(points), want, atol=1e-15)


@given(st.lists(small_complex, min_size=1, max_size=8))
def test_elementary_symmetric_matches_subset_sums(z):
    got = elementary_symmetric(z)
    want = brute_force_esp(z)
    for g, w in zip(got, want):
        assert abs(g - w) <= 1e-12 * max(1.0, abs(w)) * 2 ** len(z)


@given(st.lists(small_complex, min_size=1, max_size=10), st.randoms(use_true_random=False))
def test_elementary_symmetric_permutation_invariant(z, random):
    shuffled = list(z)
    random.shuffle(shuffled)
    a, b = elementary_symmetric(z), elementary_symmetric(shuffled)
    scale = max(1.0, max(abs(c) for c in a))
    for x, y in zip(a, b):
        assert abs(x - y) <= 1e-13 * scale * len(z)


def test_elementary_symmetric_rejects():
    with pytest.raises(InputError):
        elementary_symmetric([])
    with pytest.raises(InputError):
        elementary_symmetric([0.1] * 17)
    with pytest.raises(InputError):
        elementary_symmetric([float("nan")])


@pytest.mark.parametrize("coeffs, z, want", [
    ((-2, 1), 1, 0),
    ((0, 0, 0), 0, 0),
    ((0, 1), 2, 5),
])
def test_evaluate_examples(coeffs, z, want):
    assert evaluate(MonicPoly(coeffs), z) == want


def test_monic_poly_validation():
    with pytest.raises(InputError):
        MonicPoly(())
    with pytest.raises(InputError):
        MonicPoly((1, float("inf")))


def test_find_roots_double_root():
    rs = find_roots(MonicPoly((-2, 1)), 1e-12)
    assert rs.converged and rs.residual <= 1e-12
    assert len(rs.roots) == 2
    assert all(abs(r - 1) <= 1e-12 for r in rs.roots)


def test_find_roots_cube_roots_of_unity():
    rs = find_roots(MonicPoly((0, 0, -1)))
    assert rs.converged
    assert match_distance(rs.roots, [1, OMEGA, OMEGA**2]) <= 1e-12


def test_find_roots_vieta_example():
    rs = find_roots(MonicPoly((-(0.3 + 0.4j), 0.1)))
    e = elementary_symmetric(rs.roots)
    assert abs(e[0] - (0.3 + 0.4j)) <= 1e-8 and abs(e[1] - 0.1) <= 1e-8


def test_find_roots_multiple_roots_are_accurate():
    roots = [1j, 1j, -1, -1, -1, 0.3]
    rs = find_roots(MonicPoly.from_roots(roots))
    assert rs.converged
    assert match_distance(rs.roots, roots) <= 1e-12


def test_find_roots_exact_zero_roots():
    rs = find_roots(MonicPoly((0.5, 0, 0)))
    assert sorted(abs(r) for r in rs.roots) == [0.0, 0.0, 0.5]


def test_find_roots_rejects():
    with pytest.raises(InputError):
        find_roots(MonicPoly((0,) * 17))
    with pytest.raises(InputError):
        find_roots(MonicPoly((1,)), residual_bound=0)


def test_non_convergence_is_flagged_not_raised(rng):
    poly = MonicPoly(tuple(disc(rng, 8, 2.0)))
    rs = find_roots(poly, 1e-12, max_iters=1)
    assert len(rs.roots) == 8
    assert not rs.converged
    with pytest.raises(OracleFailure):
        max_root_modulus(poly, residual_bound=1e-40)


@pytest.mark.parametrize("coeffs, want", [((-2, 1), 1.0), ((0, 0), 0.0)])
def test_max_root_modulus_examples(coeffs, want):
    assert max_root_modulus(MonicPoly(coeffs)) == pytest.approx(want, abs=1e-12)


def test_max_root_modulus_cube_root():
    poly = MonicPoly((0, 0, -1.5))
    assert max_root_modulus(poly) == pytest.approx(1.5 ** (1 / 3), rel=1e-14)
    for r in find_roots(poly).roots:
        assert abs(evaluate(poly, r)) <= 1e-14


def test_vieta_round_trip(rng):
    done = 0
    while done < 1000:
        n = int(rng.integers(1, 9))
        z = disc(rng, n)
        if n > 1 and min(abs(a - b) for a, b in itertools.combinations(z, 2)) < 1e-2:
            continue
        rs = find_roots(MonicPoly.from_roots(list(z)))
        assert rs.converged
        assert match_distance(rs.roots, z) <= 1e-8
        done += 1


def reduction_family(rng, n, an_radius=0.95):
    """(b, a_n) with g's roots uniform in the radius-2 disc; returns (f, g) as points."""
    b = symmetrize(disc(rng, n - 1, 2.0))
    an = complex(disc(rng, 1, an_radius)[0])
    return reconstruct(b, an), b


def test_root_count_stability(rng):
    tol = 1e-6
    checked = 0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        f, g = reduction_family(rng, n)
        fr = find_roots(associated_polynomial(f)).roots
        gr = find_roots(associated_polynomial(g)).roots
        if any(abs(abs(r) - 1) <= tol for r in fr + gr):
            continue
        assert sum(abs(r) < 1 - tol for r in fr) == 1 + sum(abs(r) < 1 - tol for r in gr)
        checked += 1
    assert checked > 900


def test_circle_zero_coincidence(rng):
    for _ in range(300):
        n = int(rng.integers(2, 9))
        groots = disc(rng, n - 1, 2.0)
        k = int(rng.integers(1, n))
        groots[:k] = np.exp(2j * np.pi * rng.random(k))
        g = symmetrize(groots)
        f = reconstruct(g, complex(disc(rng, 1, 0.95)[0]))
        fr = find_roots(associated_polynomial(f)).roots
        gr = find_roots(associated_polynomial(g)).roots
        on_f = [r for r in fr if abs(abs(r) - 1) <= 1e-9]
        on_g = [r for r in gr if abs(abs(r) - 1) <= 1e-9]
        assert len(on_g) >= 1
        for r in on_f:
            assert min(abs(r - w) for w in gr) <= 1e-6
        for r in on_g:
            assert min(abs(r - w) for w in fr) <= 1e-6


def test_polish_roots_close_pair():
    from symdisc.polynomial import polish_roots
    z = np.exp(1j * np.array([0.3, 0.3 + 1e-5, 1.0, 2.0, 3.0, 4.5]))
    poly = MonicPoly.from_roots(z)
    rs = find_roots(poly)
    idx = list(range(6))
    polished = polish_roots(poly, rs.roots, idx)
    before = max(abs(abs(r) - 1) for r in rs.roots)
    after = max(abs(abs(r) - 1) for r in polished)
    assert after < before or before < 1e-12
    assert after < 1e-8
    # each root stays distinct from its neighbour
    assert match_distance(polished, z) < 1e-8


def test_polish_roots_never_merges_a_pair():
    from symdisc.polynomial import polish_roots
    poly = MonicPoly.from_roots([0.5, 0.5 + 1e-3])
    bad = (0.5 + 0.00049, 0.5 + 0.00051)
    out = polish_roots(poly, bad, [0, 1])
    assert all(abs(o - b) < 1e-5 for o, b in zip(out, bad))
    assert out[0] != out[1]
