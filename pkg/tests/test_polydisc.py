import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symdisc.errors import HypothesisViolation, InputError, ReductionUndefinedError
from symdisc.polydisc import (
    Region,
    SymPoint,
    ToleranceConfig,
    associated_polynomial,
    beta_reduce,
    classify_oracle,
    in_gamma_recursive,
    in_gn_recursive,
    in_gn_schur,
    kernel_criterion,
    necessary_bounds,
    on_distinguished_boundary,
    pairwise_bounds,
    reconstruct,
    reduction_residual,
    solve_beta_lstsq,
    symmetrize,
)

from conftest import disc

OMEGA = cmath.exp(2j * math.pi / 3)
TOL = ToleranceConfig()


def P(*coords):
    return SymPoint.from_coords(coords)


def test_tolerance_config_validation():
    with pytest.raises(InputError):
        ToleranceConfig(boundary_band=0)
    with pytest.raises(InputError):
        ToleranceConfig(matrix_tol=float("nan"))


def test_sympoint_validation():
    with pytest.raises(InputError):
        P(1, float("inf"))
    with pytest.raises(InputError):
        SymPoint.from_coords([])
    with pytest.raises(InputError):
        SymPoint.from_coords([0] * 17)
    assert P(0.5).n == 1 and P(0.5).s == ()


@pytest.mark.parametrize("z, want", [
    ([0, 0, 0], [0, 0, 0]),
    ([1, 1], [2, 1]),
    ([1, OMEGA, OMEGA**2], [0, 0, 1]),
])
def test_symmetrize_examples(z, want):
    assert np.allclose(symmetrize(z).coords, want, atol=1e-15)


@pytest.mark.parametrize("coords, want", [
    ((0, 0, 0), (0, 0, 0)),
    ((2, 1), (-2, 1)),
    ((0, 0, 1), (0, 0, -1)),
])
def test_associated_polynomial_examples(coords, want):
    assert associated_polynomial(P(*coords)).coeffs == want


def test_associated_polynomial_roots_are_preimage(rng):
    from symdisc.polynomial import find_roots
    from test_polynomial import match_distance
    for n in range(1, 9):
        z = disc(rng, n)
        rs = find_roots(associated_polynomial(symmetrize(z)))
        assert match_distance(rs.roots, z) <= 1e-8


def test_beta_reduce_identity_at_p_zero(rng):
    s = tuple(disc(rng, 4, 3.0))
    beta = beta_reduce(SymPoint(s, 0))
    assert beta.coords == s


def test_beta_reduce_n2_example():
    beta = beta_reduce(P(1, 0.5))
    assert beta.n == 1
    assert beta.p == pytest.approx(2 / 3, abs=1e-15)
    assert reconstruct(beta, 0.5).s[0] == pytest.approx(1, abs=1e-15)


def test_beta_reduce_n3_example():
    pt = P(1 + 1j, 1 - 1j, 0.5j)
    beta = beta_reduce(pt)
    b1, b2 = beta.coords
    assert abs(b1 + b2.conjugate() * 0.5j - (1 + 1j)) <= 1e-12
    assert abs(b2 + b1.conjugate() * 0.5j - (1 - 1j)) <= 1e-12
    assert reduction_residual(pt, beta) <= 1e-12


def test_beta_reduce_undefined_near_unimodular_p():
    with pytest.raises(ReductionUndefinedError):
        beta_reduce(P(2, 1))
    with pytest.raises(ReductionUndefinedError):
        beta_reduce(P(0, 1 - 1e-10))
    with pytest.raises(InputError):
        beta_reduce(P(0.5))


def test_printed_index_order_fails_reconstruction():
    # pairing s_{n-j} with s_j in the numerator breaks s_j = beta_j + conj(beta_{n-j}) p
    pt = P(1 + 1j, 0.2, 0.5j)
    s, p, m = pt.s, pt.p, len(pt.s)
    swapped = SymPoint.from_coords(
        [(s[m - 1 - j] - s[j].conjugate() * p) / (1 - abs(p) ** 2) for j in range(m)])
    assert reduction_residual(pt, swapped) > 0.1
    assert reduction_residual(pt, beta_reduce(pt)) <= 1e-15


@pytest.mark.parametrize("p", [0, 0.5, 0.3 - 0.9j])
def test_reconstruct_examples(p):
    beta = P(2 / 3)
    if p == 0:
        assert reconstruct(P(1 + 1j, 2), 0).coords == (1 + 1j, 2, 0)
    if p == 0.5:
        assert reconstruct(beta, 0.5).s[0] == pytest.approx(1, abs=1e-15)


coords_st = st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                     min_size=1, max_size=8)
p_st = st.complex_numbers(max_magnitude=0.99, allow_nan=False, allow_infinity=False)


@given(coords_st, p_st)
def test_reduce_reconstruct_round_trip(beta_coords, p):
    beta = SymPoint.from_coords(beta_coords)
    pt = reconstruct(beta, p)
    back = beta_reduce(pt)
    assert max(abs(a - b) for a, b in zip(back.coords, beta.coords)) <= 1e-11 * max(1.0, max(map(abs, beta_coords)))
    again = reconstruct(back, p)
    assert max((abs(a - b) for a, b in zip(again.s, pt.s)), default=0) <= 1e-12 * max([1.0] + [abs(c) for c in pt.s])


# --- membership examples -------------------------------------------------

def test_in_gamma_recursive_examples():
    assert in_gamma_recursive(P(0, 0, 0)).region is Region.INTERIOR
    v = in_gamma_recursive(P(2, 1))
    assert v.region.in_gamma and v.region in (Region.BOUNDARY, Region.DISTINGUISHED)
    assert v.certificate["delegated"] == "oracle"
    assert in_gamma_recursive(P(3, 1)).region is Region.OUTSIDE


def test_in_gamma_recursive_chain_certificate():
    v = in_gamma_recursive(P(1, 0.5))
    assert len(v.certificate["chain"]) == 2
    assert v.certificate["chain"][1][0] == pytest.approx(2 / 3)


def test_in_gamma_recursive_dimension_one():
    assert in_gamma_recursive(P(0.5j)).region is Region.INTERIOR
    assert in_gamma_recursive(P(1j)).region is Region.DISTINGUISHED
    assert in_gamma_recursive(P(1.01)).region is Region.OUTSIDE


def test_in_gamma_recursive_boundary_point_below_top_level():
    # roots {1, 0.5}: on the boundary of Gamma_2, not on the distinguished boundary
    v = in_gamma_recursive(symmetrize([1, 0.5]))
    assert v.region is Region.BOUNDARY


@pytest.mark.parametrize("coords, want", [
    ((0, 0, 0), {Region.INTERIOR}),
    ((2, 1), {Region.BAND, Region.OUTSIDE}),
    ((0, 0.5), {Region.INTERIOR}),
])
def test_in_gn_recursive_examples(coords, want):
    assert in_gn_recursive(P(*coords)).region in want


def test_in_gn_schur_examples():
    assert in_gn_schur(P(0, 0, 0)).region is Region.INTERIOR
    v = in_gn_schur(P(0, 0.999))
    assert v.region is Region.INTERIOR
    assert v.margin == pytest.approx(1 - 0.999**2, rel=1e-12)
    v = in_gn_schur(P(1.9, 0))
    assert v.region is in_gn_recursive(P(1.9, 0)).region is Region.OUTSIDE
    assert in_gn_schur(P(2, 1)) is None


@pytest.mark.parametrize("coords, want", [
    ((0, 0, 1), True),
    ((2, 1), True),
    ((0, 0.25), False),
])
def test_on_distinguished_boundary_examples(coords, want):
    assert bool(on_distinguished_boundary(P(*coords))) is want


def test_distinguished_boundary_beta_certificates(rng):
    for n in range(2, 7):
        pt = symmetrize(np.exp(2j * np.pi * rng.random(n)))
        v = on_distinguished_boundary(pt)
        assert v.on_boundary
        assert v.certificate["beta_lstsq_residual"] <= 1e-10
        assert v.certificate["beta_from_roots_residual"] <= 1e-10
        beta = SymPoint.from_coords(v.certificate["beta_from_roots"])
        if beta.n >= 1:
            assert on_distinguished_boundary(beta).on_boundary


def test_lstsq_beta_matches_closed_form_when_p_inside(rng):
    pt = SymPoint.from_coords(disc(rng, 5, 2.0))
    pt = SymPoint(pt.s, 0.3 + 0.2j)
    beta, res = solve_beta_lstsq(pt)
    assert res <= 1e-13
    assert np.allclose(beta.coords, beta_reduce(pt).coords, atol=1e-12)


def test_distinguished_boundary_torus_and_scaled(rng):
    for _ in range(200):
        n = int(rng.integers(2, 7))
        z = np.exp(2j * np.pi * rng.random(n))
        assert on_distinguished_boundary(symmetrize(z)).on_boundary
        z[rng.integers(n)] *= 0.9
        assert not on_distinguished_boundary(symmetrize(z)).on_boundary


@pytest.mark.parametrize("coords, want", [
    ((0, 0, 0), True),
    ((3, 0.5), False),
    ((4.1, 0, 0, 0), False),
    ((0, 1.0), False),
])
def test_necessary_bounds_examples(coords, want):
    assert necessary_bounds(P(*coords)) is want


@pytest.mark.parametrize("z, want", [
    ([0.5, 0.5j], True),
    ([1.2, 1.1], False),
    ([1.5, -1.5], False),
])
def test_pairwise_bounds_examples(z, want):
    assert pairwise_bounds(z) is want


def test_kernel_criterion_examples():
    assert kernel_criterion([0.5, 0.5]).inside
    assert classify_oracle(symmetrize([0.5, 0.5])).region is Region.INTERIOR
    v = kernel_criterion([0.5, 0.5, 0.5])
    assert v.inside and v.log_abs_product == pytest.approx(3 * math.log(0.75))


def test_kernel_criterion_one_coordinate_outside():
    z = [1.1, 0.3, 0.2j]
    assert necessary_bounds(symmetrize(z)) and pairwise_bounds(z)
    v = kernel_criterion(z)
    assert not v.inside and v.sign == -1
    assert classify_oracle(symmetrize(z)).region is Region.OUTSIDE


def test_kernel_criterion_hypothesis_violations():
    with pytest.raises(HypothesisViolation) as e:
        kernel_criterion([1.2, 1.1])
    assert e.value.bound == "binomial"
    # binomial bounds hold but a pair product fails
    z = [1.05, 1.0, 0.0, -0.1]
    assert necessary_bounds(symmetrize(z))
    with pytest.raises(HypothesisViolation) as e:
        kernel_criterion(z)
    assert e.value.bound == "pairwise"


def test_kernel_criterion_underflow_safe():
    z = [0.9999999] * 16
    v = kernel_criterion(z)
    assert v.inside and v.log_abs_product < -200


def test_kernel_criterion_band():
    v = kernel_criterion([1.0, 0.2])
    assert v.band and not v.inside


@pytest.mark.parametrize("coords, region, m", [
    ((0, 0, 0), Region.INTERIOR, 0.0),
    ((2, 1), Region.DISTINGUISHED, 1.0),
    ((0, 2), Region.OUTSIDE, math.sqrt(2)),
])
def test_classify_oracle_examples(coords, region, m):
    v = classify_oracle(P(*coords))
    assert v.region is region
    assert v.certificate["max_modulus"] == pytest.approx(m, abs=1e-12)


def test_classify_oracle_boundary_not_distinguished():
    assert classify_oracle(symmetrize([1, 0.2])).region is Region.BOUNDARY


# --- properties at reduced sample counts (full counts in test_acceptance) --

@pytest.mark.parametrize("n", range(2, 9))
def test_interior_samples_classified_interior(n, rng):
    for _ in range(300):
        z = 0.99 * disc(rng, n)
        assert classify_oracle(symmetrize(z)).region is Region.INTERIOR


@pytest.mark.parametrize("n", range(2, 9))
def test_methods_agree_with_oracle(n, rng):
    for i in range(300):
        if i % 2:
            z = disc(rng, n)
            z[rng.integers(n)] *= 1.0 + rng.random()
        else:
            z = 0.99 * disc(rng, n)
        pt = symmetrize(z)
        o = classify_oracle(pt)
        if abs(o.certificate["max_modulus"] - 1) <= 1e-6:
            continue
        assert in_gamma_recursive(pt).region.in_gamma == o.region.in_gamma
        interior = o.region is Region.INTERIOR
        assert (in_gn_recursive(pt).region is Region.INTERIOR) == interior
        s = in_gn_schur(pt)
        if abs(pt.p) <= 0.99:
            assert (s.region is Region.INTERIOR) == interior


def test_n2_closed_form(rng):
    for _ in range(2000):
        s = complex(*rng.uniform(-2, 2, 2))
        p = complex(disc(rng, 1)[0])
        a = 1 - abs(p) ** 2
        off = abs(s - np.conj(s) * p)
        lam = a - off
        if abs(lam) <= 1e-10:
            continue
        beta = (s - np.conj(s) * p) / a
        assert abs(beta + p * np.conj(beta) - s) <= 1e-12 * max(1, abs(s)) / a
        v = in_gn_schur(P(s, p))
        assert (v.region is Region.INTERIOR) == (lam > 0) == (abs(beta) < 1)


def test_scaling_interior_preimage_stays_interior(rng):
    for _ in range(300):
        n = int(rng.integers(2, 9))
        z = disc(rng, n)
        if classify_oracle(symmetrize(z)).region is not Region.INTERIOR:
            continue
        r = rng.random()
        assert classify_oracle(symmetrize(r * z)).region is Region.INTERIOR


def test_kernel_criterion_matches_oracle(rng):
    checked = 0
    while checked < 300:
        n = int(rng.integers(2, 7))
        z = disc(rng, n, 1.25)
        if not (necessary_bounds(symmetrize(z)) and pairwise_bounds(z)):
            continue
        o = classify_oracle(symmetrize(z))
        if abs(o.certificate["max_modulus"] - 1) <= 1e-6:
            continue
        assert kernel_criterion(z).inside == (o.region is Region.INTERIOR)
        checked += 1


def close_pair_on_torus(rng, n, sep):
    theta = 2 * np.pi * rng.random(n)
    theta[1] = theta[0] + sep
    return np.exp(1j * theta)


@pytest.mark.parametrize("sep", [1e-4, 1e-5, 3e-6])
def test_close_pairs_on_torus_are_distinguished(rng, sep):
    for _ in range(50):
        pt = symmetrize(close_pair_on_torus(rng, 6, sep))
        assert on_distinguished_boundary(pt).on_boundary
        assert classify_oracle(pt).region is Region.DISTINGUISHED
        assert in_gamma_recursive(pt).region is Region.DISTINGUISHED


def test_root_just_off_circle_is_not_distinguished():
    for eps in (1e-8, -1e-8, 1e-7):
        pt = symmetrize([1 + eps, np.exp(1j), np.exp(2j)])
        v = on_distinguished_boundary(pt)
        assert not v.on_boundary
        assert v.certificate["torus_backward_error"] > 1e-9
        want = Region.OUTSIDE if eps > 0 else Region.BOUNDARY
        assert classify_oracle(pt).region is want
