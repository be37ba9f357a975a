import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contlattice.binomial import (
    AtomDensity,
    BinomParams,
    cbinom,
    cbinom_exp_integral,
    cbinom_laplace_closed,
    cbinom_laplace_tail_cut,
    cbinom_scaled,
    cbinom_shifted,
    central_atom_density,
    central_binomial,
    central_binomial_asymptotic_ratio,
    chu_vandermonde_lhs,
    chu_vandermonde_pfold_residual,
    chu_vandermonde_residual,
    convolve_atom_density,
    laguerre_convolution_check,
    mixed_pde_residual,
    rebalance_deviation,
    shifted_derivative,
    total_integral,
    trapezoid_convolution,
)
from contlattice.errors import ConfigurationError, DomainError
from contlattice.quadrature import laplace_numeric, laplace_tail_cut, quad

mpmath.mp.dps = 40


def mp_cbinom(x, s):
    x, s = mpmath.mpf(x), mpmath.mpf(s)
    r = mpmath.sqrt(s * (x - s))
    if r == 0:
        return x + 2
    return 2 * mpmath.besseli(0, 2 * r) + x * mpmath.besseli(1, 2 * r) / r


@pytest.mark.parametrize("x,s,expected", [
    (2.0, 1.0, 7.7404443139467926616),
    (0.5, 0.1, 2.5908704537926089766),
    (10.0, 3.0, 5187.682341528378796),
    (50.0, 20.0, 4.3374344893851472811e20),
])
def test_frozen_values(x, s, expected):
    assert cbinom(x, s) == pytest.approx(expected, rel=1e-14)


def test_boundary_values():
    assert cbinom(1.0, 0.0) == 3.0
    for x in (0.0, 0.3, 7.0):
        assert cbinom(x, 0.0) == pytest.approx(x + 2)
        assert cbinom(x, x) == pytest.approx(x + 2)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(0.0, 60.0), frac=st.floats(0.0, 1.0))
def test_symmetry_and_oracle(x, frac):
    s = min(x * frac, x)
    assert cbinom(x, s) == pytest.approx(cbinom(x, x - s), rel=1e-13)
    assert cbinom(x, s) == pytest.approx(float(mp_cbinom(x, s)), rel=1e-13)


def test_scaled_far_beyond_overflow():
    v = cbinom_scaled(2000.0, 1000.0)
    assert v.log() == pytest.approx(float(mpmath.log(mp_cbinom(2000, 1000))), rel=1e-14)


def test_params_validation():
    with pytest.raises(DomainError):
        cbinom(1.0, 2.0)
    with pytest.raises(DomainError):
        cbinom(1.0, -0.1)
    with pytest.raises(DomainError):
        BinomParams(float("nan"), 0.0)
    assert BinomParams(3.0, 1.0).y == 2.0


@pytest.mark.parametrize("x", [0.5, 1.0, 5.0, 20.0])
def test_total_integral(x):
    assert total_integral(x) == pytest.approx(2 * math.expm1(x), rel=1e-12)


@pytest.mark.parametrize("x,alpha,u", [(1.0, 0.5, 0.3), (3.0, 2.0, -1.0), (0.2, 1.0, 0.0), (40.0, 0.7, 0.1)])
def test_exp_integral_closed_form(x, alpha, u):
    ref = mpmath.quad(lambda s: mp_cbinom(x, s) * mpmath.mpf(alpha) ** s * mpmath.exp(u * s), [0, x])
    assert cbinom_exp_integral(x, alpha, u) == pytest.approx(float(ref), rel=1e-13)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_laplace(s, p):
    got = laplace_numeric(lambda w: cbinom_shifted(s, w), p, cbinom_laplace_tail_cut(s, p, 1e-12))
    assert got == pytest.approx(cbinom_laplace_closed(s, p), abs=1e-10)


def test_central_binomial():
    assert central_binomial(0.0) == 2.0
    ref = 2 * mpmath.besseli(0, 3) + 2 * mpmath.besseli(1, 3)
    assert central_binomial(1.5) == pytest.approx(float(ref), rel=1e-14)
    assert central_binomial(1.5) == pytest.approx(cbinom(3.0, 1.5), rel=1e-14)
    for p in (3.0, 4.0, 6.0):
        got = laplace_numeric(central_binomial, p, laplace_tail_cut(p, 2.0, 4.0, 1e-12))
        assert got + 1.0 == pytest.approx(math.sqrt((p + 2) / (p - 2)), abs=1e-10)


def test_asymptotic_ratio():
    r = central_binomial_asymptotic_ratio(100.0)
    assert 0.99 <= r <= 1.0
    assert central_binomial_asymptotic_ratio(400.0) > r


def test_shifted_derivative_matches_mpmath():
    x, sbar = 1.3, 0.4
    g = lambda sig: 2 * mpmath.besseli(0, 2 * mpmath.sqrt(sig * x)) + (x + sig) * mpmath.besseli(
        1, 2 * mpmath.sqrt(sig * x)) / mpmath.sqrt(sig * x)
    for j in range(4):
        assert shifted_derivative(x, sbar, j) == pytest.approx(float(mpmath.diff(g, sbar, j)), rel=1e-12)


@pytest.mark.parametrize("x,s1,s2", [(1.0, 0.5, 0.7), (2.0, 1.0, 0.3), (1.5, 0.0, 0.0)])
def test_chu_vandermonde(x, s1, s2):
    assert abs(chu_vandermonde_residual(x, s1, s2, 1e-3)) <= 1e-5


def test_chu_vandermonde_second_order():
    r1 = chu_vandermonde_residual(1.0, 0.5, 0.7, 2e-3)
    r2 = chu_vandermonde_residual(1.0, 0.5, 0.7, 1e-3)
    assert 3.5 < r1 / r2 < 4.5


def test_pfold_identity():
    assert abs(chu_vandermonde_pfold_residual(1.0, (0.3, 0.5, 0.2))) < 1e-9
    assert abs(chu_vandermonde_pfold_residual(0.8, (0.4, 0.4))) < 1e-9
    # the exponent 2p does not balance the product
    assert abs(chu_vandermonde_pfold_residual(1.0, (0.3, 0.5, 0.2), exponent=6)) > 1.0


def test_single_factor_lhs():
    assert chu_vandermonde_lhs(1.2, [0.4]) == cbinom_shifted(0.4, 1.2)
    with pytest.raises(DomainError):
        chu_vandermonde_lhs(1.0, [])


@pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("sbar", [0.5, 1.0, 2.0])
def test_mixed_pde(u, sbar):
    assert abs(mixed_pde_residual(u, sbar, 1e-3)) <= 1e-4


def test_atom_density_algebra():
    step = 0.01
    one = AtomDensity.from_function(lambda w: 1.0, 2.0, step, atom=1.0)
    sq = convolve_atom_density(one, one)
    # (delta + 1)^2 = delta + 2 + w
    assert sq.atom == 1.0
    np.testing.assert_allclose(sq.samples, 2.0 + sq.grid, rtol=1e-12)
    assert sq.value_at(1.0) == pytest.approx(3.0)
    coarse = AtomDensity.from_function(lambda w: 1.0, 2.0, 0.02, atom=1.0)
    with pytest.raises(ConfigurationError):
        convolve_atom_density(one, coarse)


def test_trapezoid_convolution_of_exponentials():
    step = 1e-3
    w = np.arange(0, 2001) * step
    conv = trapezoid_convolution(np.exp(w), np.exp(w), step)
    np.testing.assert_allclose(conv[1:], w[1:] * np.exp(w[1:]), rtol=1e-6)


def test_central_square_is_exponential():
    sq = convolve_atom_density(central_atom_density(4.0, 1e-3), central_atom_density(4.0, 1e-3))
    mask = sq.grid <= 2.0
    np.testing.assert_allclose(sq.samples[mask], 4 * np.exp(2 * sq.grid[mask]), rtol=1e-3)


def test_rebalance():
    assert rebalance_deviation(0.3, 1.1) < 1e-6


@pytest.mark.parametrize("n,tol", [(1, 1e-3), (2, 5e-3), (3, 5e-3)])
def test_laguerre_convolution(n, tol):
    assert laguerre_convolution_check(n, 4.0, 1e-3, 2.0) <= tol
    with pytest.raises(DomainError):
        laguerre_convolution_check(4)
