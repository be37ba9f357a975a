import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contlattice.catalan_numbers import (
    CatalanPoint,
    catalan,
    catalan0,
    catalan0_sine_integral,
    catalan_bessel_form,
    catalan_convolution_residual,
    catalan_derivative_laplace,
    catalan_gf_bridge,
    catalan_gf_closed,
    catalan_gf_squared,
    catalan_laplace,
    catalan_laplace_numeric,
    catalan_recursion_residual,
    catalan_volume_series,
    iphi_laplace_check,
    iphi_laplace_closed,
    polytope_volume,
    schlafli_catalan,
    semicircle_mgf,
    semicircle_moment,
    volume_recurrence_residual,
)
from contlattice.errors import DivergenceError, DomainError
from contlattice.quadrature import laplace_numeric, laplace_tail_cut
from contlattice.verify import discrete_catalan

mpmath.mp.dps = 40


@pytest.mark.parametrize("x,y,expected", [
    (2.0, 1.0, 1.7435790453832436465),
    (5.0, 2.5, 12.068766499779745282),
    (1.0, 0.0, 1.1303182079849700544),
    (4.0, 0.5, 6.1623882722329645135),
])
def test_frozen_values(x, y, expected):
    assert catalan(x, y) == pytest.approx(expected, rel=1e-14)


def test_diagonal_and_origin():
    assert catalan(0.0, 0.0) == 1.0
    for x in (0.3, 3.0, 40.0):
        assert catalan(x, x) == 1.0


def test_validation():
    with pytest.raises(DomainError):
        catalan(1.0, 2.0)
    with pytest.raises(DomainError):
        CatalanPoint(1.0, -0.5)
    with pytest.raises(DomainError):
        polytope_volume(-1, 1.0, 0.0)


@settings(max_examples=80, deadline=None)
@given(x=st.floats(1e-3, 30.0), frac=st.floats(0.0, 1.0))
def test_bessel_form_and_monotonicity(x, frac):
    y = x * frac
    assert catalan(x, y) == pytest.approx(catalan_bessel_form(x, y), rel=1e-12)
    # nondecreasing in x for fixed y
    assert catalan(x + 0.1, y) >= catalan(x, y) * (1 - 1e-14)
    assert catalan(x, y) >= 1.0 - 1e-14


@settings(max_examples=60, deadline=None)
@given(x=st.floats(1e-6, 50.0))
def test_bessel_reduction_on_axis(x):
    assert catalan(x, 0.0) == pytest.approx(float(2 * mpmath.besseli(1, x) / x), rel=1e-12)


@pytest.mark.parametrize("x,y", [(0.5, 0.0), (1.0, 0.5), (2.0, 1.0), (3.0, 0.0), (5.0, 2.5)])
def test_volume_series(x, y):
    assert abs(catalan(x, y) - catalan_volume_series(x, y)) <= 1e-10


def test_polytope_volume_low_orders():
    assert polytope_volume(0, 2.0, 1.0) == 1.0
    # one step: a right triangle-shaped region of area (x^2 - y^2)/4... written out
    x, y = 2.0, 0.5
    assert polytope_volume(1, x, y) == pytest.approx((x - y) * (x + 3 * y) / 8)


@pytest.mark.parametrize("n,x,y", [(0, 2.0, 0.5), (1, 1.0, 0.0), (2, 1.5, 0.5), (3, 2.0, 1.0), (5, 3.0, 1.0)])
def test_volume_recurrence(n, x, y):
    assert abs(volume_recurrence_residual(n, x, y)) <= 1e-8


@pytest.mark.parametrize("x,y", [(1.0, 0.0), (2.0, 1.0), (1.5, 1.5), (3.0, 0.5)])
def test_recursion(x, y):
    assert abs(catalan_recursion_residual(x, y)) <= 1e-8


@pytest.mark.parametrize("z", [1e-3, 0.5, 1.0, 4.0])
def test_convolution(z):
    assert abs(catalan_convolution_residual(z)) <= 1e-8


def test_convolution_domain():
    with pytest.raises(DomainError):
        catalan_convolution_residual(0.0)


def test_laplace():
    for p in (1.5, 2.0, 3.0):
        assert catalan_laplace_numeric(p) == pytest.approx(catalan_laplace(p), abs=1e-10)
        cut = laplace_tail_cut(p, 1.0, 1.0, 1e-13)
        deriv = laplace_numeric(lambda x: 2 * float(mpmath.besseli(2, x)) / x if x else 0.0, p, cut)
        assert deriv == pytest.approx(catalan_derivative_laplace(p), abs=1e-9)
    with pytest.raises(DomainError):
        catalan_laplace(1.0)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 3.5, 5.0])
@pytest.mark.parametrize("frac", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_schlafli(x, frac):
    assert schlafli_catalan(x, frac * x) == pytest.approx(catalan(x, frac * x), abs=1e-9)


def test_schlafli_origin():
    with pytest.raises(DomainError):
        schlafli_catalan(0.0, 0.0)


def test_sine_integral_and_semicircle():
    for x in (0.25, 1.0, 3.0):
        assert catalan0_sine_integral(x) == pytest.approx(catalan(2 * x), abs=1e-10)
    for x in (0.0, 1.0, 5.0):
        assert semicircle_mgf(x) == pytest.approx(catalan(x), abs=1e-10)
    for n in range(8):
        assert semicircle_moment(n) == pytest.approx(discrete_catalan(n), rel=1e-10)


@pytest.mark.parametrize("x", [0.05, 0.1, 0.2])
def test_gf_bridge(x):
    assert catalan_gf_bridge(x) == pytest.approx(catalan_gf_closed(x), abs=1e-6)
    assert abs(catalan_gf_bridge(x) - catalan_gf_squared(x)) > 1e-3


@pytest.mark.parametrize("x", [0.05, 0.1, 0.2])
def test_gf_bridge_vs_truncated_series(x):
    partial = sum(discrete_catalan(n) * x ** n for n in range(26))
    assert abs(catalan_gf_bridge(x) - partial) <= 1e-6


def test_gf_bridge_domain():
    with pytest.raises(DivergenceError):
        catalan_gf_bridge(0.25)
    with pytest.raises(DomainError):
        catalan_gf_bridge(0.0)


def test_catalan0_is_bessel_ratio():
    for x in (0.1, 2.0, 30.0):
        assert catalan0(x) == pytest.approx(float(2 * mpmath.besseli(1, x) / x), rel=1e-14)


@pytest.mark.parametrize("name,p", [("exp", 2.0), ("one", 3.0), ("exp", 3.0)])
def test_iphi_laplace(name, p):
    assert abs(iphi_laplace_check(name, p)) < 1e-8
    # the variant with the opposite sign in front of I_2 is off
    assert abs(iphi_laplace_check(name, p, form="plus")) > 1e-3


def test_iphi_edge_cases():
    assert iphi_laplace_check("zero", 2.0) == 0.0
    assert iphi_laplace_closed("one", 3.0) == pytest.approx(2 / (math.sqrt(8) * (3 + math.sqrt(8))))
    with pytest.raises(DomainError):
        iphi_laplace_closed("nope", 2.0)
    with pytest.raises(DivergenceError):
        iphi_laplace_closed("one", 1.0)


def test_documented_examples():
    assert catalan(2.0, 0.0) == pytest.approx(1.590637, abs=1e-6)
    assert polytope_volume(1, 2.0, 0.0) == pytest.approx(0.5)
    assert polytope_volume(2, 1.0, 1.0) == 0.0
    assert volume_recurrence_residual(0, 1.5, 1.5) == 0.0
    assert catalan_recursion_residual(2.0, 2.0) == 0.0
    assert catalan_laplace(2.0) == pytest.approx(0.535898, abs=1e-6)
    assert catalan_laplace(1.5) == pytest.approx(2 / (1.5 + math.sqrt(1.25)), rel=1e-15)
    assert catalan_laplace(1.5) == pytest.approx(0.763932, abs=1e-6)
    assert catalan_laplace(1e6) == pytest.approx(1e-6, rel=1e-5)
    assert schlafli_catalan(3.0, 3.0) == pytest.approx(1.0, abs=1e-9)
    assert semicircle_mgf(5.0) == pytest.approx(float(2 * mpmath.besseli(1, 5) / 5), abs=1e-9)
    assert catalan_gf_bridge(1e-6) == pytest.approx(1.0, abs=1e-5)
    assert catalan_gf_bridge(0.1) == pytest.approx(1.127017, abs=1e-6)
