import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from contlattice.errors import DomainError
from contlattice.special import (
    BesselOrder,
    ScaledValue,
    bessel_i,
    bessel_i_float,
    bessel_ie,
    gamma_half,
    laguerre_assoc,
    reduced_bessel,
    reduced_bessel_scaled,
)

mpmath.mp.dps = 40

# reference values computed with mpmath at 40 digits
FROZEN_I = [
    (0, 1.0, 1.2660658777520083356),
    (1, 10.0, 2670.9883037012546543),
    (2.5, 3.0, 1.5153394466819651377),
    (7, 40.0, 8022986222282039.0425),
    (20, 100.0, 1.4483461256427171641e41),
]


@pytest.mark.parametrize("nu,z,expected", FROZEN_I)
def test_bessel_frozen(nu, z, expected):
    assert bessel_i_float(nu, z) == pytest.approx(expected, rel=1e-14)


def test_bessel_huge_argument_stays_scaled():
    v = bessel_i(0.5, 600.0)
    assert v.log() == pytest.approx(math.log(6.1450239883169314235e258), rel=1e-15)
    big = bessel_i(0, 5000.0)
    ref = mpmath.log(mpmath.besseli(0, 5000))
    assert big.log() == pytest.approx(float(ref), rel=1e-15)
    assert math.isinf(float(big))


@settings(max_examples=150, deadline=None)
@given(twice_nu=st.integers(-1, 40), z=st.floats(1e-3, 300.0))
def test_bessel_against_mpmath(twice_nu, z):
    nu = Fraction(twice_nu, 2)
    ref = mpmath.besseli(mpmath.mpf(twice_nu) / 2, z)
    got = bessel_i(nu, z)
    if ref == 0:
        assert float(got) == 0.0
        return
    # compare logs so that tiny and huge values are treated alike
    assert got.log() == pytest.approx(float(mpmath.log(ref)), abs=2e-14 * max(1.0, abs(float(mpmath.log(ref)))))


@pytest.mark.parametrize("z", [0.0, 1e-300, 1e-8, 0.7, 34.999, 35.001, 80.0])
def test_bessel_switch_region(z):
    for nu in (0, 1, 2, 5):
        ref = float(mpmath.besseli(nu, z))
        assert bessel_i_float(nu, z) == pytest.approx(ref, rel=3e-15, abs=1e-300)


def test_bessel_ie():
    assert bessel_ie(0, 200.0) == pytest.approx(float(mpmath.besseli(0, 200) * mpmath.exp(-200)), rel=1e-14)


def test_bessel_errors():
    with pytest.raises(DomainError):
        bessel_i(0, -1.0)
    with pytest.raises(DomainError):
        bessel_i(-0.5, 0.0)
    with pytest.raises(DomainError):
        bessel_i(1 / 3, 1.0)
    with pytest.raises(DomainError):
        BesselOrder(81)
    assert BesselOrder.of(Fraction(5, 2)).nu == 2.5


@pytest.mark.parametrize("n", [0, 1, 2, 5])
@pytest.mark.parametrize("y", [-20.0, -1.0, 0.0, 1e-9, 3.0, 306.0, 307.0, 5000.0])
def test_reduced_bessel(n, y):
    ref = mpmath.nsum(lambda k: mpmath.mpf(y) ** k / (mpmath.factorial(k) * mpmath.factorial(k + n)), [0, mpmath.inf])
    got = reduced_bessel_scaled(n, y)
    assert float(got.mantissa) * math.exp(got.log_scale - float(mpmath.log(abs(ref)))) == pytest.approx(
        float(mpmath.sign(ref)), rel=1e-13)


def test_reduced_bessel_derivative_chain():
    # E_n' = E_{n+1}
    h = 1e-5
    for n in range(3):
        d = (reduced_bessel(n, 2.0 + h) - reduced_bessel(n, 2.0 - h)) / (2 * h)
        assert d == pytest.approx(reduced_bessel(n + 1, 2.0), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(a=st.floats(-1e6, 1e6), b=st.floats(-1e6, 1e6), ea=st.floats(-500, 500), eb=st.floats(-500, 500))
def test_scaled_value_algebra(a, b, ea, eb):
    # the float reference below underflows for tiny mantissas
    assume(a == 0 or abs(a) > 1e-100)
    assume(b == 0 or abs(b) > 1e-100)
    x = ScaledValue.normalized(a, ea)
    y = ScaledValue.normalized(b, eb)
    if x.mantissa:
        assert 1.0 <= abs(x.mantissa) < math.e
    if a and b:
        prod = x * y
        assert prod.log_scale + math.log(abs(prod.mantissa)) == pytest.approx(
            math.log(abs(a)) + ea + math.log(abs(b)) + eb, abs=1e-9)
    s = x + y
    off = max(ea, eb)
    ref = a * math.exp(ea - off) + b * math.exp(eb - off)
    got = s.mantissa * math.exp(s.log_scale - off) if s.mantissa else 0.0
    scale = abs(a) * math.exp(ea - off) + abs(b) * math.exp(eb - off)
    assert got == pytest.approx(ref, abs=1e-13 * scale)


def test_scaled_value_subnormal_mantissa():
    v = ScaledValue.normalized(1.1125369292536007e-308, 0.0)
    assert 1.0 <= v.mantissa < math.e
    assert v.log() == pytest.approx(math.log(1.1125369292536007e-308), rel=1e-14)


def test_scaled_value_float_overflow():
    # 1.1 e^709.5 is still below the largest double
    assert float(ScaledValue(1.1, 709.5)) == pytest.approx(float(mpmath.mpf(1.1) * mpmath.exp(709.5)), rel=1e-14)
    assert float(ScaledValue(1.5, 705.0)) == pytest.approx(1.5 * math.exp(705.0))
    assert float(ScaledValue(1.5, 800.0)) == math.inf
    assert float(ScaledValue(-1.5, 800.0)) == -math.inf


def test_laguerre_against_mpmath():
    assert laguerre_assoc(5, 1, -2.0) == pytest.approx(100.26666666666666667, rel=1e-14)
    assert laguerre_assoc(30, 3, 7.0) == pytest.approx(32.384883918363040031, rel=1e-11)
    for n in range(8):
        for k in range(3):
            assert laguerre_assoc(n, k, 0.37) == pytest.approx(float(mpmath.laguerre(n, k, 0.37)), rel=1e-13, abs=1e-14)
    with pytest.raises(DomainError):
        laguerre_assoc(61, 0, 1.0)


def test_gamma_half():
    for twice in range(1, 30):
        assert gamma_half(twice) == pytest.approx(math.gamma(twice / 2), rel=1e-15)
    with pytest.raises(DomainError):
        gamma_half(0)
