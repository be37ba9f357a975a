"""Modified Bessel functions, associated Laguerre polynomials, Gamma at halves.

Large arguments are carried as :class:`ScaledValue` so that ``e^z``-sized
Bessel values can be multiplied by damping factors such as ``e^{-x}``
without overflowing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._backend import kernels
from .errors import DomainError

# Largest order accepted by bessel_i, in units of 1/2.
MAX_TWICE_NU = 80
LAGUERRE_MAX_DEGREE = 60
Z_SWITCH = kernels.Z_SWITCH


@dataclass(frozen=True)
class ScaledValue:
    """A real number stored as ``mantissa * exp(log_scale)``.

    After normalization ``|mantissa|`` lies in ``[1, e)`` (or is 0), and
    ``log_scale`` is shifted by integers only, so no precision is lost when
    normalizing.
    """

    mantissa: float
    log_scale: float = 0.0

    @classmethod
    def normalized(cls, mantissa: float, log_scale: float = 0.0) -> "ScaledValue":
        if not math.isfinite(mantissa):
            raise DomainError(f"mantissa must be finite, got {mantissa}")
        if mantissa == 0.0:
            return cls(0.0, 0.0)
        shift = math.floor(math.log(abs(mantissa)))
        half = shift // 2
        # two factors so that subnormal mantissas do not overflow exp()
        m = mantissa * math.exp(-half) * math.exp(half - shift) if shift else mantissa
        # floor(log) can be off by one ulp at the interval edges
        while abs(m) >= math.e:
            m /= math.e
            shift += 1
        while abs(m) < 1.0:
            m *= math.e
            shift -= 1
        return cls(m, log_scale + shift)

    @classmethod
    def from_float(cls, value: float) -> "ScaledValue":
        return cls.normalized(value, 0.0)

    def __float__(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        if self.log_scale > 700.0:
            # split so that exp() does not raise before the product rounds
            half = 0.5 * self.log_scale
            try:
                return self.mantissa * math.exp(half) * math.exp(self.log_scale - half)
            except OverflowError:
                return math.copysign(math.inf, self.mantissa)
        return self.mantissa * math.exp(self.log_scale)

    def log(self) -> float:
        """Natural log of the (positive) value."""
        if self.mantissa <= 0.0:
            raise DomainError("log of a non-positive ScaledValue")
        return math.log(self.mantissa) + self.log_scale

    def __mul__(self, other):
        if isinstance(other, ScaledValue):
            return ScaledValue.normalized(self.mantissa * other.mantissa,
                                          self.log_scale + other.log_scale)
        return ScaledValue.normalized(self.mantissa * float(other), self.log_scale)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledValue):
            return ScaledValue.normalized(self.mantissa / other.mantissa,
                                          self.log_scale - other.log_scale)
        return ScaledValue.normalized(self.mantissa / float(other), self.log_scale)

    def __add__(self, other):
        if not isinstance(other, ScaledValue):
            other = ScaledValue.from_float(float(other))
        if self.mantissa == 0.0:
            return other
        if other.mantissa == 0.0:
            return self
        big, small = (self, other) if self.log_scale >= other.log_scale else (other, self)
        gap = small.log_scale - big.log_scale
        return ScaledValue.normalized(big.mantissa + small.mantissa * math.exp(gap), big.log_scale)

    __radd__ = __add__

    def __neg__(self):
        return ScaledValue(-self.mantissa, self.log_scale)

    def __sub__(self, other):
        if not isinstance(other, ScaledValue):
            other = ScaledValue.from_float(float(other))
        return self + (-other)

    def scale_exp(self, exponent: float) -> "ScaledValue":
        """Return ``self * exp(exponent)`` exactly in the exponent."""
        return ScaledValue(self.mantissa, self.log_scale + exponent)


@dataclass(frozen=True)
class BesselOrder:
    """Order ``nu = twice_nu / 2`` of a modified Bessel function."""

    twice_nu: int

    def __post_init__(self):
        if not isinstance(self.twice_nu, int) or isinstance(self.twice_nu, bool):
            raise DomainError(f"twice_nu must be an integer, got {self.twice_nu!r}")
        if self.twice_nu < -1 or self.twice_nu > MAX_TWICE_NU:
            raise DomainError(f"order nu={self.twice_nu}/2 outside [-1/2, {MAX_TWICE_NU}/2]")

    @classmethod
    def of(cls, nu) -> "BesselOrder":
        """Build from an integer, half-integer float or Fraction."""
        if isinstance(nu, BesselOrder):
            return nu
        twice = Fraction(nu) * 2
        if twice.denominator != 1:
            raise DomainError(f"only integer and half-integer orders are supported, got {nu}")
        return cls(int(twice))

    @property
    def nu(self) -> float:
        return 0.5 * self.twice_nu


def bessel_i(order, z: float) -> ScaledValue:
    """Modified Bessel function of the first kind ``I_nu(z)`` for ``z >= 0``.

    Parameters
    ----------
    order : BesselOrder, int, float or Fraction
        ``nu`` in ``{-1/2, 0, 1/2, 1, ...}``.
    z : float
        Non-negative argument.

    Returns
    -------
    ScaledValue
        Ascending series for ``z <= 35``, the large-argument expansion of
        ``e^{-z} I_nu(z)`` beyond; ``nu = +-1/2`` use ``sinh``/``cosh``.
    """
    order = BesselOrder.of(order)
    z = float(z)
    if not z >= 0.0 or math.isinf(z):
        raise DomainError(f"bessel_i needs finite z >= 0, got {z}")
    if z == 0.0 and order.twice_nu < 0:
        raise DomainError("I_{-1/2} is unbounded at z = 0")
    m, scale = kernels.bessel_i_scaled(order.twice_nu, z)
    return ScaledValue.normalized(m, scale)


def bessel_i_float(order, z: float) -> float:
    """``float(bessel_i(order, z))``; overflows to ``inf`` past ``z ~ 713``."""
    return float(bessel_i(order, z))


def bessel_ie(order, z: float) -> float:
    """Exponentially scaled ``e^{-z} I_nu(z)``."""
    return float(bessel_i(order, z).scale_exp(-float(z)))


def reduced_bessel_scaled(n: int, y: float) -> ScaledValue:
    """Entire function ``E_n(y) = sum_k y^k / (k! (k+n)!)``.

    For ``y > 0`` this is ``I_n(2 sqrt(y)) / y^(n/2)``; it removes the
    removable singularities of the closed forms at ``y = 0`` and continues
    them to small negative ``y`` (where it becomes a ``J_n`` expression).
    """
    if n < 0 or n > MAX_TWICE_NU // 2:
        raise DomainError(f"reduced Bessel order {n} out of range")
    y = float(y)
    if not math.isfinite(y) or y < -kernels.Y_NEGATIVE_CAP:
        raise DomainError(f"reduced Bessel argument {y} out of range")
    m, scale = kernels.reduced_bessel_scaled(n, y)
    return ScaledValue.normalized(m, scale)


def reduced_bessel(n: int, y: float) -> float:
    """Float-valued :func:`reduced_bessel_scaled` (hot path inside integrands)."""
    if 0 <= y <= kernels.Y_SWITCH and 0 <= n <= MAX_TWICE_NU // 2:
        return kernels.reduced_bessel_scaled(n, y)[0]
    return float(reduced_bessel_scaled(n, y))


def laguerre_assoc(n: int, k: int, x: float) -> float:
    """Associated Laguerre polynomial ``L_n^(k)(x)`` by three-term recurrence."""
    if n < 0 or k < 0:
        raise DomainError("degree and parameter must be non-negative")
    if n > LAGUERRE_MAX_DEGREE:
        raise DomainError(f"degree {n} above the supported cap {LAGUERRE_MAX_DEGREE}")
    prev, cur = 1.0, 1.0 + k - x
    if n == 0:
        return prev
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur


def gamma_half(twice_a: int) -> float:
    """``Gamma(twice_a / 2)`` for a positive integer ``twice_a``."""
    if twice_a < 1:
        raise DomainError(f"Gamma argument {twice_a}/2 must be positive")
    if twice_a % 2 == 0:
        return float(math.factorial(twice_a // 2 - 1))
    m = (twice_a - 1) // 2
    # Gamma(m + 1/2) = sqrt(pi) (2m)! / (4^m m!)
    return math.sqrt(math.pi) * float(Fraction(math.factorial(2 * m), 4 ** m * math.factorial(m)))
