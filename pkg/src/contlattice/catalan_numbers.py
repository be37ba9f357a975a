"""Continuous Catalan numbers ``C(x, y)``.

With ``q = (x^2 - y^2) / 4`` the closed form
``I_0(sqrt(x^2 - y^2)) - (x - y)/(x + y) I_2(sqrt(x^2 - y^2))`` becomes
``E_0(q) - ((x - y)^2 / 4) E_2(q)``, which is regular at ``x = y = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, DomainError
from .quadrature import (
    DEFAULT_SPEC,
    SINGULAR_BOTH,
    QuadratureSpec,
    convolve_at,
    laplace_numeric,
    laplace_tail_cut,
    quad,
)
from .special import bessel_i_float, reduced_bessel

SERIES_TERMS = 40


@dataclass(frozen=True)
class CatalanPoint:
    """Validated argument pair ``0 <= y <= x``."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("Catalan arguments must be finite")
        if not 0.0 <= self.y <= self.x:
            raise DomainError(f"C(x, y) needs 0 <= y <= x, got x={self.x}, y={self.y}")


def catalan(x: float, y: float = 0.0) -> float:
    """Continuous Catalan number ``C(x, y)``; ``C(x, x) = 1``."""
    pt = CatalanPoint(float(x), float(y))
    d = pt.x - pt.y
    q = 0.25 * d * (pt.x + pt.y)
    return reduced_bessel(0, q) - 0.25 * d * d * reduced_bessel(2, q)


def catalan_bessel_form(x: float, y: float) -> float:
    """The same value written literally with ``I_0`` and ``I_2``."""
    pt = CatalanPoint(float(x), float(y))
    if pt.x + pt.y == 0.0:
        return 1.0
    z = math.sqrt((pt.x - pt.y) * (pt.x + pt.y))
    return bessel_i_float(0, z) - (pt.x - pt.y) / (pt.x + pt.y) * bessel_i_float(2, z)


def catalan0(x: float) -> float:
    """``C(x) = C(x, 0) = 2 I_1(x) / x``."""
    return reduced_bessel(1, 0.25 * x * x)


def catalan0_derivative(x: float) -> float:
    """``C'(x) = 2 I_2(x) / x``."""
    if x == 0.0:
        return 0.0
    return 2.0 * bessel_i_float(2, x) / x


def polytope_volume(n: int, x: float, y: float) -> float:
    """Volume of the staircase polytope ``Lambda^n(x, y)``."""
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    pt = CatalanPoint(float(x), float(y))
    if n == 0:
        return 1.0
    num = (pt.x - pt.y) ** n * (pt.x + pt.y) ** (n - 1) * (pt.x + (2 * n + 1) * pt.y)
    return num / (4.0 ** n * math.factorial(n) * math.factorial(n + 1))


def catalan_volume_series(x: float, y: float, terms: int = SERIES_TERMS) -> float:
    """Partial sum ``sum_{n <= terms} vol(Lambda^n(x, y))``.

    The omitted tail is below ``(x+y)^{2n} / (4^n n! (n+1)!)`` summed past
    ``terms``, i.e. negligible in double precision for ``x <= 5``.
    """
    return math.fsum(polytope_volume(n, x, y) for n in range(terms + 1))


def _simplex_integral(g, x: float, y: float, spec: QuadratureSpec) -> float:
    # int_0^{(x-y)/2} int_0^{(x+y)/2 - b} g(a + 2b, a) da db
    inner = spec.with_(abs_tol=max(spec.abs_tol * 0.01, 1e-14), rel_tol=max(spec.rel_tol * 0.01, 1e-14))

    def row(b):
        top = 0.5 * (x + y) - b
        if top <= 0.0:
            return 0.0
        return quad(lambda a: g(a + 2.0 * b, a), 0.0, top, inner)

    return quad(row, 0.0, 0.5 * (x - y), spec)


def volume_recurrence_residual(n: int, x: float, y: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``vol(Lambda^{n+1}(x, y))`` minus the double integral of ``vol(Lambda^n)``."""
    if n < 0 or n > 5:
        raise DomainError(f"n must lie in [0, 5], got {n}")
    CatalanPoint(float(x), float(y))
    integral = _simplex_integral(lambda xx, yy: polytope_volume(n, xx, yy), x, y, spec)
    return polytope_volume(n + 1, x, y) - integral


def catalan_recursion_residual(x: float, y: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``C(x, y) - 1 - int int C(a + 2b, a) da db`` over the same simplex."""
    CatalanPoint(float(x), float(y))
    return catalan(x, y) - 1.0 - _simplex_integral(catalan, x, y, spec)


def catalan_convolution_residual(z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_0^z C(u) C(z - u) du - 4 C'(z)``."""
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    return convolve_at(catalan0, catalan0, z, spec) - 4.0 * catalan0_derivative(z)


def catalan_laplace(s: float) -> float:
    """``int_0^inf C(x) e^{-sx} dx = 2 / (s + sqrt(s^2 - 1))`` for ``s > 1``."""
    if not s > 1.0:
        raise DomainError(f"Laplace transform of C(x) diverges for s={s} <= 1")
    return 2.0 / (s + math.sqrt((s - 1.0) * (s + 1.0)))


def catalan_laplace_numeric(p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    # 0 <= C(x) <= e^x
    cut = laplace_tail_cut(p, 1.0, 1.0, 0.01 * spec.abs_tol)
    return laplace_numeric(catalan0, p, cut, spec, growth=1.0)


def catalan_derivative_laplace(s: float) -> float:
    """Laplace transform of ``C'``: ``-1 + 2s^2 - 2s sqrt(s^2 - 1)``."""
    if not s > 1.0:
        raise DomainError(f"Laplace transform diverges for s={s} <= 1")
    return -1.0 + 2.0 * s * s - 2.0 * s * math.sqrt((s - 1.0) * (s + 1.0))


def schlafli_catalan(x: float, y: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``C(x, y)`` from its integral representation over ``[0, pi]``."""
    pt = CatalanPoint(float(x), float(y))
    if pt.x + pt.y == 0.0:
        raise DomainError("the integral representation needs x + y > 0")
    r2 = ((pt.x - pt.y) / (pt.x + pt.y)) ** 2

    def integrand(t):
        phase = pt.y * math.sin(t)
        return math.exp(pt.x * math.cos(t)) * (math.cos(phase) - r2 * math.cos(phase - 2.0 * t))

    return quad(integrand, 0.0, math.pi, spec) / math.pi


def catalan0_sine_integral(x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``C(2x, 0) = (2/pi) int_0^pi e^{2x cos t} sin^2 t dt``."""
    return 2.0 / math.pi * quad(lambda t: math.exp(2.0 * x * math.cos(t)) * math.sin(t) ** 2,
                                0.0, math.pi, spec)


def semicircle_mgf(x: float, spec: QuadratureSpec = SINGULAR_BOTH) -> float:
    """``E e^{xZ}`` for ``Z`` with semicircle density ``(2/pi) sqrt(1 - z^2)``; equals ``C(x, 0)``."""
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}")
    spec = spec.with_(singular_left=True, singular_right=True)
    return 2.0 / math.pi * quad(lambda z: math.exp(x * z) * math.sqrt(max(0.0, 1.0 - z * z)), -1.0, 1.0, spec)


def semicircle_moment(n: int, spec: QuadratureSpec = SINGULAR_BOTH) -> float:
    """``(2/pi) int_{-1}^{1} (2z)^{2n} sqrt(1 - z^2) dz`` (the Catalan number ``C_n``)."""
    spec = spec.with_(singular_left=True, singular_right=True)
    return 2.0 / math.pi * quad(lambda z: (2.0 * z) ** (2 * n) * math.sqrt(max(0.0, 1.0 - z * z)),
                                -1.0, 1.0, spec)


def catalan_gf_closed(x: float) -> float:
    """``sum_n C_n x^n = 2 / (1 + sqrt(1 - 4x))``."""
    return 2.0 / (1.0 + math.sqrt(1.0 - 4.0 * x))


def catalan_gf_squared(x: float) -> float:
    """``2 / (1 + sqrt(1 - 4x^2))``; disagrees with the series for ``x != 0``."""
    return 2.0 / (1.0 + math.sqrt(1.0 - 4.0 * x * x))


def catalan_gf_bridge(x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_0^inf e^{-u} C(2 sqrt(x) u, 0) du`` for ``0 < x < 1/4``."""
    if x >= 0.25:
        raise DivergenceError(f"integral diverges for x={x} >= 1/4")
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    rate = 2.0 * math.sqrt(x)
    cut = laplace_tail_cut(1.0, rate, 1.0, 0.01 * spec.abs_tol)
    return laplace_numeric(lambda u: catalan0(rate * u), 1.0, cut, spec, growth=rate)


# name -> (Phi, Laplace transform of Phi)
PHI_FAMILY = {
    "exp": (lambda y: math.exp(-y), lambda q: 1.0 / (q + 1.0)),
    "one": (lambda y: 1.0, lambda q: 1.0 / q),
    "zero": (lambda y: 0.0, lambda q: 0.0),
}


def iphi_laplace_closed(phi_name: str, p: float, form: str = "corrected") -> float:
    """Laplace transform of ``I_Phi(x) = int_0^x C(x, y) Phi(y) dy`` at ``p > 1``.

    ``form="corrected"`` gives ``2 PhiTilde(r) / (p + r)``, ``r = sqrt(p^2 - 1)``.
    ``form="plus"`` gives ``2p/(p + r) PhiTilde(r) / r``, which is what one
    gets by adding instead of subtracting the ``I_2`` contribution.
    """
    if phi_name not in PHI_FAMILY:
        raise DomainError(f"unknown Phi {phi_name!r}; choose from {sorted(PHI_FAMILY)}")
    if not p > 1.0:
        raise DivergenceError(f"p={p} must exceed 1")
    transform = PHI_FAMILY[phi_name][1]
    r = math.sqrt((p - 1.0) * (p + 1.0))
    if form == "corrected":
        return 2.0 * transform(r) / (p + r)
    if form == "plus":
        return 2.0 * p / (p + r) * transform(r) / r
    raise DomainError(f"unknown form {form!r}")


def iphi_transform(phi_name: str, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``I_Phi(x) = int_0^x C(x, y) Phi(y) dy``."""
    phi = PHI_FAMILY[phi_name][0]
    return quad(lambda y: catalan(x, min(y, x)) * phi(y), 0.0, x, spec)


def iphi_laplace_check(phi_name: str, p: float, form: str = "corrected",
                       spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Numeric Laplace transform of ``I_Phi`` minus :func:`iphi_laplace_closed`."""
    closed = iphi_laplace_closed(phi_name, p, form)
    if phi_name == "zero":
        return 0.0 - closed
    inner = spec.with_(abs_tol=1e-12, rel_tol=1e-12)
    # |I_Phi(x)| <= x e^x for |Phi| <= 1; absorb x into a slightly larger rate
    growth = 1.0 + 0.25 * (p - 1.0)
    cut = laplace_tail_cut(p, growth, 4.0 / (p - 1.0), 1e-9)
    numeric = laplace_numeric(lambda x: iphi_transform(phi_name, x, inner), p, cut,
                              spec.with_(abs_tol=1e-9, rel_tol=1e-9), growth=1.0)
    return numeric - closed
