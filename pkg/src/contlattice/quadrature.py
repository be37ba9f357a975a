"""Adaptive Gauss-Kronrod integration and the numerical operators built on it.

All integrands are plain scalar callables ``f(x) -> float``.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DivergenceError, DomainError

# 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1]
# (non-negative half; index 1, 3, 5 are the Gauss nodes).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)
_EPS = 2.220446049250313e-16
# Hard cap on the number of panels, whatever the depth limit says.
MAX_PANELS = 20000


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and endpoint hints for :func:`integrate`.

    ``singular_left``/``singular_right`` flag ``1/sqrt(distance)``-type
    endpoint behaviour; the endpoint is then removed by the substitution
    ``u = endpoint +- v**2`` before any subdivision happens.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 30
    singular_left: bool = False
    singular_right: bool = False

    def __post_init__(self):
        if not (self.abs_tol >= 1e-14 and self.rel_tol >= 1e-14):
            raise DomainError("abs_tol and rel_tol must be >= 1e-14")
        if not 1 <= self.max_depth <= 60:
            raise DomainError("max_depth must lie in [1, 60]")

    def with_(self, **changes) -> "QuadratureSpec":
        fields = dict(abs_tol=self.abs_tol, rel_tol=self.rel_tol, max_depth=self.max_depth,
                      singular_left=self.singular_left, singular_right=self.singular_right)
        fields.update(changes)
        return QuadratureSpec(**fields)


DEFAULT_SPEC = QuadratureSpec()
SINGULAR_BOTH = QuadratureSpec(singular_left=True, singular_right=True)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    subdivisions: int


def gk15(f, a: float, b: float):
    """One 15-point Kronrod panel: ``(value, error_estimate)``."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    res_abs = abs(res_k)
    fvals = []
    for j in range(7):
        dx = half * _XGK[j]
        f1 = f(center - dx)
        f2 = f(center + dx)
        fvals.append((f1, f2))
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    mean = 0.5 * res_k
    res_asc = _WGK[7] * abs(fc - mean)
    for j in range(7):
        f1, f2 = fvals[j]
        res_asc += _WGK[j] * (abs(f1 - mean) + abs(f2 - mean))
    value = res_k * half
    res_abs *= abs(half)
    res_asc *= abs(half)
    err = abs((res_k - res_g) * half)
    # QUADPACK error scaling plus a roundoff floor
    if res_asc != 0.0 and err != 0.0:
        err = res_asc * min(1.0, (200.0 * err / res_asc) ** 1.5)
    if res_abs > 0.0:
        err = max(err, 50.0 * _EPS * res_abs)
    return value, err


def _adaptive(f, a, b, abs_tol, rel_tol, max_depth):
    value, err = gk15(f, a, b)
    if not (math.isfinite(value) and math.isfinite(err)):
        raise ConvergenceError(f"integrand not finite on [{a}, {b}]", value, err)
    # heap of (-err, a, b, value, err, depth)
    heap = [(-err, a, b, value, err, 0)]
    frozen_value = 0.0
    frozen_err = 0.0
    total, total_err = value, err
    subdivisions = 0
    while True:
        if total_err <= max(abs_tol, rel_tol * abs(total)):
            return IntegralResult(total, total_err, subdivisions)
        if not heap or len(heap) >= MAX_PANELS:
            raise ConvergenceError(
                f"tolerance not reached on [{a}, {b}] (estimate {total}, error {total_err})",
                total, total_err)
        _, lo, hi, v, e, depth = heapq.heappop(heap)
        if depth >= max_depth:
            frozen_value += v
            frozen_err += e
            continue
        mid = 0.5 * (lo + hi)
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        if not (math.isfinite(v1) and math.isfinite(v2)):
            raise ConvergenceError(f"integrand not finite on [{lo}, {hi}]", total, total_err)
        subdivisions += 1
        heapq.heappush(heap, (-e1, lo, mid, v1, e1, depth + 1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2, depth + 1))
        # resum instead of updating to keep cancellation out of the estimate
        total = math.fsum([item[3] for item in heap]) + frozen_value
        total_err = math.fsum([item[4] for item in heap]) + frozen_err


def integrate(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Integrate ``f`` over ``[a, b]`` to ``max(abs_tol, rel_tol * |value|)``.

    Raises
    ------
    DomainError
        If ``a > b``.
    ConvergenceError
        If the tolerance is not met before ``max_depth``; the exception
        carries the best estimate.
    """
    a = float(a)
    b = float(b)
    if a > b:
        raise DomainError(f"integration bounds reversed: a={a} > b={b}")
    if a == b:
        return IntegralResult(0.0, 0.0, 0)
    left, right = spec.singular_left, spec.singular_right
    if not (left or right):
        return _adaptive(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_depth)

    pieces = []
    if left and right:
        mid = 0.5 * (a + b)
        pieces.append((lambda v: 2.0 * v * f(a + v * v), math.sqrt(mid - a)))
        pieces.append((lambda v: 2.0 * v * f(b - v * v), math.sqrt(b - mid)))
    elif left:
        pieces.append((lambda v: 2.0 * v * f(a + v * v), math.sqrt(b - a)))
    else:
        pieces.append((lambda v: 2.0 * v * f(b - v * v), math.sqrt(b - a)))
    share = 1.0 / len(pieces)
    results = [
        _adaptive(g, 0.0, top, spec.abs_tol * share, spec.rel_tol, spec.max_depth)
        for g, top in pieces
    ]
    return IntegralResult(
        math.fsum(r.value for r in results),
        math.fsum(r.error_estimate for r in results),
        sum(r.subdivisions for r in results),
    )


def quad(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Value-only shorthand for :func:`integrate`."""
    return integrate(f, a, b, spec).value


def convolve_at(f, g, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``(f * g)(z) = int_0^z f(u) g(z - u) du``."""
    if z < 0:
        raise DomainError(f"convolution point must be >= 0, got {z}")
    return integrate(lambda u: f(u) * g(z - u), 0.0, z, spec).value


def laplace_tail_cut(p: float, growth: float, bound: float = 1.0, abs_tol: float = 1e-12) -> float:
    """Truncation point ``T`` with ``bound * exp((growth - p) T) / (p - growth) < abs_tol``.

    ``bound`` and ``growth`` describe ``|f(w)| <= bound * exp(growth * w)``.
    """
    if p <= growth:
        raise DivergenceError(f"Laplace transform diverges: p={p} <= growth rate {growth}")
    rate = p - growth
    return max(1.0, math.log(bound / (rate * abs_tol)) / rate)


def laplace_numeric(f, p: float, tail_cut: float, spec: QuadratureSpec = DEFAULT_SPEC,
                    growth: float | None = None) -> float:
    """Truncated Laplace transform ``int_0^tail_cut e^{-p w} f(w) dw``.

    The neglected tail is bounded by ``K e^{(growth - p) tail_cut} / (p - growth)``
    whenever ``|f(w)| <= K e^{growth w}``; pick ``tail_cut`` with
    :func:`laplace_tail_cut`.
    """
    if growth is not None and p <= growth:
        raise DivergenceError(f"Laplace transform diverges: p={p} <= growth rate {growth}")
    if tail_cut <= 0:
        raise DomainError("tail_cut must be positive")
    return integrate(lambda w: math.exp(-p * w) * f(w), 0.0, tail_cut, spec).value


def central_diff(f, x: float, order: int = 1, h: float = 1e-3) -> float:
    """Second-order central difference for the first or second derivative."""
    if h <= 0:
        raise DomainError("step h must be positive")
    if order == 1:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if order == 2:
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    raise DomainError(f"central_diff supports order 1 or 2, got {order}")
