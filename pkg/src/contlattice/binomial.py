"""Continuous binomial coefficients and the atom+density convolution algebra.

The closed form is written through the entire functions
``E_n(y) = I_n(2 sqrt y) / y^(n/2)``::

    <x s> = 2 E_0(y) + x E_1(y),   y = s (x - s)

which is symmetric in ``s <-> x - s`` by construction and has no 0/0 at the
boundary (``<x 0> = x + 2``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .quadrature import DEFAULT_SPEC, QuadratureSpec, central_diff, convolve_at, quad
from .special import ScaledValue, bessel_i, laguerre_assoc, reduced_bessel, reduced_bessel_scaled

# Below this s(x - s) the closed form is replaced by its two-term expansion.
BOUNDARY_THRESHOLD = 1e-24
DEFAULT_STEP = 1e-3
DEFAULT_SUPPORT = 8.0
DEFAULT_DIFF_STEP = 1e-3


@dataclass(frozen=True)
class BinomParams:
    """Validated argument pair ``0 <= s <= x``."""

    x: float
    s: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.s)):
            raise DomainError("cbinom arguments must be finite")
        if not 0.0 <= self.s <= self.x:
            raise DomainError(f"cbinom needs 0 <= s <= x, got x={self.x}, s={self.s}")

    @property
    def y(self) -> float:
        return self.s * (self.x - self.s)


def _kernel(x: float, y: float) -> float:
    # 2 E_0(y) + x E_1(y), valid for any real x and y >= -25
    if abs(y) < BOUNDARY_THRESHOLD:
        return 2.0 * (1.0 + y) + x * (1.0 + 0.5 * y)
    return 2.0 * reduced_bessel(0, y) + x * reduced_bessel(1, y)


def cbinom(x: float, s: float) -> float:
    """Continuous binomial coefficient ``<x s>`` for ``0 <= s <= x``.

    >>> cbinom(1.0, 0.0)
    3.0
    """
    p = BinomParams(float(x), float(s))
    return _kernel(p.x, p.y)


def cbinom_scaled(x: float, s: float) -> ScaledValue:
    """``<x s>`` as a :class:`ScaledValue`; safe far beyond ``x ~ 700``."""
    p = BinomParams(float(x), float(s))
    if p.y < BOUNDARY_THRESHOLD:
        return ScaledValue.from_float(_kernel(p.x, p.y))
    return reduced_bessel_scaled(0, p.y) * 2.0 + reduced_bessel_scaled(1, p.y) * p.x


def cbinom_shifted(s: float, w: float) -> float:
    """``<s + w, s>`` continued analytically to small negative ``s`` or ``w``.

    The kernel only depends on ``y = s w`` and is entire in ``y``, which is
    what finite differences taken right at ``s = 0`` need.
    """
    return _kernel(s + w, s * w)


def shifted_derivative(x: float, sbar: float, order: int) -> float:
    """Exact ``d^j/dsbar^j <x + sbar, sbar>`` at fixed ``x``.

    With ``E_n' = E_{n+1}``, the ``j``-th derivative of
    ``2 E_0(sbar x) + (x + sbar) E_1(sbar x)`` is
    ``x^j (2 E_j + (x + sbar) E_{j+1}) + j x^(j-1) E_j``.
    """
    y = sbar * x
    ej = reduced_bessel(order, y)
    ej1 = reduced_bessel(order + 1, y)
    value = x ** order * (2.0 * ej + (x + sbar) * ej1)
    if order:
        value += order * x ** (order - 1) * ej
    return value


def cbinom_exp_integral(x: float, alpha: float, u: float) -> float:
    """``int_0^x <x s> alpha^s e^{u s} ds`` in closed form."""
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if x == 0:
        return 0.0
    shift = u + math.log(alpha)
    return math.exp(math.log(2.0) + 0.5 * x * shift + log_phi(x, shift))


def _log_sinh(a: float) -> float:
    if a < 1.0:
        return math.log(math.sinh(a))
    return a - math.log(2.0) + math.log1p(-math.exp(-2.0 * a))


def log_phi(x: float, shift: float) -> float:
    """``log`` of ``cosh(x R/2) - cosh(x L/2) + (2/R) sinh(x R/2)``, ``R = sqrt(4+L^2)``.

    The cosh difference is rewritten as ``2 sinh((a+b)/2) sinh((a-b)/2)`` so
    that both summands are positive and nothing cancels.
    """
    if x <= 0:
        raise DomainError("log_phi needs x > 0")
    ell = abs(shift)
    root = math.hypot(2.0, ell)
    gap = 4.0 / (root + ell)  # R - |L| without cancellation
    first = math.log(2.0) + _log_sinh(0.25 * x * (root + ell)) + _log_sinh(0.25 * x * gap)
    second = math.log(2.0 / root) + _log_sinh(0.5 * x * root)
    top = max(first, second)
    return top + math.log(math.exp(first - top) + math.exp(second - top))


def total_integral(x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_0^x <x s> ds`` by quadrature (closed form: ``2(e^x - 1)``)."""
    return quad(lambda s: cbinom(x, min(max(s, 0.0), x)), 0.0, x, spec)


def central_binomial_scaled(s: float) -> ScaledValue:
    if s < 0:
        raise DomainError(f"central binomial needs s >= 0, got {s}")
    return bessel_i(0, 2.0 * s) * 2.0 + bessel_i(1, 2.0 * s) * 2.0


def central_binomial(s: float) -> float:
    """``<2s s> = 2 I_0(2s) + 2 I_1(2s)``."""
    return float(central_binomial_scaled(s))


def central_binomial_asymptotic_ratio(s: float, decay: float = 2.0) -> float:
    """``(1/2) e^{-decay s} <2s s> sqrt(pi s)``.

    ``<2s s>`` grows like ``2 e^{2s} / sqrt(pi s)``, so the ratio tends to 1
    from below for ``decay = 2`` and vanishes for any larger decay rate.
    """
    scaled = central_binomial_scaled(s).scale_exp(-decay * s)
    return float(scaled) * 0.5 * math.sqrt(math.pi * s)


def cbinom_laplace_closed(s: float, p: float) -> float:
    """``int_0^inf e^{-pw} <s+w, s> dw = e^{s/p} ((p+1)/p)^2 - 1``."""
    return math.exp(s / p) * ((p + 1.0) / p) ** 2 - 1.0


def cbinom_laplace_tail_cut(s: float, p: float, abs_tol: float = 1e-12) -> float:
    """Truncation point for the Laplace integral of ``w -> <s+w, s>``.

    Uses ``|<s+w, s>| <= (2 + s + w) e^{2 sqrt(sw)}`` and
    ``2 sqrt(sw) <= (p/2) w + 2s/p``, which leaves an ``e^{-pw/2}`` tail.
    """
    rate = 0.5 * p
    cut = 1.0
    for _ in range(50):
        tail = math.exp(2.0 * s / p - rate * cut) * ((2.0 + s + cut) / rate + 1.0 / rate ** 2)
        if tail < abs_tol:
            return cut
        cut *= 1.25
    return cut


@dataclass(frozen=True, eq=False)
class AtomDensity:
    """``atom * delta(s) + f(s)`` on ``[0, grid_step * N]``.

    ``samples[k]`` holds ``f(k * grid_step)``, ``k = 0..N``.
    """

    atom: float
    grid_step: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if self.grid_step <= 0:
            raise ConfigurationError("grid_step must be positive")
        if samples.ndim != 1 or samples.size < 2:
            raise ConfigurationError("need at least two samples")
        if not np.all(np.isfinite(samples)) or not math.isfinite(self.atom):
            raise ConfigurationError("AtomDensity values must be finite")

    @classmethod
    def from_function(cls, f, support: float = DEFAULT_SUPPORT, step: float = DEFAULT_STEP,
                      atom: float = 0.0) -> "AtomDensity":
        n = int(round(support / step))
        if abs(n * step - support) > 1e-9 * support:
            raise ConfigurationError(f"support {support} is not a multiple of step {step}")
        grid = np.arange(n + 1) * step
        return cls(atom, step, np.array([f(s) for s in grid]))

    @property
    def n_intervals(self) -> int:
        return self.samples.size - 1

    @property
    def support(self) -> float:
        return self.grid_step * self.n_intervals

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.samples.size) * self.grid_step

    def value_at(self, s: float) -> float:
        """Continuous part at ``s`` (linear interpolation between nodes)."""
        return float(np.interp(s, self.grid, self.samples))


def trapezoid_convolution(f: np.ndarray, g: np.ndarray, step: float) -> np.ndarray:
    """``int_0^{s_k} f(u) g(s_k - u) du`` on every grid node, trapezoid rule."""
    n = f.size
    full = np.convolve(f, g)[:n]
    full -= 0.5 * (f[0] * g + g[0] * f)
    return step * full


def convolve_atom_density(f: AtomDensity, g: AtomDensity) -> AtomDensity:
    """``(a delta + f) * (b delta + g) = ab delta + a g + b f + f * g``."""
    if f.samples.size != g.samples.size:
        raise ConfigurationError("AtomDensity supports differ")
    if not math.isclose(f.grid_step, g.grid_step, rel_tol=1e-12):
        raise ConfigurationError("AtomDensity grid steps differ")
    cont = f.atom * g.samples + g.atom * f.samples
    cont = cont + trapezoid_convolution(f.samples, g.samples, f.grid_step)
    return AtomDensity(f.atom * g.atom, f.grid_step, cont)


def shifted_atom_density(s: float, support: float = DEFAULT_SUPPORT,
                         step: float = DEFAULT_STEP) -> AtomDensity:
    """``delta + <x + s, s>`` sampled in ``x``."""
    return AtomDensity.from_function(lambda w: cbinom_shifted(s, w), support, step, atom=1.0)


def central_atom_density(support: float = DEFAULT_SUPPORT, step: float = DEFAULT_STEP) -> AtomDensity:
    """``delta + <2s s>`` sampled in ``s``."""
    return AtomDensity.from_function(central_binomial, support, step, atom=1.0)


def chu_vandermonde_residual(x: float, s1: float, s2: float, h: float = DEFAULT_DIFF_STEP,
                             spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """LHS minus RHS of the continuous Chu-Vandermonde differential identity.

    LHS: ``<x+s1, s1> * <x+s2, s2> + <x+s1, s1> + <x+s2, s2>`` (convolution in x);
    RHS: ``(1 + d/dsbar)^2 <x+sbar, sbar>`` at ``sbar = s1 + s2`` with central
    differences of step ``h``. Near ``sbar = 0`` the differences use the
    analytic continuation of the kernel.
    """
    if x <= 0 or s1 < 0 or s2 < 0:
        raise DomainError("need x > 0 and s1, s2 >= 0")
    lhs = (convolve_at(lambda w: cbinom_shifted(s1, w), lambda w: cbinom_shifted(s2, w), x, spec)
           + cbinom_shifted(s1, x) + cbinom_shifted(s2, x))
    sbar = s1 + s2

    def g(sig):
        return cbinom_shifted(sig, x)

    rhs = g(sbar) + 2.0 * central_diff(g, sbar, 1, h) + central_diff(g, sbar, 2, h)
    return lhs - rhs


def chu_vandermonde_lhs(x: float, s_values, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Continuous part of ``(delta + <.+s_1, s_1>) * ... * (delta + <.+s_p, s_p>)`` at ``x``.

    Built recursively: ``H_k = H_{k-1} + f_k + H_{k-1} * f_k``.
    """
    s_values = list(s_values)
    if not s_values:
        raise DomainError("need at least one factor")
    inner = spec.with_(abs_tol=max(spec.abs_tol * 0.1, 1e-14), rel_tol=max(spec.rel_tol * 0.1, 1e-14))

    def build(k):
        f_k = lambda w, s=s_values[k]: cbinom_shifted(s, w)
        if k == 0:
            return f_k
        prev = build(k - 1)
        return lambda w: prev(w) + f_k(w) + convolve_at(prev, f_k, w, inner) if w > 0 else prev(w) + f_k(w)

    return build(len(s_values) - 1)(x)


def chu_vandermonde_pfold_residual(x: float, s_values, spec: QuadratureSpec = DEFAULT_SPEC,
                                   exponent: int | None = None) -> float:
    """p-fold identity ``prod (delta + f_i) = (1 + d/dsbar)^{2(p-1)} <x+sbar, sbar> + delta``.

    In the Laplace domain every factor is ``e^{s_i/q} (1 + 1/q)^2`` and each
    ``(1 + d/dsbar)`` contributes one ``(1 + 1/q)``, so ``p`` factors need the
    power ``2(p - 1)``; ``p = 2`` recovers the two-factor identity.
    ``exponent`` overrides that power. The right-hand side uses the exact
    derivatives of :func:`shifted_derivative` instead of finite differences.
    """
    s_values = list(s_values)
    p = len(s_values)
    if exponent is None:
        exponent = 2 * (p - 1)
    sbar = math.fsum(s_values)
    rhs = math.fsum(math.comb(exponent, j) * shifted_derivative(x, sbar, j) for j in range(exponent + 1))
    return chu_vandermonde_lhs(x, s_values, spec) - rhs


def mixed_pde_residual(u: float, sbar: float, h: float = DEFAULT_DIFF_STEP) -> float:
    """``d/du d/dsbar <u+sbar, u> - <u+sbar, u>`` by a 4-point mixed difference."""
    f = lambda a, b: cbinom_shifted(a, b)
    mixed = (f(u + h, sbar + h) - f(u + h, sbar - h) - f(u - h, sbar + h) + f(u - h, sbar - h)) / (4.0 * h * h)
    return mixed - f(u, sbar)


def rebalance_deviation(s1: float, s2: float, support: float = 4.0, step: float = DEFAULT_STEP) -> float:
    """Max relative gap between ``(d+f_{s1})*(d+f_{s2})`` and ``(d+f_m)*(d+f_m)``, ``m = (s1+s2)/2``."""
    m = 0.5 * (s1 + s2)
    left = convolve_atom_density(shifted_atom_density(s1, support, step), shifted_atom_density(s2, support, step))
    mid = shifted_atom_density(m, support, step)
    right = convolve_atom_density(mid, mid)
    if left.atom != right.atom:
        return math.inf
    return float(np.max(np.abs(left.samples - right.samples) / np.abs(right.samples)))


def laguerre_convolution_target(n: int, s: float) -> float:
    """``4 e^{2s} L_{n-1}^{(1)}(-4s)``."""
    return 4.0 * math.exp(2.0 * s) * laguerre_assoc(n - 1, 1, -4.0 * s)


def central_power(n_factors: int, support: float = DEFAULT_SUPPORT, step: float = DEFAULT_STEP) -> AtomDensity:
    """``(delta + <2s s>)^{*n_factors}`` on the grid."""
    base = central_atom_density(support, step)
    result = base
    for _ in range(n_factors - 1):
        result = convolve_atom_density(result, base)
    return result


def laguerre_convolution_check(n: int, support: float = DEFAULT_SUPPORT, step: float = DEFAULT_STEP,
                               upto: float | None = None) -> float:
    """Max relative deviation of ``(delta + <2s s>)^{*2n}`` from its Laguerre closed form.

    Compared on ``[0, upto]`` (default ``support / 2``).
    """
    if n not in (1, 2, 3):
        raise DomainError(f"n must be 1, 2 or 3, got {n}")
    power = central_power(2 * n, support, step)
    if power.atom != 1.0:
        return math.inf
    upto = support / 2 if upto is None else upto
    grid = power.grid
    mask = grid <= upto + 1e-12
    target = np.array([laguerre_convolution_target(n, s) for s in grid[mask]])
    return float(np.max(np.abs(power.samples[mask] - target) / np.abs(target)))
