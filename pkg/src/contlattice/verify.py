"""Discrete counterparts and the identity-verification registry.

Each registered identity is a closure returning a residual together with a
tolerance; :func:`run_verification_suite` runs a selection and reports.
The CLI and the test suite both read from :data:`REGISTRY`.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

from . import catalan_numbers as cat
from . import binomial as cb
from . import distribution as dist
from . import telegraph as tg
from .errors import ConfigurationError, DomainError
from .quadrature import DEFAULT_SPEC, central_diff, laplace_numeric, laplace_tail_cut, quad
from .special import bessel_i_float

CATALAN_MAX_N = 30
# discrete sums are checked against this cap, as if held in signed 128-bit integers
INT_CAP = 2 ** 127 - 1


def discrete_catalan(n: int) -> int:
    """``C_n = (2n)! / (n! (n+1)!)`` via ``C_n = C_{n-1} 2(2n-1)/(n+1)``."""
    if n < 0 or n > CATALAN_MAX_N:
        raise DomainError(f"n must lie in [0, {CATALAN_MAX_N}], got {n}")
    value = 1
    for k in range(1, n + 1):
        value = value * 2 * (2 * k - 1) // (k + 1)
    return value


def _capped(value: int) -> int:
    if abs(value) > INT_CAP:
        raise DomainError("integer result exceeds the 128-bit cap")
    return value


def star_convolve(k1: int, k2: int, n: int) -> int:
    """``sum_{m=1}^{n-1} binom(m+k1, k1) binom(n-m+k2, k2)``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if k1 < 0 or k2 < 0:
        raise DomainError("k1 and k2 must be non-negative")
    return _capped(sum(math.comb(m + k1, k1) * math.comb(n - m + k2, k2) for m in range(1, n)))


def central_binomial_convolution(n: int) -> int:
    """``sum_k binom(2k, k) binom(2n-2k, n-k)`` (equal to ``4^n``)."""
    return _capped(sum(math.comb(2 * k, k) * math.comb(2 * n - 2 * k, n - k) for k in range(n + 1)))


def catalan_moment_check(n: int) -> float:
    """``C_n`` minus the semicircle moment quadrature."""
    if n < 0 or n > 12:
        raise DomainError(f"n must lie in [0, 12], got {n}")
    return discrete_catalan(n) - cat.semicircle_moment(n)


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class Identity:
    name: str
    check: Callable[[], float]
    tolerance: float
    description: str


@dataclass(frozen=True)
class IdentityReport:
    name: str
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: float


def _worst(values) -> float:
    # largest magnitude, keeping the sign of the worst entry
    values = list(values)
    return max(values, key=abs) if values else 0.0


def _exact_failures(pairs) -> float:
    return float(sum(1 for a, b in pairs if a != b))


def _chu_discrete():
    return _exact_failures(
        (star_convolve(k1, k2, n) + math.comb(n + k1, k1) + math.comb(n + k2, k2),
         math.comb(n + k1 + k2 + 1, k1 + k2 + 1))
        for k1 in range(7) for k2 in range(7) for n in range(1, 13))


def _catalan_conv_discrete():
    return _exact_failures(
        (discrete_catalan(n + 1) - discrete_catalan(n),
         sum(discrete_catalan(k) * discrete_catalan(n - k) for k in range(n)))
        for n in range(1, 16))


def _central_conv_discrete():
    return _exact_failures((central_binomial_convolution(n), 4 ** n) for n in range(11))


def _gf_series(x: float) -> float:
    # partial sums until the terms (ratio -> 4x) are negligible
    total, term, n = 0.0, 1.0, 0
    while term > 1e-18 and n < 400:
        total += term
        term *= x * 2 * (2 * n + 1) / (n + 2)
        n += 1
    return total


def _dist_quad(params, g):
    return quad(lambda s: g(s) * dist.pdf(params, s), 0.0, params.x, DEFAULT_SPEC.with_(abs_tol=1e-13, rel_tol=1e-13))


def _mgf_variance():
    d = dist.DistParams(2.0, 0.3)
    h = 1e-3
    m1 = central_diff(lambda u: dist.mgf(d, u), 0.0, 1, h)
    m2 = central_diff(lambda u: dist.mgf(d, u), 0.0, 2, h)
    mean = _dist_quad(d, lambda s: s)
    var = _dist_quad(d, lambda s: (s - mean) ** 2)
    return (m2 - m1 * m1) - var


def _atom_fraction_z():
    cfg = tg.TelegraphConfig(1.0, 2.0, 2.0, seed=20240611)
    n = 1_000_000
    batch = tg.simulate(cfg, n)
    p = cfg.atom_mass
    return (batch.atom_fraction - p) / math.sqrt(p * (1 - p) / n)


def _gof_ratio():
    cfg = tg.TelegraphConfig(1.0, 2.0, 1.0, seed=77)
    res = tg.histogram_gof(cfg, 1_000_000, 40)
    return res.statistic / res.critical(0.999)


def _pde_order():
    cfg = tg.TelegraphConfig(1.0, 2.0, 1.0)
    r1 = tg.pde_residual(cfg, 0.2, 1.0, 1e-3)
    r2 = tg.pde_residual(cfg, 0.2, 1.0, 5e-4)
    # observed order minus 2
    return math.log2(abs(r1 / r2)) - 2.0


_DIST_GRID = [(x, p) for x in (0.5, 2.0, 10.0) for p in (0.1, 0.5, 0.9)]


def _build_registry() -> dict[str, Identity]:
    entries = [
        Identity("cbinom_total_integral",
                 lambda: _worst((cb.total_integral(x) - 2 * math.expm1(x)) / (2 * math.expm1(x))
                                for x in (0.5, 1.0, 5.0, 20.0)),
                 1e-9, "int_0^x <x s> ds = 2(e^x - 1), relative"),
        Identity("cbinom_laplace",
                 lambda: _worst(laplace_numeric(lambda w, s=s: cb.cbinom_shifted(s, w), p,
                                                cb.cbinom_laplace_tail_cut(s, p, 1e-12))
                                - cb.cbinom_laplace_closed(s, p)
                                for s in (0.5, 1.0, 2.0) for p in (1.5, 2.0, 3.0)),
                 1e-6, "Laplace transform of w -> <s+w, s>"),
        Identity("cbinom_exp_integral",
                 lambda: _worst(cb.cbinom_exp_integral(x, a, u)
                                - quad(lambda s: cb.cbinom(x, min(s, x)) * a ** s * math.exp(u * s), 0.0, x)
                                for x, a, u in ((1.0, 0.5, 0.3), (2.5, 2.0, -0.7), (4.0, 1.0, 1.0))),
                 1e-9, "closed form of int <x s> alpha^s e^{us} ds"),
        Identity("cbinom_symmetry",
                 lambda: _worst(cb.cbinom(x, s) - cb.cbinom(x, x - s)
                                for x, s in ((2.0, 0.3), (7.0, 1.1), (30.0, 4.0))),
                 1e-12, "<x s> = <x x-s>"),
        Identity("chu_vandermonde",
                 lambda: _worst(cb.chu_vandermonde_residual(x, s1, s2, 1e-3)
                                for x, s1, s2 in ((1.0, 0.5, 0.7), (2.0, 1.0, 0.3), (1.5, 0.0, 0.0))),
                 1e-5, "differential Chu-Vandermonde identity"),
        Identity("chu_vandermonde_pfold",
                 lambda: _worst((cb.chu_vandermonde_pfold_residual(1.0, (0.3, 0.5, 0.2)),
                                 cb.chu_vandermonde_pfold_residual(0.8, (0.4, 0.4)))),
                 1e-8, "p-fold product with exponent 2(p-1)"),
        Identity("cbinom_mixed_pde",
                 lambda: _worst(cb.mixed_pde_residual(u, sb, 1e-3)
                                for u in (0.5, 1.0, 2.0) for sb in (0.5, 1.0, 2.0)),
                 1e-4, "d_u d_sbar <u+sbar, u> = <u+sbar, u>"),
        Identity("cbinom_rebalance",
                 lambda: cb.rebalance_deviation(0.3, 1.1),
                 1e-6, "convolution depends on s1 + s2 only"),
        Identity("central_binomial_convolution",
                 lambda: cb.laguerre_convolution_check(1, 4.0, 1e-3, 2.0),
                 1e-3, "(delta + <2s s>)^{*2} = delta + 4 e^{2s}"),
        Identity("laguerre_convolution",
                 lambda: cb.laguerre_convolution_check(2, 4.0, 1e-3, 2.0),
                 5e-3, "(delta + <2s s>)^{*4} via L_1^{(1)}"),
        Identity("central_binomial_laplace",
                 lambda: _worst(laplace_numeric(cb.central_binomial, p, laplace_tail_cut(p, 2.0, 4.0, 1e-12))
                                + 1.0 - math.sqrt((p + 2.0) / (p - 2.0)) for p in (3.0, 4.0, 6.0)),
                 1e-10, "Laplace transform of <2s s>"),
        Identity("central_binomial_asymptotic",
                 lambda: 1.0 - cb.central_binomial_asymptotic_ratio(100.0, 2.0),
                 1e-2, "<2s s> ~ 2 e^{2s} / sqrt(pi s)"),
        Identity("catalan_volume_series",
                 lambda: _worst(cat.catalan(x, y) - cat.catalan_volume_series(x, y)
                                for x, y in ((0.5, 0.0), (1.0, 0.5), (2.0, 1.0), (3.0, 0.0), (5.0, 2.5))),
                 1e-10, "C(x, y) = sum of polytope volumes"),
        Identity("catalan_volume_recurrence",
                 lambda: _worst(cat.volume_recurrence_residual(n, x, y)
                                for n, x, y in ((0, 2.0, 0.5), (1, 1.0, 0.0), (2, 1.5, 0.5), (3, 2.0, 1.0))),
                 1e-8, "vol(Lambda^{n+1}) as a double integral"),
        Identity("catalan_recursion",
                 lambda: _worst(cat.catalan_recursion_residual(x, y)
                                for x, y in ((1.0, 0.0), (2.0, 1.0), (1.5, 1.5))),
                 1e-8, "C = 1 + double integral of C"),
        Identity("catalan_convolution",
                 lambda: _worst(cat.catalan_convolution_residual(z) for z in (0.5, 1.0, 4.0)),
                 1e-8, "C * C = 4 C'"),
        Identity("catalan_schlafli",
                 lambda: _worst(cat.schlafli_catalan(x, y) - cat.catalan(x, y)
                                for x in (0.5, 1.0, 2.0, 3.5, 5.0)
                                for y in (0.0, 0.25 * x, 0.5 * x, 0.75 * x, x)),
                 1e-9, "integral representation of C(x, y)"),
        Identity("catalan_sine_integral",
                 lambda: _worst(cat.catalan0_sine_integral(x) - cat.catalan(2 * x) for x in (0.25, 1.0, 3.0)),
                 1e-9, "C(2x) = (2/pi) int e^{2x cos t} sin^2 t dt"),
        Identity("semicircle_mgf",
                 lambda: _worst(cat.semicircle_mgf(x) - cat.catalan(x) for x in (0.0, 1.0, 2.0, 5.0)),
                 1e-9, "semicircle moment generating function"),
        Identity("catalan_laplace",
                 lambda: _worst(cat.catalan_laplace_numeric(p) - cat.catalan_laplace(p) for p in (1.5, 2.0, 3.0)),
                 1e-9, "Laplace transform of C(x)"),
        Identity("catalan_gf_bridge",
                 lambda: _worst(cat.catalan_gf_bridge(x) - cat.catalan_gf_closed(x) for x in (0.05, 0.1, 0.2)),
                 1e-6, "int e^{-u} C(2 sqrt(x) u) du = 2/(1+sqrt(1-4x))"),
        Identity("catalan_gf_series",
                 lambda: _worst(cat.catalan_gf_bridge(x) - _gf_series(x) for x in (0.05, 0.1, 0.2)),
                 1e-6, "bridge integral vs generating-function series"),
        Identity("iphi_laplace",
                 lambda: _worst(cat.iphi_laplace_check(name, p)
                                for name, p in (("exp", 2.0), ("one", 3.0), ("zero", 2.0))),
                 1e-8, "Laplace transform of I_Phi"),
        Identity("dist_normalization",
                 lambda: _worst((dist.normalization(x, p)
                                 - quad(lambda s: cb.cbinom(x, min(s, x)) * p ** s * (1 - p) ** (x - s), 0.0, x,
                                        DEFAULT_SPEC.with_(rel_tol=1e-12)))
                                / dist.normalization(x, p) for x, p in _DIST_GRID),
                 1e-9, "closed-form normalizing constant, relative"),
        Identity("dist_pdf_integral",
                 lambda: _worst(_dist_quad(dist.DistParams(x, p), lambda s: 1.0) - 1.0 for x, p in _DIST_GRID),
                 1e-9, "density integrates to 1"),
        Identity("dist_mgf",
                 lambda: _worst(dist.mgf(dist.DistParams(x, p), u)
                                - _dist_quad(dist.DistParams(x, p), lambda s, u=u: math.exp(u * s))
                                for x, p, u in ((2.0, 0.3, 0.5), (1.0, 0.7, -1.0), (5.0, 0.5, 0.2))),
                 1e-8, "moment generating function"),
        Identity("dist_mgf_shift",
                 lambda: dist.phi(1.5, 0.3, 0.2) - dist.phi(1.5, 0.5, 0.2 + math.log(3.0 / 7.0)),
                 1e-12, "phi_{x,p}(z) = phi_{x,1/2}(z + log(p/(1-p)))"),
        Identity("dist_mgf_variance",
                 _mgf_variance, 1e-5, "mgf'' - mgf'^2 at 0 equals the variance"),
        Identity("dist_symmetric_moments",
                 lambda: _worst(dist.moment_symmetric(x, k)
                                - _dist_quad(dist.DistParams(x, 0.5), lambda s, k=k, x=x: (s - x / 2) ** k)
                                for x in (1.0, 2.0, 5.0) for k in (0, 1, 2, 3, 4)),
                 1e-8, "centered moments at p = 1/2"),
        Identity("dist_quantile",
                 lambda: _worst(dist.cdf(d, dist.quantile(d, q)) - q
                                for d in (dist.DistParams(3.0, 0.35),) for q in (0.01, 0.5, 0.99)),
                 1e-9, "cdf(quantile(q)) = q"),
        Identity("telegraph_conservation",
                 lambda: _worst(cfg.atom_mass + tg.continuous_mass(cfg) - 1.0
                                for cfg in (tg.TelegraphConfig(1, 1, 1), tg.TelegraphConfig(1, 2, 1),
                                            tg.TelegraphConfig(2, 1.3, 3))),
                 1e-8, "atoms plus density have mass 1"),
        Identity("telegraph_bridge",
                 lambda: _worst(tg.density(tg.TelegraphConfig(1.0, 2.0, 1.0), s)
                                - math.exp(-2.0) / 2 * cb.cbinom(2.0, 1.0 + s)
                                for s in (-0.9, -0.6, -0.3, -0.1, 0.0, 0.15, 0.4, 0.55, 0.7, 0.95)),
                 1e-12, "density at ct = x/2, lam = 2c is a binomial coefficient"),
        Identity("telegraph_pde",
                 lambda: _worst(tg.pde_residual(tg.TelegraphConfig(1.0, 2.0, 1.0), s, 1.0, 1e-3) for s in (0.0, 0.2, 0.5)),
                 1e-4, "telegraph equation"),
        Identity("telegraph_pde_order",
                 _pde_order, 0.5, "second-order convergence of the PDE residual"),
        Identity("telegraph_atom_fraction",
                 _atom_fraction_z, 3.0, "no-switch fraction e^{-lam t}, in standard errors"),
        Identity("telegraph_gof",
                 _gof_ratio, 1.0, "chi^2(39) statistic over its 0.999 quantile"),
        Identity("discrete_chu_vandermonde", _chu_discrete, 0.0, "star + binomials = binomial, exact"),
        Identity("discrete_catalan_convolution", _catalan_conv_discrete, 0.0, "C_{n+1} - C_n = sum C_k C_{n-k}, exact"),
        Identity("discrete_central_convolution", _central_conv_discrete, 0.0, "sum binom(2k,k) binom(2n-2k,n-k) = 4^n"),
        Identity("catalan_semicircle_moments",
                 lambda: _worst(catalan_moment_check(n) / discrete_catalan(n) for n in range(13)),
                 1e-9, "C_n as semicircle moments, relative"),
        Identity("bessel_half_order",
                 lambda: _worst(bessel_i_float(0.5, z) / (math.sqrt(2 / (math.pi * z)) * math.sinh(z)) - 1.0
                                for z in (0.1, 1.0, 10.0, 50.0)),
                 1e-14, "I_{1/2}(z) = sqrt(2/(pi z)) sinh z, relative"),
    ]
    return {e.name: e for e in entries}


REGISTRY: dict[str, Identity] = _build_registry()


def run_identity(name: str) -> IdentityReport:
    if name not in REGISTRY:
        raise ConfigurationError(f"unknown identity {name!r}")
    entry = REGISTRY[name]
    start = time.perf_counter()
    residual = float(entry.check())
    elapsed = (time.perf_counter() - start) * 1000.0
    passed = math.isfinite(residual) and abs(residual) <= entry.tolerance
    return IdentityReport(name, residual, entry.tolerance, passed, elapsed)


def format_table(reports) -> str:
    width = max([len("identity")] + [len(r.name) for r in reports])
    lines = [f"{'identity':<{width}}  {'residual':>12}  {'tolerance':>9}  {'status':<6}  {'ms':>9}"]
    for r in reports:
        lines.append(f"{r.name:<{width}}  {r.residual:>12.3e}  {r.tolerance:>9.1e}  "
                     f"{'PASS' if r.passed else 'FAIL':<6}  {r.runtime_ms:>9.1f}")
    return "\n".join(lines)


def run_verification_suite(selection=None, report_sink=None, fmt: str = "text") -> list[IdentityReport]:
    """Run the named identities (all when ``selection`` is empty or ``["all"]``).

    Reports are sorted by name and, when ``report_sink`` is given, written
    to it as an aligned table (``fmt="text"``) or JSON lines (``fmt="json"``).
    """
    if not selection or list(selection) == ["all"]:
        names = sorted(REGISTRY)
    else:
        unknown = [n for n in selection if n not in REGISTRY]
        if unknown:
            raise ConfigurationError(f"unknown identities: {', '.join(unknown)}")
        names = sorted(set(selection))
    if fmt not in ("text", "json"):
        raise ConfigurationError(f"unknown report format {fmt!r}")
    reports = [run_identity(n) for n in names]
    if report_sink is not None:
        if fmt == "json":
            for r in reports:
                report_sink.write(json.dumps(asdict(r)) + "\n")
        else:
            report_sink.write(format_table(reports) + "\n")
    return reports
