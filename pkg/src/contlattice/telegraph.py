"""Goldstein-Kac telegraph process: exact law, Monte Carlo paths, checks.

A particle starts at 0 with velocity ``+c`` or ``-c`` (equally likely) and
reverses direction at the events of a Poisson process of rate ``lam``.  At
time ``t`` its position has atoms of mass ``e^{-lam t}/2`` at ``+-ct`` and a
density on ``(-ct, ct)``.
"""
from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DomainError
from .quadrature import DEFAULT_SPEC, QuadratureSpec, quad
from .special import reduced_bessel_scaled

MIN_GOF_COUNT = 100_000
MIN_EXPECTED_PER_BIN = 5.0


@dataclass(frozen=True)
class TelegraphConfig:
    """Speed ``c``, switching rate ``lam``, horizon ``t`` and RNG seed."""

    c: float
    lam: float
    t: float
    seed: int = 0

    def __post_init__(self):
        for name in ("c", "lam", "t"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v}")
        if not isinstance(self.seed, (int, np.integer)):
            raise DomainError(f"seed must be an integer, got {self.seed!r}")

    @property
    def reach(self) -> float:
        """``c t``, the half-width of the support."""
        return self.c * self.t

    @property
    def atom_mass(self) -> float:
        """Total probability of no switch, ``e^{-lam t}``."""
        return math.exp(-self.lam * self.t)


class SampleKind(enum.Enum):
    ATOM_PLUS = "AtomPlus"
    ATOM_MINUS = "AtomMinus"
    CONTINUOUS = "Continuous"


@dataclass(frozen=True)
class TelegraphSample:
    kind: SampleKind
    position: float
    switch_count: int


@dataclass(frozen=True, eq=False)
class TelegraphBatch:
    """Simulated paths stored column-wise.

    ``positions[i]``, ``switch_counts[i]`` and ``initial_signs[i]`` belong to
    path ``i``; the arrays are read-only.
    """

    config: TelegraphConfig
    positions: np.ndarray
    switch_counts: np.ndarray
    initial_signs: np.ndarray

    def __post_init__(self):
        for arr in (self.positions, self.switch_counts, self.initial_signs):
            arr.setflags(write=False)

    def __len__(self):
        return len(self.positions)

    def __getitem__(self, i) -> TelegraphSample:
        n = int(self.switch_counts[i])
        if n == 0:
            kind = SampleKind.ATOM_PLUS if self.initial_signs[i] > 0 else SampleKind.ATOM_MINUS
        else:
            kind = SampleKind.CONTINUOUS
        return TelegraphSample(kind, float(self.positions[i]), n)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __eq__(self, other):
        if not isinstance(other, TelegraphBatch):
            return NotImplemented
        return (self.config == other.config
                and np.array_equal(self.positions, other.positions)
                and np.array_equal(self.switch_counts, other.switch_counts)
                and np.array_equal(self.initial_signs, other.initial_signs))

    @property
    def atom_mask(self) -> np.ndarray:
        return self.switch_counts == 0

    @property
    def atom_fraction(self) -> float:
        return float(np.mean(self.atom_mask))

    @property
    def continuous_positions(self) -> np.ndarray:
        return self.positions[~self.atom_mask]


def simulate(config: TelegraphConfig, count: int, workers: int = 1) -> TelegraphBatch:
    """Simulate ``count`` independent paths up to time ``config.t``.

    Path ``i`` draws from its own counter-based stream keyed by
    ``(seed, i)``, so the result does not depend on ``workers``.
    """
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    if workers < 1:
        raise DomainError("workers must be positive")
    c, lam, t = config.c, config.lam, config.t
    seed = int(config.seed)
    if workers == 1 or count < 10_000:
        pos, sw, sg = kernels.simulate_paths(seed, c, lam, t, 0, count)
    else:
        bounds = np.linspace(0, count, workers + 1).astype(int)
        chunks = [(int(a), int(b - a)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ch: kernels.simulate_paths(seed, c, lam, t, ch[0], ch[1]), chunks))
        pos, sw, sg = (np.concatenate(col) for col in zip(*parts))
    return TelegraphBatch(config, pos, sw, sg)


def switch_times(config: TelegraphConfig, index: int) -> list[float]:
    """Velocity reversal times of path ``index`` (same stream as :func:`simulate`)."""
    if index < 0:
        raise DomainError("path index must be non-negative")
    return list(kernels.path_switch_times(int(config.seed), config.c, config.lam, config.t, index))


def density(config: TelegraphConfig, s: float) -> float:
    """Density of the continuous part at ``|s| < ct``.

    ``(e^{-lam t} / 2c) [lam I_0(z) + lam t c / sqrt(c^2 t^2 - s^2) I_1(z)]``
    with ``z = (lam/c) sqrt(c^2 t^2 - s^2)``, evaluated as
    ``lam E_0(Y) + (lam^2 t / 2) E_1(Y)``, ``Y = z^2 / 4``.
    """
    c, lam, t = config.c, config.lam, config.t
    if not abs(s) < c * t:
        raise DomainError(f"|s| = {abs(s)} must be below ct = {c * t}; the atoms sit at +-ct")
    ratio = lam / c
    y = 0.25 * ratio * ratio * (c * t - s) * (c * t + s)
    body = reduced_bessel_scaled(0, y) * lam + reduced_bessel_scaled(1, y) * (0.5 * lam * lam * t)
    return float(body.scale_exp(-lam * t)) / (2.0 * c)


def continuous_mass(config: TelegraphConfig, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_{-ct}^{ct}`` of :func:`density`; equals ``1 - e^{-lam t}``."""
    r = config.reach
    return quad(lambda s: density(config, s), -r, r, spec)


def pde_residual(config: TelegraphConfig, s: float, t_probe: float, h: float = 1e-3) -> float:
    """``c^2 p_ss - p_tt - 2 lam p_t`` at ``(s, t_probe)`` by central differences."""
    c, lam = config.c, config.lam
    if h <= 0 or t_probe <= 0:
        raise DomainError("h and t_probe must be positive")
    if not abs(s) < c * t_probe - 4.0 * h * c:
        raise DomainError(f"probe ({s}, {t_probe}) too close to the light cone for h={h}")

    def p(ss, tt):
        return density(TelegraphConfig(c, lam, tt, config.seed), ss)

    mid = p(s, t_probe)
    p_ss = (p(s + h, t_probe) - 2.0 * mid + p(s - h, t_probe)) / (h * h)
    up, down = p(s, t_probe + h), p(s, t_probe - h)
    p_tt = (up - 2.0 * mid + down) / (h * h)
    p_t = (up - down) / (2.0 * h)
    return c * c * p_ss - p_tt - 2.0 * lam * p_t


@dataclass(frozen=True)
class GofResult:
    statistic: float
    dof: int
    bins_used: int

    def critical(self, level: float = 0.999) -> float:
        from scipy.stats import chi2

        return float(chi2.ppf(level, self.dof))

    def passed(self, level: float = 0.999) -> bool:
        return self.statistic < self.critical(level)


def _fold_bins(observed: list[float], expected: list[float]):
    # merge any bin with expected count below the threshold into its neighbour
    obs, exp = list(observed), list(expected)
    i = 0
    while i < len(exp) and len(exp) > 1:
        if exp[i] < MIN_EXPECTED_PER_BIN:
            j = i + 1 if i + 1 < len(exp) else i - 1
            obs[j] += obs[i]
            exp[j] += exp[i]
            del obs[i], exp[i]
            i = max(0, i - 1)
        else:
            i += 1
    return obs, exp


def histogram_gof(config: TelegraphConfig, count: int, bins: int = 40,
                  batch: TelegraphBatch | None = None) -> GofResult:
    """Pearson chi-squared of the continuous part against :func:`density`.

    Only paths with at least one switch enter; their law is the density
    divided by ``1 - e^{-lam t}``.  Bins run over ``(-ct, ct)`` with equal
    width and bins with few expected hits are folded into a neighbour.
    """
    if count < MIN_GOF_COUNT:
        raise DomainError(f"count must be at least {MIN_GOF_COUNT}, got {count}")
    if bins < 2:
        raise DomainError("need at least two bins")
    if batch is None:
        batch = simulate(config, count)
    xs = batch.continuous_positions
    n = xs.size
    r = config.reach
    edges = np.linspace(-r, r, bins + 1)
    observed, _ = np.histogram(xs, bins=edges)
    cond = -math.expm1(-config.lam * config.t)
    probs = [quad(lambda s: density(config, s), edges[k], edges[k + 1]) / cond for k in range(bins)]
    obs, exp = _fold_bins([float(o) for o in observed], [n * q for q in probs])
    stat = math.fsum((o - e) ** 2 / e for o, e in zip(obs, exp))
    return GofResult(stat, len(exp) - 1, len(exp))


def write_samples_csv(batch: TelegraphBatch, handle) -> None:
    """Columns ``kind,position,switch_count``; floats in shortest round-trip form."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["kind", "position", "switch_count"])
    for sample in batch:
        writer.writerow([sample.kind.value, repr(sample.position), sample.switch_count])


def write_switch_times_csv(config: TelegraphConfig, indices, handle) -> None:
    """One ragged row per path: ``index,t_1,t_2,...``."""
    writer = csv.writer(handle, lineterminator="\n")
    for i in indices:
        writer.writerow([i] + [repr(v) for v in switch_times(config, i)])
