"""Pure-Python implementation of the hot kernels.

Mirrors ``_kernels.pyx`` function for function. It is selected when the
compiled extension is unavailable or when ``CONTLATTICE_PURE_PYTHON`` is
set in the environment.
"""
import math

import numpy as np

BACKEND = "python"

# Series/asymptotic crossover for I_nu(z).
Z_SWITCH = 35.0
# Same crossover in the reduced variable y = z**2 / 4.
Y_SWITCH = Z_SWITCH * Z_SWITCH / 4.0
MAX_SERIES_TERMS = 400
MAX_ASYMPTOTIC_TERMS = 120
# Negative arguments of the reduced functions are only needed close to 0.
Y_NEGATIVE_CAP = 25.0

_EPS = 2.0 ** -53

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


# Rescale the running series once a term passes this size.
_RESCALE = 1e280
_LOG_RESCALE = math.log(_RESCALE)


def _term_cap(q):
    # the terms peak near k = sqrt(q); leave room for the tail
    return MAX_SERIES_TERMS + int(2.0 * math.sqrt(abs(q)))


def _series_terms(nu, q, first):
    """Terms of ``first * sum_k q**k / (k! (nu+1)_k)``, truncated at roundoff."""
    terms = [first]
    running = abs(first)
    term = first
    k = 0
    while k < _term_cap(q):
        k += 1
        term = term * q / (k * (k + nu))
        if term == 0.0:
            break
        terms.append(term)
        running += abs(term)
        if k * k > abs(q) and abs(term) <= 1e-17 * running:
            break
    return terms


def bessel_i_scaled(twice_nu, z):
    """Return ``(m, log_scale)`` with ``I_nu(z) = m * exp(log_scale)``.

    Arguments are assumed validated by the caller: ``z >= 0`` and
    ``twice_nu >= -1``; ``z == 0`` with negative order is rejected upstream.
    """
    nu = 0.5 * twice_nu
    if twice_nu == 1:
        if z == 0.0:
            return 0.0, 0.0
        if z <= Z_SWITCH:
            return math.sqrt(2.0 / (math.pi * z)) * math.sinh(z), 0.0
        return math.sqrt(2.0 / (math.pi * z)) * 0.5 * -math.expm1(-2.0 * z), z
    if twice_nu == -1:
        if z <= Z_SWITCH:
            return math.sqrt(2.0 / (math.pi * z)) * math.cosh(z), 0.0
        return math.sqrt(2.0 / (math.pi * z)) * 0.5 * (1.0 + math.exp(-2.0 * z)), z
    if z == 0.0:
        return (1.0 if twice_nu == 0 else 0.0), 0.0
    if z <= Z_SWITCH:
        half = 0.5 * z
        first = half ** nu / math.gamma(nu + 1.0)
        return math.fsum(_series_terms(nu, half * half, first)), 0.0
    if z < nu * nu:
        # the large-argument expansion only settles once z exceeds nu**2
        return _scaled_series(nu, z)
    return _asymptotic(nu, z), z


def _scaled_series(nu, z):
    """Ascending series for large ``z``, rescaled on the fly to avoid overflow.

    All terms are positive, so summing them loses nothing but time.
    """
    half = 0.5 * z
    q = half * half
    scale = nu * math.log(half) - math.lgamma(nu + 1.0)
    terms = [1.0]
    running = 1.0
    term = 1.0
    k = 0
    while k < _term_cap(q):
        k += 1
        term = term * q / (k * (k + nu))
        terms.append(term)
        running += term
        if running > _RESCALE:
            terms = [v / _RESCALE for v in terms]
            term /= _RESCALE
            running /= _RESCALE
            scale += _LOG_RESCALE
        if k * k > q and term <= 1e-17 * running:
            break
    return math.fsum(terms), scale


def _asymptotic(nu, z):
    """``exp(-z) I_nu(z)`` from the large-argument expansion."""
    mu = 4.0 * nu * nu
    terms = [1.0]
    term = 1.0
    for k in range(1, MAX_ASYMPTOTIC_TERMS):
        nxt = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        if nxt == 0.0 or abs(nxt) >= abs(term):
            break
        terms.append(nxt)
        term = nxt
        if abs(term) < 1e-18:
            break
    return math.fsum(terms) / math.sqrt(2.0 * math.pi * z)


def reduced_bessel_scaled(n, y):
    """Return ``(m, log_scale)`` for ``E_n(y) = sum_k y**k / (k! (k+n)!)``.

    ``E_n(y) = I_n(2 sqrt y) / y**(n/2)`` for ``y > 0``; the series is entire
    and also used for small negative ``y``.
    """
    if y <= Y_SWITCH:
        return math.fsum(_series_terms(float(n), y, 1.0 / math.factorial(n))), 0.0
    m, scale = bessel_i_scaled(2 * n, 2.0 * math.sqrt(y))
    return m / y ** (0.5 * n), scale


def _mix_array(z):
    z = z + np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _uniform_array(bits):
    return (bits >> np.uint64(11)).astype(np.float64) * _EPS


def _mix(z):
    z = (z + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def stream_key(seed, index):
    """Key of the independent random stream owned by path ``index``."""
    return _mix((seed & _MASK) ^ _mix(index & _MASK))


def stream_uniform(key, draw):
    """Uniform in [0, 1) for draw number ``draw`` of the stream ``key``."""
    return (_mix((key + draw) & _MASK) >> 11) * _EPS


def simulate_paths(seed, c, lam, t, start, count):
    """Simulate ``count`` telegraph paths with indices ``start, start+1, ...``.

    Returns ``(positions, switch_counts, initial_signs)`` as numpy arrays.
    """
    with np.errstate(over="ignore"):
        idx = np.arange(start, start + count, dtype=np.uint64)
        keys = _mix_array(np.uint64(seed & _MASK) ^ _mix_array(idx))
        u0 = _uniform_array(_mix_array(keys))
        signs = np.where(u0 < 0.5, 1, -1).astype(np.int8)
        velocity = signs.astype(np.float64) * c
        position = np.zeros(count)
        elapsed = np.zeros(count)
        switches = np.zeros(count, dtype=np.int64)
        active = np.arange(count)
        draw = 1
        while active.size:
            u = _uniform_array(_mix_array(keys[active] + np.uint64(draw)))
            tau = -np.log1p(-u) / lam
            arrival = elapsed[active] + tau
            stop = arrival >= t
            done = active[stop]
            position[done] += velocity[done] * (t - elapsed[done])
            go = active[~stop]
            position[go] += velocity[go] * tau[~stop]
            elapsed[go] += tau[~stop]
            velocity[go] = -velocity[go]
            switches[go] += 1
            active = go
            draw += 1
    return position, switches, signs


def path_switch_times(seed, c, lam, t, index):
    """Switch times of one path; consistent with :func:`simulate_paths`."""
    key = stream_key(seed, index)
    times = []
    elapsed = 0.0
    draw = 1
    while True:
        u = stream_uniform(key, draw)
        tau = -math.log1p(-u) / lam
        arrival = elapsed + tau
        if arrival >= t:
            return times
        elapsed += tau
        times.append(elapsed)
        draw += 1
