# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Bessel series/asymptotics and telegraph paths.

Behaviour matches ``_kernels_py`` exactly up to libm rounding.
"""
from libc.math cimport sqrt, sinh, cosh, exp, expm1, log, log1p, lgamma, pow, tgamma, fabs, M_PI
from libc.stdint cimport uint64_t, int64_t, int8_t

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

Z_SWITCH = 35.0
Y_SWITCH = 35.0 * 35.0 / 4.0
MAX_SERIES_TERMS = 400
MAX_ASYMPTOTIC_TERMS = 120
Y_NEGATIVE_CAP = 25.0

cdef double _Z_SWITCH = 35.0
cdef double _Y_SWITCH = 35.0 * 35.0 / 4.0
cdef double _EPS = 1.1102230246251565e-16  # 2**-53

cdef uint64_t _GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t _M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t _M2 = 0x94D049BB133111EBULL


cdef double _RESCALE = 1e280
cdef double _LOG_RESCALE = log(1e280)


cdef inline int _term_cap(double q) nogil:
    return 400 + <int>(2.0 * sqrt(fabs(q)))


cdef double _series(double nu, double q, double first) nogil:
    # Neumaier-compensated ascending series.
    cdef double total = first, comp = 0.0, running = fabs(first)
    cdef double term = first, t
    cdef int k = 0
    cdef int cap = _term_cap(q)
    while k < cap:
        k += 1
        term = term * q / (k * (k + nu))
        if term == 0.0:
            break
        t = total + term
        if fabs(total) >= fabs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        running += fabs(term)
        if k * k > fabs(q) and fabs(term) <= 1e-17 * running:
            break
    return total + comp


cdef double _asymptotic(double nu, double z) nogil:
    cdef double mu = 4.0 * nu * nu
    cdef double total = 1.0, comp = 0.0, term = 1.0, nxt, t
    cdef int k
    for k in range(1, 120):
        nxt = -term * (mu - (2 * k - 1) * (2 * k - 1)) / (8.0 * k * z)
        if nxt == 0.0 or fabs(nxt) >= fabs(term):
            break
        t = total + nxt
        if fabs(total) >= fabs(nxt):
            comp += (total - t) + nxt
        else:
            comp += (nxt - t) + total
        total = t
        term = nxt
        if fabs(term) < 1e-18:
            break
    return (total + comp) / sqrt(2.0 * M_PI * z)


cdef void _bessel_i_scaled(int twice_nu, double z, double* m, double* scale) nogil:
    cdef double nu = 0.5 * twice_nu, half
    scale[0] = 0.0
    if twice_nu == 1:
        if z == 0.0:
            m[0] = 0.0
        elif z <= _Z_SWITCH:
            m[0] = sqrt(2.0 / (M_PI * z)) * sinh(z)
        else:
            m[0] = sqrt(2.0 / (M_PI * z)) * 0.5 * -expm1(-2.0 * z)
            scale[0] = z
        return
    if twice_nu == -1:
        if z <= _Z_SWITCH:
            m[0] = sqrt(2.0 / (M_PI * z)) * cosh(z)
        else:
            m[0] = sqrt(2.0 / (M_PI * z)) * 0.5 * (1.0 + exp(-2.0 * z))
            scale[0] = z
        return
    if z == 0.0:
        m[0] = 1.0 if twice_nu == 0 else 0.0
        return
    if z <= _Z_SWITCH:
        half = 0.5 * z
        m[0] = _series(nu, half * half, pow(half, nu) / tgamma(nu + 1.0))
        return
    if z < nu * nu:
        _scaled_series(nu, z, m, scale)
        return
    m[0] = _asymptotic(nu, z)
    scale[0] = z


cdef void _scaled_series(double nu, double z, double* m, double* scale) nogil:
    # positive terms, rescaled whenever the running sum gets large
    cdef double half = 0.5 * z
    cdef double q = half * half
    cdef double total = 1.0, comp = 0.0, term = 1.0, t
    cdef int k = 0
    cdef int cap = _term_cap(q)
    scale[0] = nu * log(half) - lgamma(nu + 1.0)
    while k < cap:
        k += 1
        term = term * q / (k * (k + nu))
        t = total + term
        if total >= term:
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        if total > _RESCALE:
            total /= _RESCALE
            comp /= _RESCALE
            term /= _RESCALE
            scale[0] += _LOG_RESCALE
        if k * k > q and term <= 1e-17 * total:
            break
    m[0] = total + comp


def bessel_i_scaled(int twice_nu, double z):
    """Return ``(m, log_scale)`` with ``I_nu(z) = m * exp(log_scale)``."""
    cdef double m, scale
    _bessel_i_scaled(twice_nu, z, &m, &scale)
    return m, scale


def reduced_bessel_scaled(int n, double y):
    """Return ``(m, log_scale)`` for ``E_n(y) = sum_k y**k / (k! (k+n)!)``."""
    cdef double m, scale
    if y <= _Y_SWITCH:
        return _series(<double>n, y, 1.0 / tgamma(n + 1.0)), 0.0
    _bessel_i_scaled(2 * n, 2.0 * sqrt(y), &m, &scale)
    return m / pow(y, 0.5 * n), scale


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = z + _GAMMA
    z = (z ^ (z >> 30)) * _M1
    z = (z ^ (z >> 27)) * _M2
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t bits) nogil:
    return <double>(bits >> 11) * _EPS


def simulate_paths(seed, double c, double lam, double t, uint64_t start, Py_ssize_t count):
    """Simulate ``count`` telegraph paths with indices ``start, start+1, ...``.

    Returns ``(positions, switch_counts, initial_signs)`` as numpy arrays.
    """
    cdef uint64_t useed = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] position = np.zeros(count)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] switches = np.zeros(count, dtype=np.int64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] signs = np.zeros(count, dtype=np.int8)
    cdef double[::1] pos_v = position
    cdef int64_t[::1] sw_v = switches
    cdef int8_t[::1] sg_v = signs
    cdef Py_ssize_t i
    cdef uint64_t key, draw
    cdef double velocity, elapsed, x, tau
    cdef int64_t n
    with nogil:
        for i in range(count):
            key = _mix(useed ^ _mix(start + <uint64_t>i))
            if _uniform(_mix(key)) < 0.5:
                sg_v[i] = 1
                velocity = c
            else:
                sg_v[i] = -1
                velocity = -c
            elapsed = 0.0
            x = 0.0
            n = 0
            draw = 1
            while True:
                tau = -log1p(-_uniform(_mix(key + draw))) / lam
                if elapsed + tau >= t:
                    x += velocity * (t - elapsed)
                    break
                x += velocity * tau
                elapsed += tau
                velocity = -velocity
                n += 1
                draw += 1
            pos_v[i] = x
            sw_v[i] = n
    return position, switches, signs


def path_switch_times(seed, double c, double lam, double t, uint64_t index):
    """Switch times of one path; consistent with :func:`simulate_paths`."""
    cdef uint64_t useed = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t key = _mix(useed ^ _mix(index))
    cdef uint64_t draw = 1
    cdef double elapsed = 0.0, tau
    times = []
    while True:
        tau = -log1p(-_uniform(_mix(key + draw))) / lam
        if elapsed + tau >= t:
            return times
        elapsed += tau
        times.append(elapsed)
        draw += 1
