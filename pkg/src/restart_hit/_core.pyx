# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Monte Carlo kernels. Mirrors ``_fallback`` draw for draw.

Each replica ``i`` owns a SplitMix64 stream keyed by ``(seed, i)``; step ``j``
consumes draws ``2j`` (restart decision) and ``2j + 1`` (move). Hitting-time
kernels return step counts, ``-1`` marking replicas that reached ``cap``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log1p
from libc.stdint cimport int64_t, uint64_t, uint8_t

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t stream_key(uint64_t seed, int64_t i) noexcept nogil:
    return mix64(mix64(seed) + <uint64_t>(i + 1) * GAMMA)


cdef inline double uniform(uint64_t key, int64_t j) noexcept nogil:
    return <double>(mix64(key + <uint64_t>(j + 1) * GAMMA) >> 11) * TWO_M53


cdef inline Py_ssize_t pick(const double[:] cdf, double u) noexcept nogil:
    # first index with u < cdf[idx]; cdf is padded with 2.0 past the last atom
    cdef Py_ssize_t lo = 0, hi = cdf.shape[0] - 1, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if u < cdf[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def chain_hitting(const double[:, :] cdf_p, const double[:] cdf_nu, const uint8_t[:] in_h,
                  double p, Py_ssize_t x0, uint64_t seed, int64_t first, int64_t count,
                  int64_t cap):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[:] res = out
    cdef int64_t i, step
    cdef uint64_t key
    cdef Py_ssize_t x
    cdef double u
    with nogil:
        for i in range(count):
            if in_h[x0]:
                res[i] = 0
                continue
            key = stream_key(seed, first + i)
            x = x0
            res[i] = -1
            for step in range(cap):
                u = uniform(key, 2 * step + 1)
                if uniform(key, 2 * step) < p:
                    x = pick(cdf_nu, u)
                else:
                    x = pick(cdf_p[x], u)
                if in_h[x]:
                    res[i] = step + 1
                    break
    return out


def lattice_hitting(int64_t r, double p, int64_t k0, uint64_t seed, int64_t first,
                    int64_t count, int64_t cap):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[:] res = out
    cdef int64_t i, step, k
    cdef uint64_t key
    with nogil:
        for i in range(count):
            if k0 == 0:
                res[i] = 0
                continue
            key = stream_key(seed, first + i)
            k = k0
            res[i] = -1
            for step in range(cap):
                if uniform(key, 2 * step) < p:
                    k = r
                elif uniform(key, 2 * step + 1) < 0.5:
                    k -= 1
                else:
                    k += 1
                if k == 0:
                    res[i] = step + 1
                    break
    return out


def expline_hitting(double mu, double a, double b, double r, double p, double x0,
                    uint64_t seed, int64_t first, int64_t count, int64_t cap):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[:] res = out
    cdef int64_t i, step
    cdef uint64_t key
    cdef double x
    with nogil:
        for i in range(count):
            if a <= x0 <= b:
                res[i] = 0
                continue
            key = stream_key(seed, first + i)
            x = x0
            res[i] = -1
            for step in range(cap):
                if uniform(key, 2 * step) < p:
                    x = r
                else:
                    x -= log1p(-uniform(key, 2 * step + 1)) / mu
                if a <= x <= b:
                    res[i] = step + 1
                    break
    return out


def chain_occupation(const double[:, :] cdf_p, const double[:] cdf_nu, double p,
                     Py_ssize_t x0, uint64_t seed, int64_t burn_in, int64_t samples):
    out = np.zeros(cdf_p.shape[0], dtype=np.int64)
    cdef int64_t[:] counts = out
    cdef uint64_t key = stream_key(seed, 0)
    cdef int64_t step
    cdef Py_ssize_t x = x0
    cdef double u
    with nogil:
        for step in range(burn_in + samples):
            u = uniform(key, 2 * step + 1)
            if uniform(key, 2 * step) < p:
                x = pick(cdf_nu, u)
            else:
                x = pick(cdf_p[x], u)
            if step >= burn_in:
                counts[x] += 1
    return out
