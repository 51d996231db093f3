# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo kernels; must agree bit-for-bit with _fallback.py."""

import numpy as np

from libc.stdint cimport uint64_t, uint8_t, int8_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t stream_key(uint64_t seed, uint64_t stream) nogil:
    return mix64(seed + GOLDEN * (stream + 1))


cdef inline double draw(uint64_t key, uint64_t i) nogil:
    return <double>(mix64(key + GOLDEN * (i + 1)) >> 11) * TWO_M53


def uniforms(seed, stream, Py_ssize_t n):
    cdef uint64_t key = stream_key(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF), <uint64_t>stream)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = draw(key, i)
    return out


def source_bits(int kind, double eps, seed, uint64_t stream, Py_ssize_t n):
    cdef uint64_t key = stream_key(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF), stream)
    out = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] o = out
    cdef Py_ssize_t i
    cdef double u
    cdef uint8_t prev = 0
    with nogil:
        for i in range(n):
            u = draw(key, i)
            if kind == 0:
                o[i] = u < 0.5
            elif kind == 1:
                o[i] = u < 0.5 + eps
            else:
                if i == 0:
                    o[i] = u < 0.5
                elif u < 0.5 + eps:
                    o[i] = prev
                else:
                    o[i] = 1 - prev
                prev = o[i]
    return out


def sample_rounds(const uint8_t[::1] bits, double ps0, double ps1,
                  double pz0, double pz1, seed, uint64_t herald_stream,
                  uint64_t measure_stream):
    cdef Py_ssize_t n = bits.shape[0]
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t kh = stream_key(s, herald_stream)
    cdef uint64_t km = stream_key(s, measure_stream)
    success = np.empty(n, dtype=np.uint8)
    outcome = np.empty(n, dtype=np.int8)
    cdef uint8_t[::1] so = success
    cdef int8_t[::1] oo = outcome
    cdef Py_ssize_t i
    cdef double ps, pz
    with nogil:
        for i in range(n):
            if bits[i]:
                ps = ps1
                pz = pz1
            else:
                ps = ps0
                pz = pz0
            if draw(kh, i) < ps:
                so[i] = 1
                oo[i] = 0 if draw(km, i) < pz else 1
            else:
                so[i] = 0
                oo[i] = -1
    return success, outcome
