"""Vectorized numpy versions of the Monte-Carlo kernels.

Every draw is a pure function of (seed, stream, round index):

    key    = mix64(seed + GOLDEN * (stream + 1))
    u[i]   = (mix64(key + GOLDEN * (i + 1)) >> 11) * 2**-53

with ``mix64`` the splitmix64 finalizer and all arithmetic mod 2**64.
Rounds can therefore be generated in any order or in parallel.
"""

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = 0xFFFFFFFFFFFFFFFF


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _key(seed, stream):
    with np.errstate(over="ignore"):
        return mix64(np.uint64(seed & _MASK) + GOLDEN * np.uint64(stream + 1))


def _draws(key, n):
    idx = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = mix64(key + GOLDEN * idx)
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def uniforms(seed, stream, n):
    return _draws(_key(seed, stream), n)


def source_bits(kind, eps, seed, stream, n):
    u = _draws(_key(seed, stream), n)
    if kind == 0:
        return (u < 0.5).astype(np.uint8)
    if kind == 1:
        return (u < 0.5 + eps).astype(np.uint8)
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    # repeat the previous bit when u < 1/2 + eps, i.e. flip otherwise
    flips = (u >= 0.5 + eps).astype(np.uint8)
    flips[0] = 0
    first = np.uint8(u[0] < 0.5)
    return ((np.cumsum(flips, dtype=np.int64) + first) & 1).astype(np.uint8)


def sample_rounds(bits, ps0, ps1, pz0, pz1, seed, herald_stream, measure_stream):
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.size
    uh = _draws(_key(seed, herald_stream), n)
    um = _draws(_key(seed, measure_stream), n)
    ps = np.where(bits == 1, ps1, ps0)
    pz = np.where(bits == 1, pz1, pz0)
    success = (uh < ps).astype(np.uint8)
    outcome = np.where(success == 1, np.where(um < pz, 0, 1), -1).astype(np.int8)
    return success, outcome
