import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsim import _kernels
from ptsim._kernels import fallback

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

core = _kernels.compiled()
backends = [pytest.param(fallback, id="python")]
if core is not None:
    backends.append(pytest.param(core, id="cython"))


def _mix(z):
    # reference splitmix64 finalizer on Python ints
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def _ref_uniforms(seed, stream, n):
    key = _mix((seed + GOLDEN * (stream + 1)) & MASK)
    return [(_mix((key + GOLDEN * (i + 1)) & MASK) >> 11) * 2.0**-53 for i in range(n)]


def test_splitmix_known_value():
    # first output of the reference splitmix64 generator seeded with 0
    assert _mix(GOLDEN) == 0xE220A8397B1DCDAF


@pytest.mark.parametrize("mod", backends)
def test_uniforms_match_reference(mod):
    for seed, stream in [(0, 0), (42, 1), (2**63 + 5, 2)]:
        got = mod.uniforms(seed, stream, 64)
        assert got.tolist() == _ref_uniforms(seed, stream, 64)


@pytest.mark.parametrize("mod", backends)
def test_uniform_range_and_mean(mod):
    u = mod.uniforms(9, 0, 200_000)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 5 * np.sqrt(1 / 12 / u.size)


@pytest.mark.parametrize("mod", backends)
def test_source_bias(mod):
    n = 200_000
    for eps in (0.0, 0.2):
        bits = mod.source_bits(1, eps, 5, 0, n)
        sigma = np.sqrt(0.25 / n)
        assert abs(bits.mean() - (0.5 + eps)) < 5 * sigma


@pytest.mark.parametrize("mod", backends)
def test_markov_repeat_rate(mod):
    bits = mod.source_bits(2, 0.3, 11, 0, 200_000).astype(int)
    repeat = np.mean(bits[1:] == bits[:-1])
    assert abs(repeat - 0.8) < 0.005
    # marginal stays fair
    assert abs(bits.mean() - 0.5) < 0.02


@pytest.mark.parametrize("mod", backends)
def test_sample_rounds_semantics(mod):
    bits = np.array([0, 1] * 5000, dtype=np.uint8)
    success, outcome = mod.sample_rounds(bits, 1.0, 0.0, 1.0, 0.0, 3, 1, 2)
    assert np.all(success[bits == 0] == 1) and np.all(success[bits == 1] == 0)
    assert np.all(outcome[bits == 0] == 0) and np.all(outcome[bits == 1] == -1)


@pytest.mark.skipif(core is None, reason="compiled kernels not built")
@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 2**64 - 1),
    st.integers(0, 1000),
    st.sampled_from([0, 1, 2]),
    st.floats(0, 0.5),
    st.floats(0, 1),
    st.floats(0, 1),
)
def test_backends_bit_identical(seed, n, kind, eps, ps, pz):
    a = fallback.source_bits(kind, eps, seed, 0, n)
    b = core.source_bits(kind, eps, seed, 0, n)
    assert np.array_equal(a, b)
    ra = fallback.sample_rounds(a, ps, 1 - ps, pz, 1 - pz, seed, 1, 2)
    rb = core.sample_rounds(a, ps, 1 - ps, pz, 1 - pz, seed, 1, 2)
    assert all(np.array_equal(x, y) and x.dtype == y.dtype for x, y in zip(ra, rb))
    assert np.array_equal(fallback.uniforms(seed, 3, n), core.uniforms(seed, 3, n))


def test_env_forces_fallback():
    code = "import ptsim._kernels as k; print(k.BACKEND)"
    env = dict(os.environ, PTSIM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_backend_reported():
    assert _kernels.BACKEND == ("cython" if core is not None and not os.environ.get("PTSIM_PURE_PYTHON") else "python")
