import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsim.errors import InvalidArgumentError
from ptsim.linalg import SPIN1, kron, partial_trace
from ptsim.states import (
    AliceOp,
    CanonicalQubitParams,
    NonMaxParams,
    QutritParams,
    canonical_readback,
    canonical_two_qubit,
    non_max_entangled,
    off_diagonal_correlators,
    parse_state,
    phi_plus,
    qutrit_readback,
    random_canonical_params,
    two_qutrit,
    werner,
    werner_like,
)


def test_phi_plus_amplitudes():
    assert np.allclose(phi_plus(2).amplitudes, [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])
    assert np.allclose(phi_plus(3).amplitudes[[0, 4, 8]], 1 / math.sqrt(3))


@pytest.mark.parametrize("d", [2, 3])
def test_werner_like_range(d):
    lo = -1 / (d * d - 1)
    werner_like(d, lo)
    werner_like(d, 1.0)
    with pytest.raises(InvalidArgumentError, match="PSD range"):
        werner_like(d, lo - 0.01)
    with pytest.raises(InvalidArgumentError):
        werner_like(d, 1.01)


def test_werner_is_canonical():
    p = 0.6
    params = canonical_readback(werner(p))
    assert np.allclose(params.m, 0) and np.allclose(params.m_prime, 0)
    assert np.allclose(params.c, [p, -p, p])
    assert off_diagonal_correlators(werner(p)) < 1e-15


def test_nonmax_reduces_to_phi_plus():
    rho = non_max_entangled(NonMaxParams(1.0, 1.0))
    # (|++> + |-->)/sqrt2 is the same ket as Phi+
    assert np.allclose(rho.mat, phi_plus(2).projector())
    with pytest.raises(InvalidArgumentError):
        non_max_entangled(NonMaxParams(0.0, 0.0))


def test_canonical_roundtrip(rng):
    for _ in range(20):
        params = random_canonical_params(rng)
        back = canonical_readback(canonical_two_qubit(params))
        for a, b in ((params.m, back.m), (params.m_prime, back.m_prime), (params.c, back.c)):
            assert np.allclose(a, b, atol=1e-14)


def test_canonical_rejects_non_psd():
    with pytest.raises(InvalidArgumentError, match="non-PSD"):
        canonical_two_qubit(CanonicalQubitParams(c=(1.0, 1.0, 1.0)))


def test_random_real_params(rng):
    for _ in range(20):
        p = random_canonical_params(rng, real=True)
        assert p.m_y == 0 and p.c_yy == 0


def test_flipped_matches_operator(rng):
    x = AliceOp.FLIP_X.matrix(2)
    for _ in range(10):
        params = random_canonical_params(rng)
        a = kron(x, np.eye(2))
        rho = canonical_two_qubit(params).mat
        want = canonical_two_qubit(params.flipped()).mat
        assert np.allclose(a @ rho @ a, want)


def test_qutrit_readback_factors(rng):
    params = QutritParams(m=(0.1, -0.05, 0.08), m_prime=(0.02, 0.03, -0.1), c=(0.1, 0.05, -0.07))
    rho = two_qutrit(params)
    back = qutrit_readback(rho)
    assert np.allclose(back.m, params.m) and np.allclose(back.c, params.c)
    # spin-1 traces behind the factors
    for s in SPIN1:
        assert np.trace(s @ s).real == pytest.approx(2.0)


def test_alice_op_matrices():
    assert np.allclose(AliceOp.FLIP_X.matrix(3), np.fliplr(np.eye(3)))
    assert np.allclose(AliceOp.IDENTITY.matrix(3), np.eye(3))


@pytest.mark.parametrize(
    "spec,family",
    [
        ("phi-plus", "phi-plus"),
        ("product", "product"),
        ("werner:0.3", "werner"),
        ("nonmax:0.2,0.9", "nonmax"),
        ("canonical:0,0.1,0,0,0,0.2,0.3,-0.1,0.2", "canonical"),
        ("qutrit:0,0,0,0,0,0,0.1,0,0", "qutrit"),
    ],
)
def test_parse_state(spec, family):
    assert parse_state(spec).origin[0] == family


def test_parse_state_errors():
    with pytest.raises(InvalidArgumentError, match="needs a value"):
        parse_state("werner")
    with pytest.raises(InvalidArgumentError, match="unknown"):
        parse_state("ghz")
    with pytest.raises(InvalidArgumentError, match="expects 2"):
        parse_state("nonmax:1")
    assert parse_state("werner-like", p=0.5, dim=3).dim == 9


@settings(max_examples=50, deadline=None)
@given(st.floats(-1 / 8, 1.0))
def test_werner_like_reduced_is_maximally_mixed(p):
    rho = werner_like(3, p)
    assert np.allclose(partial_trace(rho, 3, 3, keep="B").mat, np.eye(3) / 3)
    assert np.linalg.eigvalsh(rho.mat).min() >= -1e-12
