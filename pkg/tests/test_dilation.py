import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsim.dilation import (
    apply_postselected,
    branch_probabilities,
    channel_equivalence_error,
    dilate,
    phi_plus_success_probability,
    sample_round,
)
from ptsim.errors import DomainError, InvalidArgumentError
from ptsim.hamiltonian import specific_time_operator
from ptsim.linalg import DensityMatrix, random_density
from ptsim.states import werner


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_dilation_unitary(dim, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    res = dilate(v)
    w = res.w
    assert w.shape == (2 * dim, 2 * dim)
    assert np.max(np.abs(w.conj().T @ w - np.eye(2 * dim))) <= 1e-12
    assert np.allclose(w[:dim, :dim], res.eta * v)


def test_dilation_at_exceptional_point():
    # V is rank one here: A has a zero singular value
    w = dilate(specific_time_operator(math.pi / 2)).w
    assert np.max(np.abs(w.conj().T @ w - np.eye(4))) <= 1e-14


def test_dilate_rejects():
    with pytest.raises(InvalidArgumentError):
        dilate(np.zeros((2, 2)))
    with pytest.raises(InvalidArgumentError):
        dilate(np.ones((2, 3)))


def test_unitary_input_needs_no_ancilla():
    u = np.array([[0, 1], [1, 0]], dtype=complex)
    res = dilate(u)
    assert res.eta == pytest.approx(1.0)
    assert np.allclose(res.w[:2, 2:], 0) and np.allclose(res.w[2:, :2], 0)


def test_branch_probabilities_sum(rng):
    for _ in range(20):
        rho = random_density(4, rng)
        v = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        keep, drop = branch_probabilities(rho, v)
        assert keep + drop == pytest.approx(1.0, abs=1e-12)
        assert channel_equivalence_error(rho, v) <= 1e-12


@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0, math.pi / 2])
def test_phi_plus_success(alpha):
    _, prob = apply_postselected(werner(1.0), specific_time_operator(alpha))
    assert prob == pytest.approx(phi_plus_success_probability(alpha), abs=1e-13)


def test_half_rate_at_ep():
    assert phi_plus_success_probability(math.pi / 2) == pytest.approx(0.5)


def test_postselection_vanishing():
    # V kills Alice's |1>, which is all the state has
    with pytest.raises(DomainError):
        apply_postselected(DensityMatrix(np.diag([0, 0, 1.0, 0])), np.diag([1.0, 0.0]))


def test_sample_round_branches():
    rho = werner(1.0)
    v = specific_time_operator(math.pi / 2)
    ok, state = sample_round(rho, v, 0.1)
    assert ok and state.dim == 4
    ok, state = sample_round(rho, v, 0.9)
    assert not ok and state is not None
