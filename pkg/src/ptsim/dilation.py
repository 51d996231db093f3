"""Unitary dilation of a non-unitary evolution with ancilla post-selection.

The joint unitary acts on ancilla (x) system, ancilla first. Preparing the
ancilla in |0> and post-selecting outcome 0 applies ``eta * V`` to the
system; outcome 1 is the discarded branch.
"""

from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import DomainError, InvalidArgumentError
from .hamiltonian import evolve_state
from .linalg import DensityMatrix, as_matrix, max_singular_value


@dataclass(frozen=True, eq=False)
class DilationResult:
    eta: float
    contraction: np.ndarray
    w: np.ndarray

    @property
    def dim(self):
        return self.contraction.shape[0]


def dilate(v):
    """Embed the contraction A = V / sigma_max(V) as the top-left block of

        W = [[A, sqrt(I - A A^dag)], [sqrt(I - A^dag A), -A^dag]].

    Both defect blocks are formed in the singular basis of A. Taking the
    two square roots independently leaves errors of order sqrt(machine
    epsilon) in W^dag W whenever sigma_max(A) = 1, which is always.
    """
    v = as_matrix(v, "v")
    if v.shape[0] != v.shape[1]:
        raise InvalidArgumentError(f"v must be square, got shape {v.shape}")
    smax = max_singular_value(v)
    if smax < TOL.min_norm:
        raise InvalidArgumentError("cannot dilate the zero matrix")
    eta = 1.0 / smax
    a = eta * v
    u, sig, vh = np.linalg.svd(a)
    sig = np.clip(sig, 0.0, 1.0)
    c = np.sqrt((1.0 - sig) * (1.0 + sig))
    left = (u * c) @ u.conj().T
    right = (vh.conj().T * c) @ vh
    w = np.block([[a, left], [right, -a.conj().T]])
    return DilationResult(eta, a, w)


def _joint(rho_ab, v_on_a):
    v = as_matrix(v_on_a, "v_on_a")
    d_a = v.shape[0]
    if rho_ab.dim % d_a:
        raise InvalidArgumentError(
            f"operator of size {d_a} does not divide state dimension {rho_ab.dim}"
        )
    d_b = rho_ab.dim // d_a
    dil = dilate(v)
    big = np.kron(dil.w, np.eye(d_b))
    anc0 = np.zeros((2, 2))
    anc0[0, 0] = 1.0
    out = big @ np.kron(anc0, rho_ab.mat) @ big.conj().T
    n = rho_ab.dim
    # ancilla is the most significant index: block (k, k) is branch k
    return dil, out[:n, :n], out[n:, n:]


def branch_probabilities(rho_ab, v_on_a):
    """(success, failure) probabilities of the ancilla measurement."""
    _, keep, drop = _joint(rho_ab, v_on_a)
    return float(np.trace(keep).real), float(np.trace(drop).real)


def apply_postselected(rho_ab, v_on_a):
    """Run the dilation on Alice's half and keep ancilla outcome 0.

    Returns ``(state, success_prob)``; the state equals the normalized
    direct evolution ``(V x I) rho (V x I)^dag / Tr[...]``.
    """
    _, keep, _ = _joint(rho_ab, v_on_a)
    prob = float(np.trace(keep).real)
    if prob < TOL.min_norm:
        raise DomainError(f"post-selection success probability {prob:.3e} vanishes")
    return DensityMatrix(keep / prob), min(prob, 1.0)


def sample_round(rho_ab, v_on_a, rand):
    """One heralded round: success iff ``rand < success_prob``.

    On failure the normalized ancilla-1 branch is returned (or ``None``
    if that branch has zero weight, which cannot be sampled anyway).
    """
    _, keep, drop = _joint(rho_ab, v_on_a)
    p_keep = float(np.trace(keep).real)
    if rand < p_keep:
        return True, DensityMatrix(keep / p_keep)
    p_drop = float(np.trace(drop).real)
    if p_drop < TOL.min_norm:
        return False, None
    return False, DensityMatrix(drop / p_drop)


def channel_equivalence_error(rho_ab, v_on_a):
    """Max entrywise gap between the post-selected state and direct evolution."""
    v = as_matrix(v_on_a)
    d_b = rho_ab.dim // v.shape[0]
    post, _ = apply_postselected(rho_ab, v)
    direct = evolve_state(rho_ab, np.kron(v, np.eye(d_b)))
    return float(np.max(np.abs(post.mat - direct.mat)))


def phi_plus_success_probability(alpha):
    """Analytic success rate for a maximally entangled qubit pair at the specific time.

    V^dag V = (1 + s^2) I + 2 s sigma_y with s = sin(alpha), so
    sigma_max = 1 + |s| and Alice's marginal I/2 gives (1 + s^2)/(1 + |s|)^2.
    """
    s = abs(np.sin(alpha))
    return float((1.0 + s * s) / (1.0 + s) ** 2)
