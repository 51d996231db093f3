"""PT-symmetric Hamiltonians, phase classification and normalized evolution."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import DomainError, InvalidArgumentError
from .linalg import (
    SIGMA_X,
    SIGMA_Z,
    DensityMatrix,
    as_matrix,
    eigvals,
    exchange_matrix,
    expm,
)


@dataclass(frozen=True, eq=False)
class PTHamiltonian:
    dim: int
    s: float
    alpha: float
    matrix: np.ndarray

    def __post_init__(self):
        p = exchange_matrix(self.dim)
        err = np.max(np.abs(p @ self.matrix.conj() @ p - self.matrix))
        if err > TOL.pt_commute:
            raise InvalidArgumentError(f"matrix is not PT-symmetric (err {err:.2e})")
        self.matrix.setflags(write=False)


def build_qubit_hamiltonian(s=1.0, alpha=0.0):
    """s * [[i sin a, 1], [1, -i sin a]]."""
    if not s > 0:
        raise InvalidArgumentError(f"scale factor s must be positive, got {s}")
    sa = math.sin(alpha)
    h = s * np.array([[1j * sa, 1.0], [1.0, -1j * sa]], dtype=complex)
    return PTHamiltonian(2, float(s), float(alpha), h)


def build_qutrit_hamiltonian(alpha=0.0):
    """Spin-1 analogue: S_x with balanced gain/loss on the outer levels."""
    sa = math.sin(alpha)
    h = np.array(
        [[1j * sa, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, -1j * sa]], dtype=complex
    ) / math.sqrt(2.0)
    return PTHamiltonian(3, 1.0, float(alpha), h)


def build_hamiltonian(dim, alpha, s=1.0):
    if dim == 2:
        return build_qubit_hamiltonian(s, alpha)
    if dim == 3:
        if s != 1.0:
            raise InvalidArgumentError("the qutrit Hamiltonian has no scale factor")
        return build_qutrit_hamiltonian(alpha)
    raise InvalidArgumentError(f"only dimensions 2 and 3 are supported, got {dim}")


class Phase(enum.Enum):
    UNBROKEN = "Unbroken"
    EXCEPTIONAL_POINT = "ExceptionalPoint"
    BROKEN = "Broken"


@dataclass(frozen=True)
class PhaseLabel:
    label: Phase
    spectrum: tuple
    defect: float
    # alpha mod pi against pi/2, reported for comparison only
    alpha_convention: Phase


def _alpha_convention(alpha):
    r = math.fmod(alpha, math.pi)
    if r < 0:
        r += math.pi
    if abs(r - math.pi / 2) < 1e-12:
        return Phase.EXCEPTIONAL_POINT
    return Phase.UNBROKEN if r < math.pi / 2 else Phase.BROKEN


def _eigvec_condition(m):
    try:
        _, vecs = np.linalg.eig(m)
        c = np.linalg.cond(vecs)
    except np.linalg.LinAlgError:
        return math.inf
    return float(c) if np.isfinite(c) else math.inf


def _has_defective_cluster(m, spectrum, tol):
    """True if some group of coalesced eigenvalues lacks a full eigenspace."""
    d = m.shape[0]
    scale = max(np.linalg.norm(m, 2), 1e-300)
    used = np.zeros(d, dtype=bool)
    for i in range(d):
        if used[i]:
            continue
        cluster = np.abs(spectrum - spectrum[i]) <= tol.coalesce * scale
        used |= cluster
        k = int(cluster.sum())
        if k < 2:
            continue
        lam = spectrum[cluster].mean()
        sv = np.linalg.svd(m - lam * np.eye(d), compute_uv=False)
        # eigenvalue spread inside the cluster sets the achievable rank floor
        spread = np.abs(spectrum[cluster] - lam).max()
        null_dim = int(np.sum(sv <= max(10 * spread, 1e-10 * scale)))
        if null_dim < k:
            return True
    return False


def classify_phase(h, tol=TOL):
    """Spectrum-driven phase label; the alpha interval convention is reported alongside."""
    m = h.matrix
    spec = eigvals(m, tol)
    defect = _eigvec_condition(m)
    order = np.lexsort((spec.imag, spec.real))
    spectrum = tuple(complex(x) for x in spec[order])
    if defect > tol.defect_cond or _has_defective_cluster(m, spec, tol):
        label = Phase.EXCEPTIONAL_POINT
    elif np.any(np.abs(spec.imag) > tol.real_spectrum):
        label = Phase.BROKEN
    else:
        label = Phase.UNBROKEN
    return PhaseLabel(label, spectrum, defect, _alpha_convention(h.alpha))


@dataclass(frozen=True)
class EvolutionTime:
    t: float
    t_prime: float
    delta_e: float


def specific_time(h, tol=TOL):
    """t = pi / dE with dE the spread of the (real) spectrum, so that t' = dE t / 2 = pi / 2."""
    phase = classify_phase(h, tol)
    if phase.label is not Phase.UNBROKEN:
        raise DomainError(
            f"specific time undefined at dE->0 (phase {phase.label.value})"
        )
    re = np.array([z.real for z in phase.spectrum])
    delta_e = float(re.max() - re.min())
    if delta_e <= tol.min_gap:
        raise DomainError("specific time undefined at dE->0")
    t = math.pi / delta_e
    return EvolutionTime(t=t, t_prime=0.5 * delta_e * t, delta_e=delta_e)


def evolution_operator(h, t):
    """exp(-i H t), well defined at the exceptional point as well."""
    return expm(-1j * h.matrix * t)


def qubit_evolution_closed_form(alpha, t, s=1.0):
    """(1/cos a) [[cos(t'-a), -i sin t'], [-i sin t', cos(t'+a)]] with t' = s cos(a) t."""
    c = math.cos(alpha)
    tp = s * c * t
    return np.array(
        [
            [math.cos(tp - alpha), -1j * math.sin(tp)],
            [-1j * math.sin(tp), math.cos(tp + alpha)],
        ]
    ) / c


def specific_time_operator(alpha):
    """sin(a) sigma_z - i sigma_x: the qubit evolution at t' = pi/2 up to the factor 1/cos a.

    Unlike exp(-iHt) at the specific time it stays finite at the
    exceptional point.
    """
    return math.sin(alpha) * SIGMA_Z - 1j * SIGMA_X


def pt_map(dim, alpha, t=None):
    """Operator applied to Alice's subsystem.

    ``t=None`` selects the specific time: the rescaled closed form for
    qubits, ``exp(-iH t*)`` for qutrits.
    """
    if t is None:
        if dim == 2:
            return specific_time_operator(alpha)
        h = build_hamiltonian(dim, alpha)
        return evolution_operator(h, specific_time(h).t)
    return evolution_operator(build_hamiltonian(dim, alpha), t)


def evolve_state(rho, v, tol=TOL):
    """rho -> V rho V^dagger / Tr[V rho V^dagger]."""
    v = as_matrix(v, "evolution operator")
    if v.shape != (rho.dim, rho.dim):
        raise InvalidArgumentError(
            f"operator shape {v.shape} does not act on a {rho.dim}-dim state"
        )
    out = v @ rho.mat @ v.conj().T
    norm = np.trace(out).real
    scale = np.linalg.norm(v, 2) ** 2
    if scale == 0 or norm <= tol.min_norm * scale:
        raise DomainError("state annihilated by evolution")
    return DensityMatrix(out / norm)
