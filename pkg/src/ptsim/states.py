"""Shared-state families: non-maximally entangled, Werner, canonical two-qubit,
two-qutrit and isotropic states, plus a small text grammar for naming them."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .linalg import (
    PAULIS,
    SIGMA_X,
    SPIN1,
    DensityMatrix,
    PureState,
    exchange_matrix,
    kron,
)

_KET_PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
_KET_MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


class AliceOp(enum.Enum):
    """Alice's encoding operation: A+ = I, A- = sigma_x (exchange matrix for qutrits)."""

    IDENTITY = "Identity"
    FLIP_X = "FlipX"

    def matrix(self, dim=2):
        if self is AliceOp.IDENTITY:
            return np.eye(dim, dtype=complex)
        return SIGMA_X.copy() if dim == 2 else exchange_matrix(dim)


@dataclass(frozen=True)
class NonMaxParams:
    beta: float
    gamma: float


@dataclass(frozen=True)
class CanonicalQubitParams:
    """Local Bloch vectors m (Alice), m_prime (Bob) and diagonal correlators c."""

    m: tuple = (0.0, 0.0, 0.0)
    m_prime: tuple = (0.0, 0.0, 0.0)
    c: tuple = (0.0, 0.0, 0.0)

    @property
    def m_y(self):
        return self.m[1]

    @property
    def c_yy(self):
        return self.c[1]

    def flipped(self):
        """Parameters after sigma_x on Alice: y and z components of A change sign."""
        mx, my, mz = self.m
        cx, cy, cz = self.c
        return CanonicalQubitParams((mx, -my, -mz), self.m_prime, (cx, -cy, -cz))


@dataclass(frozen=True)
class QutritParams:
    m: tuple = (0.0, 0.0, 0.0)
    m_prime: tuple = (0.0, 0.0, 0.0)
    c: tuple = (0.0, 0.0, 0.0)


def _vec3(v, name):
    t = tuple(float(x) for x in v)
    if len(t) != 3:
        raise InvalidArgumentError(f"{name} must have 3 components, got {len(t)}")
    return t


def _checked(mat, origin):
    lam = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T)).min()
    if lam < -1e-9:
        raise InvalidArgumentError(
            f"parameters give a non-PSD matrix (minimum eigenvalue {lam:.6g})"
        )
    return DensityMatrix(mat, origin=origin)


def non_max_entangled(params):
    """(beta|++> + gamma|-->) / sqrt(beta^2 + gamma^2)."""
    b, g = float(params.beta), float(params.gamma)
    if b * b + g * g <= 0:
        raise InvalidArgumentError("beta and gamma cannot both vanish")
    ket = PureState.normalized(b * np.kron(_KET_PLUS, _KET_PLUS) + g * np.kron(_KET_MINUS, _KET_MINUS))
    return DensityMatrix(ket.projector(), origin=("nonmax", {"beta": b, "gamma": g}))


def phi_plus(d=2):
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / math.sqrt(d)
    return PureState(v)


def werner_like(d, p):
    """p |Phi+_d><Phi+_d| + (1-p) I/d^2, PSD for -1/(d^2-1) <= p <= 1."""
    if d not in (2, 3):
        raise InvalidArgumentError(f"isotropic states are provided for d = 2, 3, not {d}")
    p = float(p)
    lo = -1.0 / (d * d - 1)
    if not lo - 1e-12 <= p <= 1.0 + 1e-12:
        raise InvalidArgumentError(f"p = {p} outside the PSD range [{lo:.6g}, 1] for d = {d}")
    mat = p * phi_plus(d).projector() + (1.0 - p) * np.eye(d * d) / (d * d)
    name = "werner" if d == 2 else "werner-like"
    return DensityMatrix(mat, origin=(name, {"p": p, "dim": d}))


def werner(p):
    return werner_like(2, p)


def canonical_two_qubit(params):
    """(1/4)(I + sum_i m_i s_i x I + m'_i I x s_i + C_ii s_i x s_i)."""
    m = _vec3(params.m, "m")
    mp = _vec3(params.m_prime, "m_prime")
    c = _vec3(params.c, "c")
    eye = np.eye(2)
    mat = np.eye(4, dtype=complex)
    for i, s in enumerate(PAULIS):
        mat += m[i] * kron(s, eye) + mp[i] * kron(eye, s) + c[i] * kron(s, s)
    params = CanonicalQubitParams(m, mp, c)
    return _checked(mat / 4.0, ("canonical", {"params": params}))


def two_qutrit(params):
    """(1/9)(I + sum_i m_i S_i x I + m'_i I x S_i + C_ii S_i x S_i) with spin-1 S_i."""
    m = _vec3(params.m, "m")
    mp = _vec3(params.m_prime, "m_prime")
    c = _vec3(params.c, "c")
    eye = np.eye(3)
    mat = np.eye(9, dtype=complex)
    for i, s in enumerate(SPIN1):
        mat += m[i] * kron(s, eye) + mp[i] * kron(eye, s) + c[i] * kron(s, s)
    params = QutritParams(m, mp, c)
    return _checked(mat / 9.0, ("qutrit", {"params": params}))


def canonical_readback(rho):
    """Recover (m, m', diag C) of a two-qubit state; exact for canonical states."""
    eye = np.eye(2)
    m = tuple(rho.expect(kron(s, eye)) for s in PAULIS)
    mp = tuple(rho.expect(kron(eye, s)) for s in PAULIS)
    c = tuple(rho.expect(kron(s, s)) for s in PAULIS)
    return CanonicalQubitParams(m, mp, c)


def off_diagonal_correlators(rho):
    """Largest |Tr(s_i x s_j rho)| over i != j; zero for the canonical family."""
    return max(
        abs(rho.expect(kron(PAULIS[i], PAULIS[j])))
        for i in range(3)
        for j in range(3)
        if i != j
    )


# Tr(S_i^2) = 2 for spin 1, so Tr(S_i x I rho) = (1/9) m_i * 2 * 3 and
# Tr(S_i x S_i rho) = (1/9) C_ii * 2 * 2.
QUTRIT_LOCAL_READBACK = 3.0 / 2.0
QUTRIT_CORR_READBACK = 9.0 / 4.0


def qutrit_readback(rho):
    eye = np.eye(3)
    m = tuple(QUTRIT_LOCAL_READBACK * rho.expect(kron(s, eye)) for s in SPIN1)
    mp = tuple(QUTRIT_LOCAL_READBACK * rho.expect(kron(eye, s)) for s in SPIN1)
    c = tuple(QUTRIT_CORR_READBACK * rho.expect(kron(s, s)) for s in SPIN1)
    return QutritParams(m, mp, c)


def random_canonical_params(rng, real=False, max_tries=1000):
    """Rejection-sample parameters giving a PSD canonical state.

    ``real=True`` pins Alice's y components (m_y, C_yy) to zero.
    """
    for _ in range(max_tries):
        v = rng.uniform(0.0, 1.0) * rng.uniform(-1.0, 1.0, 9)
        if real:
            v[1] = v[7] = 0.0
        params = CanonicalQubitParams(tuple(v[:3]), tuple(v[3:6]), tuple(v[6:]))
        try:
            canonical_two_qubit(params)
        except InvalidArgumentError:
            continue
        return params
    raise RuntimeError("rejection sampling failed to find a PSD canonical state")


def product_state():
    """|0>|0>, the uncorrelated reference state."""
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = 1.0
    return DensityMatrix(mat, origin=("product", {}))


def subsystem_dim(rho):
    d = int(round(math.sqrt(rho.dim)))
    if d * d != rho.dim:
        raise InvalidArgumentError(f"a {rho.dim}-dim state is not a d x d bipartite state")
    return d


def _floats(text, n, name):
    parts = [x for x in text.split(",") if x.strip()]
    if len(parts) != n:
        raise InvalidArgumentError(f"state '{name}' expects {n} numbers, got {len(parts)}")
    try:
        return [float(x) for x in parts]
    except ValueError as exc:
        raise InvalidArgumentError(f"state '{name}': {exc}") from None


STATE_FAMILIES = ("phi-plus", "werner", "werner-like", "nonmax", "canonical", "qutrit", "product")


def parse_state(spec, p=None, dim=2):
    """Build a state from a spec string.

    Grammar: ``phi-plus``, ``product``, ``werner[:p]``, ``werner-like[:p]``
    (uses ``dim``), ``nonmax:beta,gamma``, ``canonical:mx,my,mz,m'x,m'y,m'z,cxx,cyy,czz``
    and ``qutrit:`` with the same nine numbers. A family without an inline
    ``p`` takes the ``p`` argument.
    """
    name, _, rest = spec.strip().partition(":")
    name = name.lower()
    if name == "phi-plus":
        return werner_like(dim, 1.0) if dim == 3 else DensityMatrix(
            phi_plus(2).projector(), origin=("phi-plus", {})
        )
    if name == "product":
        return product_state()
    if name in ("werner", "werner-like"):
        if rest:
            p = _floats(rest, 1, name)[0]
        if p is None:
            raise InvalidArgumentError(f"state '{name}' needs a value of p")
        return werner(p) if name == "werner" else werner_like(dim, p)
    if name == "nonmax":
        b, g = _floats(rest, 2, name)
        return non_max_entangled(NonMaxParams(b, g))
    if name in ("canonical", "qutrit"):
        v = _floats(rest, 9, name)
        if name == "canonical":
            return canonical_two_qubit(CanonicalQubitParams(tuple(v[:3]), tuple(v[3:6]), tuple(v[6:])))
        return two_qutrit(QutritParams(tuple(v[:3]), tuple(v[3:6]), tuple(v[6:])))
    raise InvalidArgumentError(f"unknown state family {name!r}; expected one of {STATE_FAMILIES}")
