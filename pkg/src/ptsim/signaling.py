"""Signaling gaps and distinguishability under local PT evolution.

Every quantity is computed twice where possible: by brute force on the
full bipartite density matrix, and from the matching closed-form
expression. Both land in a :class:`GapReport`.

Sign convention: a gap is Bob's probability of the |phi> (or |+y>)
outcome when Alice applied A+ = I, minus the same probability when she
applied A- = sigma_x.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .hamiltonian import evolve_state, pt_map
from .linalg import kron, partial_trace, trace_distance
from .states import (
    AliceOp,
    CanonicalQubitParams,
    canonical_readback,
    canonical_two_qubit,
    off_diagonal_correlators,
    subsystem_dim,
    two_qutrit,
    werner,
)


@dataclass(frozen=True)
class AliceMeasurement:
    """Basis {|phi>, |phi_perp>} with |phi> = cos(y/2)|0> + e^{iv} sin(y/2)|1>."""

    y: float = 0.0
    v: float = 0.0

    def basis(self):
        c, s = math.cos(self.y / 2), math.sin(self.y / 2)
        ph = complex(math.cos(self.v), math.sin(self.v))
        return np.array([c, ph * s]), np.array([s, -ph * c])


@dataclass(frozen=True)
class BobMeasurement:
    """|phi> = cos(z/2)|0> + e^{iu} sin(z/2)|1>; z = u = pi/2 is sigma_y."""

    z: float = math.pi / 2
    u: float = math.pi / 2

    def basis(self):
        c, s = math.cos(self.z / 2), math.sin(self.z / 2)
        ph = complex(math.cos(self.u), math.sin(self.u))
        return np.array([c, ph * s]), np.array([s, -ph * c])

    def bloch(self):
        return np.array(
            [
                math.sin(self.z) * math.cos(self.u),
                math.sin(self.z) * math.sin(self.u),
                math.cos(self.z),
            ]
        )


SIGMA_Y_BOB = BobMeasurement(math.pi / 2, math.pi / 2)


@dataclass
class GapReport:
    quantity: str
    inputs: dict
    brute: float
    closed_form: float | None = None
    abs_err: float | None = field(default=None)
    ratio: float | None = field(default=None)

    def __post_init__(self):
        if self.closed_form is not None:
            self.abs_err = abs(self.brute - self.closed_form)
            if abs(self.closed_form) > 1e-12:
                self.ratio = self.brute / self.closed_form


# -- brute force ------------------------------------------------------------


def _evolved(rho, op, alpha, t):
    d = subsystem_dim(rho)
    v = pt_map(d, alpha, t) @ op.matrix(d)
    return evolve_state(rho, kron(v, np.eye(d))), d


def joint_distribution(rho, op, alpha, ma=AliceMeasurement(), mb=SIGMA_Y_BOB, t=None):
    """2 x 2 table P(a, b) after Alice's op, PT evolution on A, and local measurements.

    Index 0 is the |phi> outcome on each side.
    """
    if rho.dim != 4:
        raise InvalidArgumentError("joint_distribution is defined for two qubits")
    out, _ = _evolved(rho, op, alpha, t)
    ka = np.array(ma.basis())
    kb = np.array(mb.basis())
    tensor = out.mat.reshape(2, 2, 2, 2)
    # P(a, b) = <a b| rho |a b>
    table = np.einsum("ai,bj,ijkl,ak,bl->ab", ka.conj(), kb.conj(), tensor, ka, kb).real
    return np.clip(table, 0.0, 1.0)


def bob_state_after(rho, op=AliceOp.IDENTITY, alpha=0.0, t=None):
    """Bob's reduced state after Alice's op and the PT map on her side."""
    out, d = _evolved(rho, op, alpha, t)
    return partial_trace(out, d, d, keep="B")


def _bob_prob(rho, op, alpha, mb, t):
    return float(joint_distribution(rho, op, alpha, mb=mb, t=t)[:, 0].sum())


def brute_gap(rho, alpha, mb=SIGMA_Y_BOB, t=None):
    return _bob_prob(rho, AliceOp.IDENTITY, alpha, mb, t) - _bob_prob(
        rho, AliceOp.FLIP_X, alpha, mb, t
    )


# -- closed forms -----------------------------------------------------------


def werner_gap_formula(p, alpha):
    return 4 * p * math.sin(alpha) / (-3 + math.cos(2 * alpha))


def nonmax_gap_formula(beta, gamma, alpha):
    return 8 * beta * gamma * math.sin(alpha) / (
        (beta**2 + gamma**2) * (-3 + math.cos(2 * alpha))
    )


def canonical_gap_formula(params, alpha):
    my, mpy, cyy = params.m[1], params.m_prime[1], params.c[1]
    s, c2 = math.sin(alpha), math.cos(2 * alpha)
    return (
        2 * (cyy - my * mpy) * (-3 + c2) * s
        / ((-3 + c2 + 4 * my * s) * (1 + 2 * my * s + s * s))
    )


def arbitrary_gap_formula(params, alpha, z, u):
    """Gap for Bob's arbitrary projective measurement (z, u)."""
    my = params.m[1]
    mpx, mpy, mpz = params.m_prime
    cyy = params.c[1]
    s = math.sin(alpha)
    num = -2 * (7 * s - math.sin(3 * alpha)) * (
        my * mpx * math.cos(u) * math.sin(z)
        + math.sin(u) * math.sin(z) * (-cyy + my * mpy)
        + my * mpz * math.cos(z)
    )
    return num / ((-3 + math.cos(2 * alpha)) ** 2 - 16 * my**2 * s * s)


def distinguishability_formula(params, alpha):
    """The closed-form trace distance between Bob's two conditional states.

    Evaluates to exactly half the definitional trace distance; see
    :func:`distinguishability`.
    """
    my = params.m[1]
    mpx, mpy, mpz = params.m_prime
    cyy = params.c[1]
    s = math.sin(alpha)
    root = math.sqrt(
        max(
            cyy**2 + mpx**2 * my**2 - 2 * cyy * my * mpy + my**2 * mpy**2 + my**2 * mpz**2,
            0.0,
        )
    )
    den = (-1 + 2 * my * s - s * s) * (1 + 2 * my * s + s * s)
    return abs(root / den) * abs(s + s**3)


def bob_state_formula(params, alpha, op=AliceOp.IDENTITY):
    """[[R+, U], [conj U, R-]] for a canonical state at the specific time.

    R+- = (1 +- (1 + sin^2 a) m'_z / D) / 2 with D = 1 + 2 m_y sin a + sin^2 a;
    this reading of the sign is the one that keeps unit trace and reduces
    to (1 +- m'_z)/2 at m_y = 0. FlipX is handled by flipping Alice's y, z
    components.
    """
    if op is AliceOp.FLIP_X:
        params = params.flipped()
    my = params.m[1]
    mpx, mpy, mpz = params.m_prime
    cyy = params.c[1]
    s = math.sin(alpha)
    a = 1 + s * s
    den = 1 + 2 * my * s + s * s
    r_plus = 0.5 * (1 + a * mpz / den)
    r_minus = 0.5 * (1 - a * mpz / den)
    u = (a * mpx - 1j * (2 * cyy * s + a * mpy)) / (2 * den)
    return np.array([[r_plus, u], [np.conj(u), r_minus]])


def werner_bob_matrix_formula(p, alpha):
    """Bob's state for a Werner pair after PT evolution, entries as tabulated.

    Lower-left is 2ip sin a / (-3 + cos 2a), which is the conjugate of
    the upper-right ip sin a / (1 + sin^2 a).
    """
    s = math.sin(alpha)
    return np.array(
        [
            [0.5, 1j * p * s / (1 + s * s)],
            [2j * p * s / (-3 + math.cos(2 * alpha)), 0.5],
        ]
    )


def werner_bob_perturbation_formula(p, alpha):
    """Trace distance of the tabulated Werner matrix from I/2."""
    s = math.sin(alpha)
    return abs(p * s) / (1 + s * s)


def nonmax_bob_formulas(beta, gamma, alpha):
    """Tabulated (initial, evolved) Bob matrices for the non-maximally entangled pair."""
    n = beta**2 + gamma**2
    off0 = 1 - 2 * beta**2 / n
    initial = np.array([[0.5, off0], [off0, 0.5]], dtype=complex)
    s = math.sin(alpha)
    u = ((beta**2 - gamma**2) * (-3 + math.cos(2 * alpha)) + 8j * beta * gamma * s) / (
        4 * n * (1 + s * s)
    )
    after = np.array([[0.5, u], [np.conj(u), 0.5]])
    return initial, after


# -- reports ----------------------------------------------------------------


def _canonical_params(rho, tol=1e-12):
    """Canonical parameters when ``rho`` lies in the diagonal-correlator family."""
    if rho.dim != 4:
        return None
    origin = rho.origin
    if origin and origin[0] == "canonical":
        return origin[1]["params"]
    if off_diagonal_correlators(rho) > tol:
        return None
    return canonical_readback(rho)


def _sigma_y_formula(rho, alpha):
    origin = rho.origin or (None, {})
    name, kw = origin
    if name == "werner":
        return werner_gap_formula(kw["p"], alpha)
    if name == "phi-plus":
        return werner_gap_formula(1.0, alpha)
    if name == "nonmax":
        return nonmax_gap_formula(kw["beta"], kw["gamma"], alpha)
    params = _canonical_params(rho)
    return None if params is None else canonical_gap_formula(params, alpha)


def gap_sigma_y(rho, alpha):
    """Signaling gap with both parties measuring sigma_y, at the specific time."""
    brute = brute_gap(rho, alpha)
    family = rho.origin[0] if rho.origin else None
    return GapReport(
        "gap_sigma_y",
        {"family": family, "alpha": alpha},
        brute,
        _sigma_y_formula(rho, alpha),
    )


def gap_canonical(params, alpha):
    rho = canonical_two_qubit(params)
    return GapReport(
        "gap_canonical",
        {"params": params, "alpha": alpha},
        brute_gap(rho, alpha),
        canonical_gap_formula(params, alpha),
    )


def calibrate_sign(alpha=math.pi / 4):
    """Sign relating the brute gap to the arbitrary-measurement formula.

    Fixed once on the Werner family (p = 1); returns +1 or -1.
    """
    params = CanonicalQubitParams(c=(1.0, -1.0, 1.0))
    brute = brute_gap(werner(1.0), alpha)
    closed = arbitrary_gap_formula(params, alpha, math.pi / 2, math.pi / 2)
    return 1 if brute * closed > 0 else -1


_SIGN = None


def _sign():
    global _SIGN
    if _SIGN is None:
        _SIGN = calibrate_sign()
    return _SIGN


def gap_arbitrary(params, alpha, ma=AliceMeasurement(), mb=SIGMA_Y_BOB):
    rho = canonical_two_qubit(params)
    brute = _bob_prob(rho, AliceOp.IDENTITY, alpha, mb, None) - _bob_prob(
        rho, AliceOp.FLIP_X, alpha, mb, None
    )
    return GapReport(
        "gap_arbitrary",
        {"params": params, "alpha": alpha, "ma": ma, "mb": mb},
        brute,
        _sign() * arbitrary_gap_formula(params, alpha, mb.z, mb.u),
    )


def distinguishability(rho, alpha, t=None):
    """Trace distance between Bob's states conditioned on A+ and A-.

    The brute value is authoritative; the closed form (when the state is
    canonical) comes out at half of it, and the report carries the ratio.
    """
    b_plus = bob_state_after(rho, AliceOp.IDENTITY, alpha, t)
    b_minus = bob_state_after(rho, AliceOp.FLIP_X, alpha, t)
    brute = trace_distance(b_plus, b_minus)
    closed = None
    if t is None:
        params = _canonical_params(rho)
        if params is not None:
            closed = distinguishability_formula(params, alpha)
    family = rho.origin[0] if rho.origin else None
    return GapReport("distinguishability", {"family": family, "alpha": alpha}, brute, closed)


SCOPES = ("Full", "BobReduced")


def perturbation_distance(rho, alpha, t=None, scope="BobReduced"):
    """Trace distance between the state before and after PT evolution on A for time t.

    ``t=None`` uses the specific time of the subsystem's Hamiltonian.
    """
    if scope not in SCOPES:
        raise InvalidArgumentError(f"scope must be one of {SCOPES}, got {scope!r}")
    out, d = _evolved(rho, AliceOp.IDENTITY, alpha, t)
    if scope == "Full":
        return trace_distance(rho, out)
    return trace_distance(
        partial_trace(rho, d, d, keep="B"), partial_trace(out, d, d, keep="B")
    )


def qutrit_signaling_check(params, alpha, t=None):
    """Largest perturbation of Bob's qutrit over Alice's two operations.

    The closed form is 0 when the y and z components of Alice's side
    (m_y, C_yy, m_z, C_zz) vanish, and absent otherwise.
    """
    rho = two_qutrit(params)
    before = partial_trace(rho, 3, 3, keep="B")
    brute = max(
        trace_distance(before, bob_state_after(rho, op, alpha, t)) for op in AliceOp
    )
    quiet = all(abs(x) < 1e-15 for x in (params.m[1], params.c[1], params.m[2], params.c[2]))
    return GapReport(
        "qutrit_perturbation",
        {"params": params, "alpha": alpha, "t": t},
        brute,
        0.0 if quiet else None,
    )

