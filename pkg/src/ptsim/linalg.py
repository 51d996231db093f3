"""Dense complex linear algebra and quantum-state primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; anything that
is documented as a state is wrapped in :class:`DensityMatrix`, which
validates Hermiticity, unit trace and positivity once at construction and
is read-only afterwards.
"""

import numpy as np
import scipy.linalg

from .config import TOL
from .errors import DomainError, InvalidArgumentError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

_R2 = np.sqrt(2.0)
SPIN1_X = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _R2
SPIN1_Y = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _R2
SPIN1_Z = np.diag([1.0, 0.0, -1.0]).astype(complex)
SPIN1 = (SPIN1_X, SPIN1_Y, SPIN1_Z)


def as_matrix(a, name="matrix"):
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise InvalidArgumentError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return m


def _square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {m.shape}")
    return m


def exchange_matrix(d):
    """The d x d parity operator with ones on the anti-diagonal."""
    return np.fliplr(np.eye(d)).astype(complex)


def kron(a, b):
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def dagger(a):
    return as_matrix(a).conj().T


def expm(m):
    """Matrix exponential by scaling and squaring with a Pade approximant.

    Works for defective input (no eigendecomposition is involved), which
    matters at the exceptional point where the generator is nilpotent.
    """
    return scipy.linalg.expm(_square(m))


def eigvals(m, tol=TOL):
    """All eigenvalues of ``m`` with multiplicity.

    2 x 2 matrices use the closed-form roots of the characteristic
    polynomial so that coalescing eigenvalues near an exceptional point
    stay accurate; larger matrices go through LAPACK. Imaginary parts
    below ``tol.imag_discard`` are dropped.
    """
    m = _square(m)
    n = m.shape[0]
    if n == 1:
        ev = m[0].copy()
    elif n == 2:
        (a, b), (c, d) = m
        half_tr = 0.5 * (a + d)
        # ((a-d)/2)^2 + bc avoids cancelling tr^2/4 against det
        root = np.sqrt(0.25 * (a - d) ** 2 + b * c)
        ev = np.array([half_tr + root, half_tr - root])
    else:
        ev = np.linalg.eigvals(m)
    ev = np.asarray(ev, dtype=complex)
    small = np.abs(ev.imag) < tol.imag_discard
    ev[small] = ev[small].real
    return ev


def sqrt_psd(m, tol=TOL):
    """Hermitian PSD square root; tiny negative eigenvalues are clamped to zero."""
    m = _square(m)
    if np.max(np.abs(m - m.conj().T)) > tol.hermitian:
        raise InvalidArgumentError("sqrt_psd needs a Hermitian matrix")
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    if w.min() < -tol.psd_hard:
        raise DomainError(f"matrix is not PSD: minimum eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def max_singular_value(m):
    """Largest singular value from the spectrum of m^dagger m."""
    m = _square(m)
    g = m.conj().T @ m
    return float(np.sqrt(max(np.linalg.eigvalsh(0.5 * (g + g.conj().T)).max(), 0.0)))


class PureState:
    """A normalized ket."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, tol=TOL):
        v = np.asarray(amplitudes, dtype=complex).ravel()
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise InvalidArgumentError("amplitudes must be a finite nonempty vector")
        if abs(np.linalg.norm(v) - 1.0) > tol.pure_norm:
            raise InvalidArgumentError(f"ket norm {np.linalg.norm(v):.12f} is not 1")
        v = v.copy()
        v.setflags(write=False)
        self.amplitudes = v

    @classmethod
    def normalized(cls, amplitudes):
        v = np.asarray(amplitudes, dtype=complex).ravel()
        n = np.linalg.norm(v)
        if n < TOL.min_norm:
            raise InvalidArgumentError("cannot normalize a zero vector")
        return cls(v / n)

    @property
    def dim(self):
        return self.amplitudes.size

    def projector(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self):
        return DensityMatrix(self.projector())


class DensityMatrix:
    """Validated, immutable density matrix.

    ``origin`` optionally records the state family and parameters that
    produced the matrix, e.g. ``("werner", {"p": 0.5})``; closed-form
    evaluators use it to pick the matching formula.
    """

    __slots__ = ("mat", "origin")

    def __init__(self, mat, origin=None, tol=TOL):
        m = _square(mat, "density matrix")
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > tol.hermitian:
            raise InvalidArgumentError(f"density matrix not Hermitian (err {herm_err:.2e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > tol.trace:
            raise InvalidArgumentError(f"density matrix trace {tr.real:.12f} is not 1")
        m = 0.5 * (m + m.conj().T)
        lam_min = np.linalg.eigvalsh(m).min()
        if lam_min < -tol.psd:
            raise InvalidArgumentError(
                f"density matrix not PSD (minimum eigenvalue {lam_min:.3e})"
            )
        m.setflags(write=False)
        self.mat = m
        self.origin = origin

    @classmethod
    def from_unnormalized(cls, m, origin=None):
        m = as_matrix(m)
        tr = np.trace(m).real
        if tr <= TOL.min_norm:
            raise DomainError("cannot normalize an operator with vanishing trace")
        return cls(m / tr, origin=origin)

    @property
    def dim(self):
        return self.mat.shape[0]

    def expect(self, op):
        return float(np.real(np.trace(self.mat @ as_matrix(op))))

    def __repr__(self):
        tag = f", origin={self.origin[0]!r}" if self.origin else ""
        return f"DensityMatrix(dim={self.dim}{tag})"


def _mat(rho):
    return rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)


def partial_trace(rho, dim_a, dim_b, keep="B"):
    """Reduce a bipartite state on A (x) B to the ``keep`` subsystem."""
    m = _mat(rho)
    if m.shape != (dim_a * dim_b, dim_a * dim_b):
        raise InvalidArgumentError(
            f"state of shape {m.shape} is not {dim_a}x{dim_b} bipartite"
        )
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "B":
        red = np.einsum("ijik->jk", t)
    elif keep == "A":
        red = np.einsum("ijkj->ik", t)
    else:
        raise InvalidArgumentError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(red)


def trace_distance(rho, sigma, tol=TOL):
    """Half the sum of absolute eigenvalues of rho - sigma."""
    a, b = _mat(rho), _mat(sigma)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    t = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return min(max(t, 0.0), 1.0)


def random_density(dim, rng, rank=None):
    """Random state from the Ginibre ensemble (Hilbert-Schmidt measure at full rank)."""
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(dim, rng):
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / _R2
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
