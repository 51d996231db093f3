"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-9
    psd_hard: float = 1e-6  # below this an eigenvalue is genuinely negative
    pure_norm: float = 1e-10
    imag_discard: float = 1e-10
    real_spectrum: float = 1e-9
    # eigenvector-matrix condition number above which H counts as defective
    defect_cond: float = 1e8
    # relative eigenvalue separation below which levels count as coalesced
    coalesce: float = 1e-5
    min_gap: float = 1e-9
    min_norm: float = 1e-12
    pt_commute: float = 1e-12


TOL = Tolerances()
