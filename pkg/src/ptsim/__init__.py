"""Simulation of PT-symmetric evolution on shared bipartite states.

Covers the PT Hamiltonian and its normalized evolution, the unitary
dilation that realizes it by post-selection, signaling checks against
closed forms, and a randomness-amplification Monte Carlo.
"""

from ._kernels import BACKEND
from .dilation import apply_postselected, dilate
from .errors import DomainError, InvalidArgumentError, PTSimError
from .hamiltonian import (
    build_hamiltonian,
    classify_phase,
    evolve_state,
    pt_map,
    specific_time,
    specific_time_operator,
)
from .linalg import DensityMatrix, PureState, partial_trace, trace_distance
from .states import parse_state, werner, werner_like

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DensityMatrix",
    "DomainError",
    "InvalidArgumentError",
    "PTSimError",
    "PureState",
    "apply_postselected",
    "build_hamiltonian",
    "classify_phase",
    "dilate",
    "evolve_state",
    "parse_state",
    "partial_trace",
    "pt_map",
    "specific_time",
    "specific_time_operator",
    "trace_distance",
    "werner",
    "werner_like",
]
