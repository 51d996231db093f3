"""Monte-Carlo simulation of randomness amplification with simulated PT evolution.

Each round: a weak source emits Alice's bit; bit 0 means she applies
sigma_x, bit 1 means she does nothing. Her qubit then goes through the
dilation and the ancilla is measured. Bob measures sigma_y. Alice
announces which rounds were heralded and Bob keeps only those outcomes.

Randomness is split into independent counter-based streams (see
``ptsim._kernels``): the source stream drives only Alice's choice, the
herald and measurement streams drive the quantum sampling.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dilation import apply_postselected
from .errors import InvalidArgumentError
from .hamiltonian import pt_map
from .linalg import SIGMA_Y, DensityMatrix, kron, partial_trace
from .states import AliceOp, werner

SOURCE_STREAM = 0
HERALD_STREAM = 1
MEASURE_STREAM = 2

# Bob's outcome index: 0 is |+y>, 1 is |-y>
_PLUS_Y = 0.5 * (np.eye(2) + SIGMA_Y)


class SourceKind(enum.Enum):
    FAIR = "fair"
    IID_BIASED = "iid"
    MARKOV_ADVERSARY = "markov"


_KIND_CODE = {SourceKind.FAIR: 0, SourceKind.IID_BIASED: 1, SourceKind.MARKOV_ADVERSARY: 2}


@dataclass(frozen=True)
class SourceModel:
    """Santha-Vazirani style bit source.

    ``IID_BIASED`` emits 1 with probability 1/2 + epsilon. ``MARKOV_ADVERSARY``
    starts fair and then repeats the previous bit with probability
    1/2 + epsilon. Either way every bit is within epsilon of fair given
    the history.
    """

    kind: SourceKind = SourceKind.FAIR
    epsilon: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 0.5:
            raise InvalidArgumentError(f"epsilon must lie in [0, 1/2], got {self.epsilon}")
        if self.kind is SourceKind.FAIR and self.epsilon != 0.0:
            raise InvalidArgumentError("a fair source has epsilon = 0")


def draw_bits(source, n, seed):
    if n < 1:
        raise InvalidArgumentError(f"need at least one bit, got n = {n}")
    return _kernels.source_bits(
        _KIND_CODE[source.kind], float(source.epsilon), int(seed), SOURCE_STREAM, int(n)
    )


@dataclass(frozen=True)
class ProtocolConfig:
    state: DensityMatrix
    alpha: float
    rounds: int
    source: SourceModel = SourceModel()
    seed: int = 0
    # Bob outcome index -> decoded bit; None calibrates from a noiseless probe
    decode_map: dict | None = None
    t: float | None = None

    def __post_init__(self):
        if self.rounds < 1:
            raise InvalidArgumentError(f"rounds must be >= 1, got {self.rounds}")
        if self.state.dim != 4:
            raise InvalidArgumentError("the protocol runs on two-qubit states")


@dataclass(slots=True)
class RoundRecord:
    input_bit: int
    alice_op: AliceOp
    success: bool
    bob_outcome: int | None
    kept: bool


@dataclass(frozen=True)
class ProtocolStats:
    rounds: int
    sifted_length: int
    success_rate: float
    agreement_rate: float
    output_bias: float
    min_entropy_per_bit: float
    equality_certified: bool
    rates_defined: bool = field(default=True)


def op_for_bit(bit):
    return AliceOp.FLIP_X if bit == 0 else AliceOp.IDENTITY


def conditional_model(rho, alpha, t=None):
    """Per-op (success probability, P(Bob sees |+y>) given success), ordered by bit value."""
    v = pt_map(2, alpha, t)
    out = []
    for bit in (0, 1):
        a = kron(op_for_bit(bit).matrix(2), np.eye(2))
        encoded = DensityMatrix(a @ rho.mat @ a.conj().T)
        post, p_succ = apply_postselected(encoded, v)
        bob = partial_trace(post, 2, 2, keep="B")
        p_plus = float(np.clip(np.trace(_PLUS_Y @ bob.mat).real, 0.0, 1.0))
        out.append((p_succ, p_plus))
    return out


def calibrate_decode_map():
    """Outcome-to-bit map re-derived from the ideal run (maximally entangled pair, EP time).

    In that run Bob's outcome is a deterministic function of Alice's
    operation; the outcome produced by sigma_x decodes to bit 0.
    """
    (_, p_plus_flip), (_, p_plus_id) = conditional_model(werner(1.0), math.pi / 2)
    flip_outcome = 0 if p_plus_flip > 0.5 else 1
    if abs(p_plus_flip - p_plus_id) < 0.5:
        raise RuntimeError("noiseless probe is not deterministic; cannot calibrate")
    return {flip_outcome: 0, 1 - flip_outcome: 1}


def _stats(rounds, bits, success, outcome, decode_map):
    kept = success.astype(bool)
    n_kept = int(kept.sum())
    success_rate = n_kept / rounds
    if n_kept == 0:
        nan = float("nan")
        return ProtocolStats(rounds, 0, success_rate, nan, nan, nan, False, rates_defined=False)
    lut = np.array([decode_map[0], decode_map[1]], dtype=np.uint8)
    decoded = lut[outcome[kept]]
    agreement = float(np.mean(decoded == bits[kept]))
    p1 = float(decoded.mean())
    pmax = max(p1, 1.0 - p1)
    return ProtocolStats(
        rounds=rounds,
        sifted_length=n_kept,
        success_rate=success_rate,
        agreement_rate=agreement,
        output_bias=abs(p1 - 0.5),
        min_entropy_per_bit=-math.log2(pmax) if pmax < 1.0 else 0.0,
        equality_certified=agreement == 1.0,
    )


def simulate(cfg):
    """Raw arrays (bits, success, outcome) and the decode map for a config."""
    decode_map = cfg.decode_map or calibrate_decode_map()
    bits = draw_bits(cfg.source, cfg.rounds, cfg.seed)
    (ps0, pz0), (ps1, pz1) = conditional_model(cfg.state, cfg.alpha, cfg.t)
    success, outcome = _kernels.sample_rounds(
        bits, ps0, ps1, pz0, pz1, int(cfg.seed), HERALD_STREAM, MEASURE_STREAM
    )
    return bits, success, outcome, decode_map


def run_protocol(cfg):
    """Run all rounds; returns ``(stats, records)`` with records ordered by round."""
    bits, success, outcome, decode_map = simulate(cfg)
    records = [
        RoundRecord(int(b), op_for_bit(b), bool(s), int(o) if s else None, bool(s))
        for b, s, o in zip(bits.tolist(), success.tolist(), outcome.tolist())
    ]
    return _stats(cfg.rounds, bits, success, outcome, decode_map), records


def run_stats(cfg):
    """Like :func:`run_protocol` without materializing per-round records."""
    bits, success, outcome, decode_map = simulate(cfg)
    return _stats(cfg.rounds, bits, success, outcome, decode_map)


def analyze(records, decode_map=None):
    """Statistics of a record list; the min-entropy is the plug-in estimate."""
    if not records:
        raise InvalidArgumentError("cannot analyze an empty record list")
    decode_map = decode_map or calibrate_decode_map()
    bits = np.array([r.input_bit for r in records], dtype=np.uint8)
    success = np.array([r.kept for r in records], dtype=np.uint8)
    outcome = np.array(
        [r.bob_outcome if r.kept else -1 for r in records], dtype=np.int8
    )
    return _stats(len(records), bits, success, outcome, decode_map)


def sifted_string(records, decode_map=None):
    decode_map = decode_map or calibrate_decode_map()
    return np.array([decode_map[r.bob_outcome] for r in records if r.kept], dtype=np.uint8)


def certify_source(cfg):
    """True iff Bob's decoded string equals Alice's kept inputs on every kept round."""
    stats = run_stats(cfg)
    return stats.rates_defined and stats.equality_certified
