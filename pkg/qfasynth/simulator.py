"""
Statevector simulation

Exact simulation keeps one state tensor with an axis per qubit. Noisy
simulation runs Monte-Carlo trajectories in batches: the state tensor gets a
trailing trajectory axis, and after every CNOT each trajectory independently,
with probability `rate`, receives a uniformly random two-qubit Pauli on the
CNOT's qubits (II included, so rate 1 fully depolarizes the pair).

Trajectory batches draw from numpy generators seeded with
(seed, stream, batch index), so results depend only on those values.
"""

import csv
import logging
from dataclasses import dataclass

import numpy as np

from qfasynth.circuit import GateKind, apply_gate, check_size, metrics

logger = logging.getLogger(__name__)

BATCH_SIZE = 512
PROB_FLOOR = 1e-15


@dataclass(frozen=True)
class NoiseModel:
    cnot_depolarizing_rate: float = 0.0
    shots: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.cnot_depolarizing_rate <= 1.0:
            raise ValueError(f"depolarizing rate must be in [0, 1], got {self.cnot_depolarizing_rate}")
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")


@dataclass(frozen=True)
class SimResult:
    """
    Outcome of a simulation.

    amplitudes is the final state for exact runs and None for noisy runs,
    where only the trajectory-averaged probabilities are meaningful.
    """

    num_qubits: int
    probabilities: np.ndarray
    amplitudes: np.ndarray = None

    @property
    def accept_prob(self):
        return float(self.probabilities[0])

    @property
    def outcome_probs(self):
        n = self.num_qubits
        return {
            format(i, f"0{n}b") if n else "": float(p)
            for i, p in enumerate(self.probabilities) if p > PROB_FLOOR
        }

    def to_dict(self):
        return {"accept_prob": self.accept_prob, "outcome_probs": self.outcome_probs}


def _zero_state(n, batch=None):
    shape = (2,) * n + (() if batch is None else (batch,))
    state = np.zeros(shape, dtype=complex)
    state[(0,) * n] = 1
    return state


def simulate(c):
    """Exact evolution of |0...0>"""
    check_size(c.num_qubits)
    state = _zero_state(c.num_qubits)
    for g in c.gates:
        apply_gate(state, g)
    amps = state.reshape(-1)
    return SimResult(c.num_qubits, np.abs(amps) ** 2, amps)


def _apply_pauli(state, q, codes):
    """Per-trajectory Pauli on qubit q: 0 I, 1 X, 2 Z, 3 XZ"""
    zmask = (codes & 2) > 0
    if zmask.any():
        index = (slice(None),) * q + (1,)
        state[index] *= np.where(zmask, -1.0, 1.0)
    xmask = (codes & 1) > 0
    if xmask.any():
        state = np.where(xmask, np.flip(state, axis=q), state)
    return state


def _run_batch(c, rate, size, rng):
    state = _zero_state(c.num_qubits, size)
    for g in c.gates:
        apply_gate(state, g)
        if g.kind is not GateKind.CNOT:
            continue
        hit = rng.random(size) < rate
        if not hit.any():
            continue
        codes = np.where(hit, rng.integers(0, 16, size=size), 0)
        state = _apply_pauli(state, g.controls[0], codes & 3)
        state = _apply_pauli(state, g.target, codes >> 2)
    return (np.abs(state) ** 2).reshape(-1, size).sum(axis=1)


def simulate_noisy(c, nm, stream=0):
    """
    Trajectory-averaged outcome distribution under per-CNOT depolarizing noise.

    Args:
        c: circuit
        nm: NoiseModel
        stream: extra seed component, e.g. the input length in a sweep
    """
    if nm.cnot_depolarizing_rate == 0.0:
        return simulate(c)
    check_size(c.num_qubits)
    total = np.zeros(1 << c.num_qubits)
    done = 0
    batch = 0
    while done < nm.shots:
        size = min(BATCH_SIZE, nm.shots - done)
        rng = np.random.default_rng([nm.seed, stream, batch])
        total += _run_batch(c, nm.cnot_depolarizing_rate, size, rng)
        done += size
        batch += 1
    return SimResult(c.num_qubits, total / nm.shots)


@dataclass(frozen=True)
class SweepRow:
    j: int
    accept_prob: float
    cnot_count: int
    depth: int
    strategy: str
    rate: float
    seed: int


SWEEP_COLUMNS = ("j", "accept_prob", "cnot_count", "depth", "strategy", "rate", "seed")


def sweep(builder, p, j_range, nm=None, strategy=""):
    """
    Acceptance, CNOT count and depth for every input length in j_range.

    Args:
        builder: callable j -> Circuit
        p: modulus, recorded for the log only
        j_range: iterable of input lengths
        nm: NoiseModel, or None for exact simulation
        strategy: label written to every row
    """
    rate = 0.0 if nm is None else nm.cnot_depolarizing_rate
    seed = 0 if nm is None else nm.seed
    rows = []
    for j in j_range:
        c = builder(j)
        m = metrics(c)
        result = simulate(c) if nm is None else simulate_noisy(c, nm, stream=j)
        rows.append(SweepRow(j, result.accept_prob, m.cnot_count, m.depth, strategy, rate, seed))
        logger.debug("sweep p=%d j=%d accept=%.6f cnots=%d", p, j, result.accept_prob, m.cnot_count)
    return rows


def write_csv(rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in rows:
        writer.writerow([r.j, repr(r.accept_prob), r.cnot_count, r.depth, r.strategy,
                         repr(float(r.rate)), r.seed])
