"""
Circuit-free semantics of the parallel MOD_p automaton

An instance runs d single-qubit automata M_k in parallel, one per k in K.
Each M_k rotates its qubit by 2*pi*k/p per input symbol; the combined machine
is a control register of log2(d) qubits in uniform superposition (Hadamard
end-markers) and one target qubit, with the per-symbol operator U_a
block-diagonal in the rotations. A word a^m is accepted when the all-zeros
basis state is observed.

Everything here is computed by actual matrix evolution; closed forms are only
used by the tests as oracles.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from qfasynth.errors import SpecError
from qfasynth.matrix import block_diag, gate_h, identity, kron, rotation_ry

logger = logging.getLogger(__name__)


def is_prime(p):
    """Trial division primality check"""
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def is_power_of_two(n):
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def check_prime(p):
    if not is_prime(p):
        raise SpecError(f"p must be prime, got {p}")
    return int(p)


def check_dimension(d, minimum=1):
    if not is_power_of_two(d) or d < minimum:
        raise SpecError(f"d must be a power of 2 >= {minimum}, got {d}")
    return int(d)


def log2_exact(d):
    check_dimension(d)
    return int(d).bit_length() - 1


@dataclass(frozen=True)
class QfaSpec:
    """Parameters of one parallel automaton: prime p and multipliers K"""

    p: int
    ks: tuple

    def __post_init__(self):
        check_prime(self.p)
        ks = tuple(int(k) for k in self.ks)
        object.__setattr__(self, "ks", ks)
        if not ks:
            raise SpecError("K must not be empty")
        check_dimension(len(ks))
        for k in ks:
            if not 1 <= k <= self.p - 1:
                raise SpecError(f"each k must be in [1, {self.p - 1}], got {k}")

    @classmethod
    def padded(cls, p, ks):
        """Build a spec, repeating the last k until len(K) is a power of 2"""
        ks = [int(k) for k in ks]
        if not ks:
            raise SpecError("K must not be empty")
        size = 1
        while size < len(ks):
            size *= 2
        if size != len(ks):
            logger.debug("padding K of length %d to %d", len(ks), size)
        ks += [ks[-1]] * (size - len(ks))
        return cls(p, tuple(ks))

    @property
    def d(self):
        return len(self.ks)

    @property
    def num_controls(self):
        return log2_exact(self.d)

    @cached_property
    def angles(self):
        """Block angles alpha_c = 2*pi*k_c/p"""
        return tuple(2 * math.pi * k / self.p for k in self.ks)


@dataclass(frozen=True)
class AcceptanceProfile:
    """Acceptance probability of a^m for every residue m in 0..p-1"""

    p: int
    probs: tuple

    @property
    def epsilon(self):
        return max(self.probs[1:], default=0.0)


def ua_from_angles(alphas):
    """Uniformly controlled rotation: block c applies Ry(alphas[c]) to the target"""
    check_dimension(len(alphas))
    return block_diag([rotation_ry(a) for a in alphas])


def ua_matrix(spec):
    return ua_from_angles(spec.angles)


def end_marker_matrix(d):
    """H on every control qubit, identity on the target"""
    h = identity(1)
    for _ in range(log2_exact(d)):
        h = kron(h, gate_h())
    return kron(h, identity(2))


def accept_prob_single(p, k, m):
    """
    Acceptance probability of a^m by the two-state automaton M_k.

    Args:
        p: prime modulus
        k: rotation multiplier, 1 <= k < p
        m: input length

    Returns:
        |<0| R_k^m |0>|^2
    """
    check_prime(p)
    if not 1 <= k < p:
        raise SpecError(f"k must be in [1, {p - 1}], got {k}")
    if m < 0:
        raise SpecError(f"input length must be >= 0, got {m}")
    r = rotation_ry(2 * math.pi * k / p)
    v = np.array([1, 0], dtype=complex)
    for _ in range(m):
        v = r @ v
    return float(abs(v[0]) ** 2)


def accept_prob_angles(alphas, m):
    """Parallel-model acceptance of a^m for arbitrary block angles"""
    if m < 0:
        raise SpecError(f"input length must be >= 0, got {m}")
    d = check_dimension(len(alphas))
    ends = end_marker_matrix(d)
    ua = ua_from_angles(alphas)
    v = np.zeros(2 * d, dtype=complex)
    v[0] = 1
    v = ends @ v
    v = np.linalg.matrix_power(ua, m) @ v
    v = ends @ v
    return float(abs(v[0]) ** 2)


def accept_prob_parallel(spec, m):
    """Probability that U_$ U_a^m U_cent |0...0> is observed in |0...0>"""
    return accept_prob_angles(spec.angles, m)


def phase_accept_prob(alphas, m):
    """Acceptance of a phase-kickback automaton: |(1/d) sum_c exp(-i m alpha_c)|^2"""
    alphas = np.asarray(alphas, dtype=float)
    return float(abs(np.mean(np.exp(-1j * m * alphas))) ** 2)


def profile_from_angles(alphas, p):
    """Acceptance for m = 0..p-1 by stepping the state one symbol at a time"""
    d = check_dimension(len(alphas))
    ends = end_marker_matrix(d)
    ua = ua_from_angles(alphas)
    v = np.zeros(2 * d, dtype=complex)
    v[0] = 1
    v = ends @ v
    probs = []
    for _ in range(p):
        probs.append(float(abs((ends @ v)[0]) ** 2))
        v = ua @ v
    return AcceptanceProfile(p, tuple(probs))


def acceptance_profile(spec):
    return profile_from_angles(spec.angles, spec.p)


def error_bound_angles(alphas, p):
    return profile_from_angles(alphas, p).epsilon


def error_bound(spec):
    """Worst non-member acceptance, max over m in 1..p-1"""
    return acceptance_profile(spec).epsilon


def _check_search(p, d, target_eps, budget):
    check_prime(p)
    check_dimension(d, minimum=2)
    if not 0 < target_eps < 0.5:
        raise SpecError(f"target epsilon must be in (0, 1/2), got {target_eps}")
    if budget < 0:
        raise SpecError(f"budget must be >= 0, got {budget}")


def search_k(p, d, target_eps, budget, seed):
    """
    Random search for K with error_bound <= target_eps.

    K is drawn uniformly from [1, p-1]^d by a generator seeded with seed, so
    the first hit is a deterministic function of the arguments.

    Returns:
        QfaSpec, or None when the budget runs out
    """
    _check_search(p, d, target_eps, budget)
    rng = np.random.default_rng(seed)
    for trial in range(budget):
        ks = tuple(int(k) for k in rng.integers(1, p, size=d))
        spec = QfaSpec(p, ks)
        eps = error_bound(spec)
        if eps <= target_eps:
            logger.info("search_k: trial %d found K=%s (eps=%.6f)", trial, list(ks), eps)
            return spec
    logger.info("search_k: no K with eps <= %g in %d trials", target_eps, budget)
    return None


def program_matrix(spec, j):
    """Unitary U_$ U_a^j U_cent of the whole automaton for input a^j"""
    ends = end_marker_matrix(spec.d)
    return ends @ np.linalg.matrix_power(ua_matrix(spec), j) @ ends
