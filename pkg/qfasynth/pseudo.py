"""
Pseudo rotations: log2(d) + 1 rotations instead of d

The target gets an unconditional rotation xi_0 and one singly controlled
rotation xi_i per control qubit i-1, so control pattern c sees the angle
xi_0 + sum_i c_i xi_i. The d effective angles are therefore an affine
function of the control bits; when every xi is an integer multiple of 2*pi/p
the automaton still accepts members with certainty.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from qfasynth import config
from qfasynth.circuit import Circuit, elaborate, mcrot, program_circuit, rot
from qfasynth.errors import SpecError
from qfasynth.matrix import Axis
from qfasynth.model import (
    AcceptanceProfile, check_dimension, check_prime, end_marker_matrix, log2_exact,
)

logger = logging.getLogger(__name__)

# Reference parameter set for MOD_37 on five qubits, listed in wire order of
# the routed layout; the entry on the initial target wire is the unconditional
# angle.
REFERENCE_P = 37
REFERENCE_WIRE_MULTIPLES = (3, 6, 19, 2, 8)
REFERENCE_TARGET_WIRE = 3


@dataclass(frozen=True)
class PseudoSpec:
    p: int
    xis: tuple

    def __post_init__(self):
        check_prime(self.p)
        xis = tuple(float(v) for v in self.xis)
        if not xis:
            raise SpecError("need at least the unconditional angle xi_0")
        if not all(math.isfinite(v) for v in xis):
            raise SpecError(f"angles must be finite: {xis}")
        object.__setattr__(self, "xis", xis)

    @classmethod
    def from_multiples(cls, p, multiples):
        """xi_i = 2*pi*multiples[i]/p, xi_0 first"""
        return cls(p, tuple(2 * math.pi * m / p for m in multiples))

    @classmethod
    def from_wire_multiples(cls, p, multiples, target_wire):
        """
        Read multiples listed per wire of a routed layout.

        The entry on target_wire becomes xi_0; the others, in wire order,
        control from the top control qubit down.
        """
        multiples = list(multiples)
        if not 0 <= target_wire < len(multiples):
            raise SpecError(f"target wire {target_wire} outside 0..{len(multiples) - 1}")
        xi0 = multiples.pop(target_wire)
        return cls.from_multiples(p, [xi0] + multiples)

    @classmethod
    def reference(cls):
        return cls.from_wire_multiples(REFERENCE_P, REFERENCE_WIRE_MULTIPLES, REFERENCE_TARGET_WIRE)

    @property
    def num_controls(self):
        return len(self.xis) - 1

    @property
    def d(self):
        return 1 << self.num_controls

    @property
    def effective_angles(self):
        """xi_0 + sum c_i xi_i for every pattern c (qubit 0 is the top bit)"""
        k = self.num_controls
        out = []
        for c in range(self.d):
            angle = self.xis[0]
            for i in range(1, k + 1):
                if (c >> (k - i)) & 1:
                    angle += self.xis[i]
            out.append(angle)
        return tuple(out)


@dataclass(frozen=True)
class RealizedSet:
    """Effective angles expressed as multiples of 2*pi/p, reduced mod p"""

    p: int
    multiples: tuple
    integral: bool

    def as_ks(self):
        if not self.integral:
            raise SpecError("effective angles are not integral multiples of 2*pi/p")
        return tuple(int(round(m)) % self.p for m in self.multiples)


def synth_pseudo(pspec, axis=Axis.Y):
    """Unconditional xi_0 on the target, then xi_i controlled by qubit i-1"""
    k = pspec.num_controls
    gates = [rot(axis, k, pspec.xis[0])]
    gates += [mcrot(axis, (i - 1,), pspec.xis[i], k) for i in range(1, k + 1)]
    return Circuit(k + 1, tuple(gates))


def pseudo_program(pspec, j, axis=Axis.Y):
    """End-markers around j pseudo-rotation symbol blocks"""
    return program_circuit(synth_pseudo(pspec, axis), j, range(pspec.num_controls))


def realizable_k(pspec, p=None):
    p = pspec.p if p is None else check_prime(p)
    tol = config.tolerances().integral
    multiples = []
    integral = True
    for angle in pspec.effective_angles:
        m = angle * p / (2 * math.pi)
        if abs(m - round(m)) > tol:
            integral = False
        else:
            m = float(round(m))
        multiples.append(m % p)
    return RealizedSet(p, tuple(multiples), integral)


def pseudo_profile(pspec):
    """Acceptance of a^m, m = 0..p-1, by stepping the elaborated pseudo circuit"""
    symbol = elaborate(synth_pseudo(pspec))
    ends = end_marker_matrix(pspec.d)
    v = np.zeros(2 * pspec.d, dtype=complex)
    v[0] = 1
    v = ends @ v
    probs = []
    for _ in range(pspec.p):
        probs.append(float(abs((ends @ v)[0]) ** 2))
        v = symbol @ v
    return AcceptanceProfile(pspec.p, tuple(probs))


def search_xi(p, d, target_eps, budget, seed):
    """
    Random search over integral xi vectors.

    Each xi_i is 2*pi*k/p with k uniform in [1, p-1]; the first vector whose
    simulated profile has epsilon <= target_eps wins.

    Returns:
        PseudoSpec, or None when the budget runs out
    """
    check_prime(p)
    check_dimension(d, minimum=2)
    if not 0 < target_eps < 0.5:
        raise SpecError(f"target epsilon must be in (0, 1/2), got {target_eps}")
    k = log2_exact(d)
    rng = np.random.default_rng(seed)
    for trial in range(budget):
        multiples = [int(v) for v in rng.integers(1, p, size=k + 1)]
        pspec = PseudoSpec.from_multiples(p, multiples)
        eps = pseudo_profile(pspec).epsilon
        if eps <= target_eps:
            logger.info("search_xi: trial %d found multiples %s (eps=%.6f)", trial, multiples, eps)
            return pspec
    logger.info("search_xi: nothing with eps <= %g in %d trials", target_eps, budget)
    return None


def multiples_of(pspec):
    """xi vector as (rounded) multiples of 2*pi/p"""
    return tuple(int(round(v * pspec.p / (2 * math.pi))) for v in pspec.xis)
