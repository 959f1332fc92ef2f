"""
Synthesis of the uniformly controlled rotation U_a

U_a applies R(alpha_c) to the target for every control-register value c.
Layout: controls are qubits 0..k-1 (qubit 0 is the most significant bit of
c), the target is qubit k, d = 2^k.

Strategies:
- synth_naive: d multi-controlled rotations in Gray-code order, one X between
  consecutive rotations
- synth_mottonen: d rotations and d CNOTs with Gray-Walsh transformed angles
- synth_pair: two multi-controlled rotations differing in one toggled control
- synth_hybrid: t levels of the Mottonen recursion, residual blocks expanded
  pairwise (or naively, for comparison)

The circuits returned here still contain MCX/MCRY gates; decompose.lower()
brings them down to CNOT and 1-qubit gates.
"""

import logging
from dataclasses import dataclass

import numpy as np

from qfasynth.circuit import (
    Circuit, bit_qubit, changed_bit, cnot, gray_code, mcrot, mcx, rot, x,
)
from qfasynth.errors import SpecError
from qfasynth.matrix import Axis
from qfasynth.model import check_dimension, log2_exact

logger = logging.getLogger(__name__)

RESIDUAL_MODES = ("pair", "naive")

# Smallest pair size whose inner MCX gates all get an ancilla from the bundle
PAIR_MIN_CONTROLS = 5


@dataclass(frozen=True)
class AngleVector:
    """Original block angles and, once transformed, the ladder angles"""

    alphas: tuple
    thetas: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        check_dimension(len(self.alphas))
        if self.thetas is not None:
            object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
            if len(self.thetas) != len(self.alphas):
                raise SpecError("thetas and alphas must have the same length")

    @classmethod
    def from_spec(cls, spec):
        return cls(spec.angles)

    @property
    def d(self):
        return len(self.alphas)


def gray_sign_matrix(levels):
    """S[i, c] = (-1)^popcount(c & gray(i)) for i, c in 0..2^levels-1"""
    size = 1 << levels
    out = np.empty((size, size))
    for i in range(size):
        g = gray_code(i)
        for c in range(size):
            out[i, c] = -1.0 if bin(c & g).count("1") % 2 else 1.0
    return out


def gray_walsh(alphas, levels):
    """
    Residual angles after `levels` steps of the Mottonen recursion.

    Returns:
        array of shape (2^levels, d / 2^levels); row i holds the residual
        block angles applied before seam CNOT i, indexed by the low controls
    """
    alphas = np.asarray(alphas, dtype=float)
    d = check_dimension(len(alphas))
    if not 0 <= levels <= log2_exact(d):
        raise SpecError(f"recursion depth must be in [0, {log2_exact(d)}], got {levels}")
    top = 1 << levels
    block = alphas.reshape(top, d // top)
    return gray_sign_matrix(levels) @ block / top


def mottonen_angles(av):
    """theta = B . alpha with B_ij = (1/d)(-1)^popcount(j & gray(i))"""
    thetas = gray_walsh(av.alphas, log2_exact(av.d))[:, 0]
    return AngleVector(av.alphas, tuple(thetas))


def inverse_mottonen_angles(thetas):
    """alpha = B^-1 . theta; B^-1 = d * B^T"""
    thetas = np.asarray(thetas, dtype=float)
    k = log2_exact(len(thetas))
    return tuple(gray_sign_matrix(k).T @ thetas)


def _ucr_gray_gates(axis, betas, lower, target):
    """
    Naive uniformly controlled rotation over the `lower` qubits.

    An opening X layer turns the all-zero pattern into the filled one; after
    that a single X between consecutive rotations walks the Gray code, and a
    closing layer undoes what is left of the flips.
    """
    m = len(lower)
    if m == 0:
        return [rot(axis, target, betas[0])]
    gates = [x(q) for q in lower]
    size = 1 << m
    for i in range(size):
        pattern = gray_code(i)
        gates.append(mcrot(axis, lower, betas[pattern], target))
        if i < size - 1:
            bit = changed_bit(pattern, gray_code(i + 1))
            gates.append(x(lower[bit_qubit(bit, m)]))
    last = gray_code(size - 1)
    gates.extend(x(lower[bit_qubit(b, m)]) for b in range(m) if not (last >> b) & 1)
    return gates


def synth_naive(spec, axis=Axis.Y):
    """d controlled rotations in Gray-code order of the control patterns"""
    k = spec.num_controls
    controls = tuple(range(k))
    return Circuit(k + 1, tuple(_ucr_gray_gates(axis, spec.angles, controls, k)))


def synth_mottonen(spec, axis=Axis.Y):
    """Rotation/CNOT ladder: d rotations, d CNOTs"""
    if spec.d < 2:
        raise SpecError("Mottonen synthesis needs d >= 2")
    k = spec.num_controls
    av = mottonen_angles(AngleVector.from_spec(spec))
    gates = []
    for i, theta in enumerate(av.thetas):
        bit = changed_bit(gray_code(i), gray_code((i + 1) % spec.d))
        gates.append(rot(axis, k, theta))
        gates.append(cnot(bit_qubit(bit, k), k))
    return Circuit(k + 1, tuple(gates))


def pair_gates(theta1, theta2, bundle, toggle, target, axis=Axis.Y):
    """
    MCR(bundle + toggle, theta1), X(toggle), MCR(bundle + toggle, theta2).

    Controls are filled. With at least PAIR_MIN_CONTROLS controls the shared
    bundle part is paid once: the target is the ancilla of the two MCX on the
    toggle, the toggle is the ancilla of the closing bundle rotation.
    """
    bundle = tuple(bundle)
    controls = bundle + (toggle,)
    if len(controls) < PAIR_MIN_CONTROLS:
        return [mcrot(axis, controls, theta1, target), x(toggle),
                mcrot(axis, controls, theta2, target)]
    return [
        mcrot(axis, (toggle,), theta1 / 2, target),
        x(toggle),
        mcrot(axis, (toggle,), theta2 / 2, target),
        mcx(bundle, toggle, ancilla=target),
        mcrot(axis, (toggle,), -theta2 / 2, target),
        x(toggle),
        mcrot(axis, (toggle,), -theta1 / 2, target),
        mcx(bundle, toggle, ancilla=target),
        mcrot(axis, bundle, (theta1 + theta2) / 2, target, ancilla=toggle),
        x(toggle),
    ]


def synth_pair(theta1, theta2, n, axis=Axis.Y):
    """Pair decomposition on n controls: bundle 0..n-2, toggle n-1, target n"""
    if n < 1:
        raise SpecError(f"pair decomposition needs n >= 1 controls, got {n}")
    if n < PAIR_MIN_CONTROLS:
        logger.debug("pair with %d controls below %d: two separate rotations", n, PAIR_MIN_CONTROLS)
    return Circuit(n + 1, tuple(pair_gates(theta1, theta2, range(n - 1), n - 1, n, axis)))


def _ucr_pair_gates(axis, betas, lower, target):
    """Uniformly controlled rotation as consecutive Gray-code pairs on the last control"""
    m = len(lower)
    if m == 0:
        return [rot(axis, target, betas[0])]
    toggle = lower[-1]
    bundle = lower[:-1]
    size = 1 << m
    gates = [x(q) for q in lower]
    for q in range(size // 2):
        first, second = gray_code(2 * q), gray_code(2 * q + 1)
        gates.extend(pair_gates(betas[first], betas[second], bundle, toggle, target, axis))
        if 2 * q + 2 < size:
            bit = changed_bit(second, gray_code(2 * q + 2))
            gates.append(x(lower[bit_qubit(bit, m)]))
    last = gray_code(size - 1)
    gates.extend(x(lower[bit_qubit(b, m)]) for b in range(m) if not (last >> b) & 1)
    return gates


def hybrid_cost(d, t):
    """Predicted CNOTs of the pair-residual hybrid"""
    return 2 ** t + (d // 2) * (192 * (log2_exact(d) - t) - 768)


def naive_residual_cost(d, t):
    """Predicted CNOTs of the naive-residual hybrid, as usually written"""
    return 2 ** (t + 1) + (d // 2) * (192 * (log2_exact(d) - t - 1) - 576)


def naive_residual_cost_regrouped(d, t):
    """Same quantity regrouped against hybrid_cost"""
    return 2 * 2 ** t + (d // 2) * (192 * (log2_exact(d) - t) - 768)


def naive_cost_bound(d):
    """Upper bound on naive synthesis CNOTs for d >= 32"""
    return 48 * d * (log2_exact(d) - 3)


def formula_range(d):
    """Recursion depths for which the hybrid cost formula is stated"""
    return range(0, max(0, log2_exact(d) - 4))


@dataclass(frozen=True)
class HybridPlan:
    t: int
    d: int
    residual: str
    predicted_cnots: int
    in_formula_range: bool
    residual_angles: tuple

    @property
    def predicted_angle_scale(self):
        return 2 ** (self.t + 1)

    @property
    def min_abs_angle(self):
        """Smallest residual rotation angle magnitude"""
        return float(min(abs(a) for row in self.residual_angles for a in row))


def synth_hybrid(spec, t, residual="pair", axis=Axis.Y):
    """
    Stop the Mottonen recursion after t levels and expand the residual blocks.

    Args:
        spec: QfaSpec
        t: recursion depth, 0 <= t <= log2(d) (log2(d) - 1 for naive residuals)
        residual: "pair" or "naive"

    Returns:
        (Circuit, HybridPlan)
    """
    if residual not in RESIDUAL_MODES:
        raise SpecError(f"residual mode must be one of {RESIDUAL_MODES}, got {residual!r}")
    k = spec.num_controls
    levels = t if residual == "pair" else t + 1
    if not isinstance(t, (int, np.integer)) or t < 0 or levels > k:
        raise SpecError(f"t must be in [0, {k if residual == 'pair' else k - 1}], got {t}")

    betas = gray_walsh(spec.angles, levels)
    top = 1 << levels
    target = k
    lower = tuple(range(levels, k))
    expand = _ucr_pair_gates if residual == "pair" else _ucr_gray_gates

    gates = []
    for i in range(top):
        gates.extend(expand(axis, betas[i], lower, target))
        if levels:
            bit = changed_bit(gray_code(i), gray_code((i + 1) % top))
            gates.append(cnot(bit_qubit(bit, levels), target))

    in_range = t in formula_range(spec.d)
    if in_range:
        cost = hybrid_cost if residual == "pair" else naive_residual_cost
        predicted = cost(spec.d, t)
    else:
        predicted = None
        logger.debug("hybrid t=%d outside the formula range for d=%d", t, spec.d)

    plan = HybridPlan(
        t=int(t), d=spec.d, residual=residual, predicted_cnots=predicted,
        in_formula_range=in_range,
        residual_angles=tuple(tuple(float(b) for b in row) for row in betas),
    )
    return Circuit(k + 1, tuple(gates)), plan
