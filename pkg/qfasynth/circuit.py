"""
Gate-level circuit representation

Gates:
- Fixed 1-qubit gates: H, X, SX, SXDG, S, SDG, I
- Rotations: RY (real-plane rotation by theta), RZ (half-angle phase)
- CNOT with one filled control
- Multi-controlled MCX, MCRY, MCRZ with any number of controls, each control
  filled (fires on |1>) or open (fires on |0>), and an optional ancilla hint
  consumed by the decomposition passes

Qubit 0 is the top wire and the most significant bit of a basis index.
Elaboration applies every gate to an identity tensor with numpy slicing on the
control values, so multi-controlled gates are expanded exactly and never
through a decomposition.
"""

import enum
import math
from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np

from qfasynth import config
from qfasynth.errors import CircuitError
from qfasynth.matrix import (
    Axis, gate_h, gate_s, gate_sdg, gate_sx, gate_sxdg, gate_x, identity,
    rotation_ry, rotation_rz,
)


class GateKind(enum.Enum):
    H = "H"
    X = "X"
    SX = "SX"
    SXDG = "SXDG"
    S = "S"
    SDG = "SDG"
    I = "I"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    MCX = "MCX"
    MCRY = "MCRY"
    MCRZ = "MCRZ"


FIXED_KINDS = frozenset({GateKind.H, GateKind.X, GateKind.SX, GateKind.SXDG,
                         GateKind.S, GateKind.SDG, GateKind.I})
ROTATION_KINDS = frozenset({GateKind.RY, GateKind.RZ, GateKind.MCRY, GateKind.MCRZ})
MULTI_KINDS = frozenset({GateKind.MCX, GateKind.MCRY, GateKind.MCRZ})

_FIXED_MATRIX = {
    GateKind.H: gate_h(),
    GateKind.X: gate_x(),
    GateKind.SX: gate_sx(),
    GateKind.SXDG: gate_sxdg(),
    GateKind.S: gate_s(),
    GateKind.SDG: gate_sdg(),
    GateKind.I: identity(2),
    GateKind.CNOT: gate_x(),
    GateKind.MCX: gate_x(),
}

_INVERSE_KIND = {
    GateKind.SX: GateKind.SXDG,
    GateKind.SXDG: GateKind.SX,
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
}


@dataclass(frozen=True)
class Gate:
    """One gate acting on a single target, optionally controlled"""

    kind: GateKind
    target: int
    controls: tuple = ()
    theta: float = None
    open_controls: frozenset = frozenset()
    ancilla: int = None

    def __post_init__(self):
        controls = tuple(int(c) for c in self.controls)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "open_controls", frozenset(self.open_controls))

        if self.kind in ROTATION_KINDS:
            if self.theta is None or not math.isfinite(self.theta):
                raise CircuitError(f"{self.kind.value} needs a finite angle, got {self.theta}")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise CircuitError(f"{self.kind.value} takes no angle")

        if self.kind in FIXED_KINDS or self.kind in (GateKind.RY, GateKind.RZ):
            if controls:
                raise CircuitError(f"{self.kind.value} takes no controls")
        elif self.kind is GateKind.CNOT:
            if len(controls) != 1 or self.open_controls:
                raise CircuitError("CNOT needs exactly one filled control")

        if not self.open_controls <= set(controls):
            raise CircuitError("open controls must be a subset of the controls")

        qubits = controls + (self.target,)
        if self.ancilla is not None:
            qubits += (self.ancilla,)
        if any(q < 0 for q in qubits):
            raise CircuitError(f"negative qubit index in {self}")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"{self.kind.value} qubits must be distinct: {qubits}")

    @property
    def qubits(self):
        """Qubits the gate acts on (controls then target)"""
        return self.controls + (self.target,)

    @property
    def is_rotation(self):
        return self.kind in ROTATION_KINDS

    @property
    def axis(self):
        if self.kind in (GateKind.RY, GateKind.MCRY):
            return Axis.Y
        if self.kind in (GateKind.RZ, GateKind.MCRZ):
            return Axis.Z
        return None

    def control_value(self, q):
        """Basis value of control q that makes the gate fire"""
        return 0 if q in self.open_controls else 1

    def matrix(self):
        """2x2 matrix applied to the target when all controls fire"""
        if self.kind in (GateKind.RY, GateKind.MCRY):
            return rotation_ry(self.theta)
        if self.kind in (GateKind.RZ, GateKind.MCRZ):
            return rotation_rz(self.theta)
        return _FIXED_MATRIX[self.kind]

    def inverse(self):
        if self.is_rotation:
            return replace(self, theta=-self.theta)
        if self.kind in _INVERSE_KIND:
            return replace(self, kind=_INVERSE_KIND[self.kind])
        return self

    def relabel(self, mapping):
        return Gate(
            self.kind,
            mapping[self.target],
            tuple(mapping[c] for c in self.controls),
            self.theta,
            frozenset(mapping[c] for c in self.open_controls),
            None if self.ancilla is None else mapping[self.ancilla],
        )


def h(q):
    return Gate(GateKind.H, q)


def x(q):
    return Gate(GateKind.X, q)


def sx(q):
    return Gate(GateKind.SX, q)


def sxdg(q):
    return Gate(GateKind.SXDG, q)


def s(q):
    return Gate(GateKind.S, q)


def sdg(q):
    return Gate(GateKind.SDG, q)


def ry(q, theta):
    return Gate(GateKind.RY, q, theta=theta)


def rz(q, theta):
    return Gate(GateKind.RZ, q, theta=theta)


def rot(axis, q, theta):
    return Gate(GateKind.RY if axis is Axis.Y else GateKind.RZ, q, theta=theta)


def cnot(control, target):
    return Gate(GateKind.CNOT, target, (control,))


def mcx(controls, target, open_controls=(), ancilla=None):
    return Gate(GateKind.MCX, target, tuple(controls), None, frozenset(open_controls), ancilla)


def mcrot(axis, controls, theta, target, open_controls=(), ancilla=None):
    kind = GateKind.MCRY if axis is Axis.Y else GateKind.MCRZ
    return Gate(kind, target, tuple(controls), theta, frozenset(open_controls), ancilla)


def mcry(controls, theta, target, open_controls=(), ancilla=None):
    return mcrot(Axis.Y, controls, theta, target, open_controls, ancilla)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over num_qubits indexed qubits"""

    num_qubits: int
    gates: tuple = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        if self.num_qubits < 0:
            raise CircuitError(f"num_qubits must be >= 0, got {self.num_qubits}")
        for g in gates:
            used = g.qubits + (() if g.ancilla is None else (g.ancilla,))
            if max(used) >= self.num_qubits:
                raise CircuitError(
                    f"{g.kind.value} on qubits {used} outside a {self.num_qubits}-qubit circuit")

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other):
        if other.num_qubits != self.num_qubits:
            raise CircuitError(
                f"cannot concatenate {self.num_qubits}- and {other.num_qubits}-qubit circuits")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def extend(self, gates):
        return Circuit(self.num_qubits, self.gates + tuple(gates))

    def repeat(self, j):
        return Circuit(self.num_qubits, self.gates * j)

    def inverse(self):
        """Reverse gate order and invert every gate"""
        return Circuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.gates)))

    def relabel(self, mapping, num_qubits=None):
        """Rename qubits; mapping[q] is the new index of qubit q"""
        n = self.num_qubits if num_qubits is None else num_qubits
        return Circuit(n, tuple(g.relabel(mapping) for g in self.gates))

    def count(self, kind):
        return sum(1 for g in self.gates if g.kind is kind)


def gray_code(i):
    """Binary reflected Gray code of i"""
    if i < 0:
        raise ValueError(f"gray_code needs i >= 0, got {i}")
    return i ^ (i >> 1)


def gray_string(i, width):
    return format(gray_code(i), f"0{width}b") if width else ""


def changed_bit(a, b):
    """Index of the single bit where a and b differ"""
    diff = a ^ b
    if diff == 0 or diff & (diff - 1):
        raise ValueError(f"{a} and {b} differ in {bin(diff).count('1')} bits")
    return diff.bit_length() - 1


def bit_qubit(bit, width, offset=0):
    """Qubit carrying bit `bit` of a width-bit register starting at qubit offset"""
    return offset + width - 1 - bit


def apply_gate(tensor, gate):
    """
    Apply a gate to a state tensor in place.

    The tensor has one length-2 axis per qubit (qubit 0 first) followed by any
    number of batch axes. Controls select a slice; the 2x2 matrix is contracted
    into the target axis of that slice.
    """
    index = [slice(None)] * tensor.ndim
    for c in gate.controls:
        index[c] = gate.control_value(c)
    index = tuple(index)
    sub = tensor[index]
    axis = gate.target - sum(1 for c in gate.controls if c < gate.target)
    moved = np.tensordot(gate.matrix(), sub, axes=([1], [axis]))
    tensor[index] = np.moveaxis(moved, 0, axis)
    return tensor


def check_size(num_qubits):
    cap = config.active().max_qubits
    if num_qubits > cap:
        raise CircuitError(f"{num_qubits} qubits exceeds the elaboration limit of {cap}")


def elaborate(c):
    """Unitary of the whole circuit (gates applied in order)"""
    check_size(c.num_qubits)
    n = c.num_qubits
    dim = 1 << n
    tensor = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        apply_gate(tensor, g)
    return tensor.reshape(dim, dim)


@dataclass(frozen=True)
class Metrics:
    cnot_count: int = 0
    depth: int = 0
    histogram: dict = field(default_factory=dict)
    min_abs_angle: float = 0.0
    pre_decomposition: bool = False

    @property
    def gate_count(self):
        return sum(self.histogram.values())

    def count(self, *names):
        return sum(self.histogram.get(n, 0) for n in names)

    def to_dict(self):
        return {
            "cnot_count": self.cnot_count,
            "depth": self.depth,
            "histogram": dict(self.histogram),
            "min_abs_angle": self.min_abs_angle,
            "pre_decomposition": self.pre_decomposition,
        }


def circuit_depth(c):
    level = [0] * c.num_qubits
    for g in c.gates:
        layer = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = layer
    return max(level, default=0)


def metrics(c):
    """CNOT count, depth, gate histogram and smallest rotation angle"""
    hist = Counter(g.kind.value for g in c.gates)
    angles = [abs(g.theta) for g in c.gates if g.is_rotation]
    return Metrics(
        cnot_count=hist.get(GateKind.CNOT.value, 0),
        depth=circuit_depth(c),
        histogram=dict(sorted(hist.items())),
        min_abs_angle=min(angles, default=0.0),
        pre_decomposition=any(g.kind in MULTI_KINDS for g in c.gates),
    )


def program_circuit(symbol, j, controls):
    """End-marker Hadamards on the controls around j copies of a symbol block"""
    if j < 0:
        raise CircuitError(f"input length must be >= 0, got {j}")
    marker = tuple(h(q) for q in controls)
    return Circuit(symbol.num_qubits, marker + symbol.gates * j + marker)
