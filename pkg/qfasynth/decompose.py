"""
Decomposition of multi-controlled gates into CNOT and 1-qubit gates

Rules:
    MCX, 1 control      CNOT
    MCX, 2 controls     6-CNOT Toffoli (T = Rz(pi/4))
    MCX, 3 controls     20-CNOT Gray-code phase network, no ancilla
    MCX, k >= 4         two-level split through one dirty ancilla a:
                        R(B1 -> a), MCX(B2 + a -> t), R^-1(B1 -> a), MCX(B2 + a -> t)
                        where R is a relative-phase MCX built the same way
                        on top of the 3-CNOT Margolus gate
    MCR, 1 control      R(t/2), CNOT, R(-t/2), CNOT
    MCR with ancilla a  R(t/2), MCX(C -> t), R(-t/2), MCX(C -> t)   (a dirty)
    MCR, no ancilla     C_c R(t/2), MCX(B -> t), C_c R(-t/2), MCX(B -> t)
                        with the last control c peeled off and used as the
                        dirty ancilla of the inner MCX
    open controls       X on the open controls before and after

R is any rotation with R(a)R(b) = R(a+b) and X R(a) X = R(-a): RY or RZ.
All rules are exact up to global phase; ancillas may start in any state and
are returned unchanged.
"""

import logging
import math

from qfasynth.circuit import (
    Circuit, GateKind, cnot, mcrot, mcx, rot, rz, h, x, ry,
)
from qfasynth.errors import AncillaError, CircuitError
from qfasynth.matrix import Axis

logger = logging.getLogger(__name__)


def invert(gates):
    return [g.inverse() for g in reversed(gates)]


def _cphase(c, t, phi):
    """diag(1, 1, 1, e^{i phi}) on (c, t) up to global phase"""
    return [rz(c, phi / 2), rz(t, phi / 2), cnot(c, t), rz(t, -phi / 2), cnot(c, t)]


def toffoli_gates(a, b, t):
    quarter = math.pi / 4
    return [
        h(t),
        cnot(b, t), rz(t, -quarter),
        cnot(a, t), rz(t, quarter),
        cnot(b, t), rz(t, -quarter),
        cnot(a, t), rz(b, quarter), rz(t, quarter),
        h(t),
        cnot(a, b), rz(a, quarter), rz(b, -quarter), cnot(a, b),
    ]


def c3x_gates(c1, c2, c3, t):
    """Triple-controlled X as H . (controlled X^1/4 Gray network) . H"""
    v = math.pi / 4
    return (
        [h(t)]
        + _cphase(c1, t, v)
        + [cnot(c1, c2)] + _cphase(c2, t, -v) + [cnot(c1, c2)]
        + _cphase(c2, t, v)
        + [cnot(c2, c3)] + _cphase(c3, t, -v)
        + [cnot(c1, c3)] + _cphase(c3, t, v)
        + [cnot(c2, c3)] + _cphase(c3, t, -v)
        + [cnot(c1, c3)] + _cphase(c3, t, v)
        + [h(t)]
    )


def margolus_gates(a, b, t):
    """Toffoli up to a -1 phase on |a=1, b=0, t=1>; self-inverse"""
    e = math.pi / 8
    return [
        ry(t, e), cnot(b, t), ry(t, e), cnot(a, t),
        ry(t, -e), cnot(b, t), ry(t, -e),
    ]


def _split(controls, free, first):
    if not free:
        raise AncillaError(
            f"{len(controls)}-control X needs a free qubit, none available")
    a = free[0]
    return a, list(controls[:first]), list(controls[first:]), list(free[1:])


def relative_mcx_gates(controls, target, free):
    """MCX up to a diagonal phase; free qubits are dirty ancillas"""
    k = len(controls)
    if k == 1:
        return [cnot(controls[0], target)]
    if k == 2:
        return margolus_gates(controls[0], controls[1], target)
    a, b1, b2, rest = _split(controls, free, (k + 1) // 2)
    first = relative_mcx_gates(b1, a, b2 + rest)
    second = relative_mcx_gates(b2 + [a], target, b1 + rest)
    return first + second + invert(first) + second


def mcx_gates(controls, target, free=()):
    """
    Exact multi-controlled X on filled controls.

    Args:
        controls: control qubits
        target: target qubit
        free: qubits usable as dirty ancillas, preferred first

    Returns:
        list of CNOT and 1-qubit gates
    """
    controls = list(controls)
    free = [q for q in free if q != target and q not in controls]
    k = len(controls)
    if k == 0:
        return [x(target)]
    if k == 1:
        return [cnot(controls[0], target)]
    if k == 2:
        return toffoli_gates(controls[0], controls[1], target)
    if k == 3:
        return c3x_gates(*controls, target)
    a, b1, b2, rest = _split(controls, free, k // 2 + 1)
    logger.debug("MCX %s -> %d split at %d via ancilla %d", controls, target, len(b1), a)
    first = relative_mcx_gates(b1, a, b2 + rest)
    second = mcx_gates(b2 + [a], target, b1 + rest)
    return first + second + invert(first) + second


def mcrot_gates(axis, controls, theta, target, ancilla=None):
    """One level of the controlled-rotation rules; may emit MCX and 1-control MCR"""
    controls = list(controls)
    if not controls:
        return [rot(axis, target, theta)]
    if len(controls) == 1:
        c = controls[0]
        return [rot(axis, target, theta / 2), cnot(c, target),
                rot(axis, target, -theta / 2), cnot(c, target)]
    if ancilla is not None:
        return [rot(axis, target, theta / 2), mcx(controls, target, ancilla=ancilla),
                rot(axis, target, -theta / 2), mcx(controls, target, ancilla=ancilla)]
    c, bundle = controls[-1], controls[:-1]
    return [mcrot(axis, (c,), theta / 2, target), mcx(bundle, target, ancilla=c),
            mcrot(axis, (c,), -theta / 2, target), mcx(bundle, target, ancilla=c)]


def _free_qubits(gate, num_qubits):
    busy = set(gate.qubits)
    hint = [] if gate.ancilla is None else [gate.ancilla]
    return hint + [q for q in range(num_qubits) if q not in busy and q not in hint]


def lower_gate(gate, num_qubits):
    """Fully decompose one gate to CNOT and 1-qubit gates"""
    if gate.kind not in (GateKind.MCX, GateKind.MCRY, GateKind.MCRZ):
        return [gate]

    flips = [x(q) for q in gate.controls if q in gate.open_controls]
    if gate.kind is GateKind.MCX:
        body = mcx_gates(gate.controls, gate.target, _free_qubits(gate, num_qubits))
    else:
        body = []
        for g in mcrot_gates(gate.axis, gate.controls, gate.theta, gate.target, gate.ancilla):
            body.extend(lower_gate(g, num_qubits))
    return flips + body + flips


def lower(c):
    """Decompose every multi-controlled gate in the circuit"""
    out = []
    for g in c.gates:
        out.extend(lower_gate(g, c.num_qubits))
    return Circuit(c.num_qubits, tuple(out))


def decompose_mcx(g, ancilla=None):
    """
    Circuit for a g-control X: controls 0..g-1, target g.

    Args:
        g: number of controls (>= 1)
        ancilla: qubit index of a free qubit, required when g > 3

    Raises:
        AncillaError: g > 3 without an ancilla
    """
    if g < 1:
        raise CircuitError(f"MCX needs at least one control, got {g}")
    controls = list(range(g))
    target = g
    if ancilla is not None and ancilla <= g:
        raise CircuitError(f"ancilla {ancilla} collides with controls/target 0..{g}")
    if g > 3 and ancilla is None:
        raise AncillaError(f"{g}-control X needs an ancilla qubit")
    n = g + 1 if ancilla is None else ancilla + 1
    free = [] if ancilla is None else [ancilla]
    return Circuit(n, tuple(mcx_gates(controls, target, free)))


def decompose_mcry(g, theta, ancilla_available=False, axis=Axis.Y):
    """
    Circuit for a g-control rotation: controls 0..g-1, target g.

    With ancilla_available the extra qubit g+1 serves the two-MCX form;
    otherwise the last control is peeled off and used as the ancilla of the
    inner MCX, so no extra qubit is needed for any g.
    """
    if g < 1:
        raise CircuitError(f"controlled rotation needs at least one control, got {g}")
    controls = tuple(range(g))
    if ancilla_available and g > 1:
        gate = mcrot(axis, controls, theta, g, ancilla=g + 1)
        return lower(Circuit(g + 2, (gate,)))
    return lower(Circuit(g + 1, (mcrot(axis, controls, theta, g),)))
