"""
Rewrite Ry-based circuits into the basis {CNOT, I, RZ, SX, X}

Since SX^dagger . Rz(2a) . SX = Ry(a), a rotation Ry(a) on the target can be
replaced by SX, Rz(2a), SX^dagger (time order). Controlled rotations keep their
controls: SX on the target commutes with the control projectors. SX also
commutes with X and with every CNOT/MCX aimed at the target, so the target is
moved into the SX frame once, before its first rotation, and back once at the
end (or before the first gate that does not commute). Across j symbol blocks
only one SX and one SX^dagger remain.

Fixed gates are then expanded:
    H     = Rz(pi/2) SX Rz(pi/2)   (up to global phase)
    S/S^t = Rz(+-pi/2)
    SX^t  = X SX
"""

import logging
import math

from qfasynth.circuit import (
    Circuit, GateKind, mcrot, rot, rz, sx, sxdg, x,
)
from qfasynth.decompose import lower
from qfasynth.errors import RewriteError
from qfasynth.matrix import Axis

logger = logging.getLogger(__name__)

BASIS_KINDS = frozenset({GateKind.CNOT, GateKind.I, GateKind.RZ, GateKind.SX, GateKind.X})
# Diagonal phase gates accepted as Rz(+-pi/2)
PHASE_KINDS = frozenset({GateKind.S, GateKind.SDG})

_Y_KINDS = (GateKind.RY, GateKind.MCRY)


def _to_z(gate):
    """Rz-axis twin of a y rotation with the doubled angle"""
    if not gate.controls and gate.kind is GateKind.RY:
        return rot(Axis.Z, gate.target, 2 * gate.theta)
    return mcrot(Axis.Z, gate.controls, 2 * gate.theta, gate.target,
                 gate.open_controls, gate.ancilla)


def _commutes_with_sx(gate, q):
    """Whether gate commutes with SX on qubit q"""
    if q not in gate.qubits:
        return True
    if q in gate.controls:
        return False
    return gate.kind in (GateKind.X, GateKind.SX, GateKind.SXDG, GateKind.I,
                         GateKind.CNOT, GateKind.MCX)


def rotation_target(c):
    """The single qubit that y rotations act on, or None"""
    targets = {g.target for g in c.gates if g.kind in _Y_KINDS}
    if len(targets) > 1:
        raise RewriteError(f"y rotations act on several qubits {sorted(targets)}; pass target=")
    return next(iter(targets), None)


def conjugate_rotations(c, target=None):
    """
    Move y rotations on the target into the SX frame, sharing one SX/SX^t pair.

    Args:
        c: circuit, may still contain MCX/MCRY
        target: qubit carrying the rotations; inferred when None

    Raises:
        RewriteError: y rotations on more than one qubit and no target given
    """
    if target is None:
        target = rotation_target(c)
    if target is None:
        return c
    if not 0 <= target < c.num_qubits:
        raise RewriteError(f"target {target} outside a {c.num_qubits}-qubit circuit")

    out = []
    framed = False
    for g in c.gates:
        if g.kind in _Y_KINDS and g.target == target:
            if not framed:
                out.append(sx(target))
                framed = True
            out.append(_to_z(g))
            continue
        if framed and not _commutes_with_sx(g, target):
            out.append(sxdg(target))
            framed = False
        out.append(g)
    if framed:
        out.append(sxdg(target))
    return Circuit(c.num_qubits, tuple(out))


def conjugate_per_gate(c):
    """Reference rewrite: every y rotation gets its own SX ... SX^t"""
    out = []
    for g in c.gates:
        if g.kind in _Y_KINDS:
            out += [sx(g.target), _to_z(g), sxdg(g.target)]
        else:
            out.append(g)
    return Circuit(c.num_qubits, tuple(out))


def _expand_gate(g):
    k = g.kind
    if k in BASIS_KINDS:
        return [g]
    q = g.target
    if k is GateKind.H:
        return [rz(q, math.pi / 2), sx(q), rz(q, math.pi / 2)]
    if k is GateKind.S:
        return [rz(q, math.pi / 2)]
    if k is GateKind.SDG:
        return [rz(q, -math.pi / 2)]
    if k is GateKind.SXDG:
        return [sx(q), x(q)]
    if k is GateKind.RY:
        return [sx(q), rz(q, 2 * g.theta), sx(q), x(q)]
    raise RewriteError(f"no basis expansion for {k.value}")


def expand_to_basis(c):
    """Lower multi-controlled gates, then expand every non-basis gate"""
    out = []
    for g in lower(c).gates:
        out.extend(_expand_gate(g))
    return Circuit(c.num_qubits, tuple(out))


def rewrite_to_rz_basis(c, target=None):
    """Full pipeline: shared SX frame on the target, lowering, basis expansion"""
    rewritten = expand_to_basis(conjugate_rotations(c, target))
    logger.debug("rewrote %d gates into %d basis gates", len(c), len(rewritten))
    return rewritten


def basis_check(c):
    """True iff every gate, after lowering, is CNOT, I, RZ, SX, X (or S/S^t)"""
    allowed = BASIS_KINDS | PHASE_KINDS
    return all(g.kind in allowed for g in lower(c).gates)
