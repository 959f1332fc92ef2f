"""
Pseudo-rotation circuits on a line of qubits

Wires 0..n-1 are connected only to their neighbours. The target starts next to
one end of the line and walks to the other end during each input symbol,
visiting every control on the way:

    unfused op (control w stays, target x stays)      2 CNOT
        Rz(a)@x  CX(w,x)  Rz(b)@x  CX(w,x)
    fused op (controlled op followed by SWAP(w, x))   3 CNOT
        Rz(a)@x  CX(w,x)  Rz(b)@x  CX(x,w)  CX(w,x)

A controlled Ry(xi) in the SX frame is the controlled Rz(2*xi), i.e. a = xi,
b = -xi; the unconditional xi_0 becomes Rz(2*xi_0) and is folded into the
first op of every symbol. The walk reverses on every symbol, so the last op of
one symbol and the first op of the next share control and target and can be
merged into a single 2-CNOT op.

CNOT count: (2 + 3(n-3)) * j + 2 merged, (3n - 5) * j unmerged.
"""

import logging
from dataclasses import dataclass, replace

from qfasynth.circuit import (
    Circuit, GateKind, cnot, h, metrics, rz, s, sdg, sx, sxdg,
)
from qfasynth.errors import CircuitError, RoutingError, SpecError

logger = logging.getLogger(__name__)

FRAMES = ("sx", "s")


@dataclass(frozen=True)
class LnnTopology:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise RoutingError(f"line needs at least one qubit, got {self.n}")

    @property
    def edges(self):
        return tuple((i, i + 1) for i in range(self.n - 1))

    def adjacent(self, a, b):
        return abs(a - b) == 1

    def check(self, c):
        """True iff every two-qubit gate acts on neighbouring wires"""
        for g in c.gates:
            if g.kind in (GateKind.MCX, GateKind.MCRY, GateKind.MCRZ) and len(g.controls) > 1:
                return False
            if len(g.qubits) == 2 and not self.adjacent(*g.qubits):
                return False
        return True


@dataclass(frozen=True)
class RoutingStep:
    """One controlled rotation of the walk"""

    symbol: int
    control: int
    control_wire: int
    target_wire: int
    a: float
    b: float
    swap: bool
    merged: bool = False


@dataclass(frozen=True)
class RoutedCircuit:
    circuit: Circuit
    target_trace: tuple
    cnot_count: int
    steps: tuple
    initial_layout: tuple
    final_layout: tuple
    frame: str = "sx"
    merged: bool = False

    @property
    def n(self):
        return self.circuit.num_qubits

    @property
    def permutation(self):
        """perm[w] = final wire of the qubit that started on wire w"""
        perm = [0] * len(self.initial_layout)
        for q, w in enumerate(self.initial_layout):
            perm[w] = self.final_layout[q]
        return tuple(perm)


def predicted_cnots(n, j):
    """CNOTs of the merged routed circuit"""
    if n < 3 or j < 1:
        raise SpecError(f"need n >= 3 and j >= 1, got n={n}, j={j}")
    return (2 + 3 * (n - 3)) * j + 2


def unmerged_cnots(n, j):
    return (3 * n - 5) * j


def default_initial_target(n):
    """Target start wire: wire 3 on five qubits, else wire 1"""
    if n < 3:
        raise RoutingError(f"need at least 3 qubits, got {n}")
    return 3 if n == 5 else 1


def initial_layout(n, target_wire):
    """Logical controls 0..n-2 on the free wires in order, target (n-1) on target_wire"""
    wires = [w for w in range(n) if w != target_wire]
    return tuple(wires) + (target_wire,)


def _walk_steps(pspec, j, n, start):
    k = n - 1
    layout = list(initial_layout(n, start))
    at = {w: q for q, w in enumerate(layout)}
    x = start
    steps = []
    trace = [x]
    rightward = start == 1
    for symbol in range(j):
        if rightward:
            first, fused, last = 0, range(x + 1, n - 1), n - 1
        else:
            first, fused, last = n - 1, range(x - 1, 0, -1), 0
        plan = [(first, False)] + [(w, True) for w in fused] + [(last, False)]
        for pos, (w, swap) in enumerate(plan):
            q = at[w]
            xi = pspec.xis[q + 1]
            a = xi + (2 * pspec.xis[0] if pos == 0 else 0.0)
            steps.append(RoutingStep(symbol, q, w, x, a, -xi, swap))
            if swap:
                at[w], at[x] = k, q
                layout[q], layout[k] = x, w
                x = w
                trace.append(x)
        rightward = not rightward
    return steps, tuple(trace), tuple(layout)


def _emit(step):
    w, x = step.control_wire, step.target_wire
    gates = [rz(x, step.a), cnot(w, x), rz(x, step.b)]
    if step.swap:
        return gates + [cnot(x, w), cnot(w, x)]
    return gates + [cnot(w, x)]


def _assemble(steps, n, start, final_layout, frame):
    if frame not in FRAMES:
        raise RoutingError(f"frame must be one of {FRAMES}, got {frame!r}")
    final_target = final_layout[-1]
    if frame == "sx":
        head = [sx(start)] + [h(w) for w in range(n) if w != start]
        tail = [sxdg(final_target)] + [h(w) for w in range(n) if w != final_target]
    else:
        head = [s(start)] + [h(w) for w in range(n) if w != start]
        tail = [sdg(final_target)] + [h(w) for w in range(n) if w != final_target]
    body = [g for step in steps for g in _emit(step)]
    return Circuit(n, tuple(head + body + tail))


def _merge_steps(steps):
    out = []
    for step in steps:
        prev = out[-1] if out else None
        if (prev is not None and prev.symbol + 1 == step.symbol and not prev.swap
                and not step.swap and prev.control == step.control
                and prev.control_wire == step.control_wire
                and prev.target_wire == step.target_wire
                and not prev.merged):
            out[-1] = replace(prev, a=prev.a + step.a, b=prev.b + step.b, merged=True)
            continue
        out.append(step)
    return out


def route_pseudo_lnn(p, xis, j, n, initial_target=None, merge=True, frame="sx"):
    """
    Build the routed MOD_p program for input a^j on an n-qubit line.

    Args:
        p: prime modulus (must match xis.p)
        xis: PseudoSpec with n - 1 controlled angles
        j: input length
        n: number of qubits on the line
        initial_target: start wire of the target, 1 or n-2
        merge: merge the ops shared by consecutive symbols
        frame: "sx" (Ry semantics) or "s" (phase semantics)

    Returns:
        RoutedCircuit
    """
    if n < 3:
        raise RoutingError(f"need at least 3 qubits, got {n}")
    if xis.p != p:
        raise SpecError(f"modulus {p} does not match the angle set's {xis.p}")
    if xis.num_controls != n - 1:
        raise RoutingError(f"{n} qubits need {n - 1} controlled angles, got {xis.num_controls}")
    if j < 0:
        raise SpecError(f"input length must be >= 0, got {j}")
    start = default_initial_target(n) if initial_target is None else initial_target
    if start not in (1, n - 2):
        raise RoutingError(f"initial target must be wire 1 or {n - 2}, got {start}")

    steps, trace, final_layout = _walk_steps(xis, j, n, start)
    if merge:
        steps = _merge_steps(steps)
    circuit = _assemble(steps, n, start, final_layout, frame)
    routed = RoutedCircuit(
        circuit=circuit,
        target_trace=trace,
        cnot_count=metrics(circuit).cnot_count,
        steps=tuple(steps),
        initial_layout=initial_layout(n, start),
        final_layout=final_layout,
        frame=frame,
        merged=merge,
    )
    logger.debug("routed j=%d on %d qubits: %d CNOTs", j, n, routed.cnot_count)
    return routed


def merge_across_symbols(rc):
    """Merge an unmerged routed circuit; merged input is returned unchanged"""
    if rc.merged:
        return rc
    steps = _merge_steps(rc.steps)
    start = rc.initial_layout[-1]
    circuit = _assemble(steps, rc.n, start, rc.final_layout, rc.frame)
    return replace(rc, circuit=circuit, cnot_count=metrics(circuit).cnot_count,
                   steps=tuple(steps), merged=True)


@dataclass(frozen=True)
class SwapRouting:
    circuit: Circuit
    initial_layout: tuple
    final_layout: tuple
    logical_cnots: int = 0

    @property
    def swap_count(self):
        return (metrics(self.circuit).cnot_count - self.logical_cnots) // 3


def _swap(a, b):
    return [cnot(a, b), cnot(b, a), cnot(a, b)]


def route_with_swaps(c, layout=None):
    """
    Greedy line routing with standalone SWAPs.

    Before each CNOT whose qubits are not neighbours, the control is swapped
    one wire at a time toward the target. The circuit must be lowered.

    Args:
        c: circuit of CNOT and 1-qubit gates
        layout: initial wire of every qubit (identity when None)
    """
    n = c.num_qubits
    layout = list(range(n) if layout is None else layout)
    if sorted(layout) != list(range(n)):
        raise RoutingError(f"layout must be a permutation of 0..{n - 1}")
    start = tuple(layout)
    at = {w: q for q, w in enumerate(layout)}
    out = []
    logical = 0
    for g in c.gates:
        if g.kind is GateKind.CNOT:
            ctrl, tgt = g.controls[0], g.target
            while abs(layout[ctrl] - layout[tgt]) > 1:
                here = layout[ctrl]
                step = here + (1 if layout[tgt] > here else -1)
                other = at[step]
                out += _swap(here, step)
                layout[ctrl], layout[other] = step, here
                at[step], at[here] = ctrl, other
            out.append(cnot(layout[ctrl], layout[tgt]))
            logical += 1
        elif len(g.qubits) == 1:
            out.append(g.relabel(layout))
        else:
            raise CircuitError(f"lower the circuit before routing ({g.kind.value})")
    routed = Circuit(n, tuple(out))
    return SwapRouting(routed, start, tuple(layout), logical)
