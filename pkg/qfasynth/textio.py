"""
Circuit text format and OpenQASM 2.0 export

Text format, one gate per line:

    qubits 6
    H 0
    RY 4 0.3
    CNOT 0 4
    MCRY ~0 1 4 0.5
    MCX 0 1 2 3 4 @5

Controls come before the target, `~` marks an open control, a rotation angle
is the last number on the line and `@q` is the ancilla hint. Blank lines and
`#` comments are ignored. Angles are written with repr(), the shortest string
that reads back to the same float, so dumps are byte-deterministic.
"""

from pathlib import Path

from qfasynth.circuit import Circuit, Gate, GateKind, ROTATION_KINDS
from qfasynth.decompose import lower
from qfasynth.errors import CircuitError, CircuitFormatError

HEADER = "# qfasynth circuit"

QASM_NAMES = {
    GateKind.H: "h",
    GateKind.X: "x",
    GateKind.SX: "sx",
    GateKind.SXDG: "sxdg",
    GateKind.S: "s",
    GateKind.SDG: "sdg",
    GateKind.I: "id",
    GateKind.RY: "ry",
    GateKind.RZ: "rz",
    GateKind.CNOT: "cx",
}


def _format_gate(g):
    parts = [g.kind.value]
    parts += [f"~{c}" if c in g.open_controls else str(c) for c in g.controls]
    parts.append(str(g.target))
    if g.theta is not None:
        parts.append(repr(g.theta))
    if g.ancilla is not None:
        parts.append(f"@{g.ancilla}")
    return " ".join(parts)


def dumps(c):
    lines = [HEADER, f"qubits {c.num_qubits}"]
    lines += [_format_gate(g) for g in c.gates]
    return "\n".join(lines) + "\n"


def _parse_int(token, line_no):
    try:
        return int(token)
    except ValueError:
        raise CircuitFormatError(f"expected a qubit index, got {token!r}", line_no) from None


def _parse_gate(tokens, line_no):
    try:
        kind = GateKind(tokens[0].upper())
    except ValueError:
        raise CircuitFormatError(f"unknown gate {tokens[0]!r}", line_no) from None
    rest = tokens[1:]

    ancilla = None
    if rest and rest[-1].startswith("@"):
        ancilla = _parse_int(rest.pop()[1:], line_no)

    theta = None
    if kind in ROTATION_KINDS:
        if not rest:
            raise CircuitFormatError(f"{kind.value} needs an angle", line_no)
        try:
            theta = float(rest.pop())
        except ValueError:
            raise CircuitFormatError("angle is not a number", line_no) from None

    if not rest:
        raise CircuitFormatError(f"{kind.value} needs a target qubit", line_no)
    controls, open_controls = [], []
    for token in rest[:-1]:
        q = _parse_int(token.lstrip("~"), line_no)
        controls.append(q)
        if token.startswith("~"):
            open_controls.append(q)
    target = _parse_int(rest[-1], line_no)
    try:
        return Gate(kind, target, tuple(controls), theta, frozenset(open_controls), ancilla)
    except CircuitError as e:
        raise CircuitFormatError(str(e), line_no) from None


def loads(text):
    """Parse the text format into a Circuit"""
    num_qubits = None
    gates = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0].lower() == "qubits":
            if num_qubits is not None or len(tokens) != 2:
                raise CircuitFormatError("expected one 'qubits N' line", line_no)
            num_qubits = _parse_int(tokens[1], line_no)
            continue
        if num_qubits is None:
            raise CircuitFormatError("'qubits N' must come before the gates", line_no)
        gates.append(_parse_gate(tokens, line_no))
    if num_qubits is None:
        raise CircuitFormatError("missing 'qubits N' line")
    try:
        return Circuit(num_qubits, tuple(gates))
    except CircuitError as e:
        raise CircuitFormatError(str(e)) from None


def write_circuit(c, path):
    Path(path).write_text(dumps(c))


def read_circuit(path):
    return loads(Path(path).read_text())


def _qasm_angle(theta):
    return repr(float(theta))


def to_qasm(c):
    """
    OpenQASM 2.0 program for the circuit.

    Multi-controlled gates are lowered first. Ry angles are doubled because
    qelib1's ry uses the half-angle convention.
    """
    flat = lower(c)
    n = flat.num_qubits
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{n}];", f"creg c[{n}];"]
    for g in flat.gates:
        name = QASM_NAMES[g.kind]
        if g.kind is GateKind.RY:
            lines.append(f"{name}({_qasm_angle(2 * g.theta)}) q[{g.target}];")
        elif g.kind is GateKind.RZ:
            lines.append(f"{name}({_qasm_angle(g.theta)}) q[{g.target}];")
        elif g.kind is GateKind.CNOT:
            lines.append(f"{name} q[{g.controls[0]}],q[{g.target}];")
        else:
            lines.append(f"{name} q[{g.target}];")
    if n:
        lines.append("measure q -> c;")
    return "\n".join(lines) + "\n"
