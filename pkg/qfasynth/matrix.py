"""
Dense gate matrices and equivalence checks

Angle conventions:
    rotation_ry(theta) rotates the real plane by theta (no half angle):
        [[cos t, -sin t], [sin t, cos t]]
    rotation_rz(theta) uses the usual half angle:
        diag(exp(-i t/2), exp(i t/2))

With these conventions SX^dagger . Rz(2t) . SX == Ry(t) exactly, which is the
identity the basis rewrite relies on. Exporters must double Ry angles.

Qubit 0 is the most significant bit of a basis index.
"""

import enum
import math

import numpy as np
import scipy.linalg

from qfasynth import config
from qfasynth.errors import CircuitError, DimensionError

# Dense complex square matrix; dimension is a power of two
UnitaryMatrix = np.ndarray


class Axis(enum.Enum):
    """Rotation axis of a generic rotation R(a) with R(a)R(b) = R(a+b), XR(a)X = R(-a)"""

    Y = "y"
    Z = "z"


def _check_angle(theta):
    if not math.isfinite(theta):
        raise CircuitError(f"rotation angle must be finite, got {theta}")
    return float(theta)


def identity(dim=2):
    return np.eye(dim, dtype=complex)


def rotation_ry(theta):
    """Real-plane rotation by theta"""
    theta = _check_angle(theta)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotation_rz(theta):
    """Half-angle phase rotation diag(e^{-i theta/2}, e^{i theta/2})"""
    theta = _check_angle(theta)
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rotation(axis, theta):
    if axis is Axis.Y:
        return rotation_ry(theta)
    if axis is Axis.Z:
        return rotation_rz(theta)
    raise CircuitError(f"unsupported rotation axis {axis!r}")


def gate_sx():
    return 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)


def gate_sxdg():
    return gate_sx().conj().T


def gate_x():
    return np.array([[0, 1], [1, 0]], dtype=complex)


def gate_h():
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def gate_s():
    return np.diag([1, 1j]).astype(complex)


def gate_sdg():
    return np.diag([1, -1j]).astype(complex)


def dagger(u):
    return np.asarray(u).conj().T


def kron(a, b):
    """Tensor product; a acts on the more significant qubits"""
    return np.kron(a, b)


def block_diag(blocks):
    """Block-diagonal complex matrix from a sequence of square blocks"""
    return scipy.linalg.block_diag(*(np.asarray(b, dtype=complex) for b in blocks))


def permutation_matrix(perm):
    """
    Basis permutation moving logical qubit q to wire perm[q].

    Args:
        perm: sequence where perm[q] is the destination wire of qubit q

    Returns:
        2^n x 2^n permutation matrix P with P|b> = |b'>, b'[perm[q]] = b[q]
    """
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise CircuitError(f"not a permutation of 0..{n - 1}: {list(perm)}")
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for src in range(dim):
        dst = 0
        for q in range(n):
            if (src >> (n - 1 - q)) & 1:
                dst |= 1 << (n - 1 - perm[q])
        out[dst, src] = 1
    return out


def is_unitary(u, tol=None):
    tol = config.tolerances().gate if tol is None else tol
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ dagger(u) - np.eye(u.shape[0]))) <= tol)


def _phase_aligned(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # np.argmax returns the first maximum: ties go to the lowest row-major index
    ref = int(np.argmax(np.abs(b)))
    b_ref = b.flat[ref]
    if abs(b_ref) == 0:
        return a, b
    ratio = a.flat[ref] / b_ref
    if abs(ratio) == 0:
        return a, b
    return a, b * (ratio / abs(ratio))


def max_phase_deviation(a, b):
    """Max entrywise deviation between a and b after aligning global phase on b"""
    a, b = _phase_aligned(a, b)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def equal_up_to_global_phase(a, b, tol=None):
    """
    True iff a = e^{i phi} b within tol (max norm).

    The phase is taken from the largest-magnitude entry of b.
    """
    tol = config.tolerances().circuit if tol is None else tol
    return max_phase_deviation(a, b) <= tol
