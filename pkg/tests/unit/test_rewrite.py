"""
Tests for qfasynth.rewrite: Rz/SX basis rewrite with a shared SX frame
"""

import math

import numpy as np
import pytest

from helpers import random_spec
from qfasynth.circuit import (
    Circuit, GateKind, circuit_depth, cnot, elaborate, h, mcry, program_circuit, ry, s,
)
from qfasynth.decompose import lower
from qfasynth.errors import RewriteError
from qfasynth.matrix import equal_up_to_global_phase
from qfasynth.model import QfaSpec, accept_prob_parallel
from qfasynth.rewrite import (
    basis_check, conjugate_per_gate, conjugate_rotations, expand_to_basis,
    rewrite_to_rz_basis,
)
from qfasynth.uniform import synth_hybrid, synth_mottonen, synth_naive


def _program(spec, j, synth=synth_mottonen):
    return program_circuit(synth(spec), j, range(spec.num_controls))


def _single_qubit_count(c):
    return sum(1 for g in c if not g.controls)


class TestBasis:
    def test_rewritten_is_in_basis(self, rng):
        c = _program(random_spec(rng, 7, 4), 2, synth_naive)
        assert not basis_check(c)
        out = rewrite_to_rz_basis(c)
        assert basis_check(out)
        assert {g.kind for g in out} <= {GateKind.CNOT, GateKind.RZ, GateKind.SX, GateKind.X}

    def test_phase_gates_allowed(self):
        assert basis_check(Circuit(2, (s(0), cnot(0, 1))))
        assert not basis_check(Circuit(1, (h(0),)))

    def test_single_rotation(self):
        c = Circuit(1, (ry(0, 0.8),))
        out = rewrite_to_rz_basis(c)
        assert [g.kind for g in out] == [GateKind.SX, GateKind.RZ, GateKind.SX, GateKind.X]
        assert out.gates[1].theta == pytest.approx(1.6)
        assert np.allclose(elaborate(out), elaborate(c))

    def test_expand_leftover_rotation(self):
        c = Circuit(2, (ry(1, -0.3), cnot(0, 1)))
        assert equal_up_to_global_phase(elaborate(expand_to_basis(c)), elaborate(c))


class TestSharedFrame:
    @pytest.mark.parametrize("synth", [synth_naive, synth_mottonen])
    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_equivalence(self, rng, synth, d):
        c = _program(random_spec(rng, 11, d), 2, synth)
        assert equal_up_to_global_phase(elaborate(rewrite_to_rz_basis(c)), elaborate(c))

    def test_hybrid_equivalence(self, rng):
        spec = random_spec(rng, 13, 8)
        c, _ = synth_hybrid(spec, 1)
        assert equal_up_to_global_phase(elaborate(rewrite_to_rz_basis(c)), elaborate(c))

    def test_one_pair_across_symbols(self, rng):
        c = _program(random_spec(rng, 5, 4), 3)
        framed = conjugate_rotations(c)
        assert framed.count(GateKind.SX) == 1
        assert framed.count(GateKind.SXDG) == 1
        assert framed.count(GateKind.RY) == 0
        assert framed.count(GateKind.RZ) == 12

    def test_cnots_unchanged(self, rng):
        c = _program(random_spec(rng, 7, 8), 3, synth_naive)
        assert rewrite_to_rz_basis(c).count(GateKind.CNOT) == lower(c).count(GateKind.CNOT)

    def test_fewer_single_qubit_gates_than_per_gate(self, rng):
        c = _program(random_spec(rng, 7, 8), 3)
        shared = expand_to_basis(conjugate_rotations(c))
        per_gate = expand_to_basis(conjugate_per_gate(c))
        assert _single_qubit_count(shared) < _single_qubit_count(per_gate)
        assert circuit_depth(shared) <= circuit_depth(per_gate)
        assert equal_up_to_global_phase(elaborate(shared), elaborate(per_gate))

    def test_frame_closes_before_control_use(self):
        c = Circuit(2, (ry(1, 0.5), cnot(1, 0), ry(1, 0.2)))
        framed = conjugate_rotations(c)
        assert framed.count(GateKind.SX) == 2
        assert equal_up_to_global_phase(elaborate(framed), elaborate(c))

    def test_controlled_rotation_keeps_controls(self):
        c = Circuit(3, (mcry((0, 1), 0.9, 2, open_controls=(0,)),))
        framed = conjugate_rotations(c)
        assert framed.gates[1].kind is GateKind.MCRZ
        assert framed.gates[1].open_controls == frozenset({0})
        assert equal_up_to_global_phase(elaborate(framed), elaborate(c))

    def test_ambiguous_target(self):
        c = Circuit(2, (ry(0, 0.1), ry(1, 0.2)))
        with pytest.raises(RewriteError):
            conjugate_rotations(c)
        assert equal_up_to_global_phase(
            elaborate(conjugate_rotations(c, target=1)), elaborate(c))

    def test_no_rotations(self):
        c = Circuit(2, (cnot(0, 1),))
        assert conjugate_rotations(c) == c


class TestAcceptance:
    def test_mod11_three_qubits(self):
        spec = QfaSpec(11, (1, 3, 4, 9))
        for j in (11, 22):
            u = elaborate(rewrite_to_rz_basis(_program(spec, j)))
            assert abs(u[0, 0]) ** 2 == pytest.approx(1.0, abs=1e-9)
        for j in (1, 5, 13):
            u = elaborate(rewrite_to_rz_basis(_program(spec, j)))
            assert abs(u[0, 0]) ** 2 == pytest.approx(accept_prob_parallel(spec, j), abs=1e-9)

    def test_angle_doubling(self):
        c = Circuit(2, (mcry((0,), math.pi / 3, 1),))
        framed = conjugate_rotations(c)
        assert framed.gates[1].theta == pytest.approx(2 * math.pi / 3)
