"""
Tests for qfasynth.decompose: exact MCX and controlled-rotation rules
"""

import math

import numpy as np
import pytest

from qfasynth.circuit import Circuit, GateKind, elaborate, mcrot, mcry, mcx, metrics
from qfasynth.decompose import (
    decompose_mcry, decompose_mcx, lower, margolus_gates, mcx_gates,
)
from qfasynth.errors import AncillaError, CircuitError
from qfasynth.matrix import Axis, equal_up_to_global_phase

EXACT_MCX_CNOTS = {1: 1, 2: 6, 3: 20}


def _reference(gate, n):
    return elaborate(Circuit(n, (gate,)))


def _only_basic(c):
    return all(g.kind not in (GateKind.MCX, GateKind.MCRY, GateKind.MCRZ) for g in c)


class TestMcx:
    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_exact_without_ancilla(self, g):
        c = decompose_mcx(g)
        assert c.num_qubits == g + 1
        assert _only_basic(c)
        assert c.count(GateKind.CNOT) == EXACT_MCX_CNOTS[g]
        assert equal_up_to_global_phase(elaborate(c), _reference(mcx(range(g), g), g + 1))

    @pytest.mark.parametrize("g", [4, 5, 6])
    def test_with_dirty_ancilla(self, g):
        c = decompose_mcx(g, ancilla=g + 1)
        assert c.num_qubits == g + 2
        assert _only_basic(c)
        assert c.count(GateKind.CNOT) <= 48 * (g - 3)
        assert equal_up_to_global_phase(elaborate(c), _reference(mcx(range(g), g), g + 2))

    @pytest.mark.parametrize("g, cnots", [(4, 36), (5, 64), (6, 100)])
    def test_split_counts(self, g, cnots):
        assert decompose_mcx(g, ancilla=g + 1).count(GateKind.CNOT) == cnots

    @pytest.mark.parametrize("g", [4, 7])
    def test_needs_ancilla(self, g):
        with pytest.raises(AncillaError):
            decompose_mcx(g)

    def test_bad_arguments(self):
        with pytest.raises(CircuitError):
            decompose_mcx(0)
        with pytest.raises(CircuitError):
            decompose_mcx(3, ancilla=2)

    def test_no_free_qubit(self):
        with pytest.raises(AncillaError):
            mcx_gates([0, 1, 2, 3], 4, free=[])

    def test_margolus_relative_phase(self):
        got = elaborate(Circuit(3, tuple(margolus_gates(0, 1, 2))))
        want = _reference(mcx((0, 1), 2), 3)
        # same permutation, phases only
        assert np.allclose(np.abs(got), np.abs(want))
        assert np.allclose(got @ got, np.eye(8))


class TestMcry:
    @pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
    def test_without_ancilla(self, rng, g):
        theta = float(rng.uniform(-math.pi, math.pi))
        c = decompose_mcry(g, theta)
        assert c.num_qubits == g + 1
        assert _only_basic(c)
        assert equal_up_to_global_phase(elaborate(c), _reference(mcry(range(g), theta, g), g + 1))

    @pytest.mark.parametrize("g, cnots", [(1, 2), (2, 6), (3, 16), (4, 44)])
    def test_peeled_counts(self, g, cnots):
        assert decompose_mcry(g, 0.3).count(GateKind.CNOT) == cnots

    @pytest.mark.parametrize("g", [2, 3, 4, 5])
    def test_with_ancilla(self, rng, g):
        theta = float(rng.uniform(-math.pi, math.pi))
        c = decompose_mcry(g, theta, ancilla_available=True)
        assert c.num_qubits == g + 2
        assert equal_up_to_global_phase(elaborate(c), _reference(mcry(range(g), theta, g), g + 2))

    def test_z_axis(self):
        c = decompose_mcry(3, 1.3, axis=Axis.Z)
        gate = mcrot(Axis.Z, range(3), 1.3, 3)
        assert equal_up_to_global_phase(elaborate(c), _reference(gate, 4))

    def test_rejects_zero_controls(self):
        with pytest.raises(CircuitError):
            decompose_mcry(0, 1.0)


class TestLower:
    def test_open_controls(self, rng):
        theta = float(rng.uniform(-3, 3))
        c = Circuit(4, (mcry((0, 1, 2), theta, 3, open_controls=(0, 2)),
                        mcx((0, 1), 3, open_controls=(1,))))
        low = lower(c)
        assert _only_basic(low)
        assert equal_up_to_global_phase(elaborate(low), elaborate(c))

    def test_idle_qubit_used_as_ancilla(self):
        c = Circuit(6, (mcx((0, 1, 2, 3), 5),))
        low = lower(c)
        assert not metrics(low).pre_decomposition
        assert equal_up_to_global_phase(elaborate(low), elaborate(c))

    def test_ancilla_hint_honoured(self):
        c = Circuit(7, (mcx((0, 1, 2, 3), 4, ancilla=6),))
        low = lower(c)
        assert 6 in {q for g in low for q in g.qubits}
        assert 5 not in {q for g in low for q in g.qubits}
        assert equal_up_to_global_phase(elaborate(low), elaborate(c))

    def test_passes_basic_gates_through(self):
        c = decompose_mcx(2)
        assert lower(c).gates == c.gates
