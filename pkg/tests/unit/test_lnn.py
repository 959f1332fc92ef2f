"""
Tests for qfasynth.lnn: line-routed pseudo circuits, symbol merge and the
SWAP-insertion baseline
"""

import numpy as np
import pytest

from qfasynth.circuit import GateKind, elaborate, metrics
from qfasynth.decompose import lower
from qfasynth.errors import CircuitError, RoutingError, SpecError
from qfasynth.lnn import (
    LnnTopology, default_initial_target, initial_layout, merge_across_symbols,
    predicted_cnots, route_pseudo_lnn, route_with_swaps, unmerged_cnots,
)
from qfasynth.matrix import equal_up_to_global_phase, permutation_matrix
from qfasynth.model import accept_prob_angles, phase_accept_prob
from qfasynth.pseudo import PseudoSpec, pseudo_program


def _pspec(p, n, offset=1):
    return PseudoSpec.from_multiples(p, [(offset + 5 * i) % (p - 1) + 1 for i in range(n)])


def _logical_reference(pspec, j, rc):
    """Pseudo program placed on the initial layout, then the routing permutation"""
    mapping = dict(enumerate(rc.initial_layout))
    placed = pseudo_program(pspec, j).relabel(mapping)
    return permutation_matrix(rc.permutation) @ elaborate(placed)


class TestCounts:
    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    @pytest.mark.parametrize("j", range(1, 11))
    def test_merged_matches_formula(self, n, j):
        rc = route_pseudo_lnn(37, _pspec(37, n), j, n)
        assert rc.cnot_count == predicted_cnots(n, j)
        assert metrics(rc.circuit).cnot_count == rc.cnot_count

    @pytest.mark.parametrize("n, j, cnots", [(5, 1, 10), (5, 57, 458), (5, 37, 298)])
    def test_formula_values(self, n, j, cnots):
        assert predicted_cnots(n, j) == cnots
        assert route_pseudo_lnn(37, PseudoSpec.reference(), j, n).cnot_count == cnots

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_unmerged(self, n):
        for j in (1, 2, 5):
            rc = route_pseudo_lnn(37, _pspec(37, n), j, n, merge=False)
            assert rc.cnot_count == unmerged_cnots(n, j)
            assert rc.cnot_count - predicted_cnots(n, j) == 2 * (j - 1)

    def test_bad_count_arguments(self):
        with pytest.raises(SpecError):
            predicted_cnots(2, 1)
        with pytest.raises(SpecError):
            predicted_cnots(5, 0)


class TestLayout:
    def test_default_start(self):
        assert default_initial_target(5) == 3
        assert default_initial_target(4) == 1
        assert default_initial_target(7) == 1

    def test_initial_layout(self):
        assert initial_layout(5, 3) == (0, 1, 2, 4, 3)
        assert initial_layout(4, 1) == (0, 2, 3, 1)

    @pytest.mark.parametrize("n, start", [(5, 3), (5, 1), (6, 1), (6, 4)])
    def test_adjacent_only(self, n, start):
        rc = route_pseudo_lnn(37, _pspec(37, n), 4, n, initial_target=start)
        topo = LnnTopology(n)
        assert topo.check(rc.circuit)
        for g in rc.circuit:
            if g.kind is GateKind.CNOT:
                assert abs(g.controls[0] - g.target) == 1

    def test_target_walks_to_far_end(self):
        rc = route_pseudo_lnn(37, _pspec(37, 6), 2, 6, initial_target=1)
        assert rc.target_trace == (1, 2, 3, 4, 3, 2, 1)
        assert rc.final_layout[-1] == 1

    def test_zero_length(self):
        rc = route_pseudo_lnn(37, _pspec(37, 5), 0, 5)
        assert rc.cnot_count == 0
        assert np.allclose(elaborate(rc.circuit), np.eye(32))


class TestSemantics:
    @pytest.mark.parametrize("j", [1, 2, 3])
    @pytest.mark.parametrize("start", [1, 3])
    def test_equivalent_up_to_layout(self, j, start):
        pspec = PseudoSpec.reference()
        rc = route_pseudo_lnn(37, pspec, j, 5, initial_target=start)
        assert equal_up_to_global_phase(elaborate(rc.circuit), _logical_reference(pspec, j, rc))

    @pytest.mark.parametrize("n", [4, 6])
    def test_equivalent_other_sizes(self, n):
        pspec = _pspec(31, n, offset=3)
        rc = route_pseudo_lnn(31, pspec, 3, n)
        assert equal_up_to_global_phase(elaborate(rc.circuit), _logical_reference(pspec, 3, rc))

    def test_merge_preserves_unitary(self):
        pspec = PseudoSpec.reference()
        merged = route_pseudo_lnn(37, pspec, 3, 5)
        unmerged = route_pseudo_lnn(37, pspec, 3, 5, merge=False)
        assert np.allclose(elaborate(merged.circuit), elaborate(unmerged.circuit), atol=1e-9)

    def test_merge_across_symbols(self):
        pspec = PseudoSpec.reference()
        unmerged = route_pseudo_lnn(37, pspec, 4, 5, merge=False)
        merged = merge_across_symbols(unmerged)
        assert merged.merged
        assert merged.circuit == route_pseudo_lnn(37, pspec, 4, 5).circuit
        assert merge_across_symbols(merged) is merged

    def test_acceptance_j_1_to_40(self):
        pspec = PseudoSpec.reference()
        angles = pspec.effective_angles
        for j in range(1, 41):
            u = elaborate(route_pseudo_lnn(37, pspec, j, 5).circuit)
            want = accept_prob_angles(angles, j)
            assert abs(u[0, 0]) ** 2 == pytest.approx(want, abs=1e-9), f"j={j}"
            if j == 37:
                assert abs(u[0, 0]) ** 2 == pytest.approx(1.0, abs=1e-9)

    def test_phase_frame(self):
        pspec = PseudoSpec.reference()
        for j in (1, 5, 37):
            rc = route_pseudo_lnn(37, pspec, j, 5, frame="s")
            u = elaborate(rc.circuit)
            want = phase_accept_prob(pspec.effective_angles, j)
            assert abs(u[0, 0]) ** 2 == pytest.approx(want, abs=1e-9)
            assert rc.circuit.count(GateKind.S) == 1
            assert rc.circuit.count(GateKind.SDG) == 1


class TestErrors:
    def test_small_line(self):
        with pytest.raises(RoutingError):
            route_pseudo_lnn(37, _pspec(37, 2), 1, 2)

    def test_bad_start(self):
        with pytest.raises(RoutingError):
            route_pseudo_lnn(37, _pspec(37, 5), 1, 5, initial_target=2)

    def test_mismatched_modulus(self):
        with pytest.raises(SpecError):
            route_pseudo_lnn(31, _pspec(37, 5), 1, 5)

    def test_wrong_angle_count(self):
        with pytest.raises(RoutingError):
            route_pseudo_lnn(37, _pspec(37, 4), 1, 5)

    def test_bad_frame(self):
        with pytest.raises(RoutingError):
            route_pseudo_lnn(37, _pspec(37, 5), 1, 5, frame="y")

    def test_topology(self):
        with pytest.raises(RoutingError):
            LnnTopology(0)
        assert LnnTopology(4).edges == ((0, 1), (1, 2), (2, 3))


class TestSwapBaseline:
    def test_routes_lowered_program(self):
        pspec = PseudoSpec.reference()
        c = lower(pseudo_program(pspec, 2))
        sr = route_with_swaps(c)
        assert LnnTopology(5).check(sr.circuit)
        assert sr.logical_cnots == c.count(GateKind.CNOT)
        assert sr.swap_count > 0
        want = permutation_matrix(sr.final_layout) @ elaborate(c)
        assert equal_up_to_global_phase(elaborate(sr.circuit), want)

    def test_costlier_than_native_routing(self):
        pspec = PseudoSpec.reference()
        c = lower(pseudo_program(pspec, 4))
        assert route_with_swaps(c).circuit.count(GateKind.CNOT) > route_pseudo_lnn(
            37, pspec, 4, 5).cnot_count

    def test_custom_layout(self):
        c = lower(pseudo_program(PseudoSpec.reference(), 1))
        sr = route_with_swaps(c, layout=(4, 3, 2, 1, 0))
        assert sr.initial_layout == (4, 3, 2, 1, 0)
        placed = permutation_matrix(sr.initial_layout)
        want = permutation_matrix(sr.final_layout) @ elaborate(c) @ placed.conj().T
        assert equal_up_to_global_phase(elaborate(sr.circuit), want)

    def test_rejects_bad_layout(self):
        c = lower(pseudo_program(PseudoSpec.reference(), 1))
        with pytest.raises(RoutingError):
            route_with_swaps(c, layout=(0, 0, 1, 2, 3))

    def test_rejects_multi_controlled(self):
        with pytest.raises(CircuitError):
            route_with_swaps(pseudo_program(PseudoSpec.reference(), 1))
