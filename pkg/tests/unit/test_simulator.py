"""
Tests for qfasynth.simulator: exact and trajectory simulation, sweeps
"""

import io
import statistics

import numpy as np
import pytest

from qfasynth.circuit import Circuit, cnot, h, program_circuit, x
from qfasynth.decompose import lower
from qfasynth.lnn import route_pseudo_lnn, route_with_swaps
from qfasynth.model import QfaSpec, accept_prob_parallel, program_matrix
from qfasynth.pseudo import PseudoSpec, pseudo_program
from qfasynth.simulator import (
    SWEEP_COLUMNS, NoiseModel, simulate, simulate_noisy, sweep, write_csv,
)
from qfasynth.uniform import synth_mottonen


def _routed(j):
    return route_pseudo_lnn(37, PseudoSpec.reference(), j, 5).circuit


class TestExact:
    def test_empty_circuit(self):
        result = simulate(Circuit(3))
        assert result.accept_prob == 1.0
        assert result.outcome_probs == {"000": 1.0}

    def test_bell_pair(self):
        result = simulate(Circuit(2, (h(0), cnot(0, 1))))
        assert result.outcome_probs == pytest.approx({"00": 0.5, "11": 0.5})
        assert result.accept_prob == pytest.approx(0.5)

    def test_msb_first_outcomes(self):
        result = simulate(Circuit(3, (x(0),)))
        assert result.outcome_probs == {"100": 1.0}

    def test_matches_program_matrix(self):
        spec = QfaSpec(11, (2, 5, 7, 10))
        c = program_circuit(synth_mottonen(spec), 4, range(2))
        result = simulate(c)
        assert np.allclose(result.amplitudes, program_matrix(spec, 4)[:, 0])
        assert result.accept_prob == pytest.approx(accept_prob_parallel(spec, 4), abs=1e-10)

    def test_member_accepted(self):
        assert simulate(_routed(37)).accept_prob == pytest.approx(1.0, abs=1e-9)

    def test_to_dict(self):
        d = simulate(Circuit(1, (x(0),))).to_dict()
        assert d == {"accept_prob": 0.0, "outcome_probs": {"1": 1.0}}


class TestNoisy:
    def test_rate_zero_is_exact(self):
        c = _routed(5)
        noisy = simulate_noisy(c, NoiseModel(0.0, shots=10, seed=1))
        assert np.allclose(noisy.probabilities, simulate(c).probabilities)

    def test_full_depolarizing(self, trajectories):
        result = simulate_noisy(_routed(3), NoiseModel(1.0, shots=trajectories, seed=3))
        assert result.probabilities.sum() == pytest.approx(1.0)
        assert result.accept_prob == pytest.approx(1 / 32, abs=0.02)

    def test_deterministic(self):
        nm = NoiseModel(0.05, shots=100, seed=42)
        a = simulate_noisy(_routed(2), nm, stream=2)
        b = simulate_noisy(_routed(2), nm, stream=2)
        assert np.array_equal(a.probabilities, b.probabilities)
        assert a.amplitudes is None

    def test_streams_differ(self):
        nm = NoiseModel(0.2, shots=50, seed=42)
        a = simulate_noisy(_routed(2), nm, stream=0)
        b = simulate_noisy(_routed(2), nm, stream=1)
        assert not np.array_equal(a.probabilities, b.probabilities)

    def test_batches_cover_all_shots(self):
        nm = NoiseModel(0.01, shots=1100, seed=0)
        result = simulate_noisy(Circuit(2, (h(0), cnot(0, 1))), nm)
        assert result.probabilities.sum() == pytest.approx(1.0)

    @pytest.mark.parametrize("rate, shots", [(-0.1, 10), (1.5, 10), (0.1, 0)])
    def test_bad_noise_model(self, rate, shots):
        with pytest.raises(ValueError):
            NoiseModel(rate, shots=shots)

    def _discrimination(self, shots):
        nm = NoiseModel(0.002, shots=shots, seed=2024)
        pspec = PseudoSpec.reference()
        routed = simulate_noisy(_routed(37), nm, stream=37).accept_prob
        swapped_circuit = route_with_swaps(lower(pseudo_program(pspec, 37))).circuit
        swapped = simulate_noisy(swapped_circuit, nm, stream=37).accept_prob
        others = [simulate_noisy(_routed(j), nm, stream=j).accept_prob for j in range(1, 37, 5)]
        return routed, swapped, others

    def test_native_routing_keeps_members(self, trajectories):
        routed, swapped, others = self._discrimination(trajectories)
        assert routed > swapped
        assert routed > 0.4
        assert statistics.median(others) < routed

    @pytest.mark.slow
    def test_native_routing_keeps_members_many_shots(self):
        routed, swapped, others = self._discrimination(10_000)
        assert routed > swapped + 0.3
        assert statistics.median(others) < routed


class TestSweep:
    def test_exact_rows(self):
        rows = sweep(_routed, 37, range(0, 4), strategy="lnn")
        assert [r.j for r in rows] == [0, 1, 2, 3]
        assert rows[0].accept_prob == pytest.approx(1.0)
        assert rows[1].cnot_count == 10
        assert all(r.strategy == "lnn" and r.rate == 0.0 for r in rows)

    def test_noisy_rows_reproducible(self):
        nm = NoiseModel(0.01, shots=20, seed=7)
        a = sweep(_routed, 37, range(1, 3), nm)
        b = sweep(_routed, 37, range(1, 3), nm)
        assert a == b
        assert a[0].seed == 7

    def test_csv(self):
        rows = sweep(_routed, 37, range(0, 2), strategy="lnn")
        out = io.StringIO()
        write_csv(rows, out)
        lines = out.getvalue().splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert len(lines) == 3
        assert lines[2].startswith("1,")
        assert lines[2].endswith(",lnn,0.0,0")

    def test_csv_header_only(self):
        out = io.StringIO()
        write_csv([], out)
        assert out.getvalue() == ",".join(SWEEP_COLUMNS) + "\n"
