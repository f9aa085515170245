"""Statevector core: gate application, postselection, sampling, IO."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import circuit_operator, gate_operator, random_state_vector
from qadvdiff.state import (
    Circuit,
    GateKind,
    GateOp,
    QuantumState,
    apply_circuit,
    apply_gate,
    build_fourier_initial_state,
    cnot,
    damping,
    damping_matrix,
    encode_amplitudes,
    hadamard,
    inverse_circuit,
    max_qubits,
    new_state,
    phase,
    project_ancilla_zero,
    read_amplitudes,
    remap_circuit,
    sample_counts,
    swap,
    write_amplitudes,
)


class TestGateValidation:
    def test_duplicate_qubit_rejected(self):
        with pytest.raises(ValueError, match="twice"):
            GateOp(GateKind.CNOT, 1, ((1, 1),))

    def test_control_value_must_be_binary(self):
        with pytest.raises(ValueError, match="0 or 1"):
            GateOp(GateKind.PHASE, 0, ((1, 2),), 0.1)

    def test_swap_needs_partner(self):
        with pytest.raises(ValueError, match="partner"):
            GateOp(GateKind.SWAP, 0)

    def test_partner_only_on_swap(self):
        with pytest.raises(ValueError, match="partner"):
            GateOp(GateKind.PHASE, 0, (), 0.1, partner=1)

    def test_cnot_takes_one_control(self):
        with pytest.raises(ValueError, match="exactly one"):
            GateOp(GateKind.CNOT, 0)

    def test_negative_damping_rejected(self):
        with pytest.raises(ValueError, match="block-encodable"):
            damping(0, -0.5)

    def test_gate_outside_register(self):
        circuit = Circuit(2)
        with pytest.raises(ValueError, match="outside"):
            circuit.add(phase(2, 0.3))


class TestSingleGates:
    @pytest.mark.parametrize("n_qubits", [1, 2, 3])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_phase_matches_dense_operator(self, n_qubits, seed):
        for target in range(n_qubits):
            gate = phase(target, 0.7 + target)
            vec = random_state_vector(n_qubits, seed)
            state = QuantumState(n_qubits, vec.copy())
            out = apply_gate(state, gate)
            assert_allclose(out.amplitudes,
                            gate_operator(gate, n_qubits) @ vec, atol=1e-14)

    @pytest.mark.parametrize(
        "gate",
        [
            hadamard(0),
            hadamard(1, controls=((0, 1),)),
            phase(2, -1.3, controls=((0, 1), (1, 0))),
            cnot(0, 2),
            swap(0, 2),
            damping(1, 0.8, controls=((2, 1),)),
        ],
    )
    def test_assorted_gates_match_dense_operator(self, gate):
        n_qubits = 3
        vec = random_state_vector(n_qubits, 42)
        state = QuantumState(n_qubits, vec.copy())
        out = apply_gate(state, gate)
        assert_allclose(out.amplitudes,
                        gate_operator(gate, n_qubits) @ vec, atol=1e-14)

    def test_swap_exchanges_basis_states(self):
        state = encode_amplitudes([0.0, 1.0, 0.0, 0.0])
        out = apply_gate(state, swap(0, 1))
        assert_allclose(out.amplitudes, [0.0, 0.0, 1.0, 0.0])

    def test_damping_matrix_columns(self):
        u = damping_matrix(0.5)
        assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-15)
        assert_allclose(u[0, 0], np.exp(-0.5))


class TestCircuitApplication:
    def test_random_circuit_matches_operator_product(self):
        rng = np.random.default_rng(7)
        n_qubits = 4
        gates = []
        for _ in range(30):
            kind = rng.integers(4)
            qubits = rng.permutation(n_qubits)
            if kind == 0:
                gates.append(phase(int(qubits[0]), float(rng.normal())))
            elif kind == 1:
                gates.append(hadamard(int(qubits[0]),
                                      controls=((int(qubits[1]), 1),)))
            elif kind == 2:
                gates.append(cnot(int(qubits[0]), int(qubits[1])))
            else:
                gates.append(swap(int(qubits[0]), int(qubits[1])))
        circuit = Circuit(n_qubits, gates)
        vec = random_state_vector(n_qubits, 11)
        out = apply_circuit(QuantumState(n_qubits, vec.copy()), circuit)
        assert_allclose(out.amplitudes, circuit_operator(circuit) @ vec,
                        atol=1e-13)

    def test_register_size_mismatch(self):
        with pytest.raises(ValueError, match="spans"):
            apply_circuit(new_state(2), Circuit(3))

    def test_ancilla_projection_happens_per_damping_gate(self):
        # Damping |+> on the ancilla branch halves the norm before projection.
        circuit = Circuit(2, ancilla_indices=frozenset({1}))
        circuit.add(hadamard(0))
        circuit.add(damping(1, 1.0, controls=((0, 1),)))
        state = apply_circuit(new_state(2), circuit)
        expected = np.array([1.0, np.exp(-1.0)]) / np.sqrt(2.0)
        expected /= np.linalg.norm(expected)
        assert_allclose(state.amplitudes[:2], expected, atol=1e-15)
        assert_allclose(state.success_prob, 0.5 * (1.0 + np.exp(-2.0)),
                        atol=1e-15)

    def test_projection_skipped_when_disabled(self):
        circuit = Circuit(2, ancilla_indices=frozenset({1}))
        circuit.add(hadamard(0))
        circuit.add(damping(1, 1.0, controls=((0, 1),)))
        state = apply_circuit(new_state(2), circuit, project_ancillas=False)
        assert state.success_prob == 1.0
        assert abs(state.amplitudes[3]) > 0.0


class TestPostselection:
    def test_projection_renormalizes_and_tracks_probability(self):
        amps = np.array([1.0, 1.0, 1.0, 1.0], dtype=complex) / 2.0
        state = QuantumState(2, amps)
        out = project_ancilla_zero(state, 1)
        assert_allclose(out.amplitudes,
                        [1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0), 0.0, 0.0])
        assert_allclose(out.success_prob, 0.5)

    def test_success_prob_accumulates(self):
        amps = np.full(4, 0.5, dtype=complex)
        state = QuantumState(2, amps)
        out = project_ancilla_zero(project_ancilla_zero(state, 0), 1)
        assert_allclose(out.success_prob, 0.25)

    def test_impossible_projection_raises(self):
        state = QuantumState(1, np.array([0.0, 1.0], dtype=complex))
        with pytest.raises(ValueError, match="postselection impossible"):
            project_ancilla_zero(state, 0)

    def test_ancilla_index_checked(self):
        with pytest.raises(ValueError, match="outside"):
            project_ancilla_zero(new_state(2), 5)


class TestEncoding:
    def test_normalizes_input(self):
        state = encode_amplitudes([3.0, 4.0, 0.0, 0.0])
        assert_allclose(state.amplitudes, [0.6, 0.8, 0.0, 0.0])
        assert state.n_qubits == 2

    @pytest.mark.parametrize("size", [1, 3, 6])
    def test_rejects_non_power_of_two(self, size):
        with pytest.raises(ValueError, match="power of two"):
            encode_amplitudes(np.ones(size))

    def test_rejects_zero_vector(self):
        with pytest.raises(ValueError, match="zero vector"):
            encode_amplitudes(np.zeros(4))

    def test_register_limit_enforced(self, monkeypatch):
        monkeypatch.setenv("QADVDIFF_MAX_QUBITS", "3")
        assert max_qubits() == 3
        with pytest.raises(ValueError, match="exceeds"):
            new_state(4)

    def test_register_limit_rejects_garbage(self, monkeypatch):
        monkeypatch.setenv("QADVDIFF_MAX_QUBITS", "many")
        with pytest.raises(ValueError, match="integer"):
            max_qubits()


class TestSampling:
    def test_counts_sum_to_shots_and_repeat(self):
        state = encode_amplitudes([1.0, 1.0, 1.0, 1.0])
        a = sample_counts(state, 1000, seed=5)
        b = sample_counts(state, 1000, seed=5)
        assert a.sum() == 1000
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        state = encode_amplitudes(np.ones(8))
        a = sample_counts(state, 10000, seed=1)
        b = sample_counts(state, 10000, seed=2)
        assert not np.array_equal(a, b)

    def test_frequencies_track_probabilities(self):
        state = encode_amplitudes([1.0, 2.0, 3.0, 4.0])
        counts = sample_counts(state, 200000, seed=9)
        probs = np.abs(state.amplitudes) ** 2
        # 5 sigma of a binomial per bin
        sigma = np.sqrt(probs * (1 - probs) / 200000)
        assert np.all(np.abs(counts / 200000 - probs) < 5 * sigma + 1e-12)

    def test_zero_shots_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            sample_counts(new_state(1), 0, seed=0)


class TestStateIO:
    def test_roundtrip_is_bit_exact(self, tmp_path):
        vec = random_state_vector(3, 21)
        state = QuantumState(3, vec)
        path = tmp_path / "state.bin"
        write_amplitudes(state, path)
        back = read_amplitudes(path)
        assert back.n_qubits == 3
        assert np.array_equal(back.amplitudes, vec)

    def test_truncated_file_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"\x03\x00")
        with pytest.raises(ValueError, match="truncated"):
            read_amplitudes(path)

    def test_wrong_payload_size_rejected(self, tmp_path):
        vec = random_state_vector(2, 3)
        path = tmp_path / "state.bin"
        write_amplitudes(QuantumState(2, vec), path)
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(ValueError, match="floats"):
            read_amplitudes(path)


class TestCircuitTools:
    def test_remap_conjugates_by_permutation(self):
        circuit = Circuit(2, [hadamard(0), cnot(0, 1), phase(1, 0.4)])
        remapped = remap_circuit(circuit, {0: 2, 1: 0}, 3)
        vec = random_state_vector(3, 17)
        out = apply_circuit(QuantumState(3, vec.copy()), remapped)
        assert_allclose(out.amplitudes, circuit_operator(remapped) @ vec,
                        atol=1e-14)
        # qubit 1 is untouched by the remapped circuit
        probs = np.abs(out.amplitudes.reshape(2, 2, 2)) ** 2
        before = np.abs(vec.reshape(2, 2, 2)) ** 2
        assert_allclose(probs.sum(axis=(0, 2)), before.sum(axis=(0, 2)),
                        atol=1e-13)

    def test_inverse_circuit_is_adjoint(self):
        circuit = Circuit(
            3, [hadamard(0), phase(1, 0.9, controls=((0, 1),)), swap(0, 2)]
        )
        inv = inverse_circuit(circuit)
        product = circuit_operator(inv) @ circuit_operator(circuit)
        assert_allclose(product, np.eye(8), atol=1e-14)

    def test_damping_cannot_be_inverted(self):
        circuit = Circuit(1, [damping(0, 0.2)])
        with pytest.raises(ValueError, match="damping"):
            inverse_circuit(circuit)


class TestFourierInitialState:
    @pytest.mark.parametrize("n_qubits", [2, 3, 4])
    def test_three_mode_amplitudes(self, n_qubits):
        circuit = build_fourier_initial_state(n_qubits)
        state = apply_circuit(new_state(n_qubits), circuit)
        dim = 1 << n_qubits
        expected = np.zeros(dim)
        expected[0] = np.sqrt(2.0 / 3.0)
        expected[1] = np.sqrt(1.0 / 6.0)
        expected[dim - 1] = np.sqrt(1.0 / 6.0)
        assert_allclose(state.amplitudes, expected, atol=1e-15)

    def test_needs_two_qubits(self):
        with pytest.raises(ValueError, match="at least 2"):
            build_fourier_initial_state(1)
