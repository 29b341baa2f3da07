import numpy as np
import pytest

from varqite import (
    GateOp,
    PauliString,
    StateVector,
    apply_gate,
    apply_hamiltonian,
    apply_pauli_string,
    basis_state,
    builtin_hamiltonian,
    expectation,
    inner_product,
)

from oracles import (
    dense_gate_matrix,
    dense_hamiltonian,
    dense_pauli_string,
    random_hamiltonian,
    random_state,
)


def test_basis_state_indices():
    assert basis_state(2, "00").amplitudes[0] == 1.0
    assert basis_state(2, "01").amplitudes[1] == 1.0
    state = basis_state(8, "11000000")
    assert state.amplitudes[192] == 1.0
    assert np.count_nonzero(state.amplitudes) == 1


def test_basis_state_errors():
    with pytest.raises(ValueError):
        basis_state(3, "01")
    with pytest.raises(ValueError):
        basis_state(2, "02")


def test_rz_zero_is_identity():
    rng = np.random.default_rng(0)
    state = StateVector(2, random_state(2, rng))
    out = apply_gate(state, GateOp("rz", (1,), 0.0))
    assert np.allclose(out.amplitudes, state.amplitudes, atol=1e-15)


def test_rx_pi_on_zero():
    out = apply_gate(basis_state(1, "0"), GateOp("rx", (0,), np.pi))
    assert np.allclose(out.amplitudes, [0.0, -1j], atol=1e-12)


def test_cry_pi_on_10():
    gate = GateOp("cry", (0, 1), np.pi)
    out = apply_gate(basis_state(2, "10"), gate)
    oracle = dense_gate_matrix(gate, 2) @ basis_state(2, "10").amplitudes
    assert np.allclose(out.amplitudes, oracle, atol=1e-12)
    assert out.amplitudes[3] == pytest.approx(1.0)


def _all_gate_ops(n, rng):
    theta = float(rng.uniform(0, 2 * np.pi))
    ops = []
    for kind in ("rx", "ry", "rz", "x", "y", "z", "h"):
        ops.append(GateOp(kind, (int(rng.integers(n)),), theta))
    if n >= 2:
        q1, q2 = rng.choice(n, size=2, replace=False)
        ops.append(GateOp("cnot", (int(q1), int(q2))))
        ops.append(GateOp("cry", (int(q1), int(q2)), theta))
        axes = tuple(rng.choice(list("XYZ"), size=2))
        ops.append(GateOp("pauli-exp", (int(q1), int(q2)), theta, axes=(str(axes[0]), str(axes[1]))))
    ops.append(GateOp("global-phase", (), theta))
    string = {int(q): str(rng.choice(list("XYZ"))) for q in range(n) if rng.random() < 0.6}
    ops.append(GateOp("pauli-string", pauli=PauliString(string)))
    return ops


def test_apply_gate_matches_dense_oracle():
    rng = np.random.default_rng(7)
    for n in range(1, 5):
        for _ in range(8):
            state = StateVector(n, random_state(n, rng))
            for gate in _all_gate_ops(n, rng):
                result = apply_gate(state, gate).amplitudes
                oracle = dense_gate_matrix(gate, n) @ state.amplitudes
                assert np.allclose(result, oracle, atol=1e-12), gate.kind


def test_unitarity_preserves_norm():
    rng = np.random.default_rng(21)
    for n in (1, 3):
        state = StateVector(n, random_state(n, rng))
        for gate in _all_gate_ops(n, rng):
            out = apply_gate(state, gate)
            assert out.norm() == pytest.approx(1.0, abs=1e-12)


def test_apply_gate_leaves_input_untouched():
    state = basis_state(2, "00")
    before = state.amplitudes.copy()
    apply_gate(state, GateOp("h", (0,)))
    assert np.array_equal(state.amplitudes, before)


def test_apply_gate_out_of_range():
    with pytest.raises(ValueError, match="out of range|has 1 qubits|acts on qubit"):
        apply_gate(basis_state(1, "0"), GateOp("x", (1,)))


def test_inner_product_basics():
    rng = np.random.default_rng(3)
    psi = StateVector(2, random_state(2, rng))
    assert inner_product(psi, psi) == pytest.approx(1.0 + 0.0j, abs=1e-12)
    assert inner_product(basis_state(1, "0"), basis_state(1, "1")) == 0.0
    plus = apply_gate(basis_state(1, "0"), GateOp("h", (0,)))
    assert inner_product(plus, basis_state(1, "0")) == pytest.approx(1 / np.sqrt(2), abs=1e-12)


def test_inner_product_conjugate_symmetry():
    rng = np.random.default_rng(5)
    a = StateVector(3, random_state(3, rng))
    b = StateVector(3, random_state(3, rng))
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-14)


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        inner_product(basis_state(1, "0"), basis_state(2, "00"))


def test_apply_pauli_string_examples():
    state = basis_state(2, "10")
    assert np.array_equal(apply_pauli_string(state, PauliString()).amplitudes, state.amplitudes)
    flipped = apply_pauli_string(state, PauliString({0: "Z"}))
    assert np.allclose(flipped.amplitudes, -state.amplitudes)
    swapped = apply_pauli_string(basis_state(2, "01"), PauliString({0: "X", 1: "X"}))
    assert np.allclose(swapped.amplitudes, basis_state(2, "10").amplitudes)


def test_apply_pauli_string_matches_oracle():
    rng = np.random.default_rng(13)
    for n in (1, 2, 4):
        state = StateVector(n, random_state(n, rng))
        for _ in range(10):
            ops = {int(q): str(rng.choice(list("XYZ"))) for q in range(n) if rng.random() < 0.7}
            pauli = PauliString(ops)
            result = apply_pauli_string(state, pauli).amplitudes
            oracle = dense_pauli_string(pauli, n) @ state.amplitudes
            assert np.allclose(result, oracle, atol=1e-13)


def test_expectation_examples():
    assert expectation(basis_state(1, "0"), _z_hamiltonian()) == pytest.approx(1.0)
    h2 = builtin_hamiltonian("h2-sto3g-0.75")
    value = expectation(basis_state(2, "01"), h2)
    assert value == pytest.approx(0.4318, abs=1e-12)
    dense = dense_hamiltonian(h2)
    psi = basis_state(2, "01").amplitudes
    assert value == pytest.approx((psi.conj() @ dense @ psi).real, abs=1e-12)
    assert expectation(basis_state(2, "11"), builtin_hamiltonian("toy-a")) == pytest.approx(0.0)


def _z_hamiltonian():
    from varqite import Hamiltonian, PauliTerm

    return Hamiltonian(1, [PauliTerm(1.0, PauliString({0: "Z"}))])


def test_expectation_matches_dense_quadratic_form():
    rng = np.random.default_rng(17)
    for n in (2, 5, 8):
        h = random_hamiltonian(n, 12, rng)
        dense = dense_hamiltonian(h)
        psi = random_state(n, rng)
        state = StateVector(n, psi)
        assert expectation(state, h) == pytest.approx((psi.conj() @ dense @ psi).real, abs=1e-10)


def test_expectation_requires_normalized():
    tangent = StateVector(1, np.array([0.5, 0.0], dtype=complex), normalized=False)
    with pytest.raises(ValueError, match="normalised"):
        expectation(tangent, _z_hamiltonian())


def test_apply_hamiltonian_matches_dense():
    rng = np.random.default_rng(19)
    h = random_hamiltonian(3, 6, rng)
    psi = random_state(3, rng)
    result = apply_hamiltonian(StateVector(3, psi), h)
    assert not result.normalized
    assert np.allclose(result.amplitudes, dense_hamiltonian(h) @ psi, atol=1e-12)


def test_statevector_shape_validation():
    with pytest.raises(ValueError):
        StateVector(2, np.zeros(3, dtype=complex))
