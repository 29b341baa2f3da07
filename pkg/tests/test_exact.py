import numpy as np
import pytest
import scipy.linalg

from varqite import (
    GateOp,
    Hamiltonian,
    PauliString,
    PauliTerm,
    StateVector,
    apply_gate,
    basis_state,
    builtin_ansatz,
    builtin_hamiltonian,
    dense_matrix,
    exact_imag_evolve,
    expectation,
    fidelity,
    finite_diff_gradient,
    ground_state,
    prepare_state,
)
from varqite.exact import ImagEvolver

from oracles import dense_hamiltonian, random_hamiltonian, random_state


def test_dense_matrix_examples():
    assert np.array_equal(dense_matrix(builtin_hamiltonian("toy-a")), np.diag([1.0, 2.0, 3.0, 0.0]).astype(complex))
    z0 = Hamiltonian(1, [PauliTerm(1.0, PauliString({0: "Z"}))])
    assert np.array_equal(dense_matrix(z0), np.diag([1.0, -1.0]).astype(complex))
    h2 = dense_matrix(builtin_hamiltonian("h2-sto3g-0.75"))
    assert h2[1, 1] == pytest.approx(0.4318, abs=1e-12)
    assert h2[1, 2] == pytest.approx(0.182, abs=1e-12)


def test_dense_matrix_matches_independent_assembly():
    rng = np.random.default_rng(41)
    for n in (1, 3, 6):
        h = random_hamiltonian(n, 8, rng)
        assert np.allclose(dense_matrix(h), dense_hamiltonian(h), atol=1e-12)


def test_dense_matrix_size_guard():
    h = Hamiltonian(13, [PauliTerm(1.0, PauliString({12: "Z"}))])
    with pytest.raises(ValueError, match="limited to 12"):
        dense_matrix(h)


def test_ground_state_toys():
    for name in ("toy-a", "toy-b"):
        result = ground_state(builtin_hamiltonian(name))
        assert result.energy == pytest.approx(0.0, abs=1e-12)
        assert fidelity(result.state, basis_state(2, "11")) == pytest.approx(1.0, abs=1e-12)
        assert not result.degenerate


def test_ground_state_h2():
    result = ground_state(builtin_hamiltonian("h2-sto3g-0.75"))
    # closed form for the coupled middle block: -0.3464 - sqrt(0.7782^2 + 0.182^2)
    closed_form = -0.3464 - np.sqrt(0.7782**2 + 0.182**2)
    assert result.energy == pytest.approx(closed_form, abs=1e-12)
    assert result.energy == pytest.approx(-1.1456, abs=1e-4)
    independent = np.linalg.eigvalsh(dense_hamiltonian(builtin_hamiltonian("h2-sto3g-0.75")))[0]
    assert result.energy == pytest.approx(independent, abs=1e-12)


def test_ground_state_degenerate_flag():
    h = Hamiltonian(2, [PauliTerm(1.0, PauliString({0: "Z", 1: "Z"}))])
    result = ground_state(h)  # spectrum diag(1,-1,-1,1)
    assert result.degenerate
    assert result.energy == pytest.approx(-1.0)


def test_ground_energy_bounds_random_sample():
    rng = np.random.default_rng(43)
    h = random_hamiltonian(4, 10, rng)
    dense = dense_matrix(h)
    energy = ground_state(h).energy
    lowest_sample = np.inf
    for _ in range(10_000):
        psi = random_state(4, rng)
        lowest_sample = min(lowest_sample, (psi.conj() @ dense @ psi).real)
    assert energy <= lowest_sample + 1e-12


def test_exact_imag_evolve_tau_zero():
    rng = np.random.default_rng(47)
    psi0 = StateVector(2, random_state(2, rng))
    evolved = exact_imag_evolve(builtin_hamiltonian("toy-a"), psi0, 0.0)
    assert np.allclose(evolved.amplitudes, psi0.amplitudes, atol=1e-12)


def test_exact_imag_evolve_long_time_projects_to_ground():
    uniform = StateVector(2, np.full(4, 0.5, dtype=complex))
    evolved = exact_imag_evolve(builtin_hamiltonian("toy-a"), uniform, 50.0)
    assert fidelity(evolved, basis_state(2, "11")) >= 1 - 1e-10


def test_exact_imag_evolve_two_level_closed_form():
    h = Hamiltonian(1, [PauliTerm(1.0, PauliString({0: "Z"}))])
    plus = apply_gate(basis_state(1, "0"), GateOp("h", (0,)))
    evolved = exact_imag_evolve(h, plus, 1.0)
    expected = np.array([np.exp(-1.0), np.exp(1.0)], dtype=complex)
    expected /= np.linalg.norm(expected)
    assert np.allclose(evolved.amplitudes, expected, atol=1e-12)


def test_exact_imag_evolve_matches_expm():
    rng = np.random.default_rng(53)
    h = random_hamiltonian(3, 6, rng)
    psi0 = random_state(3, rng)
    tau = 0.8
    dense = dense_hamiltonian(h)
    oracle = scipy.linalg.expm(-dense * tau) @ psi0
    oracle /= np.linalg.norm(oracle)
    evolved = exact_imag_evolve(h, StateVector(3, psi0), tau)
    assert np.allclose(evolved.amplitudes, oracle, atol=1e-10)


def test_exact_imag_evolve_satisfies_wick_equation():
    # d psi/d tau = -(H - E) psi, checked by central differences
    step = 1e-4
    for name in ("toy-a", "toy-b"):
        h = builtin_hamiltonian(name)
        dense = dense_matrix(h)
        evolver = ImagEvolver(h)
        psi0 = StateVector(2, np.full(4, 0.5, dtype=complex))
        for tau in (0.3, 1.0):
            plus = evolver.evolve(psi0, tau + step).amplitudes
            minus = evolver.evolve(psi0, tau - step).amplitudes
            middle = evolver.evolve(psi0, tau)
            derivative = (plus - minus) / (2 * step)
            energy = expectation(middle, h)
            residual = derivative + (dense @ middle.amplitudes - energy * middle.amplitudes)
            assert np.linalg.norm(residual) <= 1e-4


def test_exact_imag_evolve_energy_nonincreasing():
    rng = np.random.default_rng(59)
    h = builtin_hamiltonian("toy-a")
    evolver = ImagEvolver(h)
    psi0 = StateVector(2, random_state(2, rng))
    taus = np.linspace(0.0, 5.0, 40)
    energies = [expectation(evolver.evolve(psi0, t), h) for t in taus]
    assert np.all(np.diff(energies) <= 1e-10)


def test_exact_imag_evolve_vanishing_norm():
    evolver = ImagEvolver(builtin_hamiltonian("toy-a"))
    excited = basis_state(2, "10")  # energy-3 eigenstate; weight decays as exp(-3 tau)
    with pytest.raises(FloatingPointError, match="vanished"):
        evolver.evolve(excited, 300.0)


def test_fidelity_properties():
    rng = np.random.default_rng(61)
    psi = StateVector(2, random_state(2, rng))
    assert fidelity(psi, psi) == pytest.approx(1.0, abs=1e-12)
    phased = StateVector(2, np.exp(0.7j) * psi.amplitudes)
    assert fidelity(psi, phased) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(basis_state(1, "0"), basis_state(1, "1")) == 0.0
    with pytest.raises(ValueError, match="mismatch"):
        fidelity(basis_state(1, "0"), basis_state(2, "00"))


def test_finite_diff_gradient_single_rx():
    from test_ansatz import single_rx_ansatz

    h = Hamiltonian(1, [PauliTerm(1.0, PauliString({0: "Z"}))])
    ansatz = single_rx_ansatz()
    gradient = finite_diff_gradient(ansatz, h, [np.pi / 2], 1e-5)
    assert gradient[0] == pytest.approx(-1.0, abs=1e-8)
    at_minimum = finite_diff_gradient(ansatz, h, [np.pi], 1e-5)
    assert abs(at_minimum[0]) < 1e-6


def test_finite_diff_gradient_rejects_bad_step():
    with pytest.raises(ValueError, match="positive"):
        finite_diff_gradient(builtin_ansatz("toy-a"), builtin_hamiltonian("toy-a"), np.zeros(3), 0.0)


def test_finite_diff_gradient_stationary_at_ground():
    ansatz = builtin_ansatz("toy-a")
    h = builtin_hamiltonian("toy-a")
    gradient = finite_diff_gradient(ansatz, h, [np.pi, np.pi, 0.0], 1e-5)
    assert np.all(np.abs(gradient) < 1e-6)
