"""Dense linear-algebra ground truth: matrices, spectra, exact evolution.

Everything here materialises 2**n x 2**n matrices and is guarded to n <= 12
qubits. Used as the oracle side of the engine's dual-route checks and for
fidelity tracking.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .ansatz import AnsatzCircuit, prepare_state
from .pauli import Hamiltonian
from .state import StateVector, expectation

__all__ = [
    "dense_matrix",
    "GroundState",
    "ground_state",
    "ImagEvolver",
    "exact_imag_evolve",
    "fidelity",
    "finite_diff_gradient",
    "MAX_DENSE_QUBITS",
]

MAX_DENSE_QUBITS = 12

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Ground eigenvalues closer than this are reported as degenerate.
_DEGENERACY_TOLERANCE = 1e-9


def _guard(n_qubits: int) -> None:
    if n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(
            f"dense operations are limited to {MAX_DENSE_QUBITS} qubits, got {n_qubits}"
        )


def dense_matrix(hamiltonian: Hamiltonian) -> np.ndarray:
    """Kronecker-product assembly of the Hamiltonian, qubit 0 leftmost."""
    _guard(hamiltonian.n_qubits)
    dim = 1 << hamiltonian.n_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    for term in hamiltonian.terms:
        ops = term.string.ops
        factor = np.eye(1, dtype=complex)
        for qubit in range(hamiltonian.n_qubits):
            factor = np.kron(factor, _PAULI_1Q[ops.get(qubit, "I")])
        matrix += term.coefficient * factor
    return matrix


class GroundState(NamedTuple):
    energy: float
    state: StateVector
    degenerate: bool


def ground_state(hamiltonian: Hamiltonian) -> GroundState:
    """Minimum eigenvalue and one unit-norm eigenvector.

    Degenerate ground spaces return an arbitrary member with the flag set.
    """
    matrix = dense_matrix(hamiltonian)
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    energy = float(eigenvalues[0])
    degenerate = bool(
        eigenvalues.shape[0] > 1 and eigenvalues[1] - eigenvalues[0] < _DEGENERACY_TOLERANCE
    )
    vector = np.ascontiguousarray(eigenvectors[:, 0], dtype=np.complex128)
    return GroundState(energy, StateVector(hamiltonian.n_qubits, vector), degenerate)


class ImagEvolver:
    """Normalised imaginary-time propagation via one eigendecomposition.

    Evolved amplitudes scale as exp(-E_k * tau) in the eigenbasis; the
    spectrum is shifted by its minimum before exponentiation so arbitrarily
    large tau stays representable.
    """

    def __init__(self, hamiltonian: Hamiltonian):
        _guard(hamiltonian.n_qubits)
        self.n_qubits = hamiltonian.n_qubits
        matrix = dense_matrix(hamiltonian)
        self._eigenvalues, self._eigenvectors = np.linalg.eigh(matrix)

    def evolve(self, psi0: StateVector, tau: float) -> StateVector:
        if psi0.n_qubits != self.n_qubits:
            raise ValueError("initial state dimension does not match the Hamiltonian")
        if tau < 0:
            raise ValueError(f"imaginary time must be non-negative, got {tau}")
        coeffs = self._eigenvectors.conj().T @ psi0.amplitudes
        shifted = self._eigenvalues - self._eigenvalues[0]
        damped = coeffs * np.exp(-shifted * tau)
        norm = np.linalg.norm(damped)
        if norm < 1e-300:
            raise FloatingPointError(
                "evolved state norm vanished; the initial state has no weight "
                "on the surviving eigenspaces"
            )
        amps = self._eigenvectors @ (damped / norm)
        return StateVector(self.n_qubits, np.ascontiguousarray(amps, dtype=np.complex128))


def exact_imag_evolve(hamiltonian: Hamiltonian, psi0: StateVector, tau: float) -> StateVector:
    """exp(-H tau)|psi0>, renormalised."""
    return ImagEvolver(hamiltonian).evolve(psi0, tau)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2; phase-invariant overlap of two normalised states."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    overlap = np.vdot(a.amplitudes, b.amplitudes)
    return float(min(abs(overlap) ** 2, 1.0))


def finite_diff_gradient(
    ansatz: AnsatzCircuit, hamiltonian: Hamiltonian, theta, step: float = 1e-5
) -> np.ndarray:
    """Central-difference energy gradient; the oracle counterpart of -2C."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    theta = np.asarray(theta, dtype=float)
    gradient = np.empty(ansatz.n_params)
    for i in range(ansatz.n_params):
        shifted = theta.copy()
        shifted[i] = theta[i] + step
        e_plus = expectation(prepare_state(ansatz, shifted), hamiltonian)
        shifted[i] = theta[i] - step
        e_minus = expectation(prepare_state(ansatz, shifted), hamiltonian)
        gradient[i] = (e_plus - e_minus) / (2.0 * step)
    return gradient
