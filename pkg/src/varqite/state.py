"""Dense statevector simulation: gates, inner products, expectation values.

Basis convention: the label |q0 q1 ... q_{n-1}> maps to index
sum_k bit(q_k) * 2**(n-1-k), i.e. qubit 0 is the most significant bit and the
circuit's top wire. All operations are pure; returned states are never views
of their inputs.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import backend
from .gates import GateOp, single_qubit_matrix
from .pauli import Hamiltonian, PauliString

__all__ = [
    "StateVector",
    "basis_state",
    "apply_gate",
    "inner_product",
    "apply_pauli_string",
    "apply_controlled_pauli_string",
    "apply_hamiltonian",
    "expectation",
    "pauli_masks",
]


@dataclass(frozen=True)
class StateVector:
    """Dense complex amplitudes over the 2**n computational basis.

    Circuit-prepared states are unit norm; tangent states produced by the
    derivative expansion are not and carry ``normalized=False``.
    """

    n_qubits: int
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != 1 << self.n_qubits:
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_state(n_qubits: int, bits: str) -> StateVector:
    """Computational basis state |bits>, bits[0] being qubit 0."""
    if len(bits) != n_qubits:
        raise ValueError(f"bit string {bits!r} does not match {n_qubits} qubits")
    if any(b not in "01" for b in bits):
        raise ValueError(f"bit string must contain only 0 and 1, got {bits!r}")
    amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
    amplitudes[int(bits, 2)] = 1.0
    return StateVector(n_qubits, amplitudes)


def pauli_masks(pauli: PauliString, n_qubits: int) -> tuple[int, int, complex]:
    """Bit masks and prefactor realising a Pauli string.

    The action on amplitudes is
    ``out[i ^ x_mask] = prefactor * (-1)**popcount(i & z_mask) * in[i]``.
    """
    x_mask = 0
    z_mask = 0
    n_y = 0
    for qubit, axis in pauli.items():
        if qubit >= n_qubits:
            raise ValueError(f"Pauli factor on qubit {qubit} out of range for {n_qubits} qubits")
        bit = 1 << (n_qubits - 1 - qubit)
        if axis in ("X", "Y"):
            x_mask |= bit
        if axis in ("Z", "Y"):
            z_mask |= bit
        if axis == "Y":
            n_y += 1
    return x_mask, z_mask, 1j ** n_y


def _check_gate(gate: GateOp, n_qubits: int) -> None:
    if gate.max_qubit >= n_qubits:
        raise ValueError(
            f"gate {gate.kind} acts on qubit {gate.max_qubit} "
            f"but the state has {n_qubits} qubits"
        )


def _apply_gate_raw(amps: np.ndarray, n_qubits: int, gate: GateOp) -> np.ndarray:
    k = backend.kernels
    kind = gate.kind
    if kind in ("rx", "ry", "rz", "x", "y", "z", "h"):
        m = single_qubit_matrix(gate)
        return k.apply_1q(amps, n_qubits, gate.qubits[0], m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    if kind == "cnot":
        control, target = gate.qubits
        return k.apply_ctrl_1q(amps, n_qubits, control, target, 0.0, 1.0, 1.0, 0.0)
    if kind == "cry":
        control, target = gate.qubits
        m = single_qubit_matrix(GateOp("ry", (target,), gate.angle))
        return k.apply_ctrl_1q(amps, n_qubits, control, target, m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    if kind == "pauli-exp":
        q1, q2 = gate.qubits
        pair = PauliString({q1: gate.axes[0], q2: gate.axes[1]})
        x_mask, z_mask, prefactor = pauli_masks(pair, n_qubits)
        return k.apply_pauli_exp(amps, n_qubits, x_mask, z_mask, prefactor, gate.angle)
    if kind == "global-phase":
        return amps * cmath.exp(1j * gate.angle)
    if kind == "pauli-string":
        x_mask, z_mask, prefactor = pauli_masks(gate.pauli, n_qubits)
        return k.apply_pauli(amps, n_qubits, x_mask, z_mask, prefactor)
    raise ValueError(f"unknown gate kind {kind!r}")


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Matrix-vector product of the gate unitary with the state."""
    _check_gate(gate, state.n_qubits)
    amps = _apply_gate_raw(state.amplitudes, state.n_qubits, gate)
    return StateVector(state.n_qubits, amps, normalized=state.normalized)


def inner_product(bra: StateVector, ket: StateVector) -> complex:
    """<bra|ket> with the bra conjugated."""
    if bra.n_qubits != ket.n_qubits:
        raise ValueError(
            f"dimension mismatch: {bra.n_qubits} vs {ket.n_qubits} qubits"
        )
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def apply_pauli_string(state: StateVector, pauli: PauliString) -> StateVector:
    """Exact action of the tensor-product Pauli operator."""
    x_mask, z_mask, prefactor = pauli_masks(pauli, state.n_qubits)
    amps = backend.kernels.apply_pauli(state.amplitudes, state.n_qubits, x_mask, z_mask, prefactor)
    return StateVector(state.n_qubits, amps, normalized=state.normalized)


def apply_controlled_pauli_string(
    state: StateVector, control: int, pauli: PauliString
) -> StateVector:
    """Apply a Pauli string on the subspace where the control qubit is |1>."""
    if control >= state.n_qubits or control < 0:
        raise ValueError(f"control qubit {control} out of range")
    if pauli.axis(control) is not None:
        raise ValueError("control qubit cannot also be acted on by the string")
    x_mask, z_mask, prefactor = pauli_masks(pauli, state.n_qubits)
    control_mask = 1 << (state.n_qubits - 1 - control)
    amps = backend.kernels.apply_ctrl_pauli(
        state.amplitudes, state.n_qubits, control_mask, x_mask, z_mask, prefactor
    )
    return StateVector(state.n_qubits, amps, normalized=state.normalized)


def apply_hamiltonian(state: StateVector, hamiltonian: Hamiltonian) -> StateVector:
    """H|state>; generally unnormalised."""
    if hamiltonian.n_qubits != state.n_qubits:
        raise ValueError(
            f"dimension mismatch: state has {state.n_qubits} qubits, "
            f"Hamiltonian has {hamiltonian.n_qubits}"
        )
    k = backend.kernels
    total = np.zeros_like(state.amplitudes)
    for term in hamiltonian.terms:
        x_mask, z_mask, prefactor = pauli_masks(term.string, state.n_qubits)
        total += term.coefficient * k.apply_pauli(
            state.amplitudes, state.n_qubits, x_mask, z_mask, prefactor
        )
    return StateVector(state.n_qubits, total, normalized=False)


def expectation(state: StateVector, hamiltonian: Hamiltonian) -> float:
    """<state|H|state>; the imaginary residue (below 1e-10) is discarded."""
    if not state.normalized:
        raise ValueError("expectation requires a normalised state")
    if hamiltonian.n_qubits != state.n_qubits:
        raise ValueError(
            f"dimension mismatch: state has {state.n_qubits} qubits, "
            f"Hamiltonian has {hamiltonian.n_qubits}"
        )
    k = backend.kernels
    value = 0.0
    for term in hamiltonian.terms:
        x_mask, z_mask, prefactor = pauli_masks(term.string, state.n_qubits)
        transformed = k.apply_pauli(state.amplitudes, state.n_qubits, x_mask, z_mask, prefactor)
        value += term.coefficient * np.vdot(state.amplitudes, transformed).real
    return float(value)
