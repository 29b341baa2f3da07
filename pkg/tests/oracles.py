"""Independent dense oracles for the test suite.

Everything here builds explicit 2^n x 2^n matrices from Kronecker embeddings
and scipy matrix exponentials, deliberately avoiding the package's kernel and
mask machinery so the two routes stay independent.
"""

import numpy as np
import scipy.linalg

I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def embed(matrix2: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Single-qubit operator on the given wire, qubit 0 most significant."""
    out = np.eye(1, dtype=complex)
    for k in range(n):
        out = np.kron(out, matrix2 if k == qubit else I2)
    return out


def rotation(axis: str, theta: float) -> np.ndarray:
    return scipy.linalg.expm(-0.5j * theta * PAULI[axis])


def dense_gate_matrix(gate, n: int) -> np.ndarray:
    """Full unitary of one GateOp, built without the package's kernels."""
    kind = gate.kind
    if kind in ("rx", "ry", "rz"):
        return embed(rotation(kind[1].upper(), gate.angle), gate.qubits[0], n)
    if kind in ("x", "y", "z"):
        return embed(PAULI[kind.upper()], gate.qubits[0], n)
    if kind == "h":
        hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        return embed(hadamard, gate.qubits[0], n)
    if kind == "cnot":
        control, target = gate.qubits
        return embed(P0, control, n) + embed(P1, control, n) @ embed(PAULI["X"], target, n)
    if kind == "cry":
        control, target = gate.qubits
        return embed(P0, control, n) + embed(P1, control, n) @ embed(
            rotation("Y", gate.angle), target, n
        )
    if kind == "pauli-exp":
        q1, q2 = gate.qubits
        pair = embed(PAULI[gate.axes[0]], q1, n) @ embed(PAULI[gate.axes[1]], q2, n)
        return scipy.linalg.expm(1j * gate.angle * pair)
    if kind == "global-phase":
        return np.exp(1j * gate.angle) * np.eye(1 << n, dtype=complex)
    if kind == "pauli-string":
        return dense_pauli_string(gate.pauli, n)
    raise ValueError(f"no oracle for gate kind {kind!r}")


def dense_pauli_string(pauli, n: int) -> np.ndarray:
    out = np.eye(1 << n, dtype=complex)
    for qubit, axis in pauli.items():
        out = out @ embed(PAULI[axis], qubit, n)
    return out


def dense_hamiltonian(hamiltonian) -> np.ndarray:
    n = hamiltonian.n_qubits
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for term in hamiltonian.terms:
        out += term.coefficient * dense_pauli_string(term.string, n)
    return out


def dense_prepare(ansatz, theta) -> np.ndarray:
    """|phi(theta)> via explicit matrix products."""
    theta = np.asarray(theta, dtype=float)
    n = ansatz.n_qubits
    state = np.zeros(1 << n, dtype=complex)
    state[int(ansatz.initial_bits, 2)] = 1.0
    for bound in ansatz.gates:
        gate = bound.gate if bound.param is None else bound.gate.with_angle(theta[bound.param])
        state = dense_gate_matrix(gate, n) @ state
    return state


def random_state(n: int, rng) -> np.ndarray:
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return amps / np.linalg.norm(amps)


def random_hamiltonian(n: int, n_terms: int, rng):
    """Random Pauli-sum Hamiltonian with distinct strings."""
    from varqite import Hamiltonian, PauliString, PauliTerm

    strings = set()
    while len(strings) < n_terms:
        ops = {}
        for qubit in range(n):
            axis = rng.choice(["I", "X", "Y", "Z"])
            if axis != "I":
                ops[qubit] = str(axis)
        strings.add(PauliString(ops))
    terms = [PauliTerm(float(rng.normal()), s) for s in sorted(strings, key=lambda s: s.items())]
    return Hamiltonian(n, terms)
