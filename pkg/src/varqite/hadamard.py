"""Ancilla-interference circuits for individual A and C terms.

Every term of the tangent linear system has the form
a * Re(e^{i phase} <0|U|0>). The interference circuit prepares an ancilla in
(|0> + e^{i phase}|1>)/sqrt(2), applies the bra-side Pauli insertion
controlled on the ancilla being |0> (an X-surrounded control), the ket-side
insertion (or Hamiltonian term) controlled on |1>, a final Hadamard, and
reads <Z> on the ancilla. Emulated here on the statevector simulator as an
independent route to the directly computed inner products.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Union

import numpy as np

from .ansatz import AnsatzCircuit, _materialize, derivative_rule
from .gates import GateOp
from .pauli import Hamiltonian, PauliString, PauliTerm
from .state import _apply_gate_raw, basis_state, pauli_masks
from . import backend

__all__ = [
    "ATermSpec",
    "CTermSpec",
    "parameter_insertions",
    "hadamard_test_entry",
    "a_entry_via_hadamard",
    "c_entry_via_hadamard",
]


@dataclass(frozen=True)
class ATermSpec:
    """One summand of A_ij: insertion k of parameter i against l of j."""

    i: int
    k: int
    j: int
    l: int


@dataclass(frozen=True)
class CTermSpec:
    """One summand of C_i: insertion k of parameter i against one Pauli term."""

    i: int
    k: int
    term: PauliTerm


def parameter_insertions(ansatz: AnsatzCircuit, param: int) -> list[tuple[int, complex, PauliString]]:
    """(gate index, factor, insertion) triples for one parameter, in gate order."""
    if not 0 <= param < ansatz.n_params:
        raise IndexError(f"parameter index {param} out of range")
    triples = []
    for gate_index, bound in enumerate(ansatz.gates):
        if bound.param == param:
            for ins in derivative_rule(bound.gate):
                triples.append((gate_index, ins.factor, ins.pauli))
    return triples


def _ctrl_pauli(amps, n_total, pauli, zero_controlled):
    """Ancilla-controlled Pauli string; the ancilla is the last qubit."""
    kernels = backend.kernels
    ancilla = n_total - 1
    if zero_controlled:
        amps = _apply_gate_raw(amps, n_total, GateOp("x", (ancilla,)))
    x_mask, z_mask, prefactor = pauli_masks(pauli, n_total)
    amps = kernels.apply_ctrl_pauli(amps, n_total, 1, x_mask, z_mask, prefactor)
    if zero_controlled:
        amps = _apply_gate_raw(amps, n_total, GateOp("x", (ancilla,)))
    return amps


def _interference(
    ansatz: AnsatzCircuit,
    theta: np.ndarray,
    phase: float,
    bra_position: int,
    bra_pauli: PauliString,
    ket_position: int,
    ket_pauli: PauliString,
    stop_after_ket: bool,
) -> float:
    n_total = ansatz.n_qubits + 1
    ancilla = n_total - 1
    amps = basis_state(n_total, ansatz.initial_bits + "0").amplitudes
    amps = _apply_gate_raw(amps, n_total, GateOp("h", (ancilla,)))
    amps = _apply_gate_raw(amps, n_total, GateOp("rz", (ancilla,), phase))
    for gate_index, bound in enumerate(ansatz.gates):
        if gate_index == bra_position:
            amps = _ctrl_pauli(amps, n_total, bra_pauli, zero_controlled=True)
        if gate_index == ket_position:
            amps = _ctrl_pauli(amps, n_total, ket_pauli, zero_controlled=False)
            if stop_after_ket:
                break
        amps = _apply_gate_raw(amps, n_total, _materialize(bound, theta))
    else:
        if bra_position == ansatz.n_gates:
            amps = _ctrl_pauli(amps, n_total, bra_pauli, zero_controlled=True)
        if ket_position == ansatz.n_gates:
            amps = _ctrl_pauli(amps, n_total, ket_pauli, zero_controlled=False)
    amps = _apply_gate_raw(amps, n_total, GateOp("h", (ancilla,)))
    probabilities = np.abs(amps) ** 2
    pairs = probabilities.reshape(-1, 2)
    return float(pairs[:, 0].sum() - pairs[:, 1].sum())


def hadamard_test_entry(
    ansatz: AnsatzCircuit, theta, spec: Union[ATermSpec, CTermSpec]
) -> float:
    """<Z> of the ancilla for one A or C summand.

    Equals Re(e^{i phase} <0|U|0>) for that summand; the caller scales by the
    magnitude of the factor product (and Hamiltonian coefficient for C).
    """
    theta = np.asarray(theta, dtype=float)
    if isinstance(spec, ATermSpec):
        bra = parameter_insertions(ansatz, spec.i)[spec.k]
        ket = parameter_insertions(ansatz, spec.j)[spec.l]
        weight = np.conj(bra[1]) * ket[1]
        if bra[0] > ket[0]:
            bra, ket = ket, bra
            weight = np.conj(weight)
        return _interference(
            ansatz,
            theta,
            cmath.phase(weight),
            bra_position=bra[0],
            bra_pauli=bra[2],
            ket_position=ket[0],
            ket_pauli=ket[2],
            stop_after_ket=True,
        )
    if isinstance(spec, CTermSpec):
        bra = parameter_insertions(ansatz, spec.i)[spec.k]
        weight = -np.conj(bra[1]) * spec.term.coefficient
        return _interference(
            ansatz,
            theta,
            cmath.phase(weight),
            bra_position=bra[0],
            bra_pauli=bra[2],
            ket_position=ansatz.n_gates,
            ket_pauli=spec.term.string,
            stop_after_ket=False,
        )
    raise TypeError(f"spec must be ATermSpec or CTermSpec, got {type(spec).__name__}")


def a_entry_via_hadamard(ansatz: AnsatzCircuit, theta, i: int, j: int) -> float:
    """A_ij assembled purely from ancilla-circuit measurements."""
    total = 0.0
    for k, (_, f_bra, _) in enumerate(parameter_insertions(ansatz, i)):
        for l, (_, f_ket, _) in enumerate(parameter_insertions(ansatz, j)):
            scale = abs(np.conj(f_bra) * f_ket)
            total += scale * hadamard_test_entry(ansatz, theta, ATermSpec(i, k, j, l))
    return total


def c_entry_via_hadamard(ansatz: AnsatzCircuit, theta, hamiltonian: Hamiltonian, i: int) -> float:
    """C_i assembled purely from ancilla-circuit measurements."""
    total = 0.0
    for k, (_, factor, _) in enumerate(parameter_insertions(ansatz, i)):
        for term in hamiltonian.terms:
            scale = abs(np.conj(factor) * term.coefficient)
            total += scale * hadamard_test_entry(ansatz, theta, CTermSpec(i, k, term))
    return total
