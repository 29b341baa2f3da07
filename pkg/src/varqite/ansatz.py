"""Parametrised circuits, analytic tangent states, and the built-in library.

The derivative of a bound gate U(theta) is expanded as
dU/dtheta = sum_k f_k * U * sigma_k with complex factors f_k and Pauli-string
insertions sigma_k placed before the gate. Summed over every gate bound to a
parameter (product rule), this yields the exact, unnormalised tangent state
d|phi>/d theta_i without finite differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .gates import GateOp, PARAMETRIC_KINDS
from .pauli import PauliString
from .state import StateVector, _apply_gate_raw, basis_state, pauli_masks
from . import backend

__all__ = [
    "BoundGate",
    "AnsatzCircuit",
    "Insertion",
    "derivative_rule",
    "builtin_ansatz",
    "prepare_state",
    "derivative_state",
    "tangent_expansion",
    "insertion_weight",
    "ldca_parameter_count",
    "BUILTIN_ANSATZE",
]


@dataclass(frozen=True)
class BoundGate:
    """A gate template plus its parameter binding (None = constant gate)."""

    gate: GateOp
    param: Optional[int] = None

    def __post_init__(self):
        if self.param is not None:
            if self.param < 0:
                raise ValueError(f"parameter index must be non-negative, got {self.param}")
            if self.gate.kind not in PARAMETRIC_KINDS:
                raise ValueError(f"gate kind {self.gate.kind!r} cannot bind a parameter")


@dataclass(frozen=True)
class AnsatzCircuit:
    """Ordered gate list applied to a fixed initial basis state.

    A parameter index may bind several gates (shared parameters); every index
    in 0..n_params-1 must be bound at least once.
    """

    n_qubits: int
    initial_bits: str
    gates: tuple[BoundGate, ...]
    n_params: int

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if len(self.initial_bits) != self.n_qubits:
            raise ValueError(
                f"initial bits {self.initial_bits!r} do not match {self.n_qubits} qubits"
            )
        bound: set[int] = set()
        for bg in self.gates:
            if bg.gate.max_qubit >= self.n_qubits:
                raise ValueError(
                    f"gate {bg.gate.kind} acts on qubit {bg.gate.max_qubit} "
                    f"but the circuit has {self.n_qubits} qubits"
                )
            if bg.param is not None:
                if bg.param >= self.n_params:
                    raise ValueError(f"parameter index {bg.param} out of range")
                bound.add(bg.param)
        missing = set(range(self.n_params)) - bound
        if missing:
            raise ValueError(f"parameters never bound by any gate: {sorted(missing)}")

    @property
    def n_gates(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class Insertion:
    """One term of a gate-derivative expansion: factor, Pauli insertion, slot."""

    factor: complex
    pauli: PauliString
    placement: str = "before"


def derivative_rule(gate: GateOp) -> tuple[Insertion, ...]:
    """Insertions realising dU/dtheta = sum_k f_k U sigma_k for one gate."""
    kind = gate.kind
    if kind in ("rx", "ry", "rz"):
        axis = kind[1].upper()
        return (Insertion(-0.5j, PauliString({gate.qubits[0]: axis})),)
    if kind == "cry":
        control, target = gate.qubits
        return (
            Insertion(-0.25j, PauliString({target: "Y"})),
            Insertion(+0.25j, PauliString({control: "Z", target: "Y"})),
        )
    if kind == "global-phase":
        return (Insertion(1j, PauliString()),)
    if kind == "pauli-exp":
        q1, q2 = gate.qubits
        return (Insertion(1j, PauliString({q1: gate.axes[0], q2: gate.axes[1]})),)
    raise ValueError(f"gate kind {kind!r} has no parameter derivative")


def insertion_weight(ansatz: AnsatzCircuit, param: int) -> float:
    """sum_k |f_k| over every insertion of a parameter.

    Bounds the reachable tangent norm: |<dphi_i|dphi_j>| <= w_i * w_j, which
    fixes the physical half-range of sampled A entries (1/4 for a parameter
    bound to a single plain rotation).
    """
    weight = 0.0
    for bg in ansatz.gates:
        if bg.param == param:
            weight += sum(abs(ins.factor) for ins in derivative_rule(bg.gate))
    return weight


def _materialize(bound: BoundGate, theta: np.ndarray) -> GateOp:
    if bound.param is None:
        return bound.gate
    return bound.gate.with_angle(float(theta[bound.param]))


def _check_theta(ansatz: AnsatzCircuit, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.n_params,):
        raise ValueError(
            f"expected {ansatz.n_params} parameters, got shape {theta.shape}"
        )
    if not np.all(np.isfinite(theta)):
        raise ValueError("parameters must be finite")
    return theta


def prepare_state(ansatz: AnsatzCircuit, theta) -> StateVector:
    """|phi(theta)>: the gate list applied in order to the initial state."""
    theta = _check_theta(ansatz, theta)
    amps = basis_state(ansatz.n_qubits, ansatz.initial_bits).amplitudes
    for bg in ansatz.gates:
        amps = _apply_gate_raw(amps, ansatz.n_qubits, _materialize(bg, theta))
    return StateVector(ansatz.n_qubits, amps)


def tangent_expansion(
    ansatz: AnsatzCircuit, theta, params: Optional[Iterable[int]] = None
) -> tuple[np.ndarray, dict[int, list[tuple[complex, np.ndarray]]]]:
    """Prepared amplitudes plus per-parameter insertion branches.

    Each branch is a unit-norm amplitude array f-weighted into the tangent
    d|phi>/d theta_i = sum f_k |branch_k>; branches are kept separate so the
    shot-noise model can sample each underlying observable individually.
    One forward sweep serves every requested parameter.
    """
    theta = _check_theta(ansatz, theta)
    wanted = set(range(ansatz.n_params)) if params is None else set(params)
    for i in wanted:
        if not 0 <= i < ansatz.n_params:
            raise IndexError(f"parameter index {i} out of range")
    n = ansatz.n_qubits
    amps = basis_state(n, ansatz.initial_bits).amplitudes
    branches: dict[int, list[tuple[complex, np.ndarray]]] = {i: [] for i in wanted}
    live: list[list] = []  # [param, factor, amplitudes] with suffix gates pending
    kernels = backend.kernels
    for bg in ansatz.gates:
        gate = _materialize(bg, theta)
        if bg.param in wanted:
            for ins in derivative_rule(gate):
                x_mask, z_mask, prefactor = pauli_masks(ins.pauli, n)
                inserted = kernels.apply_pauli(amps, n, x_mask, z_mask, prefactor)
                live.append([bg.param, ins.factor, inserted])
        amps = _apply_gate_raw(amps, n, gate)
        for record in live:
            record[2] = _apply_gate_raw(record[2], n, gate)
    for param, factor, branch in live:
        branches[param].append((factor, branch))
    return amps, branches


def derivative_state(ansatz: AnsatzCircuit, theta, index: int) -> StateVector:
    """Exact unnormalised tangent d|phi(theta)>/d theta_index."""
    _, branches = tangent_expansion(ansatz, theta, params=(index,))
    total = np.zeros(1 << ansatz.n_qubits, dtype=np.complex128)
    for factor, branch in branches[index]:
        total += factor * branch
    return StateVector(ansatz.n_qubits, total, normalized=False)


def ldca_parameter_count(n_qubits: int, depth: int) -> int:
    """5*M*(n-1) two-qubit parameters plus the 4n single-qubit layer."""
    return 5 * depth * (n_qubits - 1) + 4 * n_qubits


def _build_h2_universal() -> AnsatzCircuit:
    # Two rotation layers around one entangling CNOT; wire 1 is the top wire
    # of the published circuit, so odd parameter indices land there.
    gates = [
        BoundGate(GateOp("ry", (1,)), 0),
        BoundGate(GateOp("rz", (1,)), 1),
        BoundGate(GateOp("ry", (0,)), 2),
        BoundGate(GateOp("rz", (0,)), 3),
        BoundGate(GateOp("cnot", (1, 0))),
        BoundGate(GateOp("ry", (1,)), 4),
        BoundGate(GateOp("rz", (1,)), 5),
        BoundGate(GateOp("ry", (0,)), 6),
        BoundGate(GateOp("rz", (0,)), 7),
    ]
    return AnsatzCircuit(2, "00", tuple(gates), 8)


def _build_toy_a() -> AnsatzCircuit:
    gates = [
        BoundGate(GateOp("rx", (0,)), 0),
        BoundGate(GateOp("cry", (0, 1)), 1),
        BoundGate(GateOp("global-phase"), 2),
    ]
    return AnsatzCircuit(2, "00", tuple(gates), 3)


def _build_toy_b() -> AnsatzCircuit:
    # theta_1 drives both X rotations; the tangent picks up one insertion per
    # bound gate.
    gates = [
        BoundGate(GateOp("rx", (1,)), 0),
        BoundGate(GateOp("rx", (0,)), 0),
        BoundGate(GateOp("cry", (0, 1)), 1),
        BoundGate(GateOp("global-phase"), 2),
    ]
    return AnsatzCircuit(2, "01", tuple(gates), 3)


# Exponential order inside one pairwise coupling block (applied first to last).
_BLOCK_AXES = (("X", "X"), ("Y", "Y"), ("Z", "Z"), ("X", "Y"), ("Y", "X"))


def _build_ldca(n_qubits: int, depth: int, initial_bits: str) -> AnsatzCircuit:
    if n_qubits < 2 or n_qubits % 2:
        raise ValueError(f"ldca needs an even qubit count >= 2, got {n_qubits}")
    if depth < 1:
        raise ValueError(f"ldca depth must be >= 1, got {depth}")
    gates: list[BoundGate] = []
    param = 0
    for kind in ("rz", "ry", "rx", "rz"):
        for wire in range(n_qubits):
            gates.append(BoundGate(GateOp(kind, (wire,)), param))
            param += 1
    for _ in range(depth):
        for offset in (0, 1):
            for q in range(offset, n_qubits - 1, 2):
                for axes in _BLOCK_AXES:
                    gates.append(BoundGate(GateOp("pauli-exp", (q, q + 1), axes=axes), param))
                    param += 1
    assert param == ldca_parameter_count(n_qubits, depth)
    return AnsatzCircuit(n_qubits, initial_bits, tuple(gates), param)


BUILTIN_ANSATZE = ("h2-universal", "toy-a", "toy-b", "ldca")


def builtin_ansatz(name: str, options: Optional[Mapping[str, object]] = None) -> AnsatzCircuit:
    """Construct a named built-in ansatz.

    ``ldca`` takes options ``n_qubits`` (even), ``depth``, and
    ``initial_bits`` (defaults to all zeros); the other ansaetze take none.
    """
    options = dict(options or {})
    if name == "h2-universal":
        circuit = _build_h2_universal()
    elif name == "toy-a":
        circuit = _build_toy_a()
    elif name == "toy-b":
        circuit = _build_toy_b()
    elif name == "ldca":
        try:
            n_qubits = int(options.pop("n_qubits"))
            depth = int(options.pop("depth"))
        except KeyError as missing:
            raise ValueError(f"ldca requires option {missing.args[0]!r}") from None
        initial_bits = str(options.pop("initial_bits", "0" * n_qubits))
        circuit = _build_ldca(n_qubits, depth, initial_bits)
    else:
        known = ", ".join(BUILTIN_ANSATZE)
        raise ValueError(f"unknown ansatz {name!r} (available: {known})")
    if options:
        raise ValueError(f"unexpected options for {name!r}: {sorted(options)}")
    return circuit
