"""Gate vocabulary for the dense statevector simulator.

Rotations follow R_sigma(theta) = exp(-i*theta*sigma/2). The two-qubit
``pauli-exp`` kind implements exp(+i*theta * sigma_a x sigma_b) — note the
opposite sign convention, kept as a distinct kind on purpose — and
``global-phase`` multiplies the state by exp(i*theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .pauli import PauliString

__all__ = ["GateOp", "GATE_KINDS", "PARAMETRIC_KINDS", "single_qubit_matrix"]

GATE_KINDS = frozenset(
    {
        "rx",
        "ry",
        "rz",
        "x",
        "y",
        "z",
        "h",
        "cnot",
        "cry",
        "pauli-exp",
        "global-phase",
        "pauli-string",
    }
)

# Kinds whose action depends on the angle field.
PARAMETRIC_KINDS = frozenset({"rx", "ry", "rz", "cry", "pauli-exp", "global-phase"})

_N_QUBITS = {
    "rx": 1,
    "ry": 1,
    "rz": 1,
    "x": 1,
    "y": 1,
    "z": 1,
    "h": 1,
    "cnot": 2,
    "cry": 2,
    "pauli-exp": 2,
    "global-phase": 0,
    "pauli-string": 0,
}


@dataclass(frozen=True)
class GateOp:
    """A single gate: kind, wires, and (for parametrised kinds) an angle.

    Two-qubit kinds list (control, target) or, for ``pauli-exp``, the wires
    the ``axes`` pair acts on in order. ``pauli-string`` applies an arbitrary
    Pauli string carried in ``pauli`` and ignores ``qubits``.
    """

    kind: str
    qubits: tuple[int, ...] = ()
    angle: float = 0.0
    axes: Optional[tuple[str, str]] = None
    pauli: Optional[PauliString] = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(self.qubits)
        object.__setattr__(self, "qubits", qubits)
        expected = _N_QUBITS[self.kind]
        if self.kind == "pauli-string":
            if self.pauli is None:
                raise ValueError("pauli-string gate requires a PauliString")
            if qubits:
                raise ValueError("pauli-string gate takes its wires from the string")
        elif len(qubits) != expected:
            raise ValueError(f"{self.kind} gate expects {expected} qubit(s), got {qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"gate qubits must be distinct, got {qubits}")
        if any(q < 0 for q in qubits):
            raise ValueError(f"gate qubits must be non-negative, got {qubits}")
        if self.kind == "pauli-exp":
            if self.axes is None or len(self.axes) != 2 or any(a not in "XYZ" for a in self.axes):
                raise ValueError("pauli-exp requires an axes pair from X, Y, Z")
        object.__setattr__(self, "angle", float(self.angle))

    @property
    def max_qubit(self) -> int:
        if self.kind == "pauli-string":
            return self.pauli.max_qubit
        return max(self.qubits, default=-1)

    def with_angle(self, angle: float) -> "GateOp":
        return replace(self, angle=angle)


def single_qubit_matrix(gate: GateOp) -> np.ndarray:
    """2x2 unitary of a single-qubit gate kind."""
    kind, theta = gate.kind, gate.angle
    if kind in ("rx", "ry", "rz"):
        return _rotation(kind[1].upper(), theta)
    if kind == "x":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if kind == "z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if kind == "h":
        s = 1.0 / math.sqrt(2.0)
        return np.array([[s, s], [s, -s]], dtype=complex)
    raise ValueError(f"{kind} is not a single-qubit gate kind")


def _rotation(axis: str, theta: float) -> np.ndarray:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    if axis == "X":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if axis == "Y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=complex)
