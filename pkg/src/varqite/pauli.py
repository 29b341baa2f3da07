"""Pauli-string Hamiltonians: representation, text format, built-in systems.

A Hamiltonian is a weighted sum of Pauli strings

    H = sum_a  lambda_a * h_a

with real coefficients lambda_a and each h_a a tensor product of single-qubit
Pauli operators. Coefficients are in Hartree for the chemistry systems and
dimensionless otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Union

__all__ = [
    "PauliString",
    "PauliTerm",
    "Hamiltonian",
    "HamiltonianFormatError",
    "parse_hamiltonian",
    "serialize_hamiltonian",
    "builtin_hamiltonian",
    "BUILTIN_HAMILTONIANS",
    "MERGE_TOLERANCE",
]

_AXES = ("X", "Y", "Z")

# Merged terms with |coefficient| below this are dropped; dead terms would
# otherwise inflate measurement-cost accounting.
MERGE_TOLERANCE = 1e-12


class HamiltonianFormatError(ValueError):
    """Malformed Hamiltonian text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PauliString:
    """Tensor product of Pauli operators, one per listed qubit.

    Qubits absent from the map act as identity; an empty map is the identity
    operator. Instances are immutable and hashable.
    """

    __slots__ = ("_ops",)

    def __init__(self, ops: Union[Mapping[int, str], Iterable[tuple[int, str]]] = ()):
        items = dict(ops)
        for qubit, axis in items.items():
            if not isinstance(qubit, int) or qubit < 0:
                raise ValueError(f"qubit index must be a non-negative integer, got {qubit!r}")
            if axis not in _AXES:
                raise ValueError(f"axis must be one of X, Y, Z, got {axis!r}")
        self._ops = tuple(sorted(items.items()))

    @property
    def ops(self) -> dict[int, str]:
        """Copy of the qubit -> axis map."""
        return dict(self._ops)

    def items(self) -> tuple[tuple[int, str], ...]:
        return self._ops

    def axis(self, qubit: int) -> str | None:
        for q, ax in self._ops:
            if q == qubit:
                return ax
        return None

    @property
    def is_identity(self) -> bool:
        return not self._ops

    @property
    def max_qubit(self) -> int:
        """Largest qubit index acted on, or -1 for the identity."""
        return self._ops[-1][0] if self._ops else -1

    def factors(self) -> str:
        """Human/file form, e.g. ``"Z0 Z1"``; the identity is ``"I"``."""
        if not self._ops:
            return "I"
        return " ".join(f"{ax}{q}" for q, ax in self._ops)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self._ops == other._ops

    def __hash__(self) -> int:
        return hash(self._ops)

    def __repr__(self) -> str:
        return f"PauliString({self.factors()!r})"


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string; the coefficient must be real and finite."""

    coefficient: float
    string: PauliString

    def __post_init__(self):
        coeff = float(self.coefficient)
        if coeff != coeff or coeff in (float("inf"), float("-inf")):
            raise ValueError(f"coefficient must be finite, got {self.coefficient!r}")
        object.__setattr__(self, "coefficient", coeff)


class Hamiltonian:
    """Weighted Pauli-string sum on a fixed number of qubits.

    Duplicate strings are merged on construction (coefficients summed) and
    merged terms below :data:`MERGE_TOLERANCE` in magnitude are dropped.
    Equality is order-insensitive over the merged terms.
    """

    __slots__ = ("_n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms: Iterable[PauliTerm]):
        if not isinstance(n_qubits, int) or n_qubits < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {n_qubits!r}")
        merged: dict[PauliString, float] = {}
        order: list[PauliString] = []
        for term in terms:
            if not isinstance(term, PauliTerm):
                term = PauliTerm(*term)
            if term.string.max_qubit >= n_qubits:
                raise ValueError(
                    f"term {term.string.factors()!r} acts on qubit "
                    f"{term.string.max_qubit} but the Hamiltonian has {n_qubits} qubits"
                )
            if term.string not in merged:
                order.append(term.string)
                merged[term.string] = 0.0
            merged[term.string] += term.coefficient
        self._n_qubits = n_qubits
        self._terms = tuple(
            PauliTerm(merged[s], s) for s in order if abs(merged[s]) >= MERGE_TOLERANCE
        )

    @property
    def n_qubits(self) -> int:
        return self._n_qubits

    @property
    def terms(self) -> tuple[PauliTerm, ...]:
        return self._terms

    @property
    def n_terms(self) -> int:
        return len(self._terms)

    def coefficients(self) -> dict[PauliString, float]:
        return {t.string: t.coefficient for t in self._terms}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hamiltonian):
            return NotImplemented
        return self._n_qubits == other._n_qubits and self.coefficients() == other.coefficients()

    def __hash__(self) -> int:
        return hash((self._n_qubits, frozenset(self.coefficients().items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{t.coefficient:+g}*{t.string.factors()}" for t in self._terms)
        return f"Hamiltonian({self._n_qubits} qubits: {body})"


def _parse_factor(token: str, line_no: int) -> tuple[int, str]:
    axis, index = token[:1], token[1:]
    if axis not in _AXES or not index:
        raise HamiltonianFormatError(f"malformed factor {token!r}", line_no)
    try:
        qubit = int(index)
    except ValueError:
        raise HamiltonianFormatError(f"malformed factor {token!r}", line_no) from None
    if qubit < 0:
        raise HamiltonianFormatError(f"negative qubit index in {token!r}", line_no)
    return qubit, axis


def parse_hamiltonian(text: Union[str, IO[str]]) -> Hamiltonian:
    """Parse the line-oriented Hamiltonian text format.

    An optional first line ``qubits <n>`` declares the qubit count; otherwise
    it is inferred as 1 + the largest qubit index. Every other non-empty,
    non-``#`` line is ``<coefficient> <factor> [<factor> ...]`` where a factor
    is ``I`` (only valid alone) or an axis letter followed by a qubit index,
    e.g. ``0.5716 Z0 Z1``.
    """
    if hasattr(text, "read"):
        text = text.read()
    declared: int | None = None
    raw_terms: list[PauliTerm] = []
    seen_term_line = False
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if tokens[0] == "qubits":
            if seen_term_line or declared is not None:
                raise HamiltonianFormatError("'qubits' header must be the first line", line_no)
            if len(tokens) != 2:
                raise HamiltonianFormatError("expected 'qubits <n>'", line_no)
            try:
                declared = int(tokens[1])
            except ValueError:
                raise HamiltonianFormatError(f"bad qubit count {tokens[1]!r}", line_no) from None
            if declared < 1:
                raise HamiltonianFormatError(f"qubit count must be positive, got {declared}", line_no)
            continue
        seen_term_line = True
        try:
            coefficient = float(tokens[0])
        except ValueError:
            raise HamiltonianFormatError(f"bad coefficient {tokens[0]!r}", line_no) from None
        factors = tokens[1:]
        if not factors:
            raise HamiltonianFormatError("term has no Pauli factors", line_no)
        if "I" in factors:
            if len(factors) != 1:
                raise HamiltonianFormatError("'I' is only valid as the sole factor", line_no)
            raw_terms.append(PauliTerm(coefficient, PauliString()))
            continue
        ops: dict[int, str] = {}
        for token in factors:
            qubit, axis = _parse_factor(token, line_no)
            if qubit in ops:
                raise HamiltonianFormatError(f"qubit {qubit} listed twice in one term", line_no)
            ops[qubit] = axis
        raw_terms.append(PauliTerm(coefficient, PauliString(ops)))
    if not raw_terms:
        raise HamiltonianFormatError("no Hamiltonian terms found (empty input)")
    max_qubit = max(t.string.max_qubit for t in raw_terms)
    n_qubits = declared if declared is not None else max(max_qubit + 1, 1)
    if max_qubit >= n_qubits:
        raise HamiltonianFormatError(
            f"term acts on qubit {max_qubit} but header declares {n_qubits} qubits"
        )
    return Hamiltonian(n_qubits, raw_terms)


def serialize_hamiltonian(hamiltonian: Hamiltonian) -> str:
    """Render a Hamiltonian in the text format; round-trips through parsing.

    Coefficients use Python's shortest round-trip float representation
    (at least 12 significant digits whenever they matter).
    """
    lines = [f"qubits {hamiltonian.n_qubits}"]
    for term in hamiltonian.terms:
        lines.append(f"{term.coefficient!r} {term.string.factors()}")
    return "\n".join(lines)


def _h2_sto3g_075() -> Hamiltonian:
    # Two-qubit reduction of the minimal-basis molecular hydrogen Hamiltonian
    # at internuclear distance 0.75 angstrom.
    g = (0.2252, 0.3435, -0.4347, 0.5716, 0.0910, 0.0910)
    return Hamiltonian(
        2,
        [
            PauliTerm(g[0], PauliString()),
            PauliTerm(g[1], PauliString({0: "Z"})),
            PauliTerm(g[2], PauliString({1: "Z"})),
            PauliTerm(g[3], PauliString({0: "Z", 1: "Z"})),
            PauliTerm(g[4], PauliString({0: "Y", 1: "Y"})),
            PauliTerm(g[5], PauliString({0: "X", 1: "X"})),
        ],
    )


def _toy_a() -> Hamiltonian:
    # Pauli decomposition of diag(1, 2, 3, 0) in the q0-most-significant basis.
    return Hamiltonian(
        2,
        [
            PauliTerm(1.5, PauliString()),
            PauliTerm(0.5, PauliString({1: "Z"})),
            PauliTerm(-1.0, PauliString({0: "Z", 1: "Z"})),
        ],
    )


def _toy_b() -> Hamiltonian:
    # Pauli decomposition of diag(1, 1, 2, 0).
    return Hamiltonian(
        2,
        [
            PauliTerm(1.0, PauliString()),
            PauliTerm(0.5, PauliString({1: "Z"})),
            PauliTerm(-0.5, PauliString({0: "Z", 1: "Z"})),
        ],
    )


BUILTIN_HAMILTONIANS = {
    "h2-sto3g-0.75": _h2_sto3g_075,
    "toy-a": _toy_a,
    "toy-b": _toy_b,
}


def builtin_hamiltonian(name: str) -> Hamiltonian:
    """Return a named built-in Hamiltonian."""
    try:
        factory = BUILTIN_HAMILTONIANS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_HAMILTONIANS))
        raise ValueError(f"unknown Hamiltonian {name!r} (available: {known})") from None
    return factory()
