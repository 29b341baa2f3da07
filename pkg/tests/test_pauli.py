import numpy as np
import pytest

from varqite import (
    Hamiltonian,
    HamiltonianFormatError,
    PauliString,
    PauliTerm,
    builtin_hamiltonian,
    parse_hamiltonian,
    serialize_hamiltonian,
)
from varqite.exact import dense_matrix

from oracles import PAULI, dense_hamiltonian


def test_parse_single_term():
    h = parse_hamiltonian("0.5 Z0 Z1")
    assert h.n_qubits == 2
    assert h.terms == (PauliTerm(0.5, PauliString({0: "Z", 1: "Z"})),)


def test_parse_identity():
    h = parse_hamiltonian("1.0 I")
    assert h.n_qubits == 1
    assert h.terms == (PauliTerm(1.0, PauliString()),)


def test_parse_merges_duplicates():
    h = parse_hamiltonian("0.3 X0\n0.2 X0")
    assert h.n_qubits == 1
    assert h.n_terms == 1
    assert h.terms[0].coefficient == pytest.approx(0.5, abs=1e-15)
    # merge rule against the dense 2x2 matrix sum
    expected = 0.3 * PAULI["X"] + 0.2 * PAULI["X"]
    assert np.allclose(dense_matrix(h), expected, atol=1e-15)


def test_parse_cancellation_drops_term():
    h = parse_hamiltonian("0.3 X0\n-0.3 X0")
    assert h.n_terms == 0


def test_parse_header_and_comments():
    text = "# a comment\nqubits 3\n\n0.25 X0 Y2\n"
    h = parse_hamiltonian(text)
    assert h.n_qubits == 3
    assert h.terms[0].string == PauliString({0: "X", 2: "Y"})


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("banana Z0", "line 1"),
        ("0.5 Q0", "line 1"),
        ("0.5 Z0 X0", "twice"),
        ("0.5 Z-1", "negative"),
        ("0.5 I Z0", "sole factor"),
        ("", "empty"),
        ("# only a comment", "empty"),
        ("qubits 1\n0.5 Z1", "declares"),
        ("0.5 Z0\nqubits 2", "first line"),
        ("0.5", "no Pauli factors"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(HamiltonianFormatError, match=fragment):
        parse_hamiltonian(text)


def test_parse_reports_line_number():
    with pytest.raises(HamiltonianFormatError, match="line 3"):
        parse_hamiltonian("qubits 2\n0.5 Z0\noops Z1")


def test_serialize_example():
    h = Hamiltonian(1, [PauliTerm(1.0, PauliString({0: "Z"}))])
    assert serialize_hamiltonian(h) == "qubits 1\n1.0 Z0"


def test_serialize_h2_coefficients():
    text = serialize_hamiltonian(builtin_hamiltonian("h2-sto3g-0.75"))
    lines = text.splitlines()
    assert len(lines) == 7  # header + six terms
    for coefficient in ("0.2252", "0.3435", "-0.4347", "0.5716", "0.091"):
        assert any(line.startswith(coefficient + " ") for line in lines[1:])


def test_roundtrip_random_hamiltonians():
    from oracles import random_hamiltonian

    rng = np.random.default_rng(11)
    for _ in range(20):
        h = random_hamiltonian(6, 50, rng)
        assert parse_hamiltonian(serialize_hamiltonian(h)) == h


def test_roundtrip_identity_term():
    h = Hamiltonian(2, [PauliTerm(0.25, PauliString()), PauliTerm(-1.5, PauliString({1: "Y"}))])
    assert parse_hamiltonian(serialize_hamiltonian(h)) == h


def test_builtin_h2_terms():
    h = builtin_hamiltonian("h2-sto3g-0.75")
    expected = {
        PauliString(): 0.2252,
        PauliString({0: "Z"}): 0.3435,
        PauliString({1: "Z"}): -0.4347,
        PauliString({0: "Z", 1: "Z"}): 0.5716,
        PauliString({0: "Y", 1: "Y"}): 0.0910,
        PauliString({0: "X", 1: "X"}): 0.0910,
    }
    assert h.coefficients() == expected


@pytest.mark.parametrize(
    "name,diagonal",
    [("toy-a", (1.0, 2.0, 3.0, 0.0)), ("toy-b", (1.0, 1.0, 2.0, 0.0))],
)
def test_builtin_toy_matrices_exact(name, diagonal):
    matrix = dense_matrix(builtin_hamiltonian(name))
    assert np.array_equal(matrix, np.diag(diagonal).astype(complex))


def test_builtin_toy_a_decomposition():
    h = builtin_hamiltonian("toy-a")
    expected = {
        PauliString(): 1.5,
        PauliString({1: "Z"}): 0.5,
        PauliString({0: "Z", 1: "Z"}): -1.0,
    }
    assert h.coefficients() == expected


def test_builtin_unknown_name():
    with pytest.raises(ValueError, match="unknown Hamiltonian"):
        builtin_hamiltonian("h3")


def test_builtins_hermitian():
    for name in ("h2-sto3g-0.75", "toy-a", "toy-b"):
        matrix = dense_hamiltonian(builtin_hamiltonian(name))
        assert np.allclose(matrix, matrix.conj().T, atol=1e-15)


def test_pauli_term_rejects_nonfinite():
    with pytest.raises(ValueError):
        PauliTerm(float("nan"), PauliString())
    with pytest.raises(ValueError):
        PauliTerm(float("inf"), PauliString({0: "X"}))


def test_pauli_string_validation():
    with pytest.raises(ValueError):
        PauliString({-1: "X"})
    with pytest.raises(ValueError):
        PauliString({0: "Q"})


def test_hamiltonian_rejects_out_of_range_term():
    with pytest.raises(ValueError, match="acts on qubit"):
        Hamiltonian(1, [PauliTerm(1.0, PauliString({3: "X"}))])


def test_parse_accepts_stream():
    import io

    h = parse_hamiltonian(io.StringIO("qubits 2\n1.0 Z0"))
    assert h.n_qubits == 2
