"""Variational imaginary-time evolution on a dense statevector simulator.

Finds ground states of Pauli-string Hamiltonians by projecting normalised
imaginary-time evolution onto a parametrised circuit manifold, with a
gradient-descent baseline, configurable shot noise and gate-error skew, and
exact dense oracles for verification.
"""

from .ansatz import (
    AnsatzCircuit,
    BoundGate,
    Insertion,
    builtin_ansatz,
    derivative_rule,
    derivative_state,
    insertion_weight,
    ldca_parameter_count,
    prepare_state,
    tangent_expansion,
)
from .backend import active_backend, available_backends, set_kernels
from .engine import (
    METHOD_GRADIENT_DESCENT,
    METHOD_IMAGINARY_TIME,
    EvolutionConfig,
    EvolutionError,
    SolverSpec,
    TrajectoryRecord,
    compute_a_matrix,
    compute_c_vector,
    evolve,
    read_trajectory,
    solve_theta_dot,
    step,
    trajectory_to_jsonl,
    write_trajectory,
)
from .exact import (
    GroundState,
    ImagEvolver,
    dense_matrix,
    exact_imag_evolve,
    fidelity,
    finite_diff_gradient,
    ground_state,
)
from .gates import GateOp
from .hadamard import (
    ATermSpec,
    CTermSpec,
    a_entry_via_hadamard,
    c_entry_via_hadamard,
    hadamard_test_entry,
    parameter_insertions,
)
from .harness import (
    ConvergenceStats,
    ExperimentConfig,
    TrialSummary,
    batch,
    load_hamiltonian,
    run,
    stable_stepsize_search,
)
from .noise import NoiseConfig, entry_stream, sample_expectation, skew_factor
from .pauli import (
    Hamiltonian,
    HamiltonianFormatError,
    PauliString,
    PauliTerm,
    builtin_hamiltonian,
    parse_hamiltonian,
    serialize_hamiltonian,
)
from .state import (
    StateVector,
    apply_controlled_pauli_string,
    apply_gate,
    apply_hamiltonian,
    apply_pauli_string,
    basis_state,
    expectation,
    inner_product,
)

__version__ = "0.1.0"
