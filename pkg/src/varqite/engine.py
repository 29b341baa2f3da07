"""Assembly of the tangent linear system and the parameter-evolution loop.

Each iteration builds the real system A thetadot = C from tangent states,
solves it with a regularised inverse, and advances the parameters by an Euler
step (imaginary time) or follows C directly (gradient descent; C equals minus
half the energy gradient, and A is never formed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Optional, Sequence, Union

import numpy as np

from .ansatz import AnsatzCircuit, insertion_weight, tangent_expansion
from .exact import ImagEvolver, fidelity
from .noise import STREAM_A, STREAM_C, NoiseConfig, entry_stream, sample_expectation
from .pauli import Hamiltonian
from .state import StateVector, pauli_masks
from . import backend

__all__ = [
    "SolverSpec",
    "EvolutionConfig",
    "TrajectoryRecord",
    "EvolutionError",
    "METHOD_IMAGINARY_TIME",
    "METHOD_GRADIENT_DESCENT",
    "compute_a_matrix",
    "compute_c_vector",
    "solve_theta_dot",
    "step",
    "evolve",
    "trajectory_to_jsonl",
    "write_trajectory",
    "read_trajectory",
]

METHOD_IMAGINARY_TIME = "imaginary-time"
METHOD_GRADIENT_DESCENT = "gradient-descent"
_METHODS = (METHOD_IMAGINARY_TIME, METHOD_GRADIENT_DESCENT)

# Eigenvalues at or below this are treated as exact zeros when pseudo-inverting.
EIGEN_PINV_THRESHOLD = 1e-12

# A parameter velocity this large means the linear solve has blown up; abort
# rather than integrate garbage.
MAX_THETA_DOT_NORM = 1e6

_FIDELITY_QUBIT_LIMIT = 10


class EvolutionError(RuntimeError):
    """Evolution aborted: non-finite energy or exploding parameter velocity."""


@dataclass(frozen=True)
class SolverSpec:
    """Regularised solver for A thetadot = C.

    ``tikhonov`` picks its strength from a 3-point L-curve corner clamped to
    [lambda_min, lambda_max]; ``tsvd`` drops singular values below
    cutoff * sigma_max; ``eigen-pinv`` inverts only eigenvalues above an
    absolute threshold, zeroing null directions.
    """

    kind: str = "tikhonov"
    lambda_min: float = 1e-4
    lambda_max: float = 1e-2
    tsvd_cutoff: float = 1e-8

    def __post_init__(self):
        if self.kind not in ("tikhonov", "tsvd", "eigen-pinv"):
            raise ValueError(f"unknown solver kind {self.kind!r}")
        if not (0 < self.lambda_min <= self.lambda_max):
            raise ValueError(
                f"need 0 < lambda_min <= lambda_max, got [{self.lambda_min}, {self.lambda_max}]"
            )
        if not 0 < self.tsvd_cutoff < 1:
            raise ValueError(f"tsvd cutoff must be in (0, 1), got {self.tsvd_cutoff}")


@dataclass(frozen=True)
class EvolutionConfig:
    method: str = METHOD_IMAGINARY_TIME
    dt: float = 0.01
    n_iterations: int = 100
    solver: SolverSpec = field(default_factory=SolverSpec)
    noise: Optional[NoiseConfig] = None
    record_fidelity: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        if self.dt < 0:
            raise ValueError(f"timestep must be non-negative, got {self.dt}")
        if self.n_iterations < 1:
            raise ValueError(f"need at least one iteration, got {self.n_iterations}")


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    iteration: int
    tau: float
    params: np.ndarray
    energy: float
    fidelity: Optional[float] = None


def _tangent_vectors(
    ansatz: AnsatzCircuit, branches: dict[int, list[tuple[complex, np.ndarray]]]
) -> np.ndarray:
    tangents = np.zeros((ansatz.n_params, 1 << ansatz.n_qubits), dtype=np.complex128)
    for i, parts in branches.items():
        for factor, branch in parts:
            tangents[i] += factor * branch
    return tangents


def _a_from_branches(ansatz, branches, noise: Optional[NoiseConfig], iteration: int) -> np.ndarray:
    tangents = _tangent_vectors(ansatz, branches)
    gram = (tangents.conj() @ tangents.T).real
    a_matrix = (gram + gram.T) / 2.0
    if noise is None:
        return a_matrix
    skew = noise.skew(ansatz.n_gates)
    weights = [insertion_weight(ansatz, i) for i in range(ansatz.n_params)]
    sampled = np.empty_like(a_matrix)
    for i in range(ansatz.n_params):
        for j in range(i, ansatz.n_params):
            stream = entry_stream(noise.seed, iteration, STREAM_A, i, j)
            value = sample_expectation(
                a_matrix[i, j], weights[i] * weights[j], noise.shots_a, skew, stream
            )
            sampled[i, j] = value
            sampled[j, i] = value
    return sampled


def _term_states(phi: np.ndarray, n_qubits: int, hamiltonian: Hamiltonian) -> list[np.ndarray]:
    kernels = backend.kernels
    states = []
    for term in hamiltonian.terms:
        x_mask, z_mask, prefactor = pauli_masks(term.string, n_qubits)
        states.append(kernels.apply_pauli(phi, n_qubits, x_mask, z_mask, prefactor))
    return states


def _c_from_branches(
    ansatz,
    phi: np.ndarray,
    branches,
    hamiltonian: Hamiltonian,
    noise: Optional[NoiseConfig],
    iteration: int,
    term_states: Optional[list[np.ndarray]] = None,
) -> np.ndarray:
    n_params = ansatz.n_params
    if noise is None:
        if term_states is None:
            term_states = _term_states(phi, ansatz.n_qubits, hamiltonian)
        h_phi = np.zeros_like(phi)
        for term, state in zip(hamiltonian.terms, term_states):
            h_phi += term.coefficient * state
        tangents = _tangent_vectors(ansatz, branches)
        return -(tangents.conj() @ h_phi).real
    if term_states is None:
        term_states = _term_states(phi, ansatz.n_qubits, hamiltonian)
    skew = noise.skew(ansatz.n_gates)
    max_branches = max((len(parts) for parts in branches.values()), default=1)
    c_vector = np.zeros(n_params)
    for i in range(n_params):
        for k, (factor, branch) in enumerate(branches[i]):
            branch_conj = branch.conj()
            for alpha, term in enumerate(hamiltonian.terms):
                weight = -np.conj(factor) * term.coefficient
                scale = abs(weight)
                # raw interference observable in [-1, 1], then scaled by |f*lambda|
                raw = ((weight / scale) * (branch_conj @ term_states[alpha])).real
                raw = min(max(raw, -1.0), 1.0)
                slot = alpha * max_branches + k
                stream = entry_stream(noise.seed, iteration, STREAM_C, i, slot)
                c_vector[i] += scale * sample_expectation(raw, 1.0, noise.shots_c, skew, stream)
    return c_vector


def compute_a_matrix(
    ansatz: AnsatzCircuit, theta, noise: Optional[NoiseConfig] = None, iteration: int = 0
) -> np.ndarray:
    """A_ij = Re <dphi_i|dphi_j>, from one tangent sweep (N circuit evaluations).

    With noise, every upper-triangle entry is passed through the shot-noise
    sampler on its own counter-based stream and mirrored.
    """
    _, branches = tangent_expansion(ansatz, theta)
    return _a_from_branches(ansatz, branches, noise, iteration)


def compute_c_vector(
    ansatz: AnsatzCircuit,
    theta,
    hamiltonian: Hamiltonian,
    noise: Optional[NoiseConfig] = None,
    iteration: int = 0,
) -> np.ndarray:
    """C_i = -Re <dphi_i|H|phi>.

    Noise-free, H|phi> is formed once and contracted with each tangent. With
    noise, each per-term interference observable is sampled with N_C shots at
    unit half-range and recombined with its |f * lambda| weight.
    """
    if ansatz.n_qubits != hamiltonian.n_qubits:
        raise ValueError("ansatz and Hamiltonian qubit counts differ")
    phi, branches = tangent_expansion(ansatz, theta)
    return _c_from_branches(ansatz, phi, branches, hamiltonian, noise, iteration)


def _menger_curvature(points: Sequence[tuple[float, float]]) -> float:
    (x1, y1), (x2, y2), (x3, y3) = points
    area2 = abs(x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))
    d12 = np.hypot(x2 - x1, y2 - y1)
    d23 = np.hypot(x3 - x2, y3 - y2)
    d31 = np.hypot(x1 - x3, y1 - y3)
    if d12 == 0.0 or d23 == 0.0 or d31 == 0.0:
        return 0.0
    return 2.0 * area2 / (d12 * d23 * d31)


def _tikhonov_solve(eigenvalues, basis, beta, lam) -> np.ndarray:
    filt = eigenvalues / (eigenvalues * eigenvalues + lam)
    return basis @ (filt * beta)


def _lcurve_point(eigenvalues, beta, lam) -> tuple[float, float]:
    denom = eigenvalues * eigenvalues + lam
    residual = np.linalg.norm(lam * beta / denom)
    solution = np.linalg.norm(eigenvalues * beta / denom)
    return float(np.log(max(residual, 1e-300))), float(np.log(max(solution, 1e-300)))


def solve_theta_dot(a_matrix, c_vector, solver: SolverSpec) -> np.ndarray:
    """Solve A thetadot = C with the requested regularisation."""
    a_matrix = np.asarray(a_matrix, dtype=float)
    c_vector = np.asarray(c_vector, dtype=float)
    if a_matrix.ndim != 2 or a_matrix.shape[0] != a_matrix.shape[1]:
        raise ValueError(f"A must be square, got shape {a_matrix.shape}")
    if c_vector.shape != (a_matrix.shape[0],):
        raise ValueError(
            f"C length {c_vector.shape} does not match A of shape {a_matrix.shape}"
        )
    if solver.kind == "eigen-pinv":
        eigenvalues, basis = np.linalg.eigh(a_matrix)
        inverse = np.where(eigenvalues > EIGEN_PINV_THRESHOLD, 1.0, 0.0) / np.where(
            eigenvalues > EIGEN_PINV_THRESHOLD, eigenvalues, 1.0
        )
        return basis @ (inverse * (basis.T @ c_vector))
    if solver.kind == "tsvd":
        left, singular, right_t = np.linalg.svd(a_matrix)
        if singular[0] == 0.0:
            return np.zeros_like(c_vector)
        keep = singular >= solver.tsvd_cutoff * singular[0]
        inverse = np.where(keep, 1.0, 0.0) / np.where(keep, singular, 1.0)
        return right_t.T @ (inverse * (left.T @ c_vector))
    # tikhonov with 3-point L-curve corner
    if np.linalg.norm(c_vector) < 1e-300:
        return np.zeros_like(c_vector)
    eigenvalues, basis = np.linalg.eigh(a_matrix)
    beta = basis.T @ c_vector
    candidates = (
        solver.lambda_min,
        float(np.sqrt(solver.lambda_min * solver.lambda_max)),
        solver.lambda_max,
    )
    best_lam, best_curvature = candidates[1], -1.0
    for lam in candidates:
        # curvature of the log-log L-curve at lam, from nearby probe points
        probes = [_lcurve_point(eigenvalues, beta, lam * h) for h in (1 / 1.05, 1.0, 1.05)]
        curvature = _menger_curvature(probes)
        if curvature > best_curvature:
            best_lam, best_curvature = lam, curvature
    best_lam = min(max(best_lam, solver.lambda_min), solver.lambda_max)
    return _tikhonov_solve(eigenvalues, basis, beta, best_lam)


def step(theta, method: str, dt: float, a_matrix, c_vector, solver: Optional[SolverSpec] = None):
    """One parameter update at fixed timestep.

    Imaginary time follows the regularised solution of A thetadot = C;
    gradient descent follows C itself and ignores A entirely.
    """
    theta = np.asarray(theta, dtype=float)
    c_vector = np.asarray(c_vector, dtype=float)
    if method == METHOD_GRADIENT_DESCENT:
        return theta + c_vector * dt
    if method != METHOD_IMAGINARY_TIME:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    theta_dot = solve_theta_dot(a_matrix, c_vector, solver or SolverSpec())
    return theta + theta_dot * dt


def _checked_theta_dot(a_matrix, c_vector, solver, iteration) -> np.ndarray:
    theta_dot = solve_theta_dot(a_matrix, c_vector, solver)
    norm = float(np.linalg.norm(theta_dot))
    if not np.isfinite(norm) or norm > MAX_THETA_DOT_NORM:
        raise EvolutionError(
            f"parameter velocity diverged at iteration {iteration}: |thetadot| = {norm:g}"
        )
    return theta_dot


def evolve(
    ansatz: AnsatzCircuit, hamiltonian: Hamiltonian, theta0, config: EvolutionConfig
) -> list[TrajectoryRecord]:
    """Run the evolution loop; returns one record per iteration plus the start.

    Energies recorded are exact expectation values; the noise model perturbs
    only the sampled A and C entries. Fidelity against exact imaginary-time
    evolution from the same initial state is recorded on request for up to
    10 qubits. Deterministic given the config, including under noise.
    """
    if ansatz.n_qubits != hamiltonian.n_qubits:
        raise ValueError("ansatz and Hamiltonian qubit counts differ")
    theta = np.array(theta0, dtype=float)
    if theta.shape != (ansatz.n_params,):
        raise ValueError(f"expected {ansatz.n_params} parameters, got shape {theta.shape}")
    track_fidelity = config.record_fidelity and ansatz.n_qubits <= _FIDELITY_QUBIT_LIMIT
    evolver = ImagEvolver(hamiltonian) if track_fidelity else None
    reference: Optional[StateVector] = None

    records: list[TrajectoryRecord] = []
    for iteration in range(config.n_iterations + 1):
        phi, branches = tangent_expansion(ansatz, theta)
        term_states = _term_states(phi, ansatz.n_qubits, hamiltonian)
        energy = float(
            sum(
                term.coefficient * (phi.conj() @ state).real
                for term, state in zip(hamiltonian.terms, term_states)
            )
        )
        if not np.isfinite(energy):
            raise EvolutionError(f"non-finite energy at iteration {iteration}: {energy!r}")
        fid = None
        if track_fidelity:
            current = StateVector(ansatz.n_qubits, phi)
            if reference is None:
                reference = current
            fid = fidelity(current, evolver.evolve(reference, iteration * config.dt))
        records.append(
            TrajectoryRecord(iteration, iteration * config.dt, theta.copy(), energy, fid)
        )
        if iteration == config.n_iterations:
            break
        c_vector = _c_from_branches(
            ansatz, phi, branches, hamiltonian, config.noise, iteration, term_states
        )
        if config.method == METHOD_GRADIENT_DESCENT:
            theta = theta + c_vector * config.dt
        else:
            a_matrix = _a_from_branches(ansatz, branches, config.noise, iteration)
            theta_dot = _checked_theta_dot(a_matrix, c_vector, config.solver, iteration)
            theta = theta + theta_dot * config.dt
    return records


def trajectory_to_jsonl(records: Sequence[TrajectoryRecord]) -> str:
    lines = []
    for record in records:
        lines.append(
            json.dumps(
                {
                    "iteration": record.iteration,
                    "tau": record.tau,
                    "energy": record.energy,
                    "fidelity": record.fidelity,
                    "params": [float(v) for v in record.params],
                }
            )
        )
    return "\n".join(lines) + "\n"


def write_trajectory(records: Sequence[TrajectoryRecord], destination: Union[str, IO[str]]):
    text = trajectory_to_jsonl(records)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as handle:
            handle.write(text)


def read_trajectory(source: Union[str, IO[str]]) -> list[TrajectoryRecord]:
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as handle:
            text = handle.read()
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        data = json.loads(line)
        records.append(
            TrajectoryRecord(
                iteration=data["iteration"],
                tau=data["tau"],
                params=np.array(data["params"], dtype=float),
                energy=data["energy"],
                fidelity=data["fidelity"],
            )
        )
    return records
