"""Experiment runner: single runs, random-start batches, stepsize search.

Batch trials are independent: trial t draws its initial parameters and noise
streams from seed + t, so a batch is reproducible and trivially
parallelisable. Convergence is monotone ("has ever been within tolerance of
the exact ground energy"), matching how converged-fraction curves are read.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .ansatz import AnsatzCircuit, builtin_ansatz
from .engine import (
    EvolutionConfig,
    EvolutionError,
    SolverSpec,
    TrajectoryRecord,
    evolve,
    write_trajectory,
)
from .exact import MAX_DENSE_QUBITS, ground_state
from .noise import NoiseConfig
from .pauli import Hamiltonian, builtin_hamiltonian, parse_hamiltonian

__all__ = [
    "ExperimentConfig",
    "TrialSummary",
    "ConvergenceStats",
    "load_hamiltonian",
    "run",
    "batch",
    "stable_stepsize_search",
    "write_batch_stats",
    "read_batch_stats",
    "PROBE_ITERATIONS",
]

DEFAULT_PERTURB_DELTA = math.pi / 50
DEFAULT_SHOTS = 10_000

# Stepsize probes follow the first-200-iterations monotonicity rule.
PROBE_ITERATIONS = 200
MONOTONE_SLACK = 1e-9


@dataclass
class ExperimentConfig:
    """Everything one experiment needs; built from CLI flags or a config file."""

    hamiltonian: str
    ansatz: str
    ansatz_options: dict = field(default_factory=dict)
    method: str = "imaginary-time"
    dt: float = 0.01
    iterations: int = 100
    solver: str = "tikhonov"
    lambda_min: float = 1e-4
    lambda_max: float = 1e-2
    tsvd_cutoff: float = 1e-8
    init: str = "zeros"
    perturb_delta: float = DEFAULT_PERTURB_DELTA
    reference_params: Optional[str] = None
    trials: int = 1
    tolerance: float = 1e-3
    shots_a: Optional[int] = None
    shots_c: Optional[int] = None
    gate_error: Optional[float] = None
    seed: int = 0
    record_fidelity: bool = False
    out: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.init not in ("zeros", "random", "perturb"):
            raise ValueError(f"unknown init mode {self.init!r}")
        if self.perturb_delta <= 0:
            raise ValueError(f"perturbation must be positive, got {self.perturb_delta}")

    def solver_spec(self) -> SolverSpec:
        return SolverSpec(
            kind=self.solver,
            lambda_min=self.lambda_min,
            lambda_max=self.lambda_max,
            tsvd_cutoff=self.tsvd_cutoff,
        )

    def noise_config(self, trial_seed: int) -> Optional[NoiseConfig]:
        if self.shots_a is None and self.shots_c is None and self.gate_error is None:
            return None
        return NoiseConfig(
            gate_error_rate=self.gate_error or 0.0,
            shots_a=self.shots_a or DEFAULT_SHOTS,
            shots_c=self.shots_c or DEFAULT_SHOTS,
            seed=trial_seed,
        )

    def evolution_config(self, trial_seed: int, noise_free: bool = False) -> EvolutionConfig:
        return EvolutionConfig(
            method=self.method,
            dt=self.dt,
            n_iterations=self.iterations,
            solver=self.solver_spec(),
            noise=None if noise_free else self.noise_config(trial_seed),
            record_fidelity=self.record_fidelity,
            seed=trial_seed,
        )


@dataclass(frozen=True)
class TrialSummary:
    trial: int
    seed: int
    converged_iteration: Optional[int]
    final_energy: float
    final_residual: Optional[float]


@dataclass(frozen=True)
class ConvergenceStats:
    """Per-iteration converged fraction and residual of converged trials."""

    fraction: np.ndarray
    mean_residual: np.ndarray

    @property
    def final_fraction(self) -> float:
        return float(self.fraction[-1])


def load_hamiltonian(source: str) -> Hamiltonian:
    """Resolve a ``builtin:<name>`` or ``file:<path>`` Hamiltonian source."""
    if source.startswith("builtin:"):
        return builtin_hamiltonian(source[len("builtin:"):])
    if source.startswith("file:"):
        path = Path(source[len("file:"):])
        return parse_hamiltonian(path.read_text())
    raise ValueError(
        f"Hamiltonian source must start with 'builtin:' or 'file:', got {source!r}"
    )


def build_ansatz(config: ExperimentConfig) -> AnsatzCircuit:
    return builtin_ansatz(config.ansatz, config.ansatz_options)


def _reference_point(config: ExperimentConfig, n_params: int) -> np.ndarray:
    if config.reference_params is None:
        return np.zeros(n_params)
    values = np.loadtxt(config.reference_params, dtype=float).ravel()
    if values.shape != (n_params,):
        raise ValueError(
            f"reference file holds {values.size} values but the ansatz has {n_params} parameters"
        )
    return values


def initial_parameters(config: ExperimentConfig, n_params: int, trial_seed: int) -> np.ndarray:
    rng = np.random.default_rng(trial_seed)
    if config.init == "zeros":
        return np.zeros(n_params)
    if config.init == "random":
        return rng.uniform(0.0, 2.0 * math.pi, n_params)
    reference = _reference_point(config, n_params)
    return reference + rng.uniform(-config.perturb_delta, config.perturb_delta, n_params)


def _exact_ground_energy(hamiltonian: Hamiltonian) -> Optional[float]:
    if hamiltonian.n_qubits > MAX_DENSE_QUBITS:
        return None
    return ground_state(hamiltonian).energy


def run(config: ExperimentConfig, quiet: bool = False) -> list[TrajectoryRecord]:
    """One trajectory; writes JSONL when an output path is set."""
    hamiltonian = load_hamiltonian(config.hamiltonian)
    ansatz = build_ansatz(config)
    theta0 = initial_parameters(config, ansatz.n_params, config.seed)
    records = evolve(ansatz, hamiltonian, theta0, config.evolution_config(config.seed))
    if config.out:
        write_trajectory(records, config.out)
    if not quiet:
        final = records[-1].energy
        print(f"final energy: {final:.10f}")
        reference = _exact_ground_energy(hamiltonian)
        if reference is not None:
            print(f"exact ground energy: {reference:.10f}")
            print(f"gap to exact: {final - reference:.3e}")
        if config.out:
            print(f"trajectory written to {config.out}")
    return records


def _convergence(
    energies: np.ndarray, reference: float, tolerance: float
) -> Optional[int]:
    within = np.nonzero(energies - reference <= tolerance)[0]
    return int(within[0]) if within.size else None


def batch(
    config: ExperimentConfig,
    initial_params: Optional[Sequence[np.ndarray]] = None,
    quiet: bool = False,
) -> tuple[ConvergenceStats, list[TrialSummary]]:
    """Independent trials with seeds seed+0 .. seed+trials-1.

    ``initial_params`` overrides the init mode with explicit start points
    (used for grid scans); its length then fixes the trial count.
    """
    hamiltonian = load_hamiltonian(config.hamiltonian)
    ansatz = build_ansatz(config)
    reference = _exact_ground_energy(hamiltonian)
    if reference is None:
        raise ValueError(
            "batch convergence statistics need the exact ground energy; "
            f"{hamiltonian.n_qubits} qubits exceeds the dense-oracle limit"
        )
    n_trials = config.trials if initial_params is None else len(initial_params)
    all_energies = np.empty((n_trials, config.iterations + 1))
    summaries: list[TrialSummary] = []
    converged_at: list[Optional[int]] = []
    for trial in range(n_trials):
        trial_seed = config.seed + trial
        if initial_params is None:
            theta0 = initial_parameters(config, ansatz.n_params, trial_seed)
        else:
            theta0 = np.asarray(initial_params[trial], dtype=float)
        records = evolve(ansatz, hamiltonian, theta0, config.evolution_config(trial_seed))
        energies = np.array([r.energy for r in records])
        all_energies[trial] = energies
        hit = _convergence(energies, reference, config.tolerance)
        converged_at.append(hit)
        summaries.append(
            TrialSummary(
                trial=trial,
                seed=trial_seed,
                converged_iteration=hit,
                final_energy=float(energies[-1]),
                final_residual=float(energies[-1] - reference),
            )
        )
    iterations = config.iterations + 1
    fraction = np.empty(iterations)
    mean_residual = np.empty(iterations)
    hits = np.array([iterations if h is None else h for h in converged_at])
    for k in range(iterations):
        mask = hits <= k
        fraction[k] = mask.mean()
        mean_residual[k] = (
            float(np.mean(all_energies[mask, k] - reference)) if mask.any() else math.nan
        )
    stats = ConvergenceStats(fraction=fraction, mean_residual=mean_residual)
    if config.out:
        write_batch_stats(stats, config.out)
        _write_trial_summaries(summaries, _trials_path(config.out))
    if not quiet:
        print(f"trials: {n_trials}")
        print(f"final converged fraction: {stats.final_fraction:.4f}")
        if not math.isnan(stats.mean_residual[-1]):
            print(f"mean residual of converged trials: {stats.mean_residual[-1]:.3e}")
        if config.out:
            print(f"stats written to {config.out}")
    return stats, summaries


def _trials_path(out: Union[str, Path]) -> Path:
    return Path(out).with_suffix(".trials.jsonl")


def _write_trial_summaries(summaries: Sequence[TrialSummary], path: Path):
    import json

    with open(path, "w") as handle:
        for summary in summaries:
            handle.write(
                json.dumps(
                    {
                        "trial": summary.trial,
                        "seed": summary.seed,
                        "converged_iteration": summary.converged_iteration,
                        "final_energy": summary.final_energy,
                        "final_residual": summary.final_residual,
                    }
                )
                + "\n"
            )


def write_batch_stats(stats: ConvergenceStats, destination: Union[str, Path]):
    with open(destination, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "converged_fraction", "mean_residual"])
        for k in range(stats.fraction.shape[0]):
            writer.writerow([k, repr(float(stats.fraction[k])), repr(float(stats.mean_residual[k]))])


def read_batch_stats(source: Union[str, Path]) -> ConvergenceStats:
    with open(source, newline="") as handle:
        rows = list(csv.DictReader(handle))
    fraction = np.array([float(row["converged_fraction"]) for row in rows])
    mean_residual = np.array([float(row["mean_residual"]) for row in rows])
    return ConvergenceStats(fraction=fraction, mean_residual=mean_residual)


def stable_stepsize_search(
    config: ExperimentConfig, candidates: Sequence[float], quiet: bool = False
) -> float:
    """Largest candidate timestep with monotone energy over the probe runs.

    Probes are noise-free, one per trial seed, each checked for non-increasing
    energy (within a 1e-9 slack) across the first 200 iterations.
    """
    if not candidates:
        raise ValueError("candidate list must not be empty")
    hamiltonian = load_hamiltonian(config.hamiltonian)
    ansatz = build_ansatz(config)
    for dt in sorted(set(candidates), reverse=True):
        stable = True
        for trial in range(config.trials):
            trial_seed = config.seed + trial
            theta0 = initial_parameters(config, ansatz.n_params, trial_seed)
            probe = EvolutionConfig(
                method=config.method,
                dt=dt,
                n_iterations=PROBE_ITERATIONS,
                solver=config.solver_spec(),
                noise=None,
                record_fidelity=False,
                seed=trial_seed,
            )
            try:
                records = evolve(ansatz, hamiltonian, theta0, probe)
            except EvolutionError:
                stable = False
                break
            energies = np.array([r.energy for r in records])
            if np.any(np.diff(energies) > MONOTONE_SLACK):
                stable = False
                break
        if stable:
            if not quiet:
                print(f"stable stepsize: {dt!r}")
            return dt
    raise ValueError(
        "no candidate stepsize kept the energy non-increasing over "
        f"{PROBE_ITERATIONS} iterations: {sorted(set(candidates), reverse=True)}"
    )
