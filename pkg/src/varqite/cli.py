"""Command-line experiment runner.

Verbs: ``run`` (one trajectory), ``batch`` (random-start trials with
convergence statistics), ``stepsize`` (largest stable timestep from a
candidate list), ``oracle`` (exact ground energy/state). Options may also be
given in a TOML config file via ``--config``; explicit flags win over file
values.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .engine import EvolutionError
from .exact import MAX_DENSE_QUBITS, ground_state
from .harness import (
    DEFAULT_PERTURB_DELTA,
    ExperimentConfig,
    batch,
    load_hamiltonian,
    run,
    stable_stepsize_search,
)
from .pauli import HamiltonianFormatError

_METHODS = {"imag": "imaginary-time", "gd": "gradient-descent"}
_SOLVERS = {"tikhonov": "tikhonov", "tsvd": "tsvd", "pinv": "eigen-pinv"}

# ansatz options arrive as strings; initial_bits must stay one
_ANSATZ_OPT_TYPES = {"n_qubits": int, "depth": int, "initial_bits": str}


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="TOML config file; flags override its values")
    parser.add_argument("--hamiltonian", help="builtin:<name> or file:<path>")
    parser.add_argument("--ansatz", help="built-in ansatz name")
    parser.add_argument(
        "--ansatz-opt",
        action="append",
        default=None,
        metavar="K=V",
        help="ansatz option, repeatable (e.g. n_qubits=8)",
    )
    parser.add_argument("--method", choices=sorted(_METHODS))
    parser.add_argument("--dt", type=float, help="evolution timestep")
    parser.add_argument("--iters", type=int, help="number of iterations")
    parser.add_argument("--solver", choices=sorted(_SOLVERS))
    parser.add_argument("--lambda-min", type=float, dest="lambda_min")
    parser.add_argument("--lambda-max", type=float, dest="lambda_max")
    parser.add_argument("--init", help="zeros | random | perturb:<delta>")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--tol", type=float, help="convergence tolerance (Hartree)")
    parser.add_argument("--shots-a", type=int, dest="shots_a")
    parser.add_argument("--shots-c", type=int, dest="shots_c")
    parser.add_argument("--gate-error", type=float, dest="gate_error")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--record-fidelity", action="store_true", default=None)
    parser.add_argument("--out", help="output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varqite", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)
    _add_common(sub.add_parser("run", help="run one trajectory, write JSONL"))
    _add_common(sub.add_parser("batch", help="run independent trials, write stats CSV"))
    stepsize = sub.add_parser("stepsize", help="search the largest stable timestep")
    _add_common(stepsize)
    stepsize.add_argument(
        "--candidates", help="comma-separated candidate timesteps, e.g. 0.05,0.1,0.2"
    )
    oracle = sub.add_parser("oracle", help="print the exact ground energy and state")
    oracle.add_argument("--config", help="TOML config file")
    oracle.add_argument("--hamiltonian", help="builtin:<name> or file:<path>")
    oracle.add_argument("--out", help="write the JSON report here instead of stdout")
    return parser


def _parse_ansatz_opts(pairs) -> dict:
    options = {}
    for pair in pairs or ():
        key, sep, value = str(pair).partition("=")
        if not sep:
            raise ValueError(f"ansatz option must look like key=value, got {pair!r}")
        key = key.strip()
        converter = _ANSATZ_OPT_TYPES.get(key)
        if converter is not None:
            options[key] = converter(value)
        else:
            options[key] = value
    return options


def _parse_init(value: str) -> tuple[str, Optional[float]]:
    if value in ("zeros", "random"):
        return value, None
    if value == "perturb":
        return "perturb", None
    if value.startswith("perturb:"):
        return "perturb", float(value[len("perturb:"):])
    raise ValueError(f"unknown init mode {value!r}")


def _load_file_values(path: Optional[str]) -> dict:
    if not path:
        return {}
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def _merged(args: argparse.Namespace) -> dict:
    values = _load_file_values(getattr(args, "config", None))
    for key in (
        "hamiltonian",
        "ansatz",
        "method",
        "dt",
        "iters",
        "solver",
        "lambda_min",
        "lambda_max",
        "init",
        "trials",
        "tol",
        "shots_a",
        "shots_c",
        "gate_error",
        "seed",
        "record_fidelity",
        "out",
        "candidates",
    ):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    opt_pairs = getattr(args, "ansatz_opt", None)
    if opt_pairs is not None:
        values["ansatz_opt"] = _parse_ansatz_opts(opt_pairs)
    elif "ansatz_opt" in values and not isinstance(values["ansatz_opt"], dict):
        raise ValueError("ansatz_opt in a config file must be a table")
    return values


def _experiment_config(values: dict) -> ExperimentConfig:
    if "hamiltonian" not in values:
        raise ValueError("a Hamiltonian source is required (--hamiltonian)")
    if "ansatz" not in values:
        raise ValueError("an ansatz name is required (--ansatz)")
    kwargs = {
        "hamiltonian": values["hamiltonian"],
        "ansatz": values["ansatz"],
        "ansatz_options": dict(values.get("ansatz_opt", {})),
    }
    if "method" in values:
        kwargs["method"] = _METHODS.get(values["method"], values["method"])
    if "solver" in values:
        kwargs["solver"] = _SOLVERS.get(values["solver"], values["solver"])
    if "init" in values:
        mode, delta = _parse_init(str(values["init"]))
        kwargs["init"] = mode
        kwargs["perturb_delta"] = delta if delta is not None else DEFAULT_PERTURB_DELTA
    direct = {
        "dt": "dt",
        "iters": "iterations",
        "lambda_min": "lambda_min",
        "lambda_max": "lambda_max",
        "tsvd_cutoff": "tsvd_cutoff",
        "trials": "trials",
        "tol": "tolerance",
        "shots_a": "shots_a",
        "shots_c": "shots_c",
        "gate_error": "gate_error",
        "seed": "seed",
        "record_fidelity": "record_fidelity",
        "reference_params": "reference_params",
        "out": "out",
    }
    for key, attr in direct.items():
        if key in values:
            kwargs[attr] = values[key]
    return ExperimentConfig(**kwargs)


def _parse_candidates(raw) -> list[float]:
    if raw is None:
        raise ValueError("stepsize search needs --candidates")
    if isinstance(raw, (list, tuple)):
        return [float(v) for v in raw]
    return [float(token) for token in str(raw).split(",") if token.strip()]


def _oracle_report(values: dict) -> dict:
    if "hamiltonian" not in values:
        raise ValueError("a Hamiltonian source is required (--hamiltonian)")
    hamiltonian = load_hamiltonian(values["hamiltonian"])
    if hamiltonian.n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(
            f"{hamiltonian.n_qubits} qubits exceeds the dense-oracle limit of {MAX_DENSE_QUBITS}"
        )
    result = ground_state(hamiltonian)
    return {
        "energy": result.energy,
        "degenerate": result.degenerate,
        "n_qubits": hamiltonian.n_qubits,
        "state": [[amp.real, amp.imag] for amp in result.state.amplitudes],
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = _merged(args)
        if args.verb == "run":
            run(_experiment_config(values))
        elif args.verb == "batch":
            batch(_experiment_config(values))
        elif args.verb == "stepsize":
            candidates = _parse_candidates(values.pop("candidates", None))
            stable_stepsize_search(_experiment_config(values), candidates)
        elif args.verb == "oracle":
            report = _oracle_report(values)
            text = json.dumps(report, indent=2)
            if values.get("out"):
                with open(values["out"], "w") as handle:
                    handle.write(text + "\n")
            else:
                print(text)
    except (ValueError, OSError, HamiltonianFormatError, EvolutionError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
