"""Command-line front end.

    abent scenario singlet | abent analyze
    abent analyze --file problem.json --direction ba
    abent sweep --count 1000 --dim 4 --dim 6 --seed 7

Every verb writes one JSON document to stdout. Failures are reported as a
JSON object on stderr with exit status 2 (invalid input or validation
failure) or 3 (a sweep found a counterexample).
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .entanglement import analyze, two_qubit_renormalized_concurrence, two_qubit_standard_concurrence
from .errors import AbentError, DegenerateJointBasis, InvalidInput, UnknownScenario
from .hilbert import (
    DEFAULT_TOL,
    SIGMA_Z,
    I2,
    Tolerances,
    decode_matrix,
    decode_vector,
    encode_matrix,
    encode_vector,
    normalize,
)
from .qprob import NonCommutingCovarianceWarning, conditional_table, ftp_decomposition, sequential_jpd
from .spectral import Observable
from .sweep import run_sweep

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_COUNTEREXAMPLE = 3

SPEC_KEYS = {"state", "observable_a", "observable_b", "tolerances", "direction", "scenario"}


# -- problem specs ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProblemSpec:
    state: np.ndarray
    observable_a: Observable
    observable_b: Observable
    tolerances: Tolerances = DEFAULT_TOL
    direction: str = "ab"


def _parse_direction(value) -> str:
    if not isinstance(value, str) or value.lower() not in ("ab", "ba"):
        raise InvalidInput(f"direction must be 'AB' or 'BA', got {value!r}")
    return value.lower()


def _parse_tolerances(data, base: Tolerances) -> Tolerances:
    if data is None:
        return base
    if not isinstance(data, dict):
        raise InvalidInput("tolerances must be a JSON object")
    unknown = set(data) - set(base.to_dict())
    if unknown:
        raise InvalidInput(f"unknown tolerance fields: {sorted(unknown)}")
    try:
        return base.replace(**{k: float(v) for k, v in data.items()})
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad tolerances: {exc}") from exc


def _parse_observable(data, tol: Tolerances) -> Observable:
    if isinstance(data, dict):
        if set(data) != {"values", "projectors"}:
            raise InvalidInput("an observable object needs exactly 'values' and 'projectors'")
        values, projectors = data["values"], data["projectors"]
        if not isinstance(values, list) or not isinstance(projectors, list):
            raise InvalidInput("'values' and 'projectors' must be arrays")
        return Observable.from_spectrum(values, [decode_matrix(p) for p in projectors], tol)
    return Observable.from_matrix(decode_matrix(data), tol)


def parse_problem(data: dict, tol: Tolerances = DEFAULT_TOL) -> ProblemSpec:
    """Build a ``ProblemSpec`` from decoded JSON, normalizing the state."""
    if not isinstance(data, dict):
        raise InvalidInput("problem spec must be a JSON object")
    missing = {"state", "observable_a", "observable_b"} - set(data)
    if missing:
        raise InvalidInput(f"problem spec is missing {sorted(missing)}")
    unknown = set(data) - SPEC_KEYS
    if unknown:
        raise InvalidInput(f"unknown problem spec fields: {sorted(unknown)}")
    tol = _parse_tolerances(data.get("tolerances"), tol)
    return ProblemSpec(
        state=normalize(decode_vector(data["state"]), tol),
        observable_a=_parse_observable(data["observable_a"], tol),
        observable_b=_parse_observable(data["observable_b"], tol),
        tolerances=tol,
        direction=_parse_direction(data.get("direction", "ab")),
    )


def _two_qubit_block(spec_a, spec_b, psi, tol, report) -> dict | None:
    if psi.shape[0] != 4 or not (report.commuting and report.dichotomous):
        return None
    try:
        return {
            "standard_concurrence": two_qubit_standard_concurrence(psi, spec_a, spec_b, tol),
            "renormalized_concurrence": two_qubit_renormalized_concurrence(psi, spec_a, spec_b, tol),
        }
    except DegenerateJointBasis:
        return None


def analyze_problem(spec: ProblemSpec) -> dict:
    """The full report for a problem; with direction ``ba`` the roles of A and B are swapped."""
    a, b = spec.observable_a, spec.observable_b
    if spec.direction == "ba":
        a, b = b, a
    psi, tol = spec.state, spec.tolerances
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonCommutingCovarianceWarning)
        report = analyze(a, b, psi, tol)
    out = report.to_dict()
    out["dim"] = int(psi.shape[0])
    out["direction"] = spec.direction
    out["a_values"] = list(a.values)
    out["b_values"] = list(b.values)
    out["tolerances"] = tol.to_dict()
    out["conditional_table"] = conditional_table(a, b, psi, tol).to_dict()
    out["jpd"] = {d: sequential_jpd(a, b, psi, d, tol).to_dict() for d in ("ab", "ba")}
    out["ftp"] = [ftp_decomposition(a, b, beta, psi, tol).to_dict() for beta in b.values]
    out["two_qubit"] = _two_qubit_block(a, b, psi, tol, report)
    return out


# -- scenarios ----------------------------------------------------------------------

def _local(x, y) -> np.ndarray:
    return np.kron(x, y)


def _singlet():
    psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return psi, _local(SIGMA_Z, I2), _local(I2, SIGMA_Z)


def _bell_phi_plus():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return psi, _local(SIGMA_Z, I2), _local(I2, SIGMA_Z)


def _rotated_singlet():
    u = np.array([[-1, 1], [1, 1]]) / np.sqrt(2)
    a_u = u @ SIGMA_Z @ u.conj().T
    psi, a, _ = _singlet()
    return psi, a, _local(I2, a_u)


def _phase_entangled():
    psi = np.array([1, 1, -1, 1]) / 2
    return psi, _local(SIGMA_Z, I2), _local(I2, SIGMA_Z)


def _dim3_degenerate():
    psi = np.ones(3) / np.sqrt(3)
    return psi, np.diag([1.0, 1.0, -1.0]), np.diag([1.0, -1.0, -1.0])


SCENARIOS: dict[str, tuple[str, Callable]] = {
    "singlet": ("singlet (|+-> - |-+>)/sqrt2 with A = sz x I, B = I x sz", _singlet),
    "bell-phi-plus": ("(|++> + |-->)/sqrt2 with A = sz x I, B = I x sz", _bell_phi_plus),
    "rotated-singlet": ("singlet with B = I x u sz u^dag, u = [[-1,1],[1,1]]/sqrt2", _rotated_singlet),
    "phase-entangled": ("(|++> + |+-> - |-+> + |-->)/2 with A = sz x I, B = I x sz", _phase_entangled),
    "dim3-degenerate": ("A = diag(1,1,-1), B = diag(1,-1,-1), psi = (1,1,1)/sqrt3", _dim3_degenerate),
}


def scenario_spec(name: str) -> dict:
    """The JSON problem spec of a named scenario."""
    if name not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    psi, a, b = SCENARIOS[name][1]()
    return {
        "scenario": name,
        "state": encode_vector(psi),
        "observable_a": encode_matrix(a),
        "observable_b": encode_matrix(b),
        "direction": "AB",
    }


# -- commands -----------------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)


def _read_json(path: str | None):
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from exc


def _base_tolerances(args) -> Tolerances:
    if args.tolerance_p is None:
        return DEFAULT_TOL
    try:
        return DEFAULT_TOL.replace(p=args.tolerance_p)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


def cmd_analyze(args) -> tuple[dict, int]:
    spec = parse_problem(_read_json(args.file), _base_tolerances(args))
    if args.direction is not None:
        spec = ProblemSpec(spec.state, spec.observable_a, spec.observable_b, spec.tolerances, args.direction)
    return analyze_problem(spec), EXIT_OK


def cmd_sweep(args) -> tuple[dict, int]:
    if args.count < 1:
        raise InvalidInput("--count must be at least 1")
    dims = args.dim or [4]
    if any(not 2 <= d <= 16 for d in dims):
        raise InvalidInput("--dim must lie in [2, 16]")
    result = run_sweep(args.count, dims, args.seed, _base_tolerances(args))
    return result.to_dict(), EXIT_OK if result.ok else EXIT_COUNTEREXAMPLE


def cmd_scenario(args) -> tuple[dict, int]:
    if args.list:
        return {name: desc for name, (desc, _) in SCENARIOS.items()}, EXIT_OK
    if args.name is None:
        raise InvalidInput("a scenario name is required")
    return scenario_spec(args.name), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abent", description="Conditional-probability entanglement of observable pairs")
    parser.add_argument("--tolerance-p", type=float, default=None, help="probability margin (default 1e-9)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a problem spec read from stdin or --file")
    p.add_argument("--file", default=None, help="JSON problem spec (default: stdin)")
    p.add_argument("--direction", type=str.lower, choices=("ab", "ba"), default=None,
                   help="which observable plays the role of A")
    p.add_argument("--tolerance-p", type=float, default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="randomized cross-checks of the entanglement criteria")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--dim", type=int, action="append", help="Hilbert-space dimension; repeat to cycle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance-p", type=float, default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scenario", help="emit the problem spec of a worked example")
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--list", action="store_true", help="list the available scenarios")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, status = args.func(args)
    except AbentError as exc:
        sys.stderr.write(_dump({"error": exc.code, "type": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_INVALID
    sys.stdout.write(_dump(payload) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
