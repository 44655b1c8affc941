"""Randomized cross-checks of the equivalences between the different entanglement criteria.

Each sample draws a commuting ±1-valued pair (A, B) and a state that is
generic, amplitude-factorisable or supported on two EPR cells, and evaluates every
equivalence that should hold for it. Samples whose decision statistics fall in
the gray zone are counted as ``marginal`` and not judged.
"""
from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import classical
from .entanglement import (
    analyze,
    concurrence_C,
    concurrence_M,
    conjugate_observable,
    covariance_identity,
    embed_local,
    is_ab_entangled,
    is_ab_independent,
    outcome_depends,
    two_qubit_standard_concurrence,
)
from .errors import ConditioningUndefined
from .hilbert import DEFAULT_TOL, Tolerances, encode_matrix, encode_vector, frozen
from .qprob import NonCommutingCovarianceWarning, ftp_decomposition, sequential_jpd
from .sampling import (
    observable_in_basis,
    random_dichotomous_pair,
    random_epr_state,
    random_factorisable_state,
    random_local_dichotomous,
    random_product_state,
    random_signs,
    random_state,
    random_unitary,
)

IDENTITY_TOL = 1e-8
INVARIANCE_TOL = 1e-8
ORACLE_TOL = 1e-8


@dataclass
class CheckTally:
    passed: int = 0
    failed: int = 0
    marginal: int = 0
    skipped: int = 0

    def to_dict(self) -> dict:
        return {"passed": self.passed, "failed": self.failed, "marginal": self.marginal, "skipped": self.skipped}


@dataclass
class SweepResult:
    count: int
    dims: tuple[int, ...]
    seed: int
    checks: dict = field(default_factory=lambda: defaultdict(CheckTally))
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.checks.values())

    def record(self, name: str, ok: bool, sample: dict | None = None, marginal: bool = False) -> None:
        tally = self.checks[name]
        if marginal:
            tally.marginal += 1
        elif ok:
            tally.passed += 1
        else:
            tally.failed += 1
            self.counterexamples.append({"check": name, **(sample or {})})

    def skip(self, name: str) -> None:
        self.checks[name].skipped += 1

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "dims": list(self.dims),
            "seed": self.seed,
            "ok": self.ok,
            "checks": {k: self.checks[k].to_dict() for k in sorted(self.checks)},
            "counterexamples": self.counterexamples,
        }


def _factor_dims(dim: int) -> tuple[int, int] | None:
    for m in range(2, int(np.sqrt(dim)) + 1):
        if dim % m == 0:
            return m, dim // m
    return None


def _describe(index, dim, a, b, psi) -> dict:
    return {"sample": index, "dim": dim, "state": encode_vector(psi),
            "observable_a": encode_matrix(a.op), "observable_b": encode_matrix(b.op)}


def check_commuting_sample(result: SweepResult, index: int, dim: int, rng, tol: Tolerances) -> None:
    a, b = random_dichotomous_pair(dim, rng)
    kind = rng.choice(["generic", "factorisable", "epr"], p=[0.4, 0.4, 0.2])
    psi = None
    if kind == "epr":
        psi = random_epr_state(a, b, rng)
    if psi is None:
        psi = random_factorisable_state(a, b, rng) if kind != "generic" else random_state(dim, rng)
    sample = _describe(index, dim, a, b, psi)
    report = analyze(a, b, psi, tol)
    marginal = report.marginal
    ent = report.ab_entangled

    result.record("factorization_iff_disentangled", ent == (report.factorization is None), sample, marginal)
    result.record("covariance_iff_entangled", ent == (abs(report.covariance) > tol.p), sample, marginal)
    identity = covariance_identity(a, b, psi, tol)
    result.record("covariance_identity", abs(report.covariance - identity) <= IDENTITY_TOL, sample)

    plus = outcome_depends(a, b, b.values[0], a.values[0], a.values[1], psi, tol)
    minus = outcome_depends(a, b, b.values[1], a.values[0], a.values[1], psi, tol)
    gray = (plus is not None and plus.marginal) or (minus is not None and minus.marginal)
    result.record("dependence_outcome_symmetric", (plus is None) == (minus is None), sample, marginal or gray)

    if report.M_AB is None:
        result.skip("maximal_iff_epr")
    else:
        near = abs(report.M_AB - 2.0) <= 10 * tol.p and abs(report.M_AB - 2.0) > tol.p / 10
        result.record("maximal_iff_epr", (report.M_AB >= 2.0 - tol.p) == (report.epr is not None), sample, near)

    indep = is_ab_independent(a, b, psi, tol)
    result.record("independent_iff_disentangled", indep == (not ent), sample, marginal)

    space, xi_a, xi_b = classical.from_commuting_pair(a, b, psi, tol)
    result.record("classical_independence", classical.are_independent(xi_a, xi_b, space, tol) == indep,
                  sample, marginal)
    cov_c = classical.covariance_classical(xi_a, xi_b, space)
    result.record("classical_covariance", abs(cov_c - report.covariance) <= ORACLE_TOL, sample)
    ftp_ok = True
    for beta in b.values:
        lhs, rhs = classical.classical_ftp_check(xi_a, xi_b, space, beta, tol)
        q = ftp_decomposition(a, b, beta, psi, tol)
        ftp_ok &= abs(lhs - rhs) <= ORACLE_TOL and abs(q.total - lhs) <= ORACLE_TOL
        ftp_ok &= abs(q.interference) <= tol.p
    result.record("classical_total_probability", ftp_ok, sample)
    jpd_ab = sequential_jpd(a, b, psi, "ab", tol).entries
    jpd_ba = sequential_jpd(a, b, psi, "ba", tol).entries
    result.record("commuting_jpd_symmetry", bool(np.max(np.abs(jpd_ab - jpd_ba)) <= tol.p), sample)

    u = random_unitary(dim, rng)
    au, bu = conjugate_observable(a, u, tol), conjugate_observable(b, u, tol)
    psi_u = frozen(u @ psi)
    same = is_ab_entangled(au, bu, psi_u, tol)[0] == ent
    same &= abs(concurrence_C(au, bu, psi_u, tol) - report.C_AB) <= INVARIANCE_TOL
    if report.M_AB is not None:
        try:
            same &= abs(concurrence_M(au, bu, psi_u, tol) - report.M_AB) <= INVARIANCE_TOL
        except ConditioningUndefined:
            same = False
    result.record("unitary_invariance", same, sample, marginal)

    if dim == 4 and all(np.trace(ea @ eb).real > 0.5 for ea in a.projectors for eb in b.projectors):
        if ent:
            conc = two_qubit_standard_concurrence(psi, a, b, tol)
            result.record("entangled_has_concurrence", conc > tol.p, sample, marginal)
        else:
            result.skip("entangled_has_concurrence")


def check_product_sample(result: SweepResult, index: int, dim: int, rng, tol: Tolerances) -> None:
    dims = _factor_dims(dim)
    if dims is None:
        result.skip("product_states_disentangled")
        return
    la, lb = random_local_dichotomous(dims[0], rng), random_local_dichotomous(dims[1], rng)
    a, b = embed_local(la, lb, tol)
    psi = random_product_state(dims, rng)
    ent, _ = is_ab_entangled(a, b, psi, tol)
    result.record("product_states_disentangled", not ent, _describe(index, dim, a, b, psi))


def check_ftp_sample(result: SweepResult, index: int, dim: int, rng, tol: Tolerances) -> None:
    """Quantum total probability with a possibly incompatible pair."""
    a = observable_in_basis(random_unitary(dim, rng), random_signs(dim, rng))
    b = observable_in_basis(random_unitary(dim, rng), random_signs(dim, rng))
    psi = random_state(dim, rng)
    ok = True
    for beta in b.values:
        rep = ftp_decomposition(a, b, beta, psi, tol)
        ok &= abs(rep.total - rep.classical_sum - rep.interference) <= tol.p
    result.record("ftp_identity", ok, _describe(index, dim, a, b, psi))


def run_sweep(count: int, dims, seed: int, tol: Tolerances = DEFAULT_TOL) -> SweepResult:
    """Run ``count`` samples cycling through ``dims``; deterministic in ``seed``."""
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    result = SweepResult(count, dims, seed)
    children = np.random.SeedSequence(seed).spawn(count)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonCommutingCovarianceWarning)
        for k, child in enumerate(children):
            rng = np.random.default_rng(child)
            dim = dims[k % len(dims)]
            check_commuting_sample(result, k, dim, rng, tol)
            check_product_sample(result, k, dim, rng, tol)
            check_ftp_sample(result, k, dim, rng, tol)
    return result
