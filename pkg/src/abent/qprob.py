"""Quantum probability on pure states: Born rule, Lüders conditioning, sequential JPDs."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConditioningUndefined,
    DimensionMismatch,
    InternalConsistencyError,
    ZeroProbabilityOutcome,
)
from .hilbert import DEFAULT_TOL, Tolerances, as_operator, check_state, commutes, frozen
from .spectral import Observable, as_observable


class NonCommutingCovarianceWarning(UserWarning):
    """Covariance requested for observables that do not commute."""


def clamp_probability(p: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Clamp rounding residue into [0, 1]; anything further out is a bug."""
    if p < -tol.p or p > 1.0 + tol.p:
        raise InternalConsistencyError(f"probability {p!r} outside [0, 1]")
    return min(max(float(p), 0.0), 1.0)


def _state_for(psi, *observables: Observable, tol: Tolerances) -> np.ndarray:
    psi = check_state(psi, tol)
    for obs in observables:
        if obs.dim != psi.shape[0]:
            raise DimensionMismatch(f"observable of dim {obs.dim} vs state of dim {psi.shape[0]}")
    return psi


def born_probability(e, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """``‖Eψ‖²`` for a projector ``E``."""
    e = as_operator(e)
    psi = check_state(psi, tol)
    if e.shape[0] != psi.shape[0]:
        raise DimensionMismatch(f"projector of dim {e.shape[0]} vs state of dim {psi.shape[0]}")
    return clamp_probability(np.linalg.norm(e @ psi) ** 2, tol)


def luders_update(e, psi, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Post-measurement state ``Eψ / ‖Eψ‖``."""
    e = as_operator(e)
    psi = check_state(psi, tol)
    if e.shape[0] != psi.shape[0]:
        raise DimensionMismatch(f"projector of dim {e.shape[0]} vs state of dim {psi.shape[0]}")
    phi = e @ psi
    n2 = np.linalg.norm(phi) ** 2
    if n2 <= tol.zero:
        raise ZeroProbabilityOutcome(f"outcome has probability {n2:.3e}")
    return frozen(phi / np.sqrt(n2))


def conditional_probability(b, beta, a, alpha, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """``P(B=β | A=α; ψ) = ‖E_B(β)E_A(α)ψ‖² / ‖E_A(α)ψ‖²``."""
    a, b = as_observable(a, tol), as_observable(b, tol)
    psi = _state_for(psi, a, b, tol=tol)
    ea_psi = a.projector(alpha, tol) @ psi
    marginal = np.linalg.norm(ea_psi) ** 2
    if marginal <= tol.zero:
        raise ConditioningUndefined(f"P(A={alpha}) = {marginal:.3e} is zero")
    joint = np.linalg.norm(b.projector(beta, tol) @ ea_psi) ** 2
    return clamp_probability(joint / marginal, tol)


def _sequential_matrix(first: Observable, second: Observable, psi) -> np.ndarray:
    """``out[i, j] = ‖E_second(j) E_first(i) ψ‖²``."""
    out = np.empty((len(first.values), len(second.values)))
    for i, e1 in enumerate(first.projectors):
        phi = e1 @ psi
        for j, e2 in enumerate(second.projectors):
            out[i, j] = np.linalg.norm(e2 @ phi) ** 2
    return out


def marginals(a: Observable, psi, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    psi = _state_for(psi, a, tol=tol)
    return np.array([clamp_probability(np.linalg.norm(e @ psi) ** 2, tol) for e in a.projectors])


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """``probabilities[j, i] = P(B=b_values[j] | A=a_values[i])``.

    Columns whose conditioning outcome has zero probability are flagged in
    ``defined`` and hold NaN.
    """

    a_values: tuple[float, ...]
    b_values: tuple[float, ...]
    marginals: np.ndarray
    probabilities: np.ndarray
    defined: np.ndarray

    def entry(self, beta: float, alpha: float) -> float | None:
        i, j = self.a_values.index(alpha), self.b_values.index(beta)
        return float(self.probabilities[j, i]) if self.defined[i] else None

    def to_dict(self) -> dict:
        columns = []
        for i, alpha in enumerate(self.a_values):
            col = {"alpha": alpha, "marginal": float(self.marginals[i]), "defined": bool(self.defined[i])}
            col["conditionals"] = (
                [{"beta": beta, "probability": float(self.probabilities[j, i])} for j, beta in enumerate(self.b_values)]
                if self.defined[i]
                else None
            )
            columns.append(col)
        return {"columns": columns}


def conditional_table(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> ConditionalTable:
    a, b = as_observable(a, tol), as_observable(b, tol)
    psi = _state_for(psi, a, b, tol=tol)
    joint = _sequential_matrix(a, b, psi)
    marg = np.array([clamp_probability(np.linalg.norm(e @ psi) ** 2, tol) for e in a.projectors])
    defined = marg > tol.zero
    probs = np.full((len(b.values), len(a.values)), np.nan)
    for i in np.flatnonzero(defined):
        probs[:, i] = [clamp_probability(x, tol) for x in joint[i] / marg[i]]
        if abs(probs[:, i].sum() - 1.0) > tol.p:
            raise InternalConsistencyError(f"conditional column for A={a.values[i]} sums to {probs[:, i].sum()!r}")
    return ConditionalTable(a.values, b.values, marg, probs, defined)


@dataclass(frozen=True, eq=False)
class JpdTable:
    """Sequential joint distribution, always indexed ``entries[i_alpha, j_beta]``.

    For ``direction == "ab"`` A is measured first, for ``"ba"`` B is.
    """

    direction: str
    a_values: tuple[float, ...]
    b_values: tuple[float, ...]
    entries: np.ndarray

    def entry(self, alpha: float, beta: float) -> float:
        return float(self.entries[self.a_values.index(alpha), self.b_values.index(beta)])

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "entries": [
                {"alpha": a, "beta": b, "probability": float(self.entries[i, j])}
                for i, a in enumerate(self.a_values)
                for j, b in enumerate(self.b_values)
            ],
        }


def sequential_jpd(a, b, psi, direction: str = "ab", tol: Tolerances = DEFAULT_TOL) -> JpdTable:
    """``P_AB(α, β) = ‖E_B(β)E_A(α)ψ‖²``, or ``‖E_A(α)E_B(β)ψ‖²`` when ``direction="ba"``."""
    a, b = as_observable(a, tol), as_observable(b, tol)
    psi = _state_for(psi, a, b, tol=tol)
    direction = direction.lower()
    if direction == "ab":
        entries = _sequential_matrix(a, b, psi)
    elif direction == "ba":
        entries = _sequential_matrix(b, a, psi).T
    else:
        raise ValueError(f"direction must be 'ab' or 'ba', got {direction!r}")
    entries = np.vectorize(lambda x: clamp_probability(x, tol))(entries)
    if abs(entries.sum() - 1.0) > tol.p:
        raise InternalConsistencyError(f"sequential JPD sums to {entries.sum()!r}")
    return JpdTable(direction, a.values, b.values, entries)


@dataclass(frozen=True)
class FtpReport:
    beta: float
    total: float
    classical_sum: float
    interference: float

    def to_dict(self) -> dict:
        return {"beta": self.beta, "total": self.total, "classical_sum": self.classical_sum,
                "interference": self.interference}


def interference_term(a: Observable, eb: np.ndarray, psi) -> complex:
    """``Σ_{α≠α'} ⟨ψ|E_A(α) E_B(β) E_A(α')|ψ⟩`` by explicit double sum."""
    parts = [e @ psi for e in a.projectors]
    total = 0j
    for i, pi in enumerate(parts):
        for j, pj in enumerate(parts):
            if i != j:
                total += np.vdot(pi, eb @ pj)
    return total


def ftp_decomposition(a, b, beta, psi, tol: Tolerances = DEFAULT_TOL) -> FtpReport:
    """Split ``P(B=β)`` into the classical total-probability sum and the interference term.

    The interference is computed both as the residual and as the off-diagonal
    double sum; the two must agree to ``10·ε_p``.
    """
    a, b = as_observable(a, tol), as_observable(b, tol)
    psi = _state_for(psi, a, b, tol=tol)
    eb = b.projector(beta, tol)
    total = clamp_probability(np.vdot(psi, eb @ psi).real, tol)
    classical = 0.0
    for e in a.projectors:
        phi = e @ psi
        marg = np.linalg.norm(phi) ** 2
        if marg > tol.zero:
            cond = clamp_probability(np.linalg.norm(eb @ phi) ** 2 / marg, tol)
            classical += cond * marg
    delta = total - classical
    direct = interference_term(a, eb, psi)
    if abs(direct.imag) > 10 * tol.p or abs(direct.real - delta) > 10 * tol.p:
        raise InternalConsistencyError(f"interference mismatch: residual {delta!r} vs double sum {direct!r}")
    return FtpReport(float(b.values[b.index(beta, tol)]), float(total), float(classical), float(delta))


def expectation(a, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    a = as_observable(a, tol)
    psi = _state_for(psi, a, tol=tol)
    z = np.vdot(psi, a.op @ psi)
    if abs(z.imag) > tol.p * (1 + np.linalg.norm(a.op)):
        raise InternalConsistencyError(f"⟨A⟩ has imaginary part {z.imag!r}")
    return float(z.real)


def covariance(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """``⟨AB⟩ − ⟨A⟩⟨B⟩``.

    For non-commuting pairs ``AB`` is not Hermitian; the real part of ``⟨AB⟩``
    is used and a ``NonCommutingCovarianceWarning`` is emitted.
    """
    a, b = as_observable(a, tol), as_observable(b, tol)
    psi = _state_for(psi, a, b, tol=tol)
    if not commutes(a.op, b.op, tol):
        warnings.warn("covariance of non-commuting observables uses Re⟨AB⟩",
                      NonCommutingCovarianceWarning, stacklevel=2)
    ab = np.vdot(psi, a.op @ (b.op @ psi)).real
    return float(ab - expectation(a, psi, tol) * expectation(b, psi, tol))
