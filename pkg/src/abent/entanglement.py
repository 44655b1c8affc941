"""AB-entanglement: dependence of B's outcomes on A's outcomes in a given state.

A state is AB-entangled when every outcome of B has conditional probabilities
that differ across at least two outcomes of A. Decisions are taken on the
division-free norm-product form

    ‖E_B(β)E_A(α_i)ψ‖·‖E_A(α_j)ψ‖  ≠  ‖E_B(β)E_A(α_j)ψ‖·‖E_A(α_i)ψ‖

which is equivalent to the conditional-probability form and never needs a
nonzero marginal. For commuting dichotomous pairs the same verdict is
available from amplitude factorization and from the covariance; reports
cross-check all three.

Strict inequalities are decided at margin ``tol.p``. A statistic that lands in
``[tol.p / 10, 10 * tol.p]`` is reported as ``marginal``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    ConditioningUndefined,
    DegenerateJointBasis,
    DimensionMismatch,
    InternalConsistencyError,
    NonCommuting,
    NotOrthonormal,
    SpectrumMismatch,
)
from .hilbert import (
    DEFAULT_TOL,
    Tolerances,
    check_state,
    check_unitary,
    commutes,
    dagger,
    fro,
    frozen,
)
from .qprob import (
    NonCommutingCovarianceWarning,
    conditional_probability,
    conditional_table,
    covariance,
    marginals,
    sequential_jpd,
)
from .spectral import (
    Observable,
    as_observable,
    joint_decompose,
    require_dichotomous,
    spectral_decompose,
    validate_observable,
)


def in_gray_zone(stat: float, tol: Tolerances = DEFAULT_TOL) -> bool:
    return tol.p / 10 <= abs(stat) <= 10 * tol.p


def _pair(a, b, psi, tol):
    a, b = as_observable(a, tol), as_observable(b, tol)
    psi = check_state(psi, tol)
    if not (a.dim == b.dim == psi.shape[0]):
        raise DimensionMismatch(f"dims A={a.dim}, B={b.dim}, ψ={psi.shape[0]}")
    return a, b, psi


def _require_commuting(a: Observable, b: Observable, tol: Tolerances) -> None:
    if not commutes(a.op, b.op, tol):
        raise NonCommuting("operation is defined for commuting observables only")


def _norm_tables(a: Observable, b: Observable, psi):
    """``joint[i, j] = ‖E_B(β_j)E_A(α_i)ψ‖`` and ``marg[i] = ‖E_A(α_i)ψ‖``."""
    joint = np.empty((len(a.values), len(b.values)))
    marg = np.empty(len(a.values))
    for i, ea in enumerate(a.projectors):
        phi = ea @ psi
        marg[i] = np.linalg.norm(phi)
        for j, eb in enumerate(b.projectors):
            joint[i, j] = np.linalg.norm(eb @ phi)
    return joint, marg


# -- dependence of single outcomes -------------------------------------------------

@dataclass(frozen=True)
class DependenceWitness:
    """The two sides of the norm-product inequality for one ``(β, α_i, α_j)``."""

    beta: float
    alpha_i: float
    alpha_j: float
    lhs: float
    rhs: float
    marginal: bool = False

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {"beta": self.beta, "alpha_i": self.alpha_i, "alpha_j": self.alpha_j,
                "lhs": self.lhs, "rhs": self.rhs, "marginal": self.marginal}


def _witness(a, b, joint, marg, j, i, k, tol) -> DependenceWitness:
    lhs = float(joint[i, j] * marg[k])
    rhs = float(joint[k, j] * marg[i])
    return DependenceWitness(b.values[j], a.values[i], a.values[k], lhs, rhs, in_gray_zone(lhs - rhs, tol))


def outcome_depends(a, b, beta, alpha_i, alpha_j, psi, tol: Tolerances = DEFAULT_TOL) -> DependenceWitness | None:
    """Witness that ``B=β`` depends on whether ``A=α_i`` or ``A=α_j``, if it does."""
    a, b, psi = _pair(a, b, psi, tol)
    i, k, j = a.index(alpha_i, tol), a.index(alpha_j, tol), b.index(beta, tol)
    if i == k:
        raise SpectrumMismatch("alpha_i and alpha_j must be distinct outcomes")
    joint, marg = _norm_tables(a, b, psi)
    w = _witness(a, b, joint, marg, j, i, k, tol)
    return w if w.gap > tol.p else None


def _best_witness(a, b, joint, marg, j, tol) -> DependenceWitness | None:
    best = None
    for i, k in combinations(range(len(a.values)), 2):
        w = _witness(a, b, joint, marg, j, i, k, tol)
        if best is None or w.gap > best.gap:
            best = w
    return best


def _entanglement_decision(a, b, psi, tol):
    """Return ``(verdict, witnesses, decisive_gap)``."""
    joint, marg = _norm_tables(a, b, psi)
    best = [_best_witness(a, b, joint, marg, j, tol) for j in range(len(b.values))]
    if best[0] is None:
        # A with a single outcome: no pair to compare.
        return False, [], 0.0
    if a.is_dichotomous and b.is_dichotomous:
        # Both outcomes of B depend on A or neither does; decide on B=+ alone.
        gap = best[0].gap
        verdict = gap > tol.p
        return verdict, (best if verdict else []), gap
    gap = min(w.gap for w in best)
    verdict = gap > tol.p
    return verdict, [w for w in best if w.gap > tol.p], gap


def is_ab_entangled(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, list[DependenceWitness]]:
    """Every outcome of B depends on the outcomes of A; returns the verdict and one witness per β."""
    a, b, psi = _pair(a, b, psi, tol)
    verdict, witnesses, _ = _entanglement_decision(a, b, psi, tol)
    return verdict, witnesses


def is_two_way_entangled(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> bool:
    """A↔B-entanglement: both the AB and the BA predicates hold."""
    return is_ab_entangled(a, b, psi, tol)[0] and is_ab_entangled(b, a, psi, tol)[0]


# -- concurrence measures --------------------------------------------------------

def concurrence_M(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """Sum over β and unordered pairs α ≠ α' of ``|P(β|α) − P(β|α')|``."""
    a, b, psi = _pair(a, b, psi, tol)
    table = conditional_table(a, b, psi, tol)
    if not table.defined.all():
        bad = [a.values[i] for i in np.flatnonzero(~table.defined)]
        raise ConditioningUndefined(f"zero-probability outcomes of A: {bad}")
    p = table.probabilities
    return float(sum(np.abs(p[:, i] - p[:, k]).sum() for i, k in combinations(range(p.shape[1]), 2)))


def concurrence_C(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """Renormalized concurrence: norm-product differences summed over β and unordered α pairs."""
    a, b, psi = _pair(a, b, psi, tol)
    joint, marg = _norm_tables(a, b, psi)
    total = 0.0
    for j in range(len(b.values)):
        for i, k in combinations(range(len(a.values)), 2):
            total += abs(joint[i, j] * marg[k] - joint[k, j] * marg[i])
    return float(total)


# -- perfect conditional correlation ------------------------------------------------

def is_pcc(a, alpha, b, beta, psi, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``P(B=β | A=α) = 1`` up to ``tol.p``."""
    return conditional_probability(b, beta, a, alpha, psi, tol) >= 1.0 - tol.p


@dataclass(frozen=True)
class EprSpec:
    """A set of outcome pairs ``(α, β)``; complete when it matches A's and B's spectra one-to-one."""

    pairs: tuple[tuple[float, float], ...]
    complete: bool

    def to_dict(self) -> dict:
        return {"pairs": [[a, b] for a, b in self.pairs], "complete": self.complete}


def epr_spec(pairs, a, b, tol: Tolerances = DEFAULT_TOL) -> EprSpec:
    a, b = as_observable(a, tol), as_observable(b, tol)
    canon = tuple((a.values[a.index(x, tol)], b.values[b.index(y, tol)]) for x, y in pairs)
    alphas = [x for x, _ in canon]
    betas = [y for _, y in canon]
    complete = sorted(alphas) == sorted(a.values) and sorted(betas) == sorted(b.values)
    return EprSpec(canon, complete)


def is_epr_entangled(a, b, gamma, psi, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Every pair in ``gamma`` is perfectly conditionally correlated."""
    spec = gamma if isinstance(gamma, EprSpec) else epr_spec(gamma, a, b, tol)
    return all(is_pcc(a, x, b, y, psi, tol) for x, y in spec.pairs)


def find_complete_epr(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> EprSpec | None:
    """The complete EPR set for ``(A, B, ψ)`` if one exists.

    Each conditional column sums to one, so an outcome α is PCC with at most one
    β; a complete set exists iff that assignment is a bijection.
    """
    a, b, psi = _pair(a, b, psi, tol)
    if len(a.values) != len(b.values):
        return None
    table = conditional_table(a, b, psi, tol)
    if not table.defined.all():
        return None
    pairs = []
    for i, alpha in enumerate(a.values):
        hits = np.flatnonzero(table.probabilities[:, i] >= 1.0 - tol.p)
        if len(hits) != 1:
            return None
        pairs.append((alpha, b.values[hits[0]]))
    if len({beta for _, beta in pairs}) != len(pairs):
        return None
    return EprSpec(tuple(pairs), True)


def is_max_entangled(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``M_AB = 2``; cross-checked against the existence of a complete EPR set."""
    a, b, psi = _pair(a, b, psi, tol)
    require_dichotomous(a, b)
    m = concurrence_M(a, b, psi, tol)
    verdict = m >= 2.0 - tol.p
    epr = find_complete_epr(a, b, psi, tol) is not None
    # EPR with conditionals 1 - ε each still gives M ≥ 2 - 4ε; only a gap beyond that is a bug.
    if (verdict and not epr) or (epr and m < 2.0 - 4.0 * tol.p - 1e-15):
        raise InternalConsistencyError(f"M_AB = {m!r} disagrees with EPR detection ({epr})")
    return verdict


# -- amplitude factorization (commuting dichotomous pairs) --------------------------

@dataclass(frozen=True)
class FactorizationWitness:
    """Nonnegative unit vectors ``λ`` (over A's outcomes) and ``μ`` (over B's) with ``λ_α μ_β = c_αβ``."""

    a_values: tuple[float, ...]
    lambdas: tuple[float, ...]
    b_values: tuple[float, ...]
    mus: tuple[float, ...]
    residual: float

    def to_dict(self) -> dict:
        return {
            "lambda": [[v, x] for v, x in zip(self.a_values, self.lambdas)],
            "mu": [[v, x] for v, x in zip(self.b_values, self.mus)],
            "residual": self.residual,
        }


def _factor_residual(c: np.ndarray, lam: np.ndarray, mu: np.ndarray) -> float:
    return float(np.max(np.abs(np.outer(lam, mu) - c)))


def _closed_form_factors(c: np.ndarray, tol: Tolerances):
    """The constructive (λ, μ) for a disentangled amplitude matrix ``[[c++, c+-], [c-+, c--]]``."""
    (cpp, cpm), (cmp_, cmm) = c
    col_plus = cpp ** 2 + cmp_ ** 2    # P(B=+)
    row_plus = cpp ** 2 + cpm ** 2     # P(A=+)
    if col_plus > tol.zero and row_plus > tol.zero:
        d1, d2 = np.sqrt(col_plus), np.sqrt(row_plus)
        return np.array([cpp / d1, cmp_ / d1]), np.array([cpp / d2, cpm / d2])
    if col_plus <= tol.zero:
        # c++ = c-+ = 0: all weight on B=-.
        return np.array([cpm, cmm]), np.array([0.0, 1.0])
    # c++ = c+- = 0: all weight on A=-.
    return np.array([0.0, 1.0]), np.array([cmp_, cmm])


def amplitude_gap(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """``c+-² c-+² − c--² c++²``; zero exactly for amplitude-factorisable states."""
    a, b, psi = _pair(a, b, psi, tol)
    _require_commuting(a, b, tol)
    require_dichotomous(a, b)
    c = joint_decompose(a, b, psi, tol).amplitudes()
    return float(c[0, 1] ** 2 * c[1, 0] ** 2 - c[1, 1] ** 2 * c[0, 0] ** 2)


def amplitude_factorization(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> FactorizationWitness | None:
    """Factor ``c_αβ = λ_α μ_β`` when possible, else ``None``.

    Existence is decided on ``|c+-²c-+² − c--²c++²| ≤ tol.p``. The closed-form
    factors divide by column/row norms and lose accuracy when ``c++`` is tiny;
    in that case the unique candidate ``λ_α = √P(A=α)``, ``μ_β = √P(B=β)`` is
    used instead if it fits better.
    """
    a, b, psi = _pair(a, b, psi, tol)
    _require_commuting(a, b, tol)
    require_dichotomous(a, b)
    c = joint_decompose(a, b, psi, tol).amplitudes()
    if abs(c[0, 1] ** 2 * c[1, 0] ** 2 - c[1, 1] ** 2 * c[0, 0] ** 2) > tol.p:
        return None
    lam, mu = _closed_form_factors(c, tol)
    res = _factor_residual(c, lam, mu)
    if res > tol.p:
        lam2 = np.sqrt((c ** 2).sum(axis=1))
        mu2 = np.sqrt((c ** 2).sum(axis=0))
        res2 = _factor_residual(c, lam2, mu2)
        if res2 < res:
            lam, mu, res = lam2, mu2, res2
    return FactorizationWitness(a.values, tuple(float(x) for x in lam), b.values, tuple(float(x) for x in mu), res)


def _covariance_identity(a: Observable, b: Observable, c: np.ndarray) -> float:
    """``(α+ − α−)(β+ − β−)(ab − cd)``; equals ``4(ab − cd)`` for ±1 spectra."""
    pp, pm, mp, mm = c[0, 0] ** 2, c[0, 1] ** 2, c[1, 0] ** 2, c[1, 1] ** 2
    scale = (a.values[0] - a.values[1]) * (b.values[0] - b.values[1])
    return float(scale * (pp * mm - pm * mp))


def covariance_identity(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    a, b, psi = _pair(a, b, psi, tol)
    _require_commuting(a, b, tol)
    require_dichotomous(a, b)
    return _covariance_identity(a, b, joint_decompose(a, b, psi, tol).amplitudes())


def theorem3_check(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, bool]:
    """``(AB-entangled, correlated)`` for a commuting dichotomous pair; the two always agree."""
    a, b, psi = _pair(a, b, psi, tol)
    _require_commuting(a, b, tol)
    require_dichotomous(a, b)
    entangled, _ = is_ab_entangled(a, b, psi, tol)
    return entangled, abs(covariance(a, b, psi, tol)) > tol.p


def independence_gap(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """``max |P_AB(α, β) − P(A=α)P(B=β)|`` over all cells."""
    a, b, psi = _pair(a, b, psi, tol)
    jpd = sequential_jpd(a, b, psi, "ab", tol).entries
    return float(np.max(np.abs(jpd - np.outer(marginals(a, psi, tol), marginals(b, psi, tol)))))


def is_ab_independent(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> bool:
    """The sequential JPD factorizes into the marginals.

    For commuting pairs with dichotomous B this is cross-checked against the
    negation of AB-entanglement.
    """
    a, b, psi = _pair(a, b, psi, tol)
    gap = independence_gap(a, b, psi, tol)
    verdict = gap <= tol.p
    if b.is_dichotomous and commutes(a.op, b.op, tol):
        entangled, _, ent_gap = _entanglement_decision(a, b, psi, tol)
        if verdict == entangled and not (in_gray_zone(gap, tol) or in_gray_zone(ent_gap, tol)):
            raise InternalConsistencyError(
                f"independence ({verdict}, gap {gap:.3e}) vs entanglement ({entangled}, gap {ent_gap:.3e})"
            )
    return verdict


# -- two-qubit comparison with standard entanglement ------------------------------

def _partial_factor(m: np.ndarray, tol: Tolerances):
    """Return ``(x, "left")`` if ``m = x ⊗ I₂``, ``(x, "right")`` if ``m = I₂ ⊗ x``, else ``None``."""
    t = m.reshape(2, 2, 2, 2)
    left = np.einsum("ijkj->ik", t) / 2
    right = np.einsum("ijil->jl", t) / 2
    if fro(m - np.kron(left, np.eye(2))) <= tol.herm * (1 + fro(m)):
        return left, "left"
    if fro(m - np.kron(np.eye(2), right)) <= tol.herm * (1 + fro(m)):
        return right, "right"
    return None


def _unit_from_projector(p: np.ndarray) -> np.ndarray:
    # Canonical phase: the column with the largest diagonal entry, made real positive.
    k = int(np.argmax(np.real(np.diag(p))))
    v = p[:, k]
    return v / np.linalg.norm(v)


def _joint_basis(a: Observable, b: Observable, tol: Tolerances) -> dict:
    """Unit vectors spanning the four one-dimensional joint eigenspaces.

    When ``A = a ⊗ I`` and ``B = I ⊗ b`` (either order) the vectors are built as
    products of local eigenvectors, so the basis is a product basis. Otherwise
    each vector gets the canonical phase of ``_unit_from_projector``.
    """
    fa, fb = _partial_factor(a.op, tol), _partial_factor(b.op, tol)
    if fa and fb and fa[1] != fb[1]:
        la, lb = spectral_decompose(fa[0], tol), spectral_decompose(fb[0], tol)
        if la.is_dichotomous and lb.is_dichotomous:
            fs = [_unit_from_projector(p) for p in la.projectors]
            gs = [_unit_from_projector(p) for p in lb.projectors]
            out = {}
            for i, alpha in enumerate(a.values):
                for j, beta in enumerate(b.values):
                    f, g = fs[la.index(alpha, tol)], gs[lb.index(beta, tol)]
                    out[(alpha, beta)] = np.kron(f, g) if fa[1] == "left" else np.kron(g, f)
            return out
    return {
        (alpha, beta): _unit_from_projector(ea @ eb)
        for alpha, ea in zip(a.values, a.projectors)
        for beta, eb in zip(b.values, b.projectors)
    }


def two_qubit_coefficients(psi, a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Complex coordinates ``[[c++, c+-], [c-+, c--]]`` of ψ in the joint eigenbasis of (A, B)."""
    a, b, psi = _pair(a, b, psi, tol)
    if psi.shape[0] != 4:
        raise DimensionMismatch(f"two-qubit concurrence needs dim 4, got {psi.shape[0]}")
    _require_commuting(a, b, tol)
    require_dichotomous(a, b)
    dec = joint_decompose(a, b, psi, tol)
    for alpha in a.values:
        for beta in b.values:
            if dec.rank(alpha, beta) != 1:
                raise DegenerateJointBasis(f"joint eigenspace ({alpha}, {beta}) is not one-dimensional")
    basis = _joint_basis(a, b, tol)
    return np.array([[np.vdot(basis[(x, y)], psi) for y in b.values] for x in a.values])


def two_qubit_standard_concurrence(psi, a, b, tol: Tolerances = DEFAULT_TOL) -> float:
    """``|c+- c-+ − c-- c++|`` (no conventional factor 2); zero iff ψ is a product state."""
    c = two_qubit_coefficients(psi, a, b, tol)
    return float(abs(c[0, 1] * c[1, 0] - c[1, 1] * c[0, 0]))


def two_qubit_renormalized_concurrence(psi, a, b, tol: Tolerances = DEFAULT_TOL) -> float:
    """``| |c+- c-+| − |c-- c++| |``, the amplitude-only companion of the standard concurrence.

    This is zero exactly when ψ is AB-disentangled, but in general it differs
    from ``concurrence_C``, which sums norm products over both outcomes of B.
    """
    c = two_qubit_coefficients(psi, a, b, tol)
    return float(abs(abs(c[0, 1] * c[1, 0]) - abs(c[1, 1] * c[0, 0])))


# -- constructions -----------------------------------------------------------------

def embed_local(a, b, tol: Tolerances = DEFAULT_TOL) -> tuple[Observable, Observable]:
    """``(a ⊗ I_n, I_m ⊗ b)`` with spectra carried over unchanged."""
    a, b = as_observable(a, tol), as_observable(b, tol)
    im, in_ = np.eye(a.dim), np.eye(b.dim)
    big_a = Observable(frozen(np.kron(a.op, in_)), a.values, tuple(frozen(np.kron(p, in_)) for p in a.projectors))
    big_b = Observable(frozen(np.kron(im, b.op)), b.values, tuple(frozen(np.kron(im, p)) for p in b.projectors))
    validate_observable(big_a, tol)
    validate_observable(big_b, tol)
    return big_a, big_b


def conjugate_observable(a, u, tol: Tolerances = DEFAULT_TOL) -> Observable:
    """``u a u†`` with the same eigenvalues and projectors ``u E(α) u†``."""
    a = as_observable(a, tol)
    u = check_unitary(u, tol)
    if u.shape[0] != a.dim:
        raise DimensionMismatch(f"unitary of dim {u.shape[0]} vs observable of dim {a.dim}")
    ud = dagger(u)
    out = Observable(frozen(u @ a.op @ ud), a.values, tuple(frozen(u @ p @ ud) for p in a.projectors))
    validate_observable(out, tol)
    return out


def singlet(basis=None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``(|f+ f-⟩ − |f- f+⟩)/√2`` for an orthonormal basis ``(f+, f-)`` of C².

    ``basis`` is a 2×2 matrix whose columns are ``f+`` and ``f-``; the
    computational basis is used when omitted.
    """
    f = np.eye(2, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    if f.shape != (2, 2):
        raise DimensionMismatch(f"basis must be 2×2, got {f.shape}")
    if fro(dagger(f) @ f - np.eye(2)) > tol.norm:
        raise NotOrthonormal("basis vectors are not orthonormal")
    fp, fm = f[:, 0], f[:, 1]
    return frozen((np.kron(fp, fm) - np.kron(fm, fp)) / np.sqrt(2))


# -- aggregate report ----------------------------------------------------------------

@dataclass(frozen=True)
class EntanglementReport:
    ab_entangled: bool
    witnesses: tuple[DependenceWitness, ...]
    M_AB: float | None
    C_AB: float
    covariance: float
    commuting: bool
    dichotomous: bool
    two_way_entangled: bool
    factorization: FactorizationWitness | None = None
    epr: EprSpec | None = None
    max_entangled: bool | None = None
    marginal: bool = False
    amplitudes: np.ndarray | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "ab_entangled": self.ab_entangled,
            "two_way_entangled": self.two_way_entangled,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "M_AB": self.M_AB,
            "C_AB": self.C_AB,
            "covariance": self.covariance,
            "commuting": self.commuting,
            "dichotomous": self.dichotomous,
            "factorization": None if self.factorization is None else self.factorization.to_dict(),
            "epr": None if self.epr is None else self.epr.to_dict(),
            "max_entangled": self.max_entangled,
            "marginal": self.marginal,
        }
        if self.amplitudes is not None:
            out["amplitudes"] = [[float(x) for x in row] for row in self.amplitudes]
        return out


def analyze(a, b, psi, tol: Tolerances = DEFAULT_TOL) -> EntanglementReport:
    """Run every applicable predicate and measure on ``(A, B, ψ)``.

    For commuting dichotomous pairs the verdicts of the dependence test,
    amplitude factorization and covariance are required to agree unless one of
    the decision statistics is in the gray zone.
    """
    a, b, psi = _pair(a, b, psi, tol)
    entangled, witnesses, gap = _entanglement_decision(a, b, psi, tol)
    marginal = in_gray_zone(gap, tol)
    commuting = commutes(a.op, b.op, tol)
    dichotomous = a.is_dichotomous and b.is_dichotomous

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonCommutingCovarianceWarning)
        cov = covariance(a, b, psi, tol)
    try:
        m = concurrence_M(a, b, psi, tol)
    except ConditioningUndefined:
        m = None

    factorization = amplitudes = None
    max_ent = None
    if commuting and dichotomous:
        dec = joint_decompose(a, b, psi, tol)
        amplitudes = dec.amplitudes()
        factorization = amplitude_factorization(a, b, psi, tol)
        c = amplitudes
        amp_gap = c[0, 1] ** 2 * c[1, 0] ** 2 - c[1, 1] ** 2 * c[0, 0] ** 2
        marginal = marginal or in_gray_zone(amp_gap, tol) or in_gray_zone(cov, tol)
        if factorization is not None and factorization.residual > tol.p:
            marginal = True
        verdicts = {entangled, factorization is None, abs(cov) > tol.p}
        if len(verdicts) != 1 and not marginal:
            raise InternalConsistencyError(
                f"entangled={entangled}, factorisable={factorization is not None}, cov={cov!r}"
            )
    if dichotomous and m is not None:
        max_ent = is_max_entangled(a, b, psi, tol)

    return EntanglementReport(
        ab_entangled=entangled,
        witnesses=tuple(witnesses),
        M_AB=m,
        C_AB=concurrence_C(a, b, psi, tol),
        covariance=cov,
        commuting=commuting,
        dichotomous=dichotomous,
        two_way_entangled=entangled and _entanglement_decision(b, a, psi, tol)[0],
        factorization=factorization,
        epr=find_complete_epr(a, b, psi, tol),
        max_entangled=max_ent,
        marginal=marginal,
        amplitudes=amplitudes,
    )
