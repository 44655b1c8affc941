"""Spectral decomposition of observables and joint eigenspaces of commuting pairs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import (
    DimensionMismatch,
    EigensolverFailure,
    InvalidObservable,
    NonCommuting,
    NotDichotomous,
    NotHermitian,
    SpectrumMismatch,
)
from .hilbert import (
    DEFAULT_TOL,
    Tolerances,
    as_operator,
    check_state,
    commutes,
    dagger,
    fro,
    frozen,
    is_hermitian,
)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator together with its spectral resolution.

    ``values`` are the distinct eigenvalues in decreasing order and
    ``projectors[k]`` is the orthogonal projector onto the eigenspace of
    ``values[k]``. For a dichotomous observable the outcome ``+`` is the
    larger eigenvalue.
    """

    op: np.ndarray
    values: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.op.shape[0]

    @property
    def is_dichotomous(self) -> bool:
        return len(self.values) == 2

    def index(self, value: float, tol: Tolerances = DEFAULT_TOL) -> int:
        for k, v in enumerate(self.values):
            if abs(v - value) <= tol.eig * max(1.0, abs(v)):
                return k
        raise SpectrumMismatch(f"{value!r} is not an eigenvalue (spectrum {list(self.values)})")

    def projector(self, value: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        return self.projectors[self.index(value, tol)]

    @classmethod
    def from_matrix(cls, h, tol: Tolerances = DEFAULT_TOL) -> "Observable":
        return spectral_decompose(h, tol)

    @classmethod
    def from_spectrum(cls, values, projectors, tol: Tolerances = DEFAULT_TOL) -> "Observable":
        """Build from an explicit ``{value: projector}`` resolution and validate it."""
        values = [float(v) for v in values]
        projectors = [as_operator(p) for p in projectors]
        if len(values) != len(projectors) or not values:
            raise InvalidObservable("values and projectors must be non-empty and of equal length")
        order = np.argsort(values)[::-1]
        values = [values[k] for k in order]
        projectors = [projectors[k] for k in order]
        dim = projectors[0].shape[0]
        if any(p.shape != (dim, dim) for p in projectors):
            raise DimensionMismatch("projectors have different shapes")
        op = sum(v * p for v, p in zip(values, projectors))
        obs = cls(frozen(op), tuple(values), tuple(frozen(p) for p in projectors))
        validate_observable(obs, tol)
        return obs


def validate_observable(obs: Observable, tol: Tolerances = DEFAULT_TOL) -> None:
    """Raise ``InvalidObservable`` unless every spectral invariant holds."""
    n = obs.dim
    eye = np.eye(n)
    if not is_hermitian(obs.op, tol):
        raise NotHermitian("operator is not Hermitian")
    vals = obs.values
    for v, w in zip(vals, vals[1:]):
        if not v - w > tol.eig:
            raise InvalidObservable(f"eigenvalues {v} and {w} are not separated by more than {tol.eig}")
    for k, p in enumerate(obs.projectors):
        if fro(p @ p - p) > tol.herm * (1 + fro(p)):
            raise InvalidObservable(f"projector for {vals[k]} is not idempotent")
        if fro(p - dagger(p)) > tol.herm * (1 + fro(p)):
            raise InvalidObservable(f"projector for {vals[k]} is not Hermitian")
        if fro(p) ** 2 < 0.5:
            raise InvalidObservable(f"projector for {vals[k]} is zero")
        for q in obs.projectors[k + 1:]:
            if fro(p @ q) > tol.herm * (1 + fro(p) * fro(q)):
                raise InvalidObservable("projectors are not mutually orthogonal")
    if fro(sum(obs.projectors) - eye) > tol.herm:
        raise InvalidObservable("projectors do not resolve the identity")
    recon = sum(v * p for v, p in zip(vals, obs.projectors))
    if fro(recon - obs.op) > tol.herm * (1 + fro(obs.op)):
        raise InvalidObservable("spectral sum does not reconstruct the operator")


def _snap(value: float, tol: Tolerances) -> float:
    # Integer eigenvalues come out of eigh with ~1e-16 noise; keep reports clean.
    r = round(value)
    return float(r) if abs(value - r) <= tol.herm else float(value)


def spectral_decompose(h, tol: Tolerances = DEFAULT_TOL) -> Observable:
    """Eigen-resolve a Hermitian matrix into distinct values and projectors.

    Eigenvalues whose sorted neighbours differ by at most ``tol.eig`` are merged
    into one cluster represented by its mean. If merging moves the spectral sum
    away from ``h`` by more than the reconstruction tolerance, the returned
    observable's ``op`` is the clustered operator.
    """
    h = as_operator(h)
    if not is_hermitian(h, tol):
        raise NotHermitian(f"‖H − H†‖_F = {fro(h - dagger(h)):.3e}")
    herm = (h + dagger(h)) / 2
    try:
        w, v = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise EigensolverFailure("eigensolver returned non-finite eigenvalues")

    clusters: list[list[int]] = [[0]]
    for k in range(1, len(w)):
        if w[k] - w[k - 1] <= tol.eig:
            clusters[-1].append(k)
        else:
            clusters.append([k])

    values, projectors = [], []
    for idx in reversed(clusters):
        vecs = v[:, idx]
        values.append(_snap(float(np.mean(w[idx])), tol))
        projectors.append(frozen(vecs @ dagger(vecs)))
    # Merging a cluster moves the operator by up to its spread; when that
    # exceeds the reconstruction tolerance the clustered operator replaces h.
    recon = sum(x * e for x, e in zip(values, projectors))
    op = h if fro(recon - h) <= tol.herm * (1 + fro(h)) else recon
    obs = Observable(frozen(op), tuple(values), tuple(projectors))
    validate_observable(obs, tol)
    return obs


def as_observable(x, tol: Tolerances = DEFAULT_TOL) -> Observable:
    return x if isinstance(x, Observable) else spectral_decompose(x, tol)


def require_dichotomous(*observables: Observable) -> None:
    for obs in observables:
        if not obs.is_dichotomous:
            raise NotDichotomous(f"expected two outcomes, got spectrum {list(obs.values)}")


@dataclass(frozen=True, eq=False)
class JointCell:
    projector: np.ndarray
    component: np.ndarray
    amplitude: float


@dataclass(frozen=True, eq=False)
class JointDecomposition:
    """Components of a state over the joint eigenspaces of a commuting pair.

    ``cells[(alpha, beta)]`` holds the joint projector ``E_A(α)E_B(β)``, the
    component ``ψ_αβ`` and its norm ``c_αβ``. Empty cells are kept with
    amplitude zero.
    """

    a_values: tuple[float, ...]
    b_values: tuple[float, ...]
    cells: dict

    def amplitude(self, alpha: float, beta: float) -> float:
        return self.cells[(alpha, beta)].amplitude

    def amplitudes(self) -> np.ndarray:
        """Matrix of ``c_αβ`` with rows indexed by A outcomes and columns by B outcomes."""
        return np.array([[self.cells[(a, b)].amplitude for b in self.b_values] for a in self.a_values])

    def rank(self, alpha: float, beta: float) -> int:
        return int(round(np.trace(self.cells[(alpha, beta)].projector).real))


def joint_decompose(a: Observable, b: Observable, psi, tol: Tolerances = DEFAULT_TOL) -> JointDecomposition:
    psi = check_state(psi, tol)
    if not (a.dim == b.dim == psi.shape[0]):
        raise DimensionMismatch(f"dims A={a.dim}, B={b.dim}, ψ={psi.shape[0]}")
    if not commutes(a.op, b.op, tol):
        raise NonCommuting("joint eigenspaces need [A, B] = 0")
    cells = {}
    for (alpha, ea), (beta, eb) in product(zip(a.values, a.projectors), zip(b.values, b.projectors)):
        pi = frozen(ea @ eb)
        comp = frozen(eb @ (ea @ psi))
        cells[(alpha, beta)] = JointCell(pi, comp, float(np.linalg.norm(comp)))
    return JointDecomposition(a.values, b.values, cells)
