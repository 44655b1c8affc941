"""Finite Kolmogorov probability spaces and discrete random variables.

Events are all subsets of a finite sample space, so a space is just labelled
points with nonnegative weights. Everything here is computed by summing
weights over events; nothing touches Hilbert-space machinery except
``from_commuting_pair``, which builds the space induced by a commuting pair
of observables and a state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningUndefined, DimensionMismatch, InternalConsistencyError, InvalidInput
from .hilbert import DEFAULT_TOL, Tolerances
from .spectral import Observable, joint_decompose


@dataclass(frozen=True)
class FiniteProbabilitySpace:
    points: tuple
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.weights) or not self.points:
            raise InvalidInput("points and weights must be non-empty and of equal length")
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidInput("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > DEFAULT_TOL.p:
            raise InvalidInput(f"weights sum to {w.sum()!r}, not 1")

    @property
    def size(self) -> int:
        return len(self.points)

    def probability(self, mask) -> float:
        """``P`` of the event given as a boolean mask over the points."""
        return float(np.asarray(self.weights)[np.asarray(mask, dtype=bool)].sum())

    def to_dict(self) -> dict:
        return {"points": [list(p) if isinstance(p, tuple) else p for p in self.points],
                "weights": list(self.weights)}


@dataclass(frozen=True)
class RandomVariable:
    """A real-valued map on the points of a space, stored point by point."""

    values: tuple[float, ...]

    def range(self) -> list[float]:
        return sorted(set(self.values))

    def event(self, x: float) -> np.ndarray:
        return np.asarray(self.values) == x

    def distribution(self, space: FiniteProbabilitySpace) -> dict[float, float]:
        _check(self, space)
        return {x: space.probability(self.event(x)) for x in self.range()}


def _check(xi: RandomVariable, space: FiniteProbabilitySpace) -> None:
    if len(xi.values) != space.size:
        raise DimensionMismatch(f"random variable defined on {len(xi.values)} points, space has {space.size}")


def from_commuting_pair(a: Observable, b: Observable, psi, tol: Tolerances = DEFAULT_TOL):
    """Induced space on outcome pairs with ``P(α, β) = ‖E_B(β)E_A(α)ψ‖²``."""
    dec = joint_decompose(a, b, psi, tol)
    points = tuple((alpha, beta) for alpha in a.values for beta in b.values)
    weights = tuple(dec.amplitude(alpha, beta) ** 2 for alpha, beta in points)
    space = FiniteProbabilitySpace(points, weights)
    xi_a = RandomVariable(tuple(alpha for alpha, _ in points))
    xi_b = RandomVariable(tuple(beta for _, beta in points))
    return space, xi_a, xi_b


def joint_probability(xi_a, xi_b, space, x, y) -> float:
    return space.probability(xi_a.event(x) & xi_b.event(y))


def conditional(xi_b, y, xi_a, x, space, tol: Tolerances = DEFAULT_TOL) -> float:
    """``P(B=y | A=x)``."""
    pa = space.probability(xi_a.event(x))
    if pa <= tol.zero:
        raise ConditioningUndefined(f"P(A={x}) = {pa:.3e}")
    return joint_probability(xi_a, xi_b, space, x, y) / pa


def are_independent(xi_a, xi_b, space, tol: Tolerances = DEFAULT_TOL) -> bool:
    """The joint distribution factorizes over every pair of values."""
    _check(xi_a, space)
    _check(xi_b, space)
    pa, pb = xi_a.distribution(space), xi_b.distribution(space)
    return all(
        abs(joint_probability(xi_a, xi_b, space, x, y) - pa[x] * pb[y]) <= tol.p
        for x in pa
        for y in pb
    )


def conditionally_independent(xi_a, xi_b, space, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``P(B=y|A=x) = P(B=y)`` and ``P(A=x|B=y) = P(A=x)`` wherever the condition has positive mass."""
    pa, pb = xi_a.distribution(space), xi_b.distribution(space)
    for x in pa:
        for y in pb:
            if pa[x] > tol.zero and abs(conditional(xi_b, y, xi_a, x, space, tol) - pb[y]) > tol.p:
                return False
            if pb[y] > tol.zero and abs(conditional(xi_a, x, xi_b, y, space, tol) - pa[x]) > tol.p:
                return False
    return True


def expectation(xi, space) -> float:
    _check(xi, space)
    return float(np.dot(xi.values, space.weights))


def covariance_classical(xi_a, xi_b, space) -> float:
    """``E[AB] − E[A]E[B]``."""
    prod = RandomVariable(tuple(x * y for x, y in zip(xi_a.values, xi_b.values)))
    return expectation(prod, space) - expectation(xi_a, space) * expectation(xi_b, space)


def classical_ftp_check(xi_a, xi_b, space, y, tol: Tolerances = DEFAULT_TOL) -> tuple[float, float]:
    """``(P(B=y), Σ_x P(B=y|A=x) P(A=x))``; the two sides of total probability.

    Values of A with zero mass are skipped; their terms vanish.
    """
    lhs = space.probability(xi_b.event(y))
    rhs = 0.0
    for x, px in xi_a.distribution(space).items():
        if px > tol.zero:
            rhs += conditional(xi_b, y, xi_a, x, space, tol) * px
    if abs(lhs - rhs) > tol.p:
        raise InternalConsistencyError(f"total probability fails for B={y}: {lhs!r} vs {rhs!r}")
    return lhs, rhs
