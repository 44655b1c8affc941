"""Random states, unitaries and observable pairs for randomized checks.

All generators take a ``numpy.random.Generator`` so runs are reproducible
from a seed.

* states: complex Gaussian entries, normalized (unitarily invariant);
* unitaries: QR of a complex Gaussian matrix with the phases of ``R``'s
  diagonal divided out (Haar measure);
* commuting pairs: one Haar-random eigenbasis shared by both observables,
  with independent ±1 eigenvalue assignments.
"""
from __future__ import annotations

import numpy as np

from .hilbert import frozen
from .spectral import Observable, validate_observable


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return frozen(z / np.linalg.norm(z))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return frozen(q * (d / np.abs(d)))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return frozen((z + z.conj().T) / 2)


def observable_in_basis(basis: np.ndarray, signs) -> Observable:
    """Observable diagonal in the columns of ``basis`` with eigenvalue ``signs[k]`` on column k."""
    signs = np.asarray(signs, dtype=float)
    values = tuple(sorted({float(s) for s in signs}, reverse=True))
    projectors = []
    for v in values:
        cols = basis[:, signs == v]
        projectors.append(frozen(cols @ cols.conj().T))
    op = frozen(basis @ np.diag(signs) @ basis.conj().T)
    obs = Observable(op, values, tuple(projectors))
    validate_observable(obs)
    return obs


def random_signs(dim: int, rng: np.random.Generator) -> np.ndarray:
    """A ±1 assignment of length ``dim`` using both signs."""
    while True:
        s = rng.choice([1.0, -1.0], size=dim)
        if 0 < (s > 0).sum() < dim:
            return s


def random_dichotomous_pair(dim: int, rng: np.random.Generator, cover_all_cells: bool | None = None):
    """Commuting ±1-valued observables sharing a random eigenbasis.

    When ``cover_all_cells`` is true (the default picks it at random for
    ``dim ≥ 4``) every joint cell ``(α, β)`` gets at least one eigenvector; in
    dim 4 that makes all four joint eigenspaces one-dimensional.
    """
    basis = random_unitary(dim, rng)
    if cover_all_cells is None:
        cover_all_cells = dim >= 4 and bool(rng.integers(2))
    if cover_all_cells:
        combos = np.array([(1, 1), (1, -1), (-1, 1), (-1, -1)], dtype=float)
        extra = combos[rng.integers(4, size=dim - 4)] if dim > 4 else np.empty((0, 2))
        rows = rng.permutation(np.vstack([combos, extra]))
        sa, sb = rows[:, 0], rows[:, 1]
    else:
        sa, sb = random_signs(dim, rng), random_signs(dim, rng)
    return observable_in_basis(basis, sa), observable_in_basis(basis, sb)


def random_local_dichotomous(dim: int, rng: np.random.Generator) -> Observable:
    return observable_in_basis(random_unitary(dim, rng), random_signs(dim, rng))


def random_factorisable_state(a: Observable, b: Observable, rng: np.random.Generator) -> np.ndarray:
    """A state whose joint-cell norms factor as ``λ_α μ_β`` for a commuting dichotomous pair.

    Inside each cell the direction and phase are random. Cells that are empty
    force the matching ``λ_α`` or ``μ_β`` to zero.
    """
    lam = rng.uniform(0.05, 1.0, size=2)
    mu = rng.uniform(0.05, 1.0, size=2)
    for i, ea in enumerate(a.projectors):
        for j, eb in enumerate(b.projectors):
            if np.trace(ea @ eb).real < 0.5 and lam[i] * mu[j] > 0:
                if rng.integers(2):
                    lam[i] = 0.0
                else:
                    mu[j] = 0.0
    if not lam.any() or not mu.any():
        return random_state(a.dim, rng)
    lam, mu = lam / np.linalg.norm(lam), mu / np.linalg.norm(mu)
    psi = np.zeros(a.dim, dtype=complex)
    for i, ea in enumerate(a.projectors):
        for j, eb in enumerate(b.projectors):
            weight = lam[i] * mu[j]
            if weight == 0.0:
                continue
            v = ea @ eb @ (rng.standard_normal(a.dim) + 1j * rng.standard_normal(a.dim))
            psi += weight * v / np.linalg.norm(v)
    return frozen(psi / np.linalg.norm(psi))


def random_epr_state(a: Observable, b: Observable, rng: np.random.Generator) -> np.ndarray:
    """A state supported on the cells ``(+, ±)`` and ``(−, ∓)`` (pattern chosen at random).

    Such a state makes every conditional probability 0 or 1. Returns ``None``
    when one of the two cells is empty.
    """
    flip = int(rng.integers(2))
    cells = [(0, flip), (1, 1 - flip)]
    weights = rng.uniform(0.1, 1.0, size=2)
    psi = np.zeros(a.dim, dtype=complex)
    for (i, j), w in zip(cells, weights):
        pi = a.projectors[i] @ b.projectors[j]
        if np.trace(pi).real < 0.5:
            return None
        v = pi @ (rng.standard_normal(a.dim) + 1j * rng.standard_normal(a.dim))
        psi += w * v / np.linalg.norm(v)
    return frozen(psi / np.linalg.norm(psi))


def random_product_state(dims: tuple[int, int], rng: np.random.Generator) -> np.ndarray:
    return frozen(np.kron(random_state(dims[0], rng), random_state(dims[1], rng)))
