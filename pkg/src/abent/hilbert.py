"""Dense complex linear algebra on finite-dimensional Hilbert spaces.

States are 1-d complex ``numpy`` arrays, operators are square 2-d complex
arrays. Every array returned from this package is marked read-only so that
values can be shared freely between callers and threads.

Kronecker products use the row-major convention: the composite index of
``(i, j)`` in ``x ⊗ y`` is ``i * dim(y) + j``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidInput, NotUnitary, ZeroVector


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerance policy.

    norm : state normalization
    herm : Hermiticity / projector identities, relative to the matrix norm
    eig  : eigenvalue clustering gap
    p    : probability comparisons and decision margins
    zero : threshold below which a probability counts as zero
    """

    norm: float = 1e-10
    herm: float = 1e-10
    eig: float = 1e-8
    p: float = 1e-9
    zero: float = 1e-12

    def __post_init__(self):
        for name in ("norm", "herm", "eig", "p", "zero"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInput(f"tolerance {name!r} must be finite and > 0, got {value!r}")
        if not self.zero < self.p:
            raise InvalidInput(f"tolerance 'zero' ({self.zero}) must be below 'p' ({self.p})")

    def replace(self, **changes) -> "Tolerances":
        fields = {k: getattr(self, k) for k in ("norm", "herm", "eig", "p", "zero")}
        unknown = set(changes) - set(fields)
        if unknown:
            raise InvalidInput(f"unknown tolerance fields: {sorted(unknown)}")
        fields.update(changes)
        return Tolerances(**fields)

    def to_dict(self) -> dict:
        return {"norm": self.norm, "herm": self.herm, "eig": self.eig, "p": self.p, "zero": self.zero}


DEFAULT_TOL = Tolerances()


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_vector(v) -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1 or a.size == 0:
        raise InvalidInput(f"expected a non-empty 1-d vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("vector has non-finite entries")
    return a


def as_operator(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidInput(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    return a


def normalize(v, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return ``v / ‖v‖`` as a read-only state vector.

    >>> normalize([1, 1])
    array([0.70710678+0.j, 0.70710678+0.j])
    """
    a = as_vector(v)
    n = np.linalg.norm(a)
    if n <= tol.zero:
        raise ZeroVector(f"cannot normalize vector of norm {n:.3e}")
    return frozen(a / n)


def check_state(psi, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate that ``psi`` is a unit vector without rescaling it."""
    a = as_vector(psi)
    n = np.linalg.norm(a)
    if abs(n - 1.0) > tol.norm:
        raise InvalidInput(f"state is not normalized: norm = {n!r}")
    return a


def tensor(x, y) -> np.ndarray:
    """Kronecker product of two vectors or two square operators."""
    a, b = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise InvalidInput("tensor() needs two vectors or two operators")
    return frozen(np.kron(a, b))


def dagger(m) -> np.ndarray:
    return np.asarray(m, dtype=complex).conj().T


def fro(m) -> float:
    return float(np.linalg.norm(m))


def require_same_dim(*arrays) -> int:
    dims = {np.shape(a)[0] for a in arrays}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def commutator(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    require_same_dim(a, b)
    return a @ b - b @ a


def commutes(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``‖AB − BA‖_F ≤ ε_herm·(1 + ‖A‖_F‖B‖_F)``."""
    a, b = as_operator(a), as_operator(b)
    return fro(commutator(a, b)) <= tol.herm * (1.0 + fro(a) * fro(b))


def is_hermitian(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    m = as_operator(m)
    return fro(m - dagger(m)) <= tol.herm * (1.0 + fro(m))


def is_unitary(u, tol: Tolerances = DEFAULT_TOL) -> bool:
    u = as_operator(u)
    return fro(u @ dagger(u) - np.eye(u.shape[0])) <= tol.herm


def check_unitary(u, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    u = as_operator(u)
    if not is_unitary(u, tol):
        err = fro(u @ dagger(u) - np.eye(u.shape[0]))
        raise NotUnitary(f"‖uu† − I‖_F = {err:.3e}")
    return u


def basis_vector(dim: int, k: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[k] = 1.0
    return frozen(e)


# Pauli matrices and friends, used by examples, scenarios and tests.
I2 = frozen(np.eye(2))
SIGMA_X = frozen([[0, 1], [1, 0]])
SIGMA_Y = frozen([[0, -1j], [1j, 0]])
SIGMA_Z = frozen([[1, 0], [0, -1]])
HADAMARD = frozen(np.array([[1, 1], [1, -1]]) / np.sqrt(2))


# -- JSON encoding: complex numbers as [re, im] ---------------------------------

def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_vector(v) -> list[list[float]]:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def encode_matrix(m) -> list[list[list[float]]]:
    return [encode_vector(row) for row in np.asarray(m)]


def decode_complex(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in x
    ):
        return complex(x[0], x[1])
    raise InvalidInput(f"cannot decode complex number from {x!r}")


def decode_vector(data) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or not data:
        raise InvalidInput("vector must be a non-empty JSON array")
    return as_vector([decode_complex(x) for x in data])


def decode_matrix(data) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or not data:
        raise InvalidInput("matrix must be a non-empty JSON array of rows")
    rows = [decode_vector(r) for r in data]
    if len({len(r) for r in rows}) != 1:
        raise InvalidInput("matrix rows have unequal lengths")
    return as_operator(np.array(rows))
