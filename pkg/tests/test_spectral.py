import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abent.errors import DimensionMismatch, InvalidObservable, NonCommuting, NotDichotomous, NotHermitian, SpectrumMismatch
from abent.sampling import random_hermitian, random_state
from abent.spectral import Observable, joint_decompose, require_dichotomous, spectral_decompose

from oracles import KET0, PLUS, SINGLET, SX, SZ, lagrange_projector

DIM3_A = np.diag([1.0, 1.0, -1.0])
DIM3_B = np.diag([1.0, -1.0, -1.0])
DIM3_PSI = np.ones(3) / np.sqrt(3)


def test_decompose_sigma_z():
    obs = spectral_decompose(SZ)
    assert obs.values == (1.0, -1.0)
    assert np.allclose(obs.projector(1), np.outer(KET0, KET0))
    assert np.allclose(obs.projector(-1), np.diag([0, 1]))


def test_decompose_sigma_x():
    obs = spectral_decompose(SX)
    minus = np.array([1, -1]) / np.sqrt(2)
    assert obs.values == (1.0, -1.0)
    assert np.allclose(obs.projector(1), np.outer(PLUS, PLUS.conj()))
    assert np.allclose(obs.projector(-1), np.outer(minus, minus))


def test_decompose_degenerate_diagonal():
    obs = spectral_decompose(DIM3_A)
    assert obs.values == (1.0, -1.0)
    assert np.allclose(obs.projector(1), np.diag([1, 1, 0]))
    assert np.allclose(obs.projector(-1), np.diag([0, 0, 1]))


def test_clustering_merges_near_eigenvalues():
    obs = spectral_decompose(np.diag([1.0, 1.0 + 1e-9, -1.0]))
    assert len(obs.values) == 2
    assert np.isclose(obs.values[0], 1.0 + 5e-10, atol=1e-12)
    split = spectral_decompose(np.diag([1.0, 1.0 + 1e-6, -1.0]))
    assert len(split.values) == 3


def test_values_descend_and_index():
    obs = spectral_decompose(np.diag([-2.0, 3.0, 0.5]))
    assert obs.values == (3.0, 0.5, -2.0)
    assert obs.index(0.5) == 1
    with pytest.raises(SpectrumMismatch):
        obs.index(1.0)


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        spectral_decompose(np.array([[0, 1], [0, 0]]))


def test_from_spectrum_validates():
    obs = Observable.from_spectrum([-1, 1], [np.diag([0, 1]), np.diag([1, 0])])
    assert obs.values == (1.0, -1.0)
    assert np.allclose(obs.op, SZ)
    with pytest.raises(InvalidObservable):
        Observable.from_spectrum([1, -1], [np.diag([1, 0]), np.diag([1, 0])])
    with pytest.raises(InvalidObservable):
        Observable.from_spectrum([1, -1], [np.diag([1, 0]), np.diag([0, 0])])
    with pytest.raises(InvalidObservable):
        Observable.from_spectrum([1, 1], [np.diag([1, 0]), np.diag([0, 1])])
    with pytest.raises(DimensionMismatch):
        Observable.from_spectrum([1, -1], [np.diag([1, 0]), np.diag([0, 0, 1])])


def test_require_dichotomous():
    require_dichotomous(spectral_decompose(SZ))
    with pytest.raises(NotDichotomous):
        require_dichotomous(spectral_decompose(np.diag([1.0, 0.0, -1.0])))


def test_projectors_match_lagrange_oracle(rng):
    for dim in (2, 3, 5, 8):
        h = random_hermitian(dim, rng)
        obs = spectral_decompose(h)
        for v, e in zip(obs.values, obs.projectors):
            assert np.allclose(e, lagrange_projector(h, obs.values, v), atol=1e-8)


def test_joint_singlet(zz):
    a, b = zz
    c = joint_decompose(a, b, SINGLET).amplitudes()
    assert np.allclose(c, [[0, 1 / np.sqrt(2)], [1 / np.sqrt(2), 0]], atol=1e-12)


def test_joint_eigenstate(sz):
    dec = joint_decompose(sz, sz, KET0)
    assert np.allclose(dec.amplitudes(), [[1, 0], [0, 0]])
    assert dec.rank(1.0, -1.0) == 0


def test_joint_dim3_empty_cell():
    a, b = spectral_decompose(DIM3_A), spectral_decompose(DIM3_B)
    dec = joint_decompose(a, b, DIM3_PSI)
    s = 1 / np.sqrt(3)
    assert np.allclose(dec.amplitudes(), [[s, s], [0, s]], atol=1e-12)
    assert (-1.0, 1.0) in dec.cells
    assert dec.rank(-1.0, 1.0) == 0


def test_joint_errors(sz, sx, zz):
    with pytest.raises(NonCommuting):
        joint_decompose(sz, sx, KET0)
    with pytest.raises(DimensionMismatch):
        joint_decompose(zz[0], zz[1], KET0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_random_hermitian_reconstruction(dim, seed):
    rng = np.random.default_rng(seed)
    h = random_hermitian(dim, rng)
    obs = spectral_decompose(h)
    assert np.linalg.norm(sum(v * e for v, e in zip(obs.values, obs.projectors)) - h) <= 1e-10 * (1 + np.linalg.norm(h))
    assert np.linalg.norm(sum(obs.projectors) - np.eye(dim)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 8), st.integers(0, 2**32 - 1))
def test_joint_decomposition_of_polynomial_pair(dim, seed):
    # two functions of one Hermitian matrix always commute
    rng = np.random.default_rng(seed)
    h = random_hermitian(dim, rng)
    w, v = np.linalg.eigh(h)
    fa = np.where(w > np.median(w), 1.0, -1.0)
    fb = np.round(np.sin(3 * w) * 2)
    a = spectral_decompose(v @ np.diag(fa) @ v.conj().T)
    b = spectral_decompose(v @ np.diag(fb) @ v.conj().T)
    psi = random_state(dim, rng)
    dec = joint_decompose(a, b, psi)
    comps = [cell.component for cell in dec.cells.values()]
    assert np.linalg.norm(sum(comps) - psi) <= 1e-10
    for i, x in enumerate(comps):
        for y in comps[i + 1:]:
            assert abs(np.vdot(x, y)) <= 1e-10
    c = dec.amplitudes()
    assert abs((c ** 2).sum() - 1) <= 1e-10
    for i, ea in enumerate(a.projectors):
        assert abs((c[i] ** 2).sum() - np.linalg.norm(ea @ psi) ** 2) <= 1e-9
