import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from abent.entanglement import (
    amplitude_factorization,
    concurrence_M,
    find_complete_epr,
    is_ab_entangled,
    is_ab_independent,
    outcome_depends,
)
from abent.hilbert import commutes, is_unitary
from abent.sampling import (
    random_dichotomous_pair,
    random_epr_state,
    random_factorisable_state,
    random_product_state,
    random_state,
    random_unitary,
)
from abent.sweep import run_sweep

EXPECTED_CHECKS = {
    "factorization_iff_disentangled", "covariance_iff_entangled", "covariance_identity", "unitary_invariance", "dependence_outcome_symmetric", "maximal_iff_epr",
    "independent_iff_disentangled", "classical_independence", "classical_covariance", "classical_total_probability",
    "commuting_jpd_symmetry", "product_states_disentangled", "entangled_has_concurrence", "ftp_identity",
}

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 8)


def test_sampling_shapes(rng):
    for dim in (2, 5, 8):
        assert abs(np.linalg.norm(random_state(dim, rng)) - 1) <= 1e-12
        assert is_unitary(random_unitary(dim, rng))
        a, b = random_dichotomous_pair(dim, rng)
        assert commutes(a.op, b.op) and a.is_dichotomous and b.is_dichotomous
    psi = random_product_state((2, 3), rng)
    assert np.linalg.matrix_rank(psi.reshape(2, 3), tol=1e-10) == 1


def test_haar_unitary_first_moment(rng):
    # E[|u_00|^2] = 1/n for Haar unitaries
    n = 4
    mean = np.mean([abs(random_unitary(n, rng)[0, 0]) ** 2 for _ in range(4000)])
    assert abs(mean - 1 / n) < 0.02


def test_cover_all_cells_in_dim_4(rng):
    a, b = random_dichotomous_pair(4, rng, cover_all_cells=True)
    for ea in a.projectors:
        for eb in b.projectors:
            assert abs(np.trace(ea @ eb).real - 1) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_factorisable_states_are_disentangled(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = random_dichotomous_pair(dim, rng)
    psi = random_factorisable_state(a, b, rng)
    if amplitude_factorization(a, b, psi) is not None:
        assert not is_ab_entangled(a, b, psi)[0]


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(4, 8))
def test_epr_states_are_maximal(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = random_dichotomous_pair(dim, rng, cover_all_cells=True)
    psi = random_epr_state(a, b, rng)
    assert find_complete_epr(a, b, psi) is not None
    assert abs(concurrence_M(a, b, psi) - 2) <= 1e-9
    assert is_ab_entangled(a, b, psi)[0]


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_dependence_symmetry_and_independence(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = random_dichotomous_pair(dim, rng)
    psi = random_state(dim, rng)
    plus = outcome_depends(a, b, 1.0, 1.0, -1.0, psi)
    minus = outcome_depends(a, b, -1.0, 1.0, -1.0, psi)
    assert (plus is None) == (minus is None)
    assert is_ab_independent(a, b, psi) == (not is_ab_entangled(a, b, psi)[0])


def test_sweep_reports_every_check():
    result = run_sweep(24, (4, 5, 6, 8), seed=1)
    d = result.to_dict()
    assert d["ok"] and d["counterexamples"] == []
    assert set(d["checks"]) == EXPECTED_CHECKS
    for name, tally in d["checks"].items():
        assert tally["failed"] == 0, name


def test_sweep_is_deterministic():
    assert run_sweep(10, 4, seed=5).to_dict() == run_sweep(10, 4, seed=5).to_dict()


def test_sweep_single_qubit():
    d = run_sweep(1, 2, seed=0).to_dict()
    assert d["ok"]
    assert d["checks"]["product_states_disentangled"]["skipped"] == 1
