"""Fixtures shared across the test modules."""
import numpy as np
import pytest

from abent.entanglement import embed_local
from abent.spectral import spectral_decompose

from oracles import SX, SZ


@pytest.fixture
def sz():
    return spectral_decompose(SZ)


@pytest.fixture
def sx():
    return spectral_decompose(SX)


@pytest.fixture
def zz():
    """``(σz⊗I, I⊗σz)``."""
    z = spectral_decompose(SZ)
    return embed_local(z, z)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
