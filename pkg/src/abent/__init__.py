"""Conditional-probability entanglement of pairs of quantum observables."""
from .classical import FiniteProbabilitySpace, RandomVariable, from_commuting_pair
from .entanglement import (
    DependenceWitness,
    EntanglementReport,
    EprSpec,
    FactorizationWitness,
    amplitude_factorization,
    analyze,
    concurrence_C,
    concurrence_M,
    covariance_identity,
    find_complete_epr,
    is_ab_entangled,
    is_ab_independent,
    is_epr_entangled,
    is_max_entangled,
    is_pcc,
    outcome_depends,
    singlet,
    two_qubit_renormalized_concurrence,
    two_qubit_standard_concurrence,
)
from .errors import AbentError
from .hilbert import DEFAULT_TOL, Tolerances, normalize, tensor
from .qprob import (
    born_probability,
    conditional_probability,
    conditional_table,
    covariance,
    ftp_decomposition,
    luders_update,
    sequential_jpd,
)
from .spectral import JointDecomposition, Observable, joint_decompose, spectral_decompose

__version__ = "0.1.0"

__all__ = [
    "AbentError",
    "DEFAULT_TOL",
    "DependenceWitness",
    "EntanglementReport",
    "EprSpec",
    "FactorizationWitness",
    "FiniteProbabilitySpace",
    "JointDecomposition",
    "Observable",
    "RandomVariable",
    "Tolerances",
    "amplitude_factorization",
    "analyze",
    "born_probability",
    "concurrence_C",
    "concurrence_M",
    "conditional_probability",
    "conditional_table",
    "covariance",
    "covariance_identity",
    "find_complete_epr",
    "from_commuting_pair",
    "ftp_decomposition",
    "is_ab_entangled",
    "is_ab_independent",
    "is_epr_entangled",
    "is_max_entangled",
    "is_pcc",
    "joint_decompose",
    "luders_update",
    "normalize",
    "outcome_depends",
    "sequential_jpd",
    "singlet",
    "spectral_decompose",
    "tensor",
    "two_qubit_renormalized_concurrence",
    "two_qubit_standard_concurrence",
]
