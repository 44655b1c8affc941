"""Exception hierarchy shared by all modules."""


class AbentError(Exception):
    """Base class for every error raised by this package."""

    code = "error"


class ZeroVector(AbentError):
    code = "zero_vector"


class DimensionMismatch(AbentError):
    code = "dimension_mismatch"


class NotHermitian(AbentError):
    code = "not_hermitian"


class EigensolverFailure(AbentError):
    code = "eigensolver_failure"


class InvalidObservable(AbentError):
    code = "invalid_observable"


class NonCommuting(AbentError):
    code = "non_commuting"


class SpectrumMismatch(AbentError):
    code = "spectrum_mismatch"


class ZeroProbabilityOutcome(AbentError):
    code = "zero_probability_outcome"


class ConditioningUndefined(AbentError):
    code = "conditioning_undefined"


class NotDichotomous(AbentError):
    code = "not_dichotomous"


class DegenerateJointBasis(AbentError):
    code = "degenerate_joint_basis"


class NotUnitary(AbentError):
    code = "not_unitary"


class NotOrthonormal(AbentError):
    code = "not_orthonormal"


class UnknownScenario(AbentError):
    code = "unknown_scenario"


class InvalidInput(AbentError):
    code = "invalid_input"


class InternalConsistencyError(AbentError):
    """Two independent evaluations of the same quantity disagree beyond rounding."""

    code = "internal_consistency"
