"""Quantumness witnesses: observables whose negative means rule out classical models."""
from .operators import (
    EigenDecomposition,
    NotHermitianError,
    QwitError,
    anticommutator,
    as_hermitian,
    commutator_i,
    eig_hermitian,
    is_psd,
    kron,
    leq,
)
from .states import bloch_decompose, expectation, maximally_mixed, pure_from_bloch
from .witnesses import (
    GeneralizedWitnessSpec,
    NoWitnessExists,
    PreconditionError,
    WitnessReport,
    build_C,
    build_V,
    check_generalized,
    construct_for_state,
)
from .optimal_qubit import optimal_pair, optimal_witness

__all__ = [
    "EigenDecomposition", "NotHermitianError", "QwitError", "anticommutator", "as_hermitian",
    "commutator_i", "eig_hermitian", "is_psd", "kron", "leq",
    "bloch_decompose", "expectation", "maximally_mixed", "pure_from_bloch",
    "GeneralizedWitnessSpec", "NoWitnessExists", "PreconditionError", "WitnessReport",
    "build_C", "build_V", "check_generalized", "construct_for_state",
    "optimal_pair", "optimal_witness",
]
__version__ = "0.1.0"
