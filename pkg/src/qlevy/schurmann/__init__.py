"""Schürmann triples: cocycles, generating functionals and their assembly along the chain."""

from .cocycle import (Cocycle, CocycleError, PLimitTrace, coboundary, coboundary_vectors, cocycle_from_eta_nn,
                      cocycle_identity_defect, lift_cocycle, p_schedule, richardson, smallest_singular_value,
                      zero_cocycle)
from .counterexample import (CounterexampleReport, build_pi, counterexample_n3, oracle_norm, oracle_ratio,
                             recursion_coefficients)
from .gns import GNSData, GNSError, IsometryReport, gns_build, gns_isometry, gns_words
from .hunt import (HuntDecomposition, HuntError, HuntLevel, hunt_decompose, pullback_agreement,
                   pullback_functional)
from .psi import (ExactPsi, PLimitPsi, PLimitResult, SplitError, TripleReport, coboundary_functional, h_pi_norm,
                  psi_exact, psi_exact_functional, psi_plimit, split_K2, split_K2_products, triple_check)

__all__ = [
    "Cocycle", "CocycleError", "PLimitTrace", "coboundary", "coboundary_vectors", "cocycle_from_eta_nn",
    "cocycle_identity_defect", "lift_cocycle", "p_schedule", "richardson", "smallest_singular_value",
    "zero_cocycle", "CounterexampleReport", "build_pi", "counterexample_n3", "oracle_norm", "oracle_ratio",
    "recursion_coefficients", "GNSData", "GNSError", "IsometryReport", "gns_build", "gns_isometry",
    "gns_words", "HuntDecomposition", "HuntError", "HuntLevel", "hunt_decompose", "pullback_agreement", "pullback_functional",
    "ExactPsi", "PLimitPsi", "PLimitResult", "SplitError", "TripleReport", "coboundary_functional",
    "h_pi_norm", "psi_exact", "psi_exact_functional", "psi_plimit", "split_K2", "split_K2_products",
    "triple_check",
]
