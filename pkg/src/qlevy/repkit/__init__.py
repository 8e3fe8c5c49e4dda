"""Numerical *-representations on truncated Hilbert spaces."""

from .decomp import (KERNEL_RTOL, DecompositionError, DecompositionResult, KeyLemmaReport, Level, decompose,
                     default_p_schedule, engineered_contraction, key_lemma_limit, maximal_gaussian_subspace,
                     subspace_distance)
from .export import read_binary, read_csv, write_binary, write_csv
from .oracle import evaluation_witness
from .reps import (DIM_CAP, MatRep, RepError, ResidualReport, block_embed, contraction_report, conv_product,
                   corner_defect, direct_sum, eigen_one_symmetry, is_contraction, null_space_svd, operator_norm,
                   relation_residuals, suq2_irrep, torus_char_rep, trivial_rep)

__all__ = [
    "MatRep", "RepError", "ResidualReport", "suq2_irrep", "torus_char_rep", "trivial_rep", "block_embed",
    "conv_product", "direct_sum", "operator_norm", "contraction_report", "is_contraction",
    "relation_residuals", "corner_defect", "eigen_one_symmetry", "null_space_svd", "DIM_CAP",
    "decompose", "DecompositionResult", "DecompositionError", "Level", "maximal_gaussian_subspace",
    "subspace_distance", "key_lemma_limit", "KeyLemmaReport", "default_p_schedule",
    "engineered_contraction", "KERNEL_RTOL", "write_csv", "read_csv", "write_binary", "read_binary",
    "evaluation_witness",
]
