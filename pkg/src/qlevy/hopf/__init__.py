"""Bialgebra structure maps, functionals, convolution and subgroup morphisms."""

from .battery import (K1Battery, GeneratingReport, centered_word, gram_matrix, is_generating, min_hermitian_eig,
                      triple_identity_defect, word_battery)
from .coalgebra import (CapExceeded, ConvergenceError, conv_exp, conv_exp_functional, conv_exp_word,
                        conv_power_word, convolve, coproduct_iter, coproduct_word, semigroup_defect)
from .functionals import (BasisExtension, Functional, basis_extension, centered_letter, chart_labels,
                          chart_vector, counit, counit_exact, counit_functional, ctx_q0, d_element,
                          drift_functional, eps_prime, eps_prime_exact, eps_second, eps_second_exact,
                          eps_theta, projP, torus_exponents, zero_functional)
from .morphisms import (LivingReport, Morphism, TorusCtx, TorusElt, compose, identity_morphism,
                        kernel_generators, lives_on, morphism_apply, s_breve, s_breve_chain, s_chain,
                        s_morphism, t_breve, t_morphism, torus_morphism, verify_morphism)

__all__ = [
    "K1Battery", "GeneratingReport", "centered_word", "gram_matrix", "is_generating", "min_hermitian_eig",
    "triple_identity_defect", "word_battery", "CapExceeded", "ConvergenceError", "conv_exp",
    "conv_exp_functional", "conv_exp_word", "conv_power_word", "convolve", "coproduct_iter", "coproduct_word",
    "semigroup_defect",
    "BasisExtension", "Functional", "basis_extension", "centered_letter", "chart_labels", "chart_vector",
    "counit", "counit_exact", "counit_functional", "ctx_q0", "d_element", "drift_functional", "eps_prime",
    "eps_prime_exact", "eps_second", "eps_second_exact", "eps_theta", "projP", "torus_exponents",
    "zero_functional", "LivingReport", "Morphism", "TorusCtx", "TorusElt", "compose", "identity_morphism",
    "kernel_generators", "lives_on", "morphism_apply", "s_breve", "s_breve_chain", "s_chain", "s_morphism",
    "t_breve", "t_morphism", "torus_morphism", "verify_morphism",
]
