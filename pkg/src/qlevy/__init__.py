"""Generating functionals and Lévy–Khintchine decompositions on SU_q(N) and U_q(N)."""

__version__ = "0.1.0"

from .algebra import AlgebraCtx, AlgElt, QCoeff, equals_exact, normal_form, parse_element, reduce
from .gauss import GaussParams, gaussian_functional, recover_params
from .hopf import Functional, conv_exp, counit, projP
from .repkit import MatRep, decompose, suq2_irrep
from .schurmann import counterexample_n3, hunt_decompose, psi_exact
from .uqn import UqContext, uq_hunt

__all__ = [
    "__version__", "AlgebraCtx", "AlgElt", "QCoeff", "equals_exact", "normal_form", "parse_element", "reduce",
    "GaussParams", "gaussian_functional", "recover_params", "Functional", "conv_exp", "counit", "projP",
    "MatRep", "decompose", "suq2_irrep", "counterexample_n3", "hunt_decompose", "psi_exact", "UqContext",
    "uq_hunt",
]
