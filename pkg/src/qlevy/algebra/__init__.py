"""Exact symbolic layer for the coordinate algebras of SU_q(N) and U_q(N)."""

from .coeffs import I_UNIT, ONE, Q, QINV, ZERO, QCoeff, q_number
from .core import AlgebraCtx, AlgElt, ContextMismatch, GenSym, add, adjoint, mul
from .determinants import (adjoint_expand, inversions, quantum_determinant, quantum_minor,
                           twisted_determinant)
from .relations import Relation, relation_catalog, relation_catalog_named
from .rewrite import (DIFFERENT, EQUAL, UNDECIDED, check_local_confluence, equals_exact,
                      normal_form, normal_form_random, reduce)
from .syntax import ParseError, format_element, parse_element

__all__ = [
    "QCoeff", "ONE", "ZERO", "Q", "QINV", "I_UNIT", "q_number",
    "AlgebraCtx", "AlgElt", "GenSym", "ContextMismatch", "mul", "add", "adjoint",
    "adjoint_expand", "quantum_determinant", "quantum_minor", "twisted_determinant", "inversions",
    "Relation", "relation_catalog", "relation_catalog_named",
    "normal_form", "normal_form_random", "reduce", "equals_exact", "check_local_confluence",
    "EQUAL", "DIFFERENT", "UNDECIDED",
    "parse_element", "format_element", "ParseError",
]
