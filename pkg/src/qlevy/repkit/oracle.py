"""Evaluation oracle: separate SU_q(N) elements by truncated representations."""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional

import numpy as np

from ..algebra.core import AlgElt
from ..hopf.functionals import ctx_q0
from .reps import MatRep, _residual_norm, block_embed, conv_product, suq2_irrep, torus_char_rep

WITNESS_RTOL = 1e-8


@lru_cache(maxsize=32)
def _oracle_reps(N: int, q0, M: int) -> tuple:
    reps: List[MatRep] = []
    rng = np.random.default_rng(12345)
    for _ in range(2):
        reps.append(torus_char_rep(rng.uniform(-3, 3, N - 1), "SUq", q0))
    if N >= 2:
        rho = suq2_irrep(M, q0)
        small = suq2_irrep(min(M, 8), q0)
        if N == 2:
            reps.extend([rho, conv_product(small, small)])
        else:
            reps.extend(block_embed(rho, N, m) for m in range(N - 1))
            reps.extend(conv_product(block_embed(small, N, m), block_embed(small, N, m + 1))
                        for m in range(N - 2))
    return tuple(reps)


def evaluation_witness(a: AlgElt, rtol: float = WITNESS_RTOL) -> Optional[dict]:
    """A representation on which ``a`` is visibly nonzero, or None.

    Values are compressed to the interior window of the element's degree, so
    a witness is never a truncation artefact.
    """
    ctx = a.ctx
    if ctx.variant != "SUq":
        raise ValueError("the evaluation oracle targets SU_q(N)")
    q0 = ctx_q0(ctx)
    d = a.degree()
    M = max(16, d + 8)
    scale = max((abs(c.evaluate(q0)) for c in a.terms.values()), default=0.0)
    for pi in _oracle_reps(ctx.N, q0, M):
        R = pi.evaluate(a, sparse=True)
        r = _residual_norm(R, pi.interior_mask(max(d, 1)))
        if r > rtol * max(1.0, scale):
            return {"representation": pi.tag, "residual": r}
    return None


__all__ = ["evaluation_witness"]
