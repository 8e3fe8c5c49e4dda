"""The SU_q(3) representation whose corner value admits no cocycle.

``pi = rho_1 ⋆ rho_2`` with rho_1, rho_2 the irreducible SU_q(2)
representation placed on the [1,2] and [2,3] blocks.  Then
``pi(u[3,3]) = id ⊗ alpha^*`` and ``pi(u[1,1]) = alpha ⊗ id``.  For
``eta(u[3,3]) = e_0 ⊗ e_0`` the candidates ``eta_p(u[1,1])`` obtained from
``f_p = -(I - p pi(u[3,3]))^{-1} eta(u[3,3])`` are
``e_0 ⊗ sum_k p^k x_k e_k`` with ``x_0 = 1``, ``x_k = sqrt(1 - q^{2k}) x_{k-1}``,
so their norms grow without bound as p -> 1 and M -> infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..repkit.reps import MatRep, block_embed, conv_product, suq2_irrep
from .cocycle import p_schedule, richardson


def default_schedule(m_max: int = 12) -> List[float]:
    return [1.0 - 2.0 ** (-m) for m in range(1, m_max + 1)]


def recursion_coefficients(K: int, q: float) -> np.ndarray:
    """x_0 = 1, x_k = sqrt(1 - q^{2k}) x_{k-1} for k < K."""
    x = np.ones(K)
    for k in range(1, K):
        x[k] = np.sqrt(1.0 - q ** (2 * k)) * x[k - 1]
    return x


def oracle_norm(p: float, M: int, q: float) -> float:
    """Predicted ||eta_p(u[1,1])|| on the M-truncation."""
    x = recursion_coefficients(M, q)
    return float(np.sqrt(np.sum((p ** np.arange(M) * x) ** 2)))


def oracle_ratio(p_lo: float, p_hi: float, M: int, q: float) -> float:
    return oracle_norm(p_hi, M, q) / oracle_norm(p_lo, M, q)


@dataclass
class CounterexampleReport:
    M: int
    q0: float
    p: List[float]
    norms: List[float]
    oracle_norms: List[float]
    monotone: bool
    partial_sums: List[float]
    product_limit: float
    relation_residual: float
    verdict: str
    control_steps: List[float] = field(default_factory=list)
    control_verdict: str = ""
    ratios: Dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def build_pi(M: int, q0) -> MatRep:
    rho = suq2_irrep(M, q0)
    return conv_product(block_embed(rho, 3, 0), block_embed(rho, 3, 1))


def _candidates(pi: MatRep, eta33: np.ndarray, ps: Sequence[float]):
    I = sp.identity(pi.dim, dtype=complex, format="csc")
    A = pi.letter_matrix(8).tocsc()
    B = pi.letter_matrix(0)
    out = []
    for p in ps:
        f = -splu((I - p * A).tocsc()).solve(eta33)
        out.append((f, B @ f - f, A @ f - f))
    return out


def counterexample_n3(M: int = 48, q0=Fraction(1, 2), schedule: Optional[Sequence[float]] = None,
                      p_pair=(1.0 - 2.0 ** -6, 1.0 - 2.0 ** -12),
                      control_tol: float = 1e-6) -> CounterexampleReport:
    if M < 16:
        raise ValueError("M must be at least 16")
    q = float(Fraction(q0))
    ps = list(schedule) if schedule is not None else default_schedule()
    # the recursion oracle is evaluated before the representation is built
    x = recursion_coefficients(2 * M, q)
    oracle = [oracle_norm(p, M, q) for p in ps]
    ratio_oracle = oracle_ratio(p_pair[0], p_pair[1], M, q)
    partial = np.cumsum(x ** 2)
    pi = build_pi(M, q0)
    e = np.zeros(pi.dim, dtype=complex)
    e[0] = 1.0
    cands = _candidates(pi, e, ps)
    norms = [float(np.linalg.norm(v11)) for _, v11, _ in cands]
    # (id ⊗ (alpha^* - 1)) eta(u11) = (rho(alpha - 1) ⊗ id) eta(u33)
    A = pi.letter_matrix(8)
    B = pi.letter_matrix(0)
    rel = max(float(np.linalg.norm((A @ v11 - v11) - (B @ v33 - v33))) for _, v11, v33 in cands)
    monotone = all(b > a for a, b in zip(norms, norms[1:]))
    pair = _candidates(pi, e, p_pair)
    ratio_obs = float(np.linalg.norm(pair[1][1]) / np.linalg.norm(pair[0][1]))
    # partial sums at M and 2M grow linearly: the per-term limit stays away from 0
    grows = partial[2 * M - 1] - partial[M - 1] > 0.5 * M * x[-1] ** 2 and x[-1] ** 2 > 1e-3
    verdict = "divergent" if (monotone and grows) else "inconclusive"
    # control: eta(u33) in the range of pi(u33) - I converges
    g = np.zeros(pi.dim, dtype=complex)
    g[0] = 1.0
    ctrl = (A @ g) - g
    cvals = np.array([v11 for _, v11, _ in _candidates(pi, ctrl, p_schedule())])
    ext = richardson(cvals)
    steps = [float(np.linalg.norm(b - a)) for a, b in zip(ext, ext[1:])]
    control = "convergent" if steps and steps[-1] < control_tol * max(1.0, float(np.linalg.norm(ext[-1]))) \
        else "inconclusive"
    return CounterexampleReport(
        M=M, q0=q, p=ps, norms=norms, oracle_norms=oracle, monotone=monotone,
        partial_sums=[float(partial[M - 1]), float(partial[2 * M - 1])],
        product_limit=float(x[-1]), relation_residual=rel, verdict=verdict,
        control_steps=steps, control_verdict=control,
        ratios={"observed": ratio_obs, "oracle": ratio_oracle},
    )


__all__ = ["counterexample_n3", "CounterexampleReport", "recursion_coefficients", "oracle_norm",
           "oracle_ratio", "build_pi", "default_schedule"]
