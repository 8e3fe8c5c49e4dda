"""Assembly of ``psi = psi_G + sum_n psi_n`` along the subgroup chain."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..algebra.core import AlgebraCtx
from ..gauss import GaussParams, gaussian_functional
from ..hopf.functionals import Functional, zero_functional
from ..hopf.morphisms import lives_on, morphism_apply, s_chain
from ..repkit.decomp import decompose
from ..repkit.reps import MatRep
from .cocycle import Cocycle, cocycle_from_eta_nn, lift_cocycle
from .psi import ExactPsi, PLimitPsi


class HuntError(RuntimeError):
    pass


@dataclass
class HuntLevel:
    n: int
    dim: int
    rep: MatRep           # compressed level representation over SU_q(N)
    tilde_rep: MatRep     # its [1,n] block over SU_q(n)
    eta_nn: np.ndarray    # eta_n(u[n,n]) in level coordinates
    tilde_cocycle: Cocycle
    cocycle: Cocycle      # tilde_cocycle ∘ s_{n,N}
    psi: Functional       # psi_n on SU_q(N)
    psi_tilde: Functional
    living_residual: float
    injectivity: float
    irreductible: bool
    plimit: Optional[PLimitPsi] = None

    def as_dict(self) -> dict:
        return {"n": self.n, "dim": self.dim, "living_residual": self.living_residual,
                "injectivity": self.injectivity, "irreductible": self.irreductible,
                "eta_nn_norm": float(np.linalg.norm(self.eta_nn))}


@dataclass
class HuntDecomposition:
    ctx: AlgebraCtx
    gauss: GaussParams
    levels: List[HuntLevel]
    psi_gauss: Functional
    psi: Functional
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def psi_jump(self) -> Functional:
        out = zero_functional(self.ctx)
        for lv in self.levels:
            out = out + lv.psi
        return out

    def as_dict(self) -> dict:
        return {"N": self.ctx.N, "gauss": self.gauss.as_dict(),
                "levels": [lv.as_dict() for lv in self.levels], "diagnostics": self.diagnostics}


def pullback_functional(psi_tilde: Functional, n: int, N: int, ctx: AlgebraCtx) -> Functional:
    s = s_chain(n, N)

    def fn(w):
        return psi_tilde(morphism_apply(s, ctx.word(w)))

    return Functional(ctx, fn, {}, f"{psi_tilde.description}∘s_{n},{N}", psi_tilde.q0)


def hunt_decompose(pi: Optional[MatRep], eta_spec: Optional[Dict[int, np.ndarray]], gauss: GaussParams,
                   ctx: Optional[AlgebraCtx] = None, tol: float = 1e-8, method: str = "closed_form",
                   check_living: bool = True, schedule: Optional[Sequence[float]] = None) -> HuntDecomposition:
    """Split a representation along the chain and attach per-level cocycles.

    ``eta_spec`` maps a level n to ``eta(u[n,n])`` given in the ambient
    coordinates of ``pi``; only its component in H_n is used (the part in
    other levels is reported as ``eta_spec_offlevel``).
    """
    if pi is None and ctx is None:
        raise HuntError("need a representation or a context")
    ctx = ctx or pi.ctx
    N = ctx.N
    psi_g = gaussian_functional(ctx, gauss)
    eta_spec = eta_spec or {}
    levels: List[HuntLevel] = []
    diag: Dict[str, object] = {}
    if pi is not None and pi.dim:
        dec = decompose(pi, tol)
        diag["decomposition"] = dec.as_dict()
        off = {}
        for n, v in sorted(eta_spec.items()):
            lv = dec.level(n)
            if lv is None or n < 2:
                raise HuntError(f"no level {n} in the decomposition")
            v = np.asarray(v, dtype=complex).reshape(-1)
            if v.shape[0] != pi.dim:
                raise HuntError(f"eta vector for level {n} has length {v.shape[0]}, expected {pi.dim}")
            coords = lv.basis.conj().T @ v
            off[str(n)] = float(np.linalg.norm(v - lv.basis @ coords))
            if lv.dim == 0:
                continue
            tilde = lv.rep.restrict(n)
            sub = decompose(tilde, tol)
            irreductible = sub.dims().get(n, 0) == lv.dim
            tcoc = cocycle_from_eta_nn(tilde, coords, method, tol, schedule)
            coc = lift_cocycle(tcoc, lv.rep, n)
            psi_tilde = ExactPsi(tcoc).functional(f"psi~_{n}")
            psi_n = ExactPsi(coc).functional(f"psi_{n}")
            living = lives_on(psi_n, n, tol).residual if (check_living and n < N) else 0.0
            plim = PLimitPsi(tilde, coords, schedule)
            levels.append(HuntLevel(n, lv.dim, lv.rep, tilde, coords, tcoc, coc, psi_n, psi_tilde,
                                    living, lv.injectivity, irreductible, plim))
        diag["eta_spec_offlevel"] = off
    total = psi_g
    for lv in levels:
        total = total + lv.psi
    total.description = "psi_G + " + " + ".join(f"psi_{lv.n}" for lv in levels) if levels else "psi_G"
    return HuntDecomposition(ctx, gauss, levels, psi_g, total, diag)


def pullback_agreement(level: HuntLevel, words) -> float:
    """max |psi_n(w) - (psi~_n ∘ s_{n,N})(w)| over words."""
    ctx = level.rep.ctx
    if level.n == ctx.N:
        return 0.0
    pb = pullback_functional(level.psi_tilde, level.n, ctx.N, ctx)
    return max((abs(level.psi.word(w) - pb.word(w)) for w in words), default=0.0)


__all__ = ["HuntDecomposition", "HuntLevel", "HuntError", "hunt_decompose", "pullback_agreement",
           "pullback_functional"]
