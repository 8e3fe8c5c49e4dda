"""Deterministic test batteries and the sampled generating-functional check."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from ..algebra.coeffs import QCoeff
from ..algebra.core import AlgebraCtx, AlgElt, GenSym
from .functionals import Functional, counit_exact, counit_word


@dataclass(frozen=True)
class K1Battery:
    """All centered words of degree <= max_degree over ``generators``.

    If ``count`` exceeds the number of centered words, seeded random rational
    combinations of three centered words are appended; if it is smaller the
    list is cut.  ``generators=None`` means every generator of the context.
    """

    max_degree: int = 2
    generators: Optional[Sequence[GenSym]] = None
    count: Optional[int] = None
    seed: int = 0

    def words(self, ctx: AlgebraCtx) -> List[tuple]:
        gens = self.generators if self.generators is not None else ctx.generators(starred=True)
        codes = [ctx.code(g) for g in gens]
        out = []
        for d in range(1, self.max_degree + 1):
            out.extend(itertools.product(codes, repeat=d))
        return out

    def elements(self, ctx: AlgebraCtx) -> List[AlgElt]:
        words = self.words(ctx)
        elts = [centered_word(ctx, w) for w in words]
        if self.count is None:
            return elts
        if self.count <= len(elts):
            return elts[: self.count]
        rng = random.Random(self.seed)
        extra = []
        while len(elts) + len(extra) < self.count:
            combo = ctx.zero()
            for w in rng.sample(words, min(3, len(words))):
                num = rng.choice([-3, -2, -1, 1, 2, 3])
                den = rng.choice([1, 2, 3, 4])
                combo = combo + centered_word(ctx, w).scale(QCoeff.const(Fraction(num, den)))
            if not combo.is_zero():
                extra.append(combo)
        return elts + extra


def centered_word(ctx: AlgebraCtx, w) -> AlgElt:
    w = tuple(w)
    e = ctx.word(w)
    return e - ctx.one() if counit_word(ctx, w) else e


def word_battery(ctx: AlgebraCtx, max_degree: int, generators=None) -> List[AlgElt]:
    """Plain (uncentered) words of degree <= max_degree, including 1."""
    gens = generators if generators is not None else ctx.generators(starred=True)
    codes = [ctx.code(g) for g in gens]
    out = [ctx.one()]
    for d in range(1, max_degree + 1):
        out.extend(ctx.word(w) for w in itertools.product(codes, repeat=d))
    return out


@dataclass
class GeneratingReport:
    psi_one: complex
    hermitian_defect: float
    gram_min_eig: float
    gram_size: int
    tol: float
    passed: bool = field(default=False)

    def as_dict(self) -> dict:
        return {
            "psi_one_abs": abs(self.psi_one),
            "hermitian_defect": self.hermitian_defect,
            "gram_min_eig": self.gram_min_eig,
            "gram_size": self.gram_size,
            "tol": self.tol,
            "passed": self.passed,
        }


def gram_matrix(psi: Functional, elts: Sequence[AlgElt]) -> np.ndarray:
    """``[psi(a_i^* a_j)]`` as a complex matrix."""
    n = len(elts)
    G = np.zeros((n, n), dtype=complex)
    adj = [a.adjoint() for a in elts]
    for i in range(n):
        for j in range(i, n):
            v = psi(adj[i] * elts[j])
            G[i, j] = v
            if i != j:
                G[j, i] = psi(adj[j] * elts[i])
    return G


def min_hermitian_eig(G: np.ndarray) -> float:
    if G.size == 0:
        return 0.0
    H = 0.5 * (G + G.conj().T)
    return float(np.linalg.eigvalsh(H).min())


def is_generating(psi: Functional, battery: Sequence[AlgElt], tol: float = 1e-8) -> GeneratingReport:
    """Sampled check of hermitian + 0-normalized + conditionally positive."""
    ctx = psi.ctx
    psi1 = psi(ctx.one())
    herm = 0.0
    for a in battery:
        herm = max(herm, abs(psi(a.adjoint()) - np.conj(psi(a))))
    G = gram_matrix(psi, battery)
    herm = max(herm, float(np.abs(G - G.conj().T).max()) if G.size else 0.0)
    mineig = min_hermitian_eig(G)
    ok = abs(psi1) <= tol and herm <= tol and mineig >= -tol
    return GeneratingReport(psi1, herm, mineig, len(battery), tol, ok)


def triple_identity_defect(psi: Functional, eta, elts: Sequence[AlgElt]) -> float:
    """max |psi(a*b) - psi(a*)eps(b) - eps(a*)psi(b) - <eta(a), eta(b)>| over all pairs."""
    q0 = psi.q0
    vals = [np.asarray(eta(a)) for a in elts]
    eps = [counit_exact(a).evaluate(q0) for a in elts]
    adj = [a.adjoint() for a in elts]
    psi_adj = [psi(x) for x in adj]
    psi_b = [psi(b) for b in elts]
    worst = 0.0
    for i in range(len(elts)):
        for j, b in enumerate(elts):
            lhs = psi(adj[i] * b) - psi_adj[i] * eps[j] - np.conj(eps[i]) * psi_b[j]
            worst = max(worst, abs(lhs - np.vdot(vals[i], vals[j])))
    return worst


__all__ = ["K1Battery", "triple_identity_defect", "centered_word", "word_battery", "GeneratingReport", "gram_matrix",
           "min_hermitian_eig", "is_generating"]
