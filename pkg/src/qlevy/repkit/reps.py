"""Truncated *-representations as sparse matrix assignments.

Every basis vector carries a *height*: the number of index steps it can take
before the truncation boundary is reached (``np.inf`` for exact,
finite-dimensional representations).  A product of ``d`` generator images,
compressed to the basis vectors of height ``>= ceil(d/2)``, coincides with
the untruncated operator, because each generator moves the index by at most
one step.  That compressed window is the *interior* used for residual checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

from ..algebra.core import AlgebraCtx, AlgElt, Word
from ..algebra.relations import relation_catalog_named
from ..hopf.functionals import ctx_q0

DIM_CAP = 4096
CONTRACTION_TOL = 1e-12


class RepError(ValueError):
    pass


def _csr(A) -> sp.csr_matrix:
    if sp.issparse(A):
        return sp.csr_matrix(A, dtype=complex)
    return sp.csr_matrix(np.asarray(A, dtype=complex))


@dataclass
class MatRep:
    """Images of the unstarred generators (and ``Dinv`` for U_q) as sparse matrices.

    Starred generators map to conjugate transposes.  In SU_q contexts ``Dinv``
    is never stored; it is the identity.
    """

    ctx: AlgebraCtx
    mats: Dict[int, sp.csr_matrix]
    heights: np.ndarray
    tag: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.mats = {c: _csr(A) for c, A in self.mats.items()}
        self.heights = np.asarray(self.heights, dtype=float)
        self._letters: Dict[int, sp.csr_matrix] = {}
        for c, A in self.mats.items():
            if A.shape != (self.dim, self.dim):
                raise RepError(f"generator {self.ctx.sym(c)} has shape {A.shape}, expected {self.dim}")

    @property
    def dim(self) -> int:
        return len(self.heights)

    @property
    def q0(self) -> Fraction:
        return ctx_q0(self.ctx)

    @property
    def interior_dim(self) -> int:
        return int(np.count_nonzero(self.heights >= 1))

    def interior_mask(self, degree: int = 2) -> np.ndarray:
        return self.heights >= math.ceil(degree / 2)

    def letter_matrix(self, code: int) -> sp.csr_matrix:
        hit = self._letters.get(code)
        if hit is not None:
            return hit
        ctx = self.ctx
        if code in self.mats:
            A = self.mats[code]
        elif ctx.is_starred(code):
            A = self.letter_matrix(ctx.star_code(code)).conj().T.tocsr()
        elif code >= 2 * ctx.N * ctx.N and ctx.variant != "Uq":
            A = sp.identity(self.dim, dtype=complex, format="csr")
        else:
            raise RepError(f"no image for generator {ctx.sym(code)}")
        self._letters[code] = A
        return A

    def generator_matrix(self, code: int) -> np.ndarray:
        """Dense image of a generator (letter code)."""
        return self.letter_matrix(code).toarray()

    def word_matrix(self, w: Word) -> sp.csr_matrix:
        out = sp.identity(self.dim, dtype=complex, format="csr")
        for x in w:
            out = out @ self.letter_matrix(x)
        return out

    def evaluate(self, a: AlgElt, sparse: bool = False):
        """``pi(a)`` with q specialized exactly to q0 and then to floats."""
        if a.ctx.N != self.ctx.N:
            raise RepError("context mismatch")
        q0 = self.q0
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for w, c in a.terms.items():
            out = out + c.evaluate(q0) * self.word_matrix(w)
        return out if sparse else out.toarray()

    def apply(self, a: AlgElt, x: np.ndarray) -> np.ndarray:
        """``pi(a) x`` by right-to-left matrix-vector products."""
        q0 = self.q0
        x = np.asarray(x, dtype=complex)
        out = np.zeros_like(x)
        for w, c in a.terms.items():
            y = x
            for code in reversed(w):
                y = self.letter_matrix(code) @ y
            out = out + c.evaluate(q0) * y
        return out

    def apply_word(self, w: Word, x: np.ndarray) -> np.ndarray:
        y = np.asarray(x, dtype=complex)
        for code in reversed(w):
            y = self.letter_matrix(code) @ y
        return y

    def base_codes(self) -> List[int]:
        codes = list(range(self.ctx.N * self.ctx.N))
        if self.ctx.variant == "Uq":
            codes.append(self.ctx.dinv_code)
        return codes

    def all_codes(self) -> List[int]:
        out = []
        for c in self.base_codes():
            out.extend([c, self.ctx.star_code(c)])
        return out

    def counit_matrix(self, code: int) -> float:
        """``eps(g)`` for the letter (1 on the diagonal and Dinv, 0 otherwise)."""
        ctx = self.ctx
        if code >= 2 * ctx.N * ctx.N:
            return 1.0
        j, k = ctx.indices(code)
        return 1.0 if j == k else 0.0

    def compress(self, basis: np.ndarray, tag: Optional[str] = None) -> "MatRep":
        """``B^* pi(g) B`` for an isometry B; heights from the support of each column."""
        B = np.asarray(basis, dtype=complex)
        mats = {c: B.conj().T @ (self.letter_matrix(c) @ B) for c in self.base_codes()}
        heights = np.array([self.heights[np.abs(B[:, i]) > 1e-12].min() if B.shape[0] else np.inf
                            for i in range(B.shape[1])])
        return MatRep(self.ctx, mats, heights, tag or f"compress({self.tag})")

    def restrict(self, n: int) -> "MatRep":
        """The [1,n] block as a representation of SU_q(n) (caller checks living-on)."""
        N = self.ctx.N
        sub = AlgebraCtx(n, "SUq", self.ctx.q0)
        mats = {(j * n + k): self.mats[j * N + k] for j in range(n) for k in range(n)}
        return MatRep(sub, mats, self.heights, f"restrict_{n}({self.tag})")

    def with_ctx(self, ctx: AlgebraCtx) -> "MatRep":
        return MatRep(ctx, dict(self.mats), self.heights, self.tag, dict(self.meta))


# ---------------------------------------------------------------------------
# constructors


def _suq_ctx(N: int, q0) -> AlgebraCtx:
    return AlgebraCtx(N, "SUq", Fraction(q0))


def suq2_irrep(M: int, q0=Fraction(1, 2)) -> MatRep:
    """Truncated irreducible representation of SU_q(2) on span(e_0..e_{M-1}).

    alpha e_k = sqrt(1 - q^{2k}) e_{k-1}, gamma e_k = q^k e_k, and
    U = [[alpha, -q gamma^*], [gamma, alpha^*]].
    """
    if M < 2:
        raise RepError("M must be at least 2")
    q = float(Fraction(q0))
    k = np.arange(M)
    alpha = sp.diags(np.sqrt(1.0 - q ** (2.0 * k[1:])), 1, shape=(M, M), dtype=complex, format="csr")
    gamma = sp.diags(q ** k.astype(float), 0, shape=(M, M), dtype=complex, format="csr")
    mats = {0: alpha, 1: -q * gamma.conj().T, 2: gamma, 3: alpha.conj().T}
    heights = (M - 1 - k).astype(float)
    return MatRep(_suq_ctx(2, q0), mats, heights, f"suq2_irrep(M={M})", {"M": M})


def torus_char_rep(theta: Sequence[float], variant: str = "SUq", q0=Fraction(1, 2)) -> MatRep:
    """One-dimensional torus character u[j,k] -> delta_jk e^{i theta_j}.

    For SU_q(N) ``theta`` lists theta_2..theta_N and theta_1 = -sum; for
    U_q(N) it lists theta_1..theta_N and Dinv -> e^{-i sum theta}.
    """
    theta = [float(t) for t in theta]
    if variant == "SUq":
        full = [-sum(theta)] + theta
    elif variant == "Uq":
        full = theta
    else:
        raise RepError("torus characters exist for SUq and Uq")
    N = len(full)
    ctx = AlgebraCtx(N, variant, Fraction(q0))
    mats = {j * N + k: np.array([[np.exp(1j * full[j]) if j == k else 0.0]]) for j in range(N) for k in range(N)}
    if variant == "Uq":
        mats[ctx.dinv_code] = np.array([[np.exp(-1j * sum(full))]])
    return MatRep(ctx, mats, np.array([np.inf]), f"torus({theta})", {"theta": theta})


def trivial_rep(N: int, dim: int = 1, variant: str = "SUq", q0=Fraction(1, 2)) -> MatRep:
    """``id * eps``: u[j,k] -> delta_jk I."""
    ctx = AlgebraCtx(N, variant, Fraction(q0))
    eye = sp.identity(dim, dtype=complex, format="csr")
    zero = sp.csr_matrix((dim, dim), dtype=complex)
    mats = {j * N + k: (eye if j == k else zero) for j in range(N) for k in range(N)}
    if variant == "Uq":
        mats[ctx.dinv_code] = eye
    return MatRep(ctx, mats, np.full(dim, np.inf), f"trivial({dim})")


def block_embed(inner: MatRep, N: int, m: int) -> MatRep:
    """Place a representation of SU_q(n) on the [m+1, m+n] block of SU_q(N)."""
    n = inner.ctx.N
    if inner.ctx.variant != "SUq":
        raise RepError("block embedding expects an SU_q(n) representation")
    if not 0 <= m <= N - n:
        raise RepError(f"offset m={m} outside 0..{N - n}")
    dim = inner.dim
    eye = sp.identity(dim, dtype=complex, format="csr")
    zero = sp.csr_matrix((dim, dim), dtype=complex)
    mats = {}
    for j in range(N):
        for k in range(N):
            if m <= j < m + n and m <= k < m + n:
                mats[j * N + k] = inner.mats[(j - m) * n + (k - m)]
            else:
                mats[j * N + k] = eye if j == k else zero
    ctx = AlgebraCtx(N, "SUq", inner.ctx.q0)
    return MatRep(ctx, mats, inner.heights, f"block({inner.tag}, N={N}, m={m})", {"m": m, "n": n})


def conv_product(p1: MatRep, p2: MatRep, cap: int = DIM_CAP) -> MatRep:
    """``(p1 ⊗ p2) ∘ Delta``: u[j,k] -> sum_s p1(u[j,s]) ⊗ p2(u[s,k])."""
    if p1.ctx.N != p2.ctx.N or p1.ctx.variant != p2.ctx.variant:
        raise RepError("conv_product needs representations of the same algebra")
    if p1.dim * p2.dim > cap:
        raise RepError(f"tensor dimension {p1.dim * p2.dim} exceeds the cap {cap}")
    N = p1.ctx.N
    mats = {}
    for j in range(N):
        for k in range(N):
            acc = sp.csr_matrix((p1.dim * p2.dim,) * 2, dtype=complex)
            for s in range(N):
                acc = acc + sp.kron(p1.mats[j * N + s], p2.mats[s * N + k], format="csr")
            mats[j * N + k] = acc
    if p1.ctx.variant == "Uq":
        c = p1.ctx.dinv_code
        mats[c] = sp.kron(p1.mats[c], p2.mats[c], format="csr")
    heights = np.minimum.outer(p1.heights, p2.heights).reshape(-1)
    return MatRep(p1.ctx, mats, heights, f"conv({p1.tag}, {p2.tag})")


def direct_sum(reps: Sequence[MatRep]) -> MatRep:
    if not reps:
        raise RepError("empty direct sum")
    ctx = reps[0].ctx
    for r in reps:
        if r.ctx.N != ctx.N or r.ctx.variant != ctx.variant:
            raise RepError("direct sum of representations of different algebras")
    mats = {c: sp.block_diag([r.mats[c] for r in reps], format="csr") for c in reps[0].mats}
    heights = np.concatenate([r.heights for r in reps])
    offsets = np.cumsum([0] + [r.dim for r in reps]).tolist()
    return MatRep(ctx, mats, heights, "sum(" + ", ".join(r.tag for r in reps) + ")",
                  {"offsets": offsets})


# ---------------------------------------------------------------------------
# invariants


def operator_norm(A) -> float:
    """Spectral norm; cheap sqrt(||A||_1 ||A||_inf) bound first, exact value if needed."""
    A = _csr(A)
    if A.nnz == 0:
        return 0.0
    absA = abs(A)
    bound = math.sqrt(float(absA.sum(axis=0).max()) * float(absA.sum(axis=1).max()))
    if bound <= 1.0:
        return bound
    if A.shape[0] <= 600:
        return float(np.linalg.norm(A.toarray(), 2))
    return float(svds(A, k=1, return_singular_vectors=False)[0])


def contraction_report(pi: MatRep) -> Dict[str, float]:
    return {str(pi.ctx.sym(c)): operator_norm(pi.letter_matrix(c)) for c in pi.base_codes()}


def is_contraction(pi: MatRep, tol: float = CONTRACTION_TOL) -> bool:
    return all(v <= 1.0 + tol for v in contraction_report(pi).values())


def _residual_norm(R: sp.csr_matrix, mask: np.ndarray) -> float:
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return 0.0
    C = R[idx][:, idx]
    return float(np.sqrt(np.sum(np.abs(C.data) ** 2))) if C.nnz else 0.0


@dataclass
class ResidualReport:
    per_family: Dict[str, float]
    worst_label: str
    max_residual: float
    checked: int

    def as_dict(self) -> dict:
        return {"per_family": dict(sorted(self.per_family.items())), "worst": self.worst_label,
                "max_residual": self.max_residual, "checked": self.checked}


def relation_residuals(pi: MatRep, relations=None) -> ResidualReport:
    """Frobenius norm of each catalog element compressed to its degree's interior."""
    rels = relations if relations is not None else relation_catalog_named(pi.ctx)
    fam: Dict[str, float] = {}
    worst, worst_label = 0.0, ""
    for rel in rels:
        R = pi.evaluate(rel.elt, sparse=True)
        r = _residual_norm(R, pi.interior_mask(rel.elt.degree()))
        fam[rel.family] = max(fam.get(rel.family, 0.0), r)
        if r >= worst:
            worst, worst_label = r, f"{rel.family}:{rel.label}"
    return ResidualReport(fam, worst_label, worst, len(rels))


def corner_defect(rho: MatRep) -> complex:
    """(M-1, M-1) entry of alpha alpha^* + q^2 gamma gamma^* - 1 for suq2_irrep."""
    ctx = rho.ctx
    if ctx.N != 2:
        raise RepError("corner defect is defined for SU_q(2) representations")
    q = float(rho.q0)
    a = rho.letter_matrix(0)
    g = rho.letter_matrix(2)
    R = a @ a.conj().T + q * q * (g @ g.conj().T) - sp.identity(rho.dim, format="csr")
    return complex(R[rho.dim - 1, rho.dim - 1])


def eigen_one_symmetry(pi: MatRep, tol: float = 1e-10) -> float:
    """max over generators of the distance between ker(I - A) and ker(I - A^*)."""
    worst = 0.0
    for c in pi.all_codes():
        A = pi.generator_matrix(c)
        I = np.eye(pi.dim)
        K1 = null_space_svd(I - A, tol)
        K2 = null_space_svd(I - A.conj().T, tol)
        if K1.shape[1] != K2.shape[1]:
            return float("inf")
        if K1.shape[1]:
            worst = max(worst, float(np.linalg.norm(K1 @ K1.conj().T - K2 @ K2.conj().T, 2)))
    return worst


def null_space_svd(A: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of right singular vectors with s < rtol * max(1, ||A||)."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros((A.shape[1], 0), dtype=complex)
    _, s, Vh = np.linalg.svd(A)
    cut = rtol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(s >= cut))
    return Vh[rank:].conj().T


__all__ = [
    "MatRep", "RepError", "suq2_irrep", "torus_char_rep", "trivial_rep", "block_embed",
    "conv_product", "direct_sum", "operator_norm", "contraction_report", "is_contraction",
    "relation_residuals", "ResidualReport", "corner_defect", "eigen_one_symmetry",
    "null_space_svd", "DIM_CAP",
]
