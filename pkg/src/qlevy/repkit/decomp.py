"""Subgroup-chain decomposition, maximal gaussian subspace and key-lemma numerics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .reps import MatRep, RepError, null_space_svd

KERNEL_RTOL = 1e-8


class DecompositionError(RuntimeError):
    pass


@dataclass
class Level:
    n: int
    basis: np.ndarray  # columns: orthonormal basis of H_n inside the ambient space
    rep: MatRep        # compressed representation on H_n (still over SU_q(N))
    injectivity: float  # smallest singular value of I - pi_n(u[n,n]) on H_n

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass
class DecompositionResult:
    N: int
    levels: List[Level]
    invariance_residual: float
    diagnostics: Dict[str, float] = field(default_factory=dict)

    def level(self, n: int) -> Optional[Level]:
        for lv in self.levels:
            if lv.n == n:
                return lv
        return None

    def dims(self) -> Dict[int, int]:
        return {lv.n: lv.dim for lv in self.levels}

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "dims": {str(k): v for k, v in sorted(self.dims().items())},
            "injectivity": {str(lv.n): lv.injectivity for lv in self.levels if lv.n > 1},
            "invariance_residual": self.invariance_residual,
            "diagnostics": self.diagnostics,
        }


def _complement(B: np.ndarray, K: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(B) minus span(B K), expressed in B coordinates."""
    r = B.shape[1]
    if K.shape[1] == 0:
        return np.eye(r, dtype=complex)
    if K.shape[1] == r:
        return np.zeros((r, 0), dtype=complex)
    Q, _ = np.linalg.qr(np.hstack([K, np.eye(r, dtype=complex)]))
    return Q[:, K.shape[1]:r]


def decompose(pi: MatRep, tol: float = KERNEL_RTOL) -> DecompositionResult:
    """Split H along the chain SU_q(N) > SU_q(N-1) > ... > SU_q(1).

    At step n the eigenvalue-1 space of pi(u[n,n]) on the remaining
    subspace is invariant and carries a representation living on SU_q(n-1);
    its orthocomplement is H_n, where I - pi_n(u[n,n]) is injective.
    """
    ctx = pi.ctx
    if ctx.variant != "SUq":
        raise RepError("decompose expects an SU_q(N) representation; lift U_q data first")
    N = ctx.N
    dim = pi.dim
    gens = {c: pi.generator_matrix(c) for c in pi.all_codes()}
    B = np.eye(dim, dtype=complex)
    levels: List[Level] = []
    worst_inv = 0.0
    diag: Dict[str, float] = {}
    for n in range(N, 1, -1):
        if B.shape[1] == 0:
            levels.append(Level(n, B.copy(), pi.compress(B), float("inf")))
            continue
        A = B.conj().T @ gens[(n - 1) * N + (n - 1)] @ B
        I = np.eye(B.shape[1])
        K = null_space_svd(I - A, tol)
        Bk = B @ K
        # invariance of the kernel under every generator
        P = Bk @ Bk.conj().T
        inv = 0.0
        for c, G in gens.items():
            X = G @ Bk
            inv = max(inv, float(np.abs(X - P @ X).max()) if X.size else 0.0)
        scale = max(1.0, max(float(np.abs(G).max()) for G in gens.values()))
        if inv > max(tol, 1e-10) * scale * 10:
            raise DecompositionError(f"eigenvalue-1 space of u[{n},{n}] is not invariant (residual {inv:.3e})")
        worst_inv = max(worst_inv, inv)
        # on the kernel, u[k,n] and u[n,k] (k != n) vanish and u[n,n] acts as 1
        lead = 0.0
        for k in range(N):
            for c in ((n - 1) * N + k, k * N + (n - 1)):
                T = Bk.conj().T @ gens[c] @ Bk
                target = np.eye(T.shape[0]) if k == n - 1 else 0.0
                lead = max(lead, float(np.abs(T - target).max()) if T.size else 0.0)
        diag[f"kernel_leading_residual_{n}"] = lead
        if lead > 1e-8 * scale:
            raise DecompositionError(f"kernel at level {n} does not live on SU_q({n - 1}) (residual {lead:.3e})")
        C = _complement(B, K)
        Bn = B @ C
        if Bn.shape[1]:
            An = Bn.conj().T @ gens[(n - 1) * N + (n - 1)] @ Bn
            smin = float(np.linalg.svd(np.eye(Bn.shape[1]) - An, compute_uv=False).min())
        else:
            smin = float("inf")
        levels.append(Level(n, Bn, pi.compress(Bn, f"level{n}({pi.tag})"), smin))
        B = Bk
    levels.append(Level(1, B, pi.compress(B, f"level1({pi.tag})"), float("inf")))
    levels.sort(key=lambda lv: lv.n)
    lv1 = levels[0]
    if lv1.dim:
        eps_dev = 0.0
        for c in pi.base_codes():
            T = lv1.rep.generator_matrix(c)
            eps_dev = max(eps_dev, float(np.abs(T - pi.counit_matrix(c) * np.eye(lv1.dim)).max()))
        diag["level1_counit_residual"] = eps_dev
    return DecompositionResult(N, levels, worst_inv, diag)


def maximal_gaussian_subspace(pi: MatRep, tol: float = KERNEL_RTOL) -> np.ndarray:
    """Kernel of sum_g (pi(g) - eps(g))^*(pi(g) - eps(g)) over all generators."""
    S = np.zeros((pi.dim, pi.dim), dtype=complex)
    I = np.eye(pi.dim)
    for c in pi.all_codes():
        X = pi.generator_matrix(c) - pi.counit_matrix(c) * I
        S += X.conj().T @ X
    S = 0.5 * (S + S.conj().T)
    if pi.dim == 0:
        return np.zeros((0, 0), dtype=complex)
    lam, V = np.linalg.eigh(S)
    cut = tol * max(1.0, float(lam.max()))
    return V[:, lam < cut]


def subspace_distance(B1: np.ndarray, B2: np.ndarray) -> float:
    """Spectral distance between the orthogonal projections onto two column spans."""
    if B1.shape[1] != B2.shape[1]:
        return float("inf")
    if B1.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(B1 @ B1.conj().T - B2 @ B2.conj().T, 2))


# ---------------------------------------------------------------------------
# key lemma


@dataclass
class KeyLemmaReport:
    p_values: List[float]
    errors: np.ndarray          # shape (len(p), n_vectors)
    bounds: Optional[np.ndarray]  # 2(1-p)||y|| when preimages are given
    bound_ok: Optional[bool]
    kernel_dim: int

    def as_dict(self) -> dict:
        return {
            "p": self.p_values,
            "errors": self.errors.tolist(),
            "bounds": None if self.bounds is None else self.bounds.tolist(),
            "bound_ok": self.bound_ok,
            "kernel_dim": self.kernel_dim,
        }


def default_p_schedule(m_max: int = 16, m_min: int = 1) -> List[float]:
    return [1.0 - 2.0 ** (-m) for m in range(m_min, m_max + 1)]


def key_lemma_limit(a: np.ndarray, vectors: np.ndarray, p_schedule: Optional[Sequence[float]] = None,
                    preimages: Optional[np.ndarray] = None, tol: float = KERNEL_RTOL,
                    slack: float = 1e-12) -> KeyLemmaReport:
    """``||(I-a)(I-pa)^{-1} v - P_1 v||`` along the schedule.

    ``P_1`` projects onto the orthocomplement of ker(I - a).  When
    ``preimages`` y are given (so that v = (I - a) y) the errors are compared
    with ``2 (1 - p) ||y||``.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if np.linalg.norm(a, 2) > 1.0 + 1e-12:
        raise ValueError("key lemma requires a contraction")
    V = np.asarray(vectors, dtype=complex).reshape(n, -1)
    ps = list(p_schedule) if p_schedule is not None else default_p_schedule()
    I = np.eye(n)
    K = null_space_svd(I - a, tol)
    P1 = I - K @ K.conj().T
    target = P1 @ V
    errs = np.zeros((len(ps), V.shape[1]))
    for i, p in enumerate(ps):
        X = (I - a) @ np.linalg.solve(I - p * a, V)
        errs[i] = np.linalg.norm(X - target, axis=0)
    bounds = ok = None
    if preimages is not None:
        Y = np.asarray(preimages, dtype=complex).reshape(n, -1)
        ynorm = np.linalg.norm(Y, axis=0)
        bounds = np.array([2.0 * (1.0 - p) * ynorm for p in ps])
        ok = bool(np.all(errs <= bounds + slack))
    return KeyLemmaReport(ps, errs, bounds, ok, K.shape[1])


def engineered_contraction(n: int, kernel_dim: int, rng: np.random.Generator,
                           inner_norm: float = 0.9) -> np.ndarray:
    """``U diag(I_k, C) U^*`` with a random unitary U and ||C|| = inner_norm < 1."""
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    U, _ = np.linalg.qr(Z)
    m = n - kernel_dim
    C = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    C *= inner_norm / np.linalg.norm(C, 2)
    D = np.zeros((n, n), dtype=complex)
    D[:kernel_dim, :kernel_dim] = np.eye(kernel_dim)
    D[kernel_dim:, kernel_dim:] = C
    return U @ D @ U.conj().T


__all__ = ["decompose", "DecompositionResult", "Level", "DecompositionError", "maximal_gaussian_subspace",
           "subspace_distance", "key_lemma_limit", "KeyLemmaReport", "default_p_schedule",
           "engineered_contraction", "KERNEL_RTOL"]
