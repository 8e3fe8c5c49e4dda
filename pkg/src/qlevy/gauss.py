"""Gaussian generating functionals and gaussian cocycles.

A gaussian functional is ``psi = sum_j r_j eps'_j + 1/2 sum_jk r_jk eps''_jk``
with a real drift vector and a real symmetric positive semidefinite matrix,
indexed by the basis extension (2..N for SU_q(N); 2..N and D for U_q(N)).
A gaussian cocycle is ``eta = sum_j eta_j eps'_j`` for vectors ``eta_j``;
it completes to a Schürmann triple exactly when the Gram matrix
``<eta_j, eta_k>`` is real.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .algebra.core import AlgebraCtx, AlgElt, Word
from .hopf.battery import K1Battery, centered_word, triple_identity_defect
from .hopf.functionals import Functional, chart_labels, chart_vector, ctx_q0, d_element, eps_prime_exact

PSD_RTOL = 1e-10


class GaussError(ValueError):
    pass


@dataclass
class GaussParams:
    """Drift ``r`` and diffusion matrix ``R`` in the chart order ``labels``."""

    r: np.ndarray
    R: np.ndarray
    labels: List = field(default_factory=list)

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float).reshape(-1)
        self.R = np.asarray(self.R, dtype=float).reshape(len(self.r), len(self.r)) if len(self.r) else np.zeros((0, 0))

    @classmethod
    def zero(cls, ctx: AlgebraCtx) -> "GaussParams":
        labels = chart_labels(ctx)
        n = len(labels)
        return cls(np.zeros(n), np.zeros((n, n)), labels)

    def validate(self, tol: float = PSD_RTOL) -> None:
        if self.R.shape != (len(self.r), len(self.r)):
            raise GaussError("R must be square and match r")
        if np.any(self.R != self.R.T):
            raise GaussError("diffusion matrix is not symmetric")
        if self.R.size:
            lam = np.linalg.eigvalsh(self.R).min()
            if lam < -tol * max(1.0, np.linalg.norm(self.R, 2)):
                raise GaussError(f"diffusion matrix is not PSD (min eigenvalue {lam:.3e})")

    @property
    def n_parameters(self) -> int:
        n = len(self.r)
        return n + n * (n + 1) // 2

    def as_dict(self) -> dict:
        return {"r": self.r.tolist(), "R": self.R.tolist(), "labels": [str(l) for l in self.labels]}


def gaussian_functional(ctx: AlgebraCtx, p: GaussParams, check: bool = True, q0=None) -> Functional:
    """``sum r_j eps'_j + 1/2 sum r_jk eps''_jk`` by the exponent-vector formula."""
    labels = chart_labels(ctx)
    if len(p.r) != len(labels):
        raise GaussError(f"expected {len(labels)} drift entries for {ctx.variant}({ctx.N})")
    if check:
        p.validate()
    r, R = p.r, p.R

    def fn(w: Word) -> complex:
        m = chart_vector(ctx, w)
        if m is None or not any(m):
            return 0.0
        mv = np.asarray(m, dtype=float)
        return 1j * float(r @ mv) - 0.5 * float(mv @ R @ mv)

    return Functional(ctx, fn, {"hermitian": True, "zero_normalized": True, "gaussian": True,
                                "generating_candidate": True, "drift": not np.any(R)},
                      f"gaussian(r={r.tolist()}, R={R.tolist()})", q0)


def k3_battery(ctx: AlgebraCtx, codes: Optional[Sequence[int]] = None) -> List[AlgElt]:
    """Products of three centered letters (elements of K_3)."""
    if codes is None:
        N = ctx.N
        NN = N * N
        if 2 * NN <= 18:
            codes = list(range(2 * NN))
        else:
            diag = [i * N + i for i in range(N)]
            off = [1, N]
            codes = diag + off + [c + NN for c in diag + off]
        if ctx.variant == "Uq":
            codes = list(codes) + [ctx.dinv_code, ctx.dinv_code + 1]
    cl = {c: centered_word(ctx, (c,)) for c in codes}
    return [cl[a] * cl[b] * cl[c] for a, b, c in itertools.product(codes, repeat=3)]


def recover_params(psi: Functional, ctx: Optional[AlgebraCtx] = None, tol: float = 1e-10,
                   check_k3: bool = True) -> GaussParams:
    """``r_j = psi(d_j)``, ``r_jk = psi(d_j d_k)`` after checking that psi vanishes on K_3."""
    ctx = ctx or psi.ctx
    if check_k3:
        worst = max((abs(psi(x)) for x in k3_battery(ctx)), default=0.0)
        if worst > tol:
            raise GaussError(f"functional does not vanish on K_3 (max |psi| = {worst:.3e})")
    labels = chart_labels(ctx)
    ds = [d_element(ctx, l) for l in labels]
    r = np.array([psi(d).real for d in ds])
    R = np.array([[psi(a * b).real for b in ds] for a in ds]) if ds else np.zeros((0, 0))
    R = 0.5 * (R + R.T)
    return GaussParams(r, R, labels)


# ---------------------------------------------------------------------------
# gaussian cocycles


@dataclass
class GaussCocycle:
    """``eta(a) = sum_j eta_j eps'_j(a)`` with vectors in C^k (rows of ``vectors``)."""

    ctx: AlgebraCtx
    vectors: np.ndarray  # shape (len(labels), k)

    def __post_init__(self):
        self.vectors = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        if self.vectors.shape[0] != len(chart_labels(self.ctx)):
            raise GaussError("one vector per basis-extension element is required")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __call__(self, a: AlgElt) -> np.ndarray:
        q0 = ctx_q0(self.ctx)
        coeffs = np.array([eps_prime_exact(a, l).evaluate(q0) for l in chart_labels(self.ctx)])
        return coeffs @ self.vectors

    def word_value(self, w: Word) -> np.ndarray:
        m = chart_vector(self.ctx, w)
        if m is None:
            return np.zeros(self.dim, dtype=complex)
        return 1j * (np.asarray(m, dtype=float) @ self.vectors)

    def gram(self) -> np.ndarray:
        return self.vectors.conj() @ self.vectors.T


@dataclass
class HermitianReport:
    hermitian: bool
    gram: np.ndarray
    max_imag: float
    psi: Optional[Functional] = None
    triple_defect: Optional[float] = None
    certificate: str = ""

    def as_dict(self) -> dict:
        return {
            "hermitian": self.hermitian,
            "gram_real": self.gram.real.tolist(),
            "gram_imag": self.gram.imag.tolist(),
            "max_imag": self.max_imag,
            "triple_defect": self.triple_defect,
            "certificate": self.certificate,
        }


def default_triple_battery(ctx: AlgebraCtx, max_degree: int = 3) -> List[AlgElt]:
    """Degree <= 3 words over the diagonal letters and one off-diagonal pair."""
    N = ctx.N
    NN = N * N
    codes = [i * N + i for i in range(N)] + ([1, N] if N > 1 else [])
    codes += [c + NN for c in codes]
    if ctx.variant == "Uq":
        codes += [ctx.dinv_code, ctx.dinv_code + 1]
    out = []
    for d in range(1, max_degree + 1):
        for w in itertools.product(codes, repeat=d):
            if d == 3 and len(set(w)) == 3 and w[0] > w[1]:
                continue
            out.append(ctx.word(w))
    return out


def is_hermitian_gaussian(c: GaussCocycle, tol: float = 1e-10,
                          battery: Optional[Sequence[AlgElt]] = None) -> HermitianReport:
    """Hermitian iff the Gram matrix ``<eta_j, eta_k>`` is real.

    When hermitian, ``psi = gaussian_functional(0, Re Gram)`` completes the
    triple ``(id * eps, eta, psi)``; the triple identity is verified on a
    battery.  Otherwise the imaginary part of the Gram matrix is the
    certificate that no completing functional exists.
    """
    G = c.gram()
    max_imag = float(np.abs(G.imag).max()) if G.size else 0.0
    if max_imag > tol:
        j, k = np.unravel_index(np.argmax(np.abs(G.imag)), G.shape)
        labels = chart_labels(c.ctx)
        cert = (f"Im <eta_{labels[j]}, eta_{labels[k]}> = {G.imag[j, k]:.6g} != 0: "
                "the cocycle is not hermitian, so it admits no completing functional")
        return HermitianReport(False, G, max_imag, None, None, cert)
    R = G.real
    R = 0.5 * (R + R.T)
    labels = chart_labels(c.ctx)
    psi = gaussian_functional(c.ctx, GaussParams(np.zeros(len(labels)), R, labels), check=False)
    elts = list(battery) if battery is not None else default_triple_battery(c.ctx, 2)
    defect = triple_identity_defect(psi, c, elts)
    return HermitianReport(True, G, max_imag, psi, defect, "Gram matrix is real")


def gram_realization(R: np.ndarray, ctx: AlgebraCtx) -> GaussCocycle:
    """Vectors ``eta_j`` = columns of the positive square root of R, so Gram = R."""
    R = np.asarray(R, dtype=float)
    lam, V = np.linalg.eigh(0.5 * (R + R.T))
    S = (V * np.sqrt(np.clip(lam, 0.0, None))) @ V.T
    return GaussCocycle(ctx, S.T.astype(complex))


def random_psd(n: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    rank = n if rank is None else rank
    A = rng.standard_normal((n, rank))
    R = A @ A.T
    return 0.5 * (R + R.T)


def k_battery_offdiagonal(ctx: AlgebraCtx, max_degree: int = 3) -> List[Word]:
    """All words of degree <= max_degree that contain at least one off-diagonal letter."""
    N = ctx.N
    NN = N * N
    letters = list(range(2 * NN))
    out = []
    for d in range(1, max_degree + 1):
        for w in itertools.product(letters, repeat=d):
            if any((x % NN) // N != (x % NN) % N for x in w):
                out.append(w)
    return out


__all__ = ["GaussParams", "GaussError", "GaussCocycle", "HermitianReport", "gaussian_functional",
           "recover_params", "is_hermitian_gaussian", "gram_realization", "k3_battery",
           "default_triple_battery", "random_psd", "k_battery_offdiagonal",
           "K1Battery"]
