"""Degree-truncated GNS construction for a generating functional.

This is an approximation used for cross-checks only: the quotient is built
from centered words of degree <= d, and generators act only on the image of
words of degree <= d - 1 (the product has to stay inside the window).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg.lapack import zpstrf

from ..algebra.core import Word
from ..hopf.battery import gram_matrix
from ..hopf.functionals import Functional, counit_word
from ..hopf.battery import centered_word


class GNSError(ValueError):
    pass


@dataclass
class GNSData:
    words: List[Word]
    gram: np.ndarray
    rank: int
    pivots: List[int]
    X: np.ndarray                      # rank x n, gram = X^* X
    actions: Dict[int, np.ndarray] = field(default_factory=dict)
    action_fit: Dict[int, float] = field(default_factory=dict)
    factor_error: float = 0.0
    approximate: bool = True

    @property
    def dim(self) -> int:
        return self.rank

    def index(self, w: Word) -> int:
        return self.words.index(w)

    def inner_degree_columns(self, degree: int) -> List[int]:
        return [i for i, w in enumerate(self.words) if len(w) <= degree - 1]

    def as_dict(self) -> dict:
        return {"n_words": len(self.words), "rank": self.rank, "factor_error": self.factor_error,
                "action_fit": {str(k): v for k, v in sorted(self.action_fit.items())},
                "approximate": self.approximate}


def gns_words(ctx, degree: int, generators: Optional[Sequence[int]] = None) -> List[Word]:
    codes = list(generators) if generators is not None else list(range(2 * ctx.N * ctx.N))
    out: List[Word] = []
    for d in range(1, degree + 1):
        out.extend(itertools.product(codes, repeat=d))
    return out


def gns_build(psi: Functional, degree: int, tol: float = 1e-10,
              generators: Optional[Sequence[int]] = None, psd_tol: float = 1e-8) -> GNSData:
    """Gram matrix over centered words, pivoted Cholesky quotient, partial generator action."""
    ctx = psi.ctx
    codes = list(generators) if generators is not None else list(range(2 * ctx.N * ctx.N))
    words = gns_words(ctx, degree, codes)
    elts = [centered_word(ctx, w) for w in words]
    G = gram_matrix(psi, elts)
    G = 0.5 * (G + G.conj().T)
    scale = max(1.0, float(np.abs(G).max())) if G.size else 1.0
    lam_min = float(np.linalg.eigvalsh(G).min()) if G.size else 0.0
    if lam_min < -psd_tol * scale:
        raise GNSError(f"Gram matrix is significantly non-PSD (min eigenvalue {lam_min:.3e})")
    n = len(words)
    if float(np.abs(G).max() if G.size else 0.0) <= tol:
        return GNSData(words, G, 0, [], np.zeros((0, n), dtype=complex))
    c, piv, rank, info = zpstrf(G + 0j, tol=tol * scale, lower=0)
    if info < 0:
        raise GNSError(f"pivoted Cholesky failed (info={info})")
    U = np.triu(c)[:rank, :]
    X = np.zeros((rank, n), dtype=complex)
    X[:, piv - 1] = U
    err = float(np.abs(X.conj().T @ X - G).max())
    data = GNSData(words, G, int(rank), [int(p) - 1 for p in piv[:rank]], X, factor_error=err)
    # generator action on the image of words of degree <= degree - 1
    inner = data.inner_degree_columns(degree)
    pos = {w: i for i, w in enumerate(words)}
    Xs = X[:, inner]
    pinv = np.linalg.pinv(Xs, rcond=1e-10)
    for g in codes:
        Y = np.zeros_like(Xs)
        for col, i in enumerate(inner):
            w = words[i]
            Y[:, col] = X[:, pos[(g,) + w]] - counit_word(ctx, w) * X[:, pos[(g,)]]
        T = Y @ pinv
        data.actions[g] = T
        data.action_fit[g] = float(np.abs(T @ Xs - Y).max()) if Y.size else 0.0
    return data


@dataclass
class IsometryReport:
    reproduces_eta: float
    isometry_defect: float
    intertwining_defect: float
    gram_vs_eta: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def gns_isometry(data: GNSData, eta, degree: int) -> IsometryReport:
    """Compare the GNS data with a known cocycle: ``V x_i = eta(a_i)``.

    Returns the error of V X against the eta columns, ``||V^*V - I||``, the
    intertwining defect ``||V pi_psi(g) - pi(g) V||`` on the overlap and
    ``max |Gram - <eta(a_i), eta(a_j)>|``.
    """
    E = np.array([eta.word_value(w) for w in data.words]).T  # dim x n
    gram_err = float(np.abs(E.conj().T @ E - data.gram).max())
    if data.rank == 0:
        return IsometryReport(float(np.abs(E).max()) if E.size else 0.0, 0.0, 0.0, gram_err)
    V = E @ np.linalg.pinv(data.X, rcond=1e-10)
    repro = float(np.abs(V @ data.X - E).max())
    iso = float(np.abs(V.conj().T @ V - np.eye(data.rank)).max())
    inner = data.inner_degree_columns(degree)
    inter = 0.0
    for g, T in data.actions.items():
        lhs = V @ T @ data.X[:, inner]
        rhs = eta.rep.letter_matrix(g) @ (V @ data.X[:, inner])
        inter = max(inter, float(np.abs(lhs - rhs).max()))
    return IsometryReport(repro, iso, inter, gram_err)


__all__ = ["GNSData", "GNSError", "gns_build", "gns_words", "gns_isometry", "IsometryReport"]
