"""Quantum determinants, minors, twisted determinants and star expansion."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Sequence, Tuple

from .coeffs import ONE, QCoeff
from .core import AlgebraCtx, AlgElt, Word


def inversions(sigma: Sequence[int]) -> int:
    """Number of pairs ``a < b`` with ``sigma[a] > sigma[b]``."""
    n = len(sigma)
    return sum(1 for a in range(n) for b in range(a + 1, n) if sigma[a] > sigma[b])


def _signed_q(n: int) -> QCoeff:
    """``(-q)**n``."""
    return QCoeff.qpow(n, (-1) ** (n % 2))


def quantum_determinant(ctx: AlgebraCtx) -> AlgElt:
    """``D = sum_sigma (-q)^inv(sigma) u[1,sigma(1)] ... u[N,sigma(N)]``."""
    N = ctx.N
    terms: Dict[Word, QCoeff] = {}
    for sigma in itertools.permutations(range(N)):
        terms[tuple(r * N + sigma[r] for r in range(N))] = _signed_q(inversions(sigma))
    return AlgElt(ctx, terms)


def quantum_minor(ctx: AlgebraCtx, j: int, k: int) -> AlgElt:
    """Quantum determinant of ``U`` with row ``j`` and column ``k`` removed."""
    N = ctx.N
    if not (1 <= j <= N and 1 <= k <= N):
        raise IndexError(f"minor indices {j},{k} out of range for N={N}")
    rows = [r for r in range(N) if r != j - 1]
    cols = [c for c in range(N) if c != k - 1]
    terms: Dict[Word, QCoeff] = {}
    for perm in itertools.permutations(cols):
        w = tuple(r * N + c for r, c in zip(rows, perm))
        terms[w] = _signed_q(inversions(perm))
    return AlgElt(ctx, terms)


def twisted_determinant(ctx: AlgebraCtx, tau: Sequence[int]) -> AlgElt:
    """``sum_sigma (-q)^inv(sigma) u[sigma(1),tau(1)] ... u[sigma(N),tau(N)]``.

    ``tau`` is given 1-based, e.g. ``(2, 1, 3)``.
    """
    N = ctx.N
    tau = tuple(tau)
    if sorted(tau) != list(range(1, N + 1)):
        raise ValueError(f"{tau} is not a permutation of 1..{N}")
    terms: Dict[Word, QCoeff] = {}
    for sigma in itertools.permutations(range(N)):
        w = tuple(sigma[r] * N + (tau[r] - 1) for r in range(N))
        c = _signed_q(inversions(sigma))
        v = terms.get(w)
        terms[w] = c if v is None else v + c
    return AlgElt(ctx, terms)


def permutation_sign_power(tau: Sequence[int]) -> QCoeff:
    """``(-q)**inv(tau)`` for a 1-based permutation."""
    return _signed_q(inversions(tuple(tau)))


@lru_cache(maxsize=None)
def _star_image(N: int, variant: str, code: int) -> Tuple[Tuple[Word, QCoeff], ...]:
    ctx = AlgebraCtx(N, variant)
    NN = N * N
    if code < NN:
        return (((code,), ONE),)
    if code < 2 * NN:
        j, k = ctx.indices(code)
        minor = quantum_minor(ctx, j, k) if N > 1 else ctx.one()
        img = minor.scale(_signed_q(k - j))
        if variant == "Uq":
            img = img * ctx.dinv()
        return tuple(img.terms.items())
    if code == 2 * NN:
        return (((code,), ONE),)
    # Dinv* -> D
    return tuple(quantum_determinant(ctx).terms.items())


def adjoint_expand(a: AlgElt) -> AlgElt:
    """Replace every starred letter by its polynomial expression.

    ``u*[j,k] -> (-q)^(k-j) D^{jk}`` on SU_q(N), ``(-q)^(k-j) D^{jk} Dinv``
    on U_q(N), and ``Dinv* -> D``.  The result is not normal-ordered.
    """
    ctx = a.ctx
    if ctx.variant == "Mq":
        if a.has_stars():
            raise ValueError("the quantum matrix algebra carries no involution")
        return a
    N = ctx.N
    st = ctx.is_starred
    out: Dict[Word, QCoeff] = {}
    for w, c in a.terms.items():
        if not any(st(x) for x in w):
            v = out.get(w)
            out[w] = c if v is None else v + c
            continue
        partial = {(): c}
        for x in w:
            img = _star_image(N, ctx.variant, x)
            nxt: Dict[Word, QCoeff] = {}
            for w1, c1 in partial.items():
                for w2, c2 in img:
                    key = w1 + w2
                    v = nxt.get(key)
                    nxt[key] = c1 * c2 if v is None else v + c1 * c2
            partial = nxt
        for key, v in partial.items():
            old = out.get(key)
            out[key] = v if old is None else old + v
    return AlgElt(ctx, out)
