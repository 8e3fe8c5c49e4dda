"""Coproduct, convolution and convolution exponentials.

Convolution powers are evaluated with corepresentation matrices.  A word
``x_1 ... x_L`` is an entry of the tensor product of the corepresentations
its letters belong to (``U``, its conjugate ``U-bar`` for starred letters,
and the one-dimensional ``Dinv``/``Dinv*``).  Writing ``Psi[J, K]`` for the
value of ``psi`` on the entry ``(J, K)`` of that tensor corepresentation,
``Delta`` acts by matrix multiplication, hence ``psi^{*n}`` on the entry
``(J, K)`` is ``(Psi^n)[J, K]`` and ``exp_*(t psi)`` is a matrix exponential
series.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..algebra.coeffs import QCoeff
from ..algebra.core import AlgebraCtx, AlgElt, Word
from .functionals import Functional, counit_word

TensorWord = Tuple[Word, ...]

COPRODUCT_TERM_CAP = 10 ** 6
CONV_ORDER_CAP = 24


class CapExceeded(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    pass


def _letter_paths(ctx: AlgebraCtx, x: int, n: int) -> List[Tuple[int, ...]]:
    """n-fold coproduct of a single letter as tuples of letter codes."""
    N = ctx.N
    NN = N * N
    if x >= 2 * NN:
        return [(x,) * n]
    star = x >= NN
    base = NN if star else 0
    j, k = divmod(x - base, N)
    out = []
    for mids in itertools.product(range(N), repeat=n - 1):
        idx = (j,) + mids + (k,)
        out.append(tuple(base + idx[t] * N + idx[t + 1] for t in range(n)))
    return out


def _word_term_count(ctx: AlgebraCtx, w: Word, n: int) -> int:
    NN = ctx.N * ctx.N
    u_letters = sum(1 for x in w if x < 2 * NN)
    return ctx.N ** ((n - 1) * u_letters)


def coproduct_word(ctx: AlgebraCtx, w: Word, n: int = 2, cap: int = COPRODUCT_TERM_CAP) -> List[TensorWord]:
    """All n-fold tensor words of the iterated coproduct of a word (coefficients are 1)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if _word_term_count(ctx, w, n) > cap:
        raise CapExceeded(f"coproduct of a length-{len(w)} word exceeds {cap} terms")
    legs: List[TensorWord] = [tuple(() for _ in range(n))]
    for x in w:
        paths = _letter_paths(ctx, x, n)
        legs = [tuple(leg[t] + (p[t],) for t in range(n)) for leg in legs for p in paths]
    return legs


def coproduct_iter(a: AlgElt, n: int = 2, cap: int = COPRODUCT_TERM_CAP) -> Dict[TensorWord, QCoeff]:
    """Iterated coproduct as a formal sum of n-fold tensor words."""
    ctx = a.ctx
    total = sum(_word_term_count(ctx, w, n) for w in a.terms)
    if total > cap:
        raise CapExceeded(f"coproduct has {total} > {cap} terms")
    out: Dict[TensorWord, QCoeff] = {}
    for w, c in a.terms.items():
        for tw in coproduct_word(ctx, w, n, cap):
            v = out.get(tw)
            v = c if v is None else v + c
            if v:
                out[tw] = v
            else:
                out.pop(tw, None)
    return out


def tensor_apply(ctx: AlgebraCtx, tensor: Dict[TensorWord, QCoeff], maps: Sequence, q0) -> complex:
    """Apply word-level maps leg by leg: sum c * prod_t maps[t](leg_t)."""
    out = 0j
    for tw, c in tensor.items():
        v = c.evaluate(q0)
        for f, leg in zip(maps, tw):
            v *= f(leg)
            if v == 0:
                break
        out += v
    return out


def convolve(phi: Functional, psi: Functional) -> Functional:
    """``(phi ⊗ psi) ∘ Delta``."""
    if phi.ctx != psi.ctx:
        raise ValueError("context mismatch")
    ctx = phi.ctx

    def fn(w: Word) -> complex:
        tot = 0j
        for l1, l2 in coproduct_word(ctx, w, 2):
            v = phi.word(l1)
            if v:
                tot += v * psi.word(l2)
        return tot

    return Functional(ctx, fn, {}, f"({phi.description}) * ({psi.description})", phi.q0)


# ---------------------------------------------------------------------------
# corepresentation matrices


def _pattern(ctx: AlgebraCtx, w: Word):
    """Letter kinds and the (row, column) multi-index of a word."""
    N = ctx.N
    NN = N * N
    kinds, rows, cols = [], [], []
    for x in w:
        if x >= 2 * NN:
            kinds.append(x)
            rows.append(0)
            cols.append(0)
        else:
            star = x >= NN
            j, k = divmod(x - (NN if star else 0), N)
            kinds.append("s" if star else "u")
            rows.append(j)
            cols.append(k)
    return tuple(kinds), tuple(rows), tuple(cols)


def _dims(ctx: AlgebraCtx, kinds) -> Tuple[int, ...]:
    return tuple(ctx.N if k in ("u", "s") else 1 for k in kinds)


def _entry_word(ctx: AlgebraCtx, kinds, J, K) -> Word:
    N = ctx.N
    NN = N * N
    out = []
    for kd, j, k in zip(kinds, J, K):
        if kd == "u":
            out.append(j * N + k)
        elif kd == "s":
            out.append(NN + j * N + k)
        else:
            out.append(kd)
    return tuple(out)


def corep_matrix(psi: Functional, kinds: Tuple, cap: int = COPRODUCT_TERM_CAP) -> np.ndarray:
    """``Psi[J, K] = psi(entry (J, K) of the tensor corepresentation)``."""
    key = ("corep", kinds)
    hit = psi._aux.get(key)
    if hit is not None:
        return hit
    ctx = psi.ctx
    dims = _dims(ctx, kinds)
    size = int(np.prod(dims)) if dims else 1
    if size * size > cap:
        raise CapExceeded(f"corepresentation matrix of size {size} exceeds the term cap")
    idx = list(itertools.product(*[range(d) for d in dims]))
    mat = np.zeros((size, size), dtype=complex)
    for a, J in enumerate(idx):
        for b, K in enumerate(idx):
            mat[a, b] = psi.word(_entry_word(ctx, kinds, J, K))
    psi._aux[key] = mat
    return mat


def _flat_index(dims, multi) -> int:
    out = 0
    for d, m in zip(dims, multi):
        out = out * d + m
    return out


def conv_power_word(psi: Functional, w: Word, n: int) -> complex:
    """``psi^{*n}(w)``; ``psi^{*0} = eps``."""
    ctx = psi.ctx
    if n == 0:
        return float(counit_word(ctx, w))
    kinds, J, K = _pattern(ctx, w)
    dims = _dims(ctx, kinds)
    mat = corep_matrix(psi, kinds)
    v = np.zeros(mat.shape[0], dtype=complex)
    v[_flat_index(dims, K)] = 1.0
    for _ in range(n):
        v = mat @ v
    return complex(v[_flat_index(dims, J)])


def conv_exp_word(psi: Functional, t: float, w: Word, tol: float = 1e-14,
                  order_cap: int = CONV_ORDER_CAP) -> Tuple[complex, int]:
    """``sum_n t^n psi^{*n}(w) / n!`` summed adaptively; returns (value, order)."""
    ctx = psi.ctx
    if not w:
        return 1.0 + 0j, 0
    kinds, J, K = _pattern(ctx, w)
    dims = _dims(ctx, kinds)
    mat = corep_matrix(psi, kinds)
    jj = _flat_index(dims, J)
    term = np.zeros(mat.shape[0], dtype=complex)
    term[_flat_index(dims, K)] = 1.0
    total = term.copy()
    for n in range(1, order_cap + 1):
        term = (t / n) * (mat @ term)
        total += term
        if np.linalg.norm(term) < tol * (abs(total[jj]) + 1.0):
            return complex(total[jj]), n
    raise ConvergenceError(f"conv_exp did not converge within order {order_cap}")


def conv_exp(psi: Functional, t: float, a: AlgElt, tol: float = 1e-14,
             order_cap: int = CONV_ORDER_CAP) -> complex:
    """Value of the convolution exponential ``exp_*(t psi)`` on ``a``."""
    q0 = psi.q0
    return sum((c.evaluate(q0) * conv_exp_word(psi, t, w, tol, order_cap)[0]
                for w, c in a.terms.items()), 0j)


def conv_exp_functional(psi: Functional, t: float, tol: float = 1e-14,
                        order_cap: int = CONV_ORDER_CAP) -> Functional:
    return Functional(psi.ctx, lambda w: conv_exp_word(psi, t, w, tol, order_cap)[0],
                      {}, f"exp_*({t}*{psi.description})", psi.q0)


def semigroup_defect(psi: Functional, s: float, t: float, words: Sequence[Word],
                     tol: float = 1e-14) -> float:
    """max |(phi_s * phi_t)(w) - phi_{s+t}(w)| over words, with phi_t = exp_*(t psi)."""
    phi_s = conv_exp_functional(psi, s, tol)
    phi_t = conv_exp_functional(psi, t, tol) if t != s else phi_s
    prod = convolve(phi_s, phi_t)
    phi_st = conv_exp_functional(psi, s + t, tol)
    return max((abs(prod.word(tuple(w)) - phi_st.word(tuple(w))) for w in words), default=0.0)


__all__ = [
    "coproduct_iter", "coproduct_word", "tensor_apply", "convolve", "corep_matrix",
    "conv_power_word", "conv_exp", "conv_exp_word", "conv_exp_functional", "semigroup_defect",
    "CapExceeded", "ConvergenceError", "COPRODUCT_TERM_CAP", "CONV_ORDER_CAP",
]
