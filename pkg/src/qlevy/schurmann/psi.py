"""Generating functionals of cocycles: the K_2 splitting route and the p-limit route.

Both routes evaluate ``psi = psi_L`` with ``psi_L ∘ P = psi_L``.

*Exact route.*  ``P(a)`` lies in K_2.  Each word is expanded over centered
letters ``delta(g) = g - eps(g)``; products of two or more centered letters
split after the first factor.  The remaining linear combination of single
centered letters is rewritten with the kernel identities: off-diagonal
letters through ``(1-q) u[j,k] = q delta(u[l,l]) u[j,k] - u[j,k] delta(u[l,l])``
with ``l = max(j,k)``; diagonal letters through
``delta(u[j,j]) + delta(u*[j,j]) = -sum_{p != j} u[j,p] u*[j,p] - delta(u[j,j]) delta(u*[j,j])``
and the determinant identity, which expresses ``sum_j d_j`` as an explicit
element of K_2.  Then ``psi(a b) = <eta(a*), eta(b)>``.

*p-limit route.*  ``psi(a) = lim_p <f_p, pi(P(a)) f_p>`` with
``f_p = -(I - p pi(u[N,N]))^{-1} eta(u[N,N])``, extrapolated along p_m.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.coeffs import I_UNIT, ONE, Q, QCoeff
from ..algebra.core import AlgebraCtx, AlgElt, Word
from ..algebra.determinants import quantum_determinant
from ..hopf.battery import triple_identity_defect
from ..hopf.functionals import (Functional, centered_letter, chart_labels, chart_vector, counit_exact,
                                counit_word, eps_prime_exact, projP)
from ..repkit.reps import MatRep
from .cocycle import Cocycle, coboundary_vectors, p_schedule, richardson

Product = Tuple[int, ...]  # delta(c_1) delta(c_2) ... delta(c_k), k >= 2
Terms = Dict[Product, QCoeff]


class SplitError(ValueError):
    pass


def _add(terms: Terms, key: Product, c: QCoeff) -> None:
    v = terms.get(key)
    v = c if v is None else v + c
    if v:
        terms[key] = v
    else:
        terms.pop(key, None)


def _is_diag(ctx: AlgebraCtx, code: int) -> bool:
    return counit_word(ctx, (code,)) == 1


def _expand_word(ctx: AlgebraCtx, w: Word, c: QCoeff, products: Terms, linear: Dict[int, QCoeff]) -> QCoeff:
    """Expand ``c w`` over centered letters; returns the constant term."""
    diag = [i for i, x in enumerate(w) if _is_diag(ctx, x)]
    off = [i for i, x in enumerate(w) if not _is_diag(ctx, x)]
    const = ctx.zero().constant_term()
    for r in range(len(diag) + 1):
        for extra in itertools.combinations(diag, r):
            S = sorted(off + list(extra))
            if len(S) >= 2:
                _add(products, tuple(w[i] for i in S), c)
            elif len(S) == 1:
                x = w[S[0]]
                v = linear.get(x)
                linear[x] = c if v is None else v + c
            else:
                const = const + c
    return const


def _star(ctx: AlgebraCtx, codes: Product) -> Product:
    return tuple(ctx.star_code(x) for x in reversed(codes))


@lru_cache(maxsize=16)
def _sum_d_products(ctx: AlgebraCtx) -> Tuple[Tuple[Product, QCoeff], ...]:
    """``sum_j d_j`` as a combination of centered products (exact)."""
    N = ctx.N
    stair = tuple(j * N + j for j in range(N))
    D = quantum_determinant(ctx)
    if D.terms.get(stair) != ONE:
        raise SplitError("unexpected normalization of the quantum determinant")
    V: Terms = {}
    for w, c in D.terms.items():
        if w == stair:
            continue
        lin: Dict[int, QCoeff] = {}
        const = _expand_word(ctx, w, -c, V, lin)
        if any(lin.values()) or const:
            raise SplitError("determinant term outside K_2")
    for r in range(2, N + 1):
        for S in itertools.combinations(stair, r):
            _add(V, S, -ONE)
    # sum d = (V - V*) / 2i
    half_over_i = QCoeff.laurent({}, {0: Fraction(-1, 2)})  # 1/(2i) = -i/2
    out: Terms = {}
    for key, c in V.items():
        _add(out, key, c * half_over_i)
        _add(out, _star(ctx, key), -(c.conjugate() * half_over_i))
    return tuple(sorted(out.items()))


def split_K2_products(x: AlgElt) -> Terms:
    """``x`` (with eps(x) = 0 and eps'_k(x) = 0) as a combination of centered products."""
    ctx = x.ctx
    if ctx.variant != "SUq":
        raise SplitError("split_K2 is implemented for SU_q(N)")
    if counit_exact(x):
        raise SplitError("eps(x) != 0")
    for label in chart_labels(ctx):
        if eps_prime_exact(x, label):
            raise SplitError(f"eps'_{label}(x) != 0: x is not in K_2")
    N = ctx.N
    NN = N * N
    products: Terms = {}
    linear: Dict[int, QCoeff] = {}
    for w, c in x.terms.items():
        _expand_word(ctx, w, c, products, linear)
    inv_1mq = (ONE - Q).inverse()
    a = [ctx.zero().constant_term()] * N
    b = [ctx.zero().constant_term()] * N
    for code, c in linear.items():
        if not c:
            continue
        starred = code >= NN
        j, k = divmod(code - (NN if starred else 0), N)
        if j == k:
            if starred:
                b[j] = b[j] + c
            else:
                a[j] = a[j] + c
            continue
        l = max(j, k)
        ll = l * N + l + (NN if starred else 0)
        if not starred:
            _add(products, (ll, code), c * Q * inv_1mq)
            _add(products, (code, ll), -(c * inv_1mq))
        else:
            _add(products, (code, ll), c * Q * inv_1mq)
            _add(products, (ll, code), -(c * inv_1mq))
    cs = [I_UNIT * (a[j] - b[j]) for j in range(N)]
    if any(cj != cs[0] for cj in cs):
        raise SplitError("residual pure d_k terms with nonzero coefficient")
    half = QCoeff.const(Fraction(1, 2))
    for j in range(N):
        h = (a[j] + b[j]) * half
        if not h:
            continue
        for p in range(N):
            _add(products, (j * N + p, NN + j * N + p), -h)
    if cs[0]:
        for key, c in _sum_d_products(ctx):
            _add(products, key, c * cs[0])
    return products


def split_K2(x: AlgElt) -> List[Tuple[AlgElt, AlgElt]]:
    """Pairs (a_i, b_i) in K_1 x K_1 with x = sum a_i b_i."""
    ctx = x.ctx
    out = []
    for codes, c in sorted(split_K2_products(x).items()):
        a = centered_letter(ctx, codes[0]).scale(c)
        b = ctx.one()
        for code in codes[1:]:
            b = b * centered_letter(ctx, code)
        out.append((a, b))
    return out


# ---------------------------------------------------------------------------
# exact route


class ExactPsi:
    """``psi(a) = sum <eta(a_i*), eta(b_i)>`` over ``split_K2(P(a))``, cached per word."""

    def __init__(self, eta: Cocycle):
        if eta.ctx.variant != "SUq":
            raise SplitError("psi_exact works on SU_q(N)")
        self.eta = eta
        self.q0 = eta.rep.q0
        self._pair: Dict[Product, complex] = {}
        self._word: Dict[Word, complex] = {}

    def pair_value(self, codes: Product) -> complex:
        v = self._pair.get(codes)
        if v is None:
            ctx = self.eta.ctx
            left = self.eta.letter_value(ctx.star_code(codes[0]))
            right = self.eta.centered_product_value(codes[1:])
            v = complex(np.vdot(left, right))
            self._pair[codes] = v
        return v

    def of_K2(self, x: AlgElt) -> complex:
        terms = split_K2_products(x)
        re, im = [], []
        for codes, c in terms.items():
            z = c.evaluate(self.q0) * self.pair_value(codes)
            re.append(z.real)
            im.append(z.imag)
        return complex(math.fsum(re), math.fsum(im))

    def word(self, w: Word) -> complex:
        v = self._word.get(w)
        if v is None:
            ctx = self.eta.ctx
            v = self.of_K2(projP(ctx.word(w))) if w else 0j
            self._word[w] = v
        return v

    def __call__(self, a: AlgElt) -> complex:
        return sum((c.evaluate(self.q0) * self.word(w) for w, c in a.terms.items()), 0j)

    def functional(self, description: str = "psi_exact") -> Functional:
        return Functional(self.eta.ctx, self.word, {"hermitian": True, "zero_normalized": True,
                                                     "generating_candidate": True}, description, self.q0)


def psi_exact(pi: MatRep, eta: Cocycle, a: AlgElt) -> complex:
    if eta.rep is not pi:
        raise SplitError("cocycle belongs to a different representation")
    return ExactPsi(eta)(a)


def psi_exact_functional(eta: Cocycle) -> Functional:
    return ExactPsi(eta).functional(f"psi_exact({eta.kind})")


# ---------------------------------------------------------------------------
# coboundary functional and the p-limit route


def _d_apply(pi: MatRep, label, f: np.ndarray) -> np.ndarray:
    N = pi.ctx.N
    j = int(label) - 1
    A = pi.letter_matrix(j * N + j)
    return (A @ f - A.conj().T @ f) / 2j


def _word_terms(pi: MatRep, w: Word, f: np.ndarray, dfs: Dict) -> List[complex]:
    """The three P-terms of ``<f, pi(P(w)) f>``: word, counit part, drift part."""
    ctx = pi.ctx
    t_word = complex(np.vdot(f, pi.apply_word(w, f))) if w else complex(np.vdot(f, f))
    e = counit_word(ctx, w)
    t_eps = -e * complex(np.vdot(f, f))
    m = chart_vector(ctx, w)
    t_drift = 0j
    if m is not None:
        for label, mj in zip(chart_labels(ctx), m):
            if mj:
                t_drift -= 1j * mj * dfs[label]
    return [t_word, t_eps, t_drift]


def coboundary_functional(pi: MatRep, f: np.ndarray) -> Functional:
    """``a -> <f, pi(P(a)) f>``, the functional of the coboundary of f."""
    f = np.asarray(f, dtype=complex)
    dfs = {l: complex(np.vdot(f, _d_apply(pi, l, f))) for l in chart_labels(pi.ctx)}

    def fn(w: Word) -> complex:
        t = _word_terms(pi, w, f, dfs)
        return complex(math.fsum(z.real for z in t), math.fsum(z.imag for z in t))

    return Functional(pi.ctx, fn, {"hermitian": True, "zero_normalized": True, "generating_candidate": True},
                      "coboundary functional", pi.q0)


@dataclass
class PLimitResult:
    value: complex
    converged: bool
    trace: List[complex]
    extrapolants: List[complex]
    conditioning: float


class PLimitPsi:
    """Evaluator of ``lim_p <f_p, pi(P(a)) f_p>`` with per-word caching."""

    def __init__(self, pi: MatRep, eta_nn: np.ndarray, schedule: Optional[Sequence[float]] = None,
                 tol: float = 1e-9):
        self.pi = pi
        self.ps = list(schedule) if schedule is not None else p_schedule()
        self.tol = tol
        self.fs = coboundary_vectors(pi, eta_nn, self.ps)
        labels = chart_labels(pi.ctx)
        self.dfs = [{l: complex(np.vdot(f, _d_apply(pi, l, f))) for l in labels} for f in self.fs]
        self._seq: Dict[Word, Tuple[np.ndarray, float]] = {}

    def _sequence(self, w: Word) -> Tuple[np.ndarray, float]:
        hit = self._seq.get(w)
        if hit is not None:
            return hit
        vals = np.zeros(len(self.ps), dtype=complex)
        big = 0.0
        for i, (f, dfs) in enumerate(zip(self.fs, self.dfs)):
            t = _word_terms(self.pi, w, f, dfs)
            vals[i] = complex(math.fsum(z.real for z in t), math.fsum(z.imag for z in t))
            big = max(big, max(abs(z) for z in t))
        self._seq[w] = (vals, big)
        return vals, big

    def evaluate(self, a: AlgElt) -> PLimitResult:
        q0 = self.pi.q0
        seq = np.zeros(len(self.ps), dtype=complex)
        big = 0.0
        for w, c in a.terms.items():
            s, b = self._sequence(w)
            cv = c.evaluate(q0)
            seq = seq + cv * s
            big = max(big, abs(cv) * b)
        ext = richardson(seq)
        step = abs(ext[-1] - ext[-2]) if len(ext) >= 2 else float("inf")
        val = complex(ext[-1])
        ok = step < self.tol * max(1.0, abs(val))
        cond = big / max(abs(val), 1e-300) if big else 1.0
        return PLimitResult(val, bool(ok), seq.tolist(), ext.tolist(), cond)

    def word(self, w: Word) -> complex:
        return self.evaluate(self.pi.ctx.word(w)).value

    def functional(self) -> Functional:
        return Functional(self.pi.ctx, self.word, {"hermitian": True, "zero_normalized": True},
                          "psi_plimit", self.pi.q0)


def psi_plimit(pi: MatRep, eta_nn: np.ndarray, a: AlgElt, schedule: Optional[Sequence[float]] = None,
               tol: float = 1e-9) -> PLimitResult:
    return PLimitPsi(pi, eta_nn, schedule, tol).evaluate(a)


# ---------------------------------------------------------------------------
# triple check and the H^pi norm


@dataclass
class TripleReport:
    defect: float
    pairs: int
    tol: float
    passed: bool = field(default=False)

    def as_dict(self) -> dict:
        return {"defect": self.defect, "pairs": self.pairs, "tol": self.tol, "passed": self.passed}


def triple_check(pi: MatRep, eta, psi: Functional, battery: Sequence[AlgElt], tol: float = 1e-8) -> TripleReport:
    d = triple_identity_defect(psi, eta, battery)
    return TripleReport(d, len(battery) ** 2, tol, d <= tol)


def h_pi_norm(pi: MatRep, f: np.ndarray) -> float:
    """``sqrt(sum_j ||pi(1 - u[j,j]) f||^2)``."""
    f = np.asarray(f, dtype=complex)
    N = pi.ctx.N
    tot = 0.0
    for j in range(N):
        v = f - pi.letter_matrix(j * N + j) @ f
        tot += float(np.vdot(v, v).real)
    return math.sqrt(tot)


__all__ = ["split_K2", "split_K2_products", "SplitError", "ExactPsi", "psi_exact", "psi_exact_functional",
           "coboundary_functional", "PLimitPsi", "PLimitResult", "psi_plimit", "triple_check", "TripleReport",
           "h_pi_norm"]
