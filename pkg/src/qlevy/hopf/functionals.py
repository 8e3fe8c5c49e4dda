"""Linear functionals on the coordinate algebras and the projection onto K_2.

The counit and the torus-character derivatives are computed exactly with the
exponent-vector method: a word whose letters are all diagonal
(``u[k,k]``, ``u*[k,k]``, ``Dinv``, ``Dinv*``) is sent by the torus character
with angles ``theta`` to ``exp(i <n(word), theta>)``; every other word is sent
to 0.

Derivative chart.  For SU_q(N) the free angles are theta_2..theta_N with
theta_1 = -(theta_2 + ... + theta_N), so ``m_j = n_j - n_1``.  For U_q(N) the
basis extension is {d_2, ..., d_N, d_D}; its dual functionals come from the
torus of SU_q(N+1) pulled back along t_N, where Dinv plays the role of the
corner entry: ``m_j = n_j - n_1`` for j = 2..N and ``m_D = n_D - n_1`` with
``n_D = #Dinv - #Dinv*``.  In both cases ``eps'_j(word) = i m_j`` and
``eps''_{jk}(word) = -m_j m_k``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..algebra.coeffs import I_UNIT, QCoeff
from ..algebra.core import AlgebraCtx, AlgElt, Word

Label = Union[int, str]

DEFAULT_Q0 = Fraction(1, 2)


def ctx_q0(ctx: AlgebraCtx, q0=None) -> Fraction:
    if q0 is not None:
        return Fraction(q0)
    return ctx.q0 if ctx.q0 is not None else DEFAULT_Q0


# ---------------------------------------------------------------------------
# exponent vectors


def torus_exponents(ctx: AlgebraCtx, w: Word) -> Optional[Tuple[Tuple[int, ...], int]]:
    """``(n_1..n_N, n_D)`` for an all-diagonal word, else None."""
    N = ctx.N
    NN = N * N
    n = [0] * N
    nd = 0
    for x in w:
        if x < NN:
            j, k = divmod(x, N)
            if j != k:
                return None
            n[j] += 1
        elif x < 2 * NN:
            j, k = divmod(x - NN, N)
            if j != k:
                return None
            n[j] -= 1
        elif x == 2 * NN:
            nd += 1
        else:
            nd -= 1
    return tuple(n), nd


def chart_labels(ctx: AlgebraCtx) -> List[Label]:
    """Labels of the basis extension E_1 (and of the dual derivatives)."""
    labels: List[Label] = list(range(2, ctx.N + 1))
    if ctx.variant == "Uq":
        labels.append("D")
    return labels


def chart_vector(ctx: AlgebraCtx, w: Word) -> Optional[Tuple[int, ...]]:
    """The vector ``m`` of a diagonal word in the derivative chart, else None."""
    ex = torus_exponents(ctx, w)
    if ex is None:
        return None
    n, nd = ex
    m = [n[j] - n[0] for j in range(1, ctx.N)]
    if ctx.variant == "Uq":
        m.append(nd - n[0])
    return tuple(m)


def _label_index(ctx: AlgebraCtx, label: Label) -> int:
    labels = chart_labels(ctx)
    try:
        return labels.index(label)
    except ValueError:
        raise IndexError(f"no derivative with label {label!r} in {labels}") from None


# ---------------------------------------------------------------------------
# exact evaluation helpers


def counit_word(ctx: AlgebraCtx, w: Word) -> int:
    return 1 if torus_exponents(ctx, w) is not None else 0


def counit_exact(a: AlgElt) -> QCoeff:
    out = QCoeff.const(0)
    for w, c in a.terms.items():
        if torus_exponents(a.ctx, w) is not None:
            out = out + c
    return out


def eps_prime_exact(a: AlgElt, label: Label) -> QCoeff:
    idx = _label_index(a.ctx, label)
    out = QCoeff.const(0)
    for w, c in a.terms.items():
        m = chart_vector(a.ctx, w)
        if m is not None and m[idx]:
            out = out + c * m[idx]
    return out * I_UNIT


def eps_second_exact(a: AlgElt, j: Label, k: Label) -> QCoeff:
    ij, ik = _label_index(a.ctx, j), _label_index(a.ctx, k)
    out = QCoeff.const(0)
    for w, c in a.terms.items():
        m = chart_vector(a.ctx, w)
        if m is not None and m[ij] and m[ik]:
            out = out - c * (m[ij] * m[ik])
    return out


# ---------------------------------------------------------------------------


@dataclass
class Functional:
    """A linear functional given by its values on words.

    ``word_fn`` maps a word (tuple of letter codes) to a complex number; the
    functional extends linearly with coefficients specialized at ``q0``.
    Word values are memoized.
    """

    ctx: AlgebraCtx
    word_fn: Callable[[Word], complex]
    flags: Dict[str, bool] = field(default_factory=dict)
    description: str = ""
    q0: Optional[Fraction] = None
    _memo: Dict[Word, complex] = field(default_factory=dict, repr=False)
    # per-functional scratch space (e.g. corepresentation matrices for conv_exp)
    _aux: Dict[object, object] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.q0 = ctx_q0(self.ctx, self.q0)

    def word(self, w: Word) -> complex:
        v = self._memo.get(w)
        if v is None:
            v = complex(self.word_fn(w))
            self._memo[w] = v
        return v

    def __call__(self, a: AlgElt) -> complex:
        if a.ctx != self.ctx:
            raise ValueError("context mismatch")
        q0 = self.q0
        return sum((c.evaluate(q0) * self.word(w) for w, c in a.terms.items()), 0j)

    def evaluate_many(self, elts: Sequence[AlgElt]) -> np.ndarray:
        return np.array([self(a) for a in elts], dtype=complex)

    # -- linear structure --------------------------------------------------
    def __add__(self, other: "Functional") -> "Functional":
        if not isinstance(other, Functional):
            return NotImplemented
        f, g = self, other
        flags = {k: bool(f.flags.get(k) and g.flags.get(k))
                 for k in ("hermitian", "zero_normalized", "drift", "gaussian", "generating_candidate")}
        return Functional(self.ctx, lambda w: f.word(w) + g.word(w), flags,
                          f"({f.description}) + ({g.description})", self.q0)

    def __rmul__(self, lam) -> "Functional":
        f = self
        flags: Dict[str, bool] = {}
        if isinstance(lam, (int, float, Fraction)):
            # real multiples keep the linear-subspace flags; positivity needs lam >= 0
            keep = ("hermitian", "zero_normalized", "drift", "gaussian")
            if lam >= 0:
                keep += ("generating_candidate",)
            flags = {k: v for k, v in f.flags.items() if k in keep}
        return Functional(self.ctx, lambda w: lam * f.word(w), flags, f"{lam}*({f.description})", self.q0)

    def __neg__(self) -> "Functional":
        return (-1) * self

    def __sub__(self, other: "Functional") -> "Functional":
        return self + (-1) * other


def zero_functional(ctx: AlgebraCtx, q0=None) -> Functional:
    return Functional(ctx, lambda w: 0.0, {"hermitian": True, "zero_normalized": True, "drift": True,
                                           "gaussian": True, "generating_candidate": True}, "0", q0)


def counit_functional(ctx: AlgebraCtx, q0=None) -> Functional:
    return Functional(ctx, lambda w: float(counit_word(ctx, w)), {"hermitian": True}, "counit", q0)


def counit(a: AlgElt, q0=None) -> complex:
    """Counit: u[j,k] -> delta_jk, Dinv -> 1, extended multiplicatively."""
    return counit_exact(a).evaluate(ctx_q0(a.ctx, q0))


def eps_theta(a: AlgElt, theta: Sequence[float], q0=None) -> complex:
    """Torus character.

    SU_q(N): ``theta`` holds theta_2..theta_N (theta_1 = -sum).
    U_q(N): ``theta`` holds theta_1..theta_N and Dinv -> exp(-i sum theta).
    """
    ctx = a.ctx
    th = np.asarray(theta, dtype=float)
    if ctx.variant == "Uq":
        if th.shape != (ctx.N,):
            raise ValueError(f"expected {ctx.N} angles")
        full = th
        thd = -float(th.sum())
    else:
        if th.shape != (ctx.N - 1,):
            raise ValueError(f"expected {ctx.N - 1} angles")
        full = np.concatenate([[-th.sum()], th])
        thd = 0.0
    q0 = ctx_q0(ctx, q0)
    out = 0j
    for w, c in a.terms.items():
        ex = torus_exponents(ctx, w)
        if ex is None:
            continue
        n, nd = ex
        out += c.evaluate(q0) * cmath.exp(1j * (float(np.dot(n, full)) + nd * thd))
    return out


def eps_prime(ctx: AlgebraCtx, label: Label, q0=None) -> Functional:
    """First derivative at 0 of the torus family in the chart direction ``label``."""
    idx = _label_index(ctx, label)

    def fn(w: Word) -> complex:
        m = chart_vector(ctx, w)
        return 1j * m[idx] if m is not None else 0.0

    return Functional(ctx, fn, {"hermitian": True, "zero_normalized": True, "drift": True,
                                "gaussian": True, "generating_candidate": True},
                      f"eps'_{label}", q0)


def eps_second(ctx: AlgebraCtx, j: Label, k: Label, q0=None) -> Functional:
    ij, ik = _label_index(ctx, j), _label_index(ctx, k)

    def fn(w: Word) -> complex:
        m = chart_vector(ctx, w)
        return -float(m[ij] * m[ik]) if m is not None else 0.0

    return Functional(ctx, fn, {"hermitian": True, "zero_normalized": True, "gaussian": True},
                      f"eps''_{j}{k}", q0)


def drift_functional(ctx: AlgebraCtx, r: Sequence[float], q0=None) -> Functional:
    """``sum_j r_j eps'_j`` over the chart labels."""
    r = np.asarray(r, dtype=float)
    labels = chart_labels(ctx)
    if r.shape != (len(labels),):
        raise ValueError(f"drift vector must have length {len(labels)}")

    def fn(w: Word) -> complex:
        m = chart_vector(ctx, w)
        return 1j * float(np.dot(r, m)) if m is not None else 0.0

    return Functional(ctx, fn, {"hermitian": True, "zero_normalized": True, "drift": True,
                                "gaussian": True, "generating_candidate": True}, f"drift{list(r)}", q0)


# ---------------------------------------------------------------------------
# basis extension and projection


@dataclass(frozen=True)
class BasisExtension:
    ctx: AlgebraCtx
    labels: Tuple[Label, ...]
    elements: Tuple[AlgElt, ...]

    def element(self, label: Label) -> AlgElt:
        return self.elements[self.labels.index(label)]


def d_element(ctx: AlgebraCtx, label: Label) -> AlgElt:
    """``d_j = (u[j,j] - u*[j,j]) / 2i`` or ``d_D = (Dinv - Dinv*) / 2i``."""
    half_minus_i = QCoeff.laurent({}, {0: Fraction(-1, 2)})
    if label == "D":
        if ctx.variant != "Uq":
            raise ValueError("d_D exists only for U_q")
        return (ctx.dinv() - ctx.dinv_star()).scale(half_minus_i)
    j = int(label)
    return (ctx.u(j, j) - ctx.ustar(j, j)).scale(half_minus_i)


def basis_extension(ctx: AlgebraCtx) -> BasisExtension:
    labels = tuple(chart_labels(ctx))
    return BasisExtension(ctx, labels, tuple(d_element(ctx, l) for l in labels))


def projP(a: AlgElt) -> AlgElt:
    """``P(a) = a - eps(a) 1 - sum_k eps'_k(a) d_k`` with exact coefficients."""
    ctx = a.ctx
    out = a - ctx.scalar(counit_exact(a))
    for label in chart_labels(ctx):
        c = eps_prime_exact(a, label)
        if c:
            out = out - d_element(ctx, label).scale(c)
    return out


def centered_letter(ctx: AlgebraCtx, code: int) -> AlgElt:
    """``delta(g) = g - eps(g)``."""
    g = ctx.letter(code)
    return g - ctx.one() if counit_word(ctx, (code,)) else g


__all__ = [
    "Functional", "BasisExtension", "DEFAULT_Q0", "ctx_q0",
    "torus_exponents", "chart_labels", "chart_vector",
    "counit", "counit_exact", "counit_word", "counit_functional", "zero_functional",
    "eps_theta", "eps_prime", "eps_second", "eps_prime_exact", "eps_second_exact",
    "drift_functional", "d_element", "basis_extension", "projP", "centered_letter",
]
