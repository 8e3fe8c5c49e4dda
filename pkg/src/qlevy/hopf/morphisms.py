"""Quantum-subgroup morphisms and living-on checks.

* ``t_N``: SU_q(N+1) -> U_q(N) keeps the upper-left N x N block, kills the
  rest of the last row and column and sends the corner to Dinv;
* ``t̆_N``: U_q(N) -> SU_q(N) sends Dinv to 1;
* ``s_N = t̆_{N-1} ∘ t_{N-1}``: SU_q(N) -> SU_q(N-1), corner to 1;
* ``s̆_N = t_{N-1} ∘ t̆_N``: U_q(N) -> U_q(N-1);
* iterates ``s_{n,N}`` and ``s̆_{n,N}``;
* ``tau_N``: SU_q(N) -> functions on the torus T^{N-1}, u[j,k] -> delta_jk z_j
  with z_1 = (z_2 ... z_N)^{-1}.

All maps are *-homomorphisms, so starred letters go to the adjoints of the
images of their partners.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..algebra.coeffs import ONE, QCoeff
from ..algebra.core import AlgebraCtx, AlgElt
from ..algebra.relations import relation_catalog
from ..algebra.rewrite import reduce
from .functionals import Functional, counit_exact


# ---------------------------------------------------------------------------
# the torus target


@dataclass(frozen=True)
class TorusCtx:
    N: int  # the torus is T^{N-1}, coordinates z_2..z_N


class TorusElt:
    """Laurent polynomial in z_2..z_N (exponent tuples -> QCoeff)."""

    __slots__ = ("tctx", "terms")

    def __init__(self, tctx: TorusCtx, terms: Dict[Tuple[int, ...], QCoeff]):
        self.tctx = tctx
        self.terms = {e: c for e, c in terms.items() if c}

    def __add__(self, other: "TorusElt") -> "TorusElt":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return TorusElt(self.tctx, out)

    def __mul__(self, other: "TorusElt") -> "TorusElt":
        out: Dict[Tuple[int, ...], QCoeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return TorusElt(self.tctx, out)

    def scale(self, c: QCoeff) -> "TorusElt":
        return TorusElt(self.tctx, {e: v * c for e, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def counit(self) -> QCoeff:
        out = QCoeff.const(0)
        for c in self.terms.values():
            out = out + c
        return out

    def evaluate(self, theta: Sequence[float], q0) -> complex:
        th = np.asarray(theta, dtype=float)
        return sum((c.evaluate(q0) * np.exp(1j * float(np.dot(e, th))) for e, c in self.terms.items()), 0j)


def _torus_unit(tctx: TorusCtx) -> TorusElt:
    return TorusElt(tctx, {(0,) * (tctx.N - 1): ONE})


# ---------------------------------------------------------------------------


Image = Union[AlgElt, TorusElt]


@dataclass
class Morphism:
    name: str
    source: AlgebraCtx
    target: Union[AlgebraCtx, TorusCtx]
    table: Dict[int, Image]

    def image(self, code: int) -> Image:
        return self.table[code]

    def describe(self) -> Dict[str, str]:
        out = {}
        for code, img in sorted(self.table.items()):
            if isinstance(img, AlgElt):
                out[str(self.source.sym(code))] = str(img)
            else:
                out[str(self.source.sym(code))] = repr(img.terms)
        return out


def _target_one(target) -> Image:
    return target.one() if isinstance(target, AlgebraCtx) else _torus_unit(target)


def _target_zero(target) -> Image:
    return target.zero() if isinstance(target, AlgebraCtx) else TorusElt(target, {})


def morphism_apply(m: Morphism, a: AlgElt) -> Image:
    """Substitute generator images (formal; call ``reduce`` for normal forms)."""
    if a.ctx != m.source:
        raise ValueError(f"{m.name} expects source {m.source}, got {a.ctx}")
    out = _target_zero(m.target)
    for w, c in a.terms.items():
        term = _target_one(m.target)
        for x in w:
            term = term * m.table[x]
            if term.is_zero():
                break
        if not term.is_zero():
            out = out + term.scale(c)
    return out


def _complete_table(source: AlgebraCtx, target, base: Dict[int, Image]) -> Dict[int, Image]:
    """Add images of starred letters as adjoints of the given ones."""
    table = dict(base)
    for code, img in base.items():
        sc = source.star_code(code)
        if sc not in table:
            if isinstance(img, AlgElt):
                table[sc] = img.adjoint()
            else:
                table[sc] = TorusElt(img.tctx, {tuple(-x for x in e): c.conjugate() for e, c in img.terms.items()})
    return table


def t_morphism(N: int) -> Morphism:
    """``t_N``: SU_q(N+1) -> U_q(N)."""
    src = AlgebraCtx(N + 1, "SUq")
    tgt = AlgebraCtx(N, "Uq")
    base: Dict[int, Image] = {}
    for j in range(1, N + 2):
        for k in range(1, N + 2):
            code = (j - 1) * (N + 1) + (k - 1)
            if j <= N and k <= N:
                base[code] = tgt.u(j, k)
            elif j == k == N + 1:
                base[code] = tgt.dinv()
            else:
                base[code] = tgt.zero()
    return Morphism(f"t_{N}", src, tgt, _complete_table(src, tgt, base))


def t_breve(N: int) -> Morphism:
    """``t̆_N``: U_q(N) -> SU_q(N), Dinv -> 1."""
    src = AlgebraCtx(N, "Uq")
    tgt = AlgebraCtx(N, "SUq")
    base: Dict[int, Image] = {}
    for j in range(1, N + 1):
        for k in range(1, N + 1):
            base[(j - 1) * N + (k - 1)] = tgt.u(j, k)
    base[src.dinv_code] = tgt.one()
    return Morphism(f"t̆_{N}", src, tgt, _complete_table(src, tgt, base))


def compose(m2: Morphism, m1: Morphism, name: Optional[str] = None) -> Morphism:
    """``m2 ∘ m1``."""
    if m1.target != m2.source:
        raise ValueError(f"cannot compose {m2.name} after {m1.name}")
    table = {code: morphism_apply(m2, img) for code, img in m1.table.items()}
    return Morphism(name or f"{m2.name}∘{m1.name}", m1.source, m2.target, table)


def s_morphism(N: int) -> Morphism:
    """``s_N = t̆_{N-1} ∘ t_{N-1}``: SU_q(N) -> SU_q(N-1)."""
    if N < 2:
        raise ValueError("s_N needs N >= 2")
    return compose(t_breve(N - 1), t_morphism(N - 1), f"s_{N}")


def s_chain(n: int, N: int) -> Morphism:
    """``s_{n,N} = s_{n+1} ∘ ... ∘ s_N``: SU_q(N) -> SU_q(n)."""
    if not 1 <= n < N:
        raise ValueError("need 1 <= n < N")
    m = s_morphism(N)
    for k in range(N - 1, n, -1):
        m = compose(s_morphism(k), m)
    m.name = f"s_{n},{N}"
    return m


def s_breve(N: int) -> Morphism:
    """``s̆_N = t_{N-1} ∘ t̆_N``: U_q(N) -> U_q(N-1)."""
    if N < 2:
        raise ValueError("s̆_N needs N >= 2")
    return compose(t_morphism(N - 1), t_breve(N), f"s̆_{N}")


def s_breve_chain(n: int, N: int) -> Morphism:
    if not 1 <= n < N:
        raise ValueError("need 1 <= n < N")
    m = s_breve(N)
    for k in range(N - 1, n, -1):
        m = compose(s_breve(k), m)
    m.name = f"s̆_{n},{N}"
    return m


def identity_morphism(ctx: AlgebraCtx) -> Morphism:
    table = {c: ctx.letter(c) for c in range(ctx.n_letters)
             if c < 2 * ctx.N * ctx.N or ctx.variant == "Uq"}
    return Morphism(f"id_{ctx.variant}({ctx.N})", ctx, ctx, table)


def torus_morphism(N: int) -> Morphism:
    """``tau_N``: SU_q(N) -> T^{N-1}."""
    src = AlgebraCtx(N, "SUq")
    tctx = TorusCtx(N)
    dim = N - 1
    base: Dict[int, Image] = {}
    for j in range(1, N + 1):
        for k in range(1, N + 1):
            code = (j - 1) * N + (k - 1)
            if j != k:
                base[code] = TorusElt(tctx, {})
            elif j == 1:
                base[code] = TorusElt(tctx, {(-1,) * dim: ONE})
            else:
                e = [0] * dim
                e[j - 2] = 1
                base[code] = TorusElt(tctx, {tuple(e): ONE})
    return Morphism(f"tau_{N}", src, tctx, _complete_table(src, tctx, base))


def verify_morphism(m: Morphism, counit_battery: Optional[Sequence[AlgElt]] = None) -> Dict[str, object]:
    """Relations of the source map to 0; counits are preserved on a battery."""
    failures = []
    for idx, rel in enumerate(relation_catalog(m.source)):
        img = morphism_apply(m, rel)
        if isinstance(img, AlgElt):
            if not reduce(img).is_zero():
                failures.append(idx)
        elif not img.is_zero():
            failures.append(idx)
    counit_bad = 0
    for a in counit_battery or []:
        img = morphism_apply(m, a)
        img_counit = counit_exact(img) if isinstance(img, AlgElt) else img.counit()
        if img_counit != counit_exact(a):
            counit_bad += 1
    return {"relations_failed": failures, "counit_failures": counit_bad,
            "ok": not failures and counit_bad == 0}


def kernel_generators(n: int, N: int) -> List[AlgElt]:
    """``u[j,k] - delta_jk`` (max(j,k) > n) and adjoints: generate ker s_{n,N}."""
    ctx = AlgebraCtx(N, "SUq")
    out = []
    for j in range(1, N + 1):
        for k in range(1, N + 1):
            if max(j, k) > n:
                x = ctx.u(j, k) - (ctx.one() if j == k else ctx.zero())
                out.append(x)
                out.append(x.adjoint())
    return out


# ---------------------------------------------------------------------------
# living-on checks


@dataclass
class LivingReport:
    lives: bool
    residual: float
    checked: int
    detail: str = ""


def lives_on(obj, n: int, tol: float = 1e-8, words_degree: int = 1) -> LivingReport:
    """Does a representation, cocycle or functional on SU_q(N) factor through s_{n,N}?

    * representation (has ``generator_matrix``): pi(u[j,k]) = delta_jk I for max(j,k) > n;
    * cocycle (has ``letter_value`` and ``rep``): the representation lives on SU_q(n)
      and eta(u[j,k]) = 0 for max(j,k) > n;
    * functional: psi(w1 x w2) = 0 for kernel generators x and words w1, w2 of
      degree <= ``words_degree``.
    """
    if hasattr(obj, "generator_matrix"):
        ctx = obj.ctx
        N = ctx.N
        res = 0.0
        cnt = 0
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                if max(j, k) > n:
                    A = obj.generator_matrix((j - 1) * N + (k - 1))
                    target = np.eye(A.shape[0]) if j == k else 0.0
                    res = max(res, float(np.abs(A - target).max()) if A.size else 0.0)
                    cnt += 1
        return LivingReport(res <= tol, res, cnt, "representation")
    if hasattr(obj, "letter_value") and hasattr(obj, "rep"):
        rep_report = lives_on(obj.rep, n, tol)
        N = obj.rep.ctx.N
        res = 0.0
        cnt = 0
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                if max(j, k) > n:
                    v = obj.letter_value((j - 1) * N + (k - 1))
                    res = max(res, float(np.linalg.norm(v)))
                    cnt += 1
        return LivingReport(rep_report.lives and res <= tol, max(res, rep_report.residual), cnt, "cocycle")
    if isinstance(obj, Functional):
        ctx = obj.ctx
        N = ctx.N
        gens = kernel_generators(n, N)
        letters = [c for c in range(2 * N * N)]
        words = [()] + [w for d in range(1, words_degree + 1) for w in itertools.product(letters, repeat=d)]
        res = 0.0
        cnt = 0
        for x in gens:
            for w1 in words:
                for w2 in words:
                    v = obj(ctx.word(w1) * x * ctx.word(w2))
                    res = max(res, abs(v))
                    cnt += 1
        return LivingReport(res <= tol, res, cnt, "functional")
    raise TypeError(f"cannot check living-on for {type(obj).__name__}")


__all__ = [
    "Morphism", "TorusCtx", "TorusElt", "morphism_apply", "compose", "t_morphism", "t_breve",
    "s_morphism", "s_chain", "s_breve", "s_breve_chain", "torus_morphism", "identity_morphism",
    "verify_morphism", "kernel_generators", "lives_on", "LivingReport",
]
