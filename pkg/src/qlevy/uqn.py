"""U_q(N) by reduction through SU_q(N+1).

``t_N: SU_q(N+1) -> U_q(N)`` is a surjective *-homomorphism that keeps the
upper-left block and sends ``u[N+1,N+1]`` to ``Dinv``.  Representations,
functionals and gaussian parameters on U_q(N) are lifted along ``t_N``; the
decomposition pipeline runs on SU_q(N+1) and its functionals are pushed back
through the section ``u[j,k] -> u[j,k]``, ``Dinv -> u[N+1,N+1]``, after
checking that they vanish on the ideal generated by the kernel of ``t_N``.

Chart labels match across the lift: label ``N+1`` of SU_q(N+1) is ``"D"``
of U_q(N), because ``t_N(d_{N+1}) = (Dinv - Dinv^*)/2i = d_D``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .algebra.coeffs import QCoeff
from .algebra.core import AlgebraCtx, AlgElt, Word
from .algebra.rewrite import reduce
from .gauss import GaussCocycle, GaussParams, HermitianReport, gaussian_functional, is_hermitian_gaussian
from .hopf.functionals import (Functional, basis_extension, chart_labels, counit_exact, ctx_q0, d_element,
                               eps_prime, eps_prime_exact, projP)
from .hopf.morphisms import (Morphism, compose, morphism_apply, s_breve_chain, s_chain, t_breve, t_morphism)
from .repkit.reps import MatRep
from .schurmann.hunt import HuntDecomposition, hunt_decompose


class UqError(ValueError):
    pass


# ---------------------------------------------------------------------------
# context


@dataclass
class UqContext:
    """U_q(N) with its basis extension and the dual derivatives of the N-angle torus family."""

    N: int
    q0: Fraction = Fraction(1, 2)
    ctx: AlgebraCtx = field(init=False)
    lifted: AlgebraCtx = field(init=False)

    def __post_init__(self):
        if self.N < 1:
            raise UqError("N must be at least 1")
        self.q0 = Fraction(self.q0)
        self.ctx = AlgebraCtx(self.N, "Uq", self.q0)
        self.lifted = AlgebraCtx(self.N + 1, "SUq", self.q0)

    @property
    def labels(self) -> list:
        return chart_labels(self.ctx)

    def basis(self) -> List[AlgElt]:
        return list(basis_extension(self.ctx).elements)

    def duals(self) -> List[Functional]:
        return [eps_prime(self.ctx, l) for l in self.labels]

    def duality_matrix(self) -> List[List[QCoeff]]:
        """``eps'_j(d_k)`` computed exactly; the identity matrix when the extension is dual."""
        return [[eps_prime_exact(d, j) for d in self.basis()] for j in self.labels]

    def duality_ok(self) -> bool:
        M = self.duality_matrix()
        n = len(M)
        return all(M[a][b] == QCoeff.const(1 if a == b else 0) for a in range(n) for b in range(n))

    def label_map(self) -> Dict[object, object]:
        """U_q(N) chart label -> SU_q(N+1) chart label."""
        out = {l: l for l in self.labels if l != "D"}
        out["D"] = self.N + 1
        return out

    def d_lift_ok(self) -> bool:
        """``t_N(d_{N+1}) = d_D`` and ``t_N(d_j) = d_j`` exactly."""
        t = t_morphism(self.N)
        for l, m in self.label_map().items():
            img = morphism_apply(t, d_element(self.lifted, m))
            if not reduce(img - d_element(self.ctx, l)).is_zero():
                return False
        return True


# ---------------------------------------------------------------------------
# lifting along t_N


def section_table(N: int) -> Dict[int, int]:
    """Letter codes of U_q(N) -> letter codes of SU_q(N+1) (a linear section of t_N on letters)."""
    src = AlgebraCtx(N, "Uq")
    M = N + 1
    out = {}
    for j in range(N):
        for k in range(N):
            out[j * N + k] = j * M + k
            out[N * N + j * N + k] = M * M + j * M + k
    corner = N * M + N
    out[src.dinv_code] = corner
    out[src.dinv_code + 1] = M * M + corner
    return out


def lift_rep(pi: MatRep) -> MatRep:
    """``pi ∘ t_N`` as a representation of SU_q(N+1)."""
    ctx = pi.ctx
    if ctx.variant != "Uq":
        raise UqError("lift_rep expects a U_q(N) representation")
    N = ctx.N
    M = N + 1
    lifted_ctx = AlgebraCtx(M, "SUq", ctx.q0)
    mats = {}
    for j in range(M):
        for k in range(M):
            if j < N and k < N:
                mats[j * M + k] = pi.mats[j * N + k]
            elif j == k == N:
                mats[j * M + k] = pi.mats[ctx.dinv_code]
            else:
                mats[j * M + k] = np.zeros((pi.dim, pi.dim))
    return MatRep(lifted_ctx, mats, pi.heights, f"lift({pi.tag})", dict(pi.meta))


def lift_functional(psi: Functional) -> Functional:
    """``psi ∘ t_N`` on SU_q(N+1)."""
    ctx = psi.ctx
    if ctx.variant != "Uq":
        raise UqError("lift_functional expects a U_q(N) functional")
    t = t_morphism(ctx.N)
    target = AlgebraCtx(ctx.N + 1, "SUq", ctx.q0)

    def fn(w: Word) -> complex:
        img = morphism_apply(t, t.source.word(w))
        return psi(img)

    return Functional(target, fn, dict(psi.flags), f"{psi.description}∘t_{ctx.N}", psi.q0)


def lift_params(p: GaussParams, N: int) -> GaussParams:
    """Relabel U_q(N) gaussian parameters as SU_q(N+1) parameters (``D`` -> ``N+1``)."""
    labels = [l if l != "D" else N + 1 for l in (p.labels or chart_labels(AlgebraCtx(N, "Uq")))]
    return GaussParams(p.r.copy(), p.R.copy(), labels)


def push_params(p: GaussParams, N: int) -> GaussParams:
    labels = [l if l != N + 1 else "D" for l in (p.labels or chart_labels(AlgebraCtx(N + 1, "SUq")))]
    return GaussParams(p.r.copy(), p.R.copy(), labels)


def lift_to_suq(obj, N: Optional[int] = None):
    """Compose a U_q(N) representation, functional or gaussian parameter set with ``t_N``."""
    if isinstance(obj, MatRep):
        return lift_rep(obj)
    if isinstance(obj, Functional):
        return lift_functional(obj)
    if isinstance(obj, GaussParams):
        if N is None:
            raise UqError("lifting gaussian parameters needs N")
        return lift_params(obj, N)
    raise TypeError(f"cannot lift {type(obj).__name__}")


def uq_from_suq(rho: MatRep) -> MatRep:
    """``rho ∘ t̆_N``: a U_q(N) representation with ``Dinv -> 1``."""
    if rho.ctx.variant != "SUq":
        raise UqError("expects an SU_q(N) representation")
    ctx = AlgebraCtx(rho.ctx.N, "Uq", rho.ctx.q0)
    mats = dict(rho.mats)
    mats[ctx.dinv_code] = np.eye(rho.dim)
    return MatRep(ctx, mats, rho.heights, f"breve({rho.tag})", dict(rho.meta))


def uq_twist(rho: MatRep, phase: float) -> MatRep:
    """``u[j,k] -> e^{i phase} rho(u[j,k])``, ``Dinv -> e^{-i N phase}``: rho ∘ t̆_N times a power of the determinant."""
    out = uq_from_suq(rho)
    z = np.exp(1j * phase)
    N = rho.ctx.N
    for c in list(out.mats):
        out.mats[c] = out.mats[c] * (z if c != out.ctx.dinv_code else np.exp(-1j * N * phase))
    out.tag = f"twist({rho.tag}, {phase})"
    out._letters.clear()
    return out


# ---------------------------------------------------------------------------
# push-back along t_N


@dataclass
class PushReport:
    residual: float
    checked: int
    ok: bool


def t_kernel_generators(N: int) -> List[AlgElt]:
    """``u[j,N+1]``, ``u[N+1,k]`` (j, k <= N) and adjoints: generators of ker t_N."""
    ctx = AlgebraCtx(N + 1, "SUq")
    out = []
    for j in range(1, N + 1):
        for x in (ctx.u(j, N + 1), ctx.u(N + 1, j)):
            out.append(x)
            out.append(x.adjoint())
    return out


def push_check(Psi: Functional, N: int, tol: float = 1e-8, degree: int = 1,
               letters: Optional[Sequence[int]] = None) -> PushReport:
    """``Psi(w1 x w2) = 0`` for kernel generators x and words of degree <= ``degree``."""
    ctx = Psi.ctx
    codes = list(letters) if letters is not None else list(range(2 * ctx.N * ctx.N))
    words = [()] + [w for d in range(1, degree + 1) for w in itertools.product(codes, repeat=d)]
    res = 0.0
    cnt = 0
    for x in t_kernel_generators(N):
        x = AlgElt(ctx, x.terms)
        for w1 in words:
            for w2 in words:
                res = max(res, abs(Psi(ctx.word(w1) * x * ctx.word(w2))))
                cnt += 1
    return PushReport(res, cnt, res <= tol)


def push_functional(Psi: Functional, N: int) -> Functional:
    """The U_q(N) functional ``psi`` with ``psi ∘ t_N = Psi`` (assumes ``push_check`` passed)."""
    table = section_table(N)
    ctx = AlgebraCtx(N, "Uq", Psi.ctx.q0)

    def fn(w: Word) -> complex:
        return Psi.word(tuple(table[c] for c in w))

    return Functional(ctx, fn, dict(Psi.flags), f"push({Psi.description})", Psi.q0)


# ---------------------------------------------------------------------------
# decomposition pipeline


@dataclass
class UqHuntDecomposition:
    N: int
    suq: HuntDecomposition
    psi: Functional
    psi_gauss: Functional
    level_psi: Dict[int, Functional]
    push_reports: Dict[str, PushReport]
    gauss: GaussParams

    def as_dict(self) -> dict:
        return {
            "N": self.N, "variant": "Uq", "lifted_N": self.N + 1, "gauss": self.gauss.as_dict(),
            "levels": [dict(lv.as_dict(), lives_on=f"SU_q({lv.n}) -> U_q({lv.n - 1})")
                       for lv in self.suq.levels],
            "push_back": {k: {"residual": v.residual, "checked": v.checked, "ok": v.ok}
                          for k, v in sorted(self.push_reports.items())},
            "n_gauss_parameters": self.gauss.n_parameters,
            "suq": self.suq.as_dict(),
        }


def uq_hunt(pi: Optional[MatRep], eta_spec: Optional[Dict[int, np.ndarray]], gauss: GaussParams,
            N: Optional[int] = None, tol: float = 1e-8, method: str = "closed_form",
            push_degree: int = 1, schedule: Optional[Sequence[float]] = None) -> UqHuntDecomposition:
    """Decompose on SU_q(N+1) and push every piece back to U_q(N).

    ``eta_spec`` uses the SU_q(N+1) level numbering 2..N+1; a level n lives
    on SU_q(n), hence on U_q(n-1).
    """
    if pi is not None:
        if pi.ctx.variant != "Uq":
            raise UqError("uq_hunt expects a U_q(N) representation")
        N = pi.ctx.N
    if N is None:
        raise UqError("need a representation or N")
    q0 = pi.ctx.q0 if pi is not None else None
    uctx = AlgebraCtx(N, "Uq", q0)
    if len(gauss.r) != len(chart_labels(uctx)):
        raise UqError(f"U_q({N}) gaussian data needs {len(chart_labels(uctx))} drift entries")
    gauss.validate()
    lifted = lift_rep(pi) if pi is not None else None
    sctx = AlgebraCtx(N + 1, "SUq", q0)
    dec = hunt_decompose(lifted, eta_spec, lift_params(gauss, N), ctx=sctx, tol=tol, method=method,
                         schedule=schedule)
    reports: Dict[str, PushReport] = {}
    level_psi: Dict[int, Functional] = {}
    for lv in dec.levels:
        rep = push_check(lv.psi, N, tol, push_degree)
        reports[str(lv.n)] = rep
        if not rep.ok:
            raise UqError(f"level {lv.n} does not vanish on ker t_{N} (residual {rep.residual:.3e})")
        level_psi[lv.n] = push_functional(lv.psi, N)
    psi_g = gaussian_functional(uctx, gauss)
    total = psi_g
    for n in sorted(level_psi):
        total = total + level_psi[n]
    total.description = "psi_G + " + " + ".join(f"psi_{n}" for n in sorted(level_psi)) if level_psi else "psi_G"
    return UqHuntDecomposition(N, dec, total, psi_g, level_psi, reports, gauss)


# ---------------------------------------------------------------------------
# gaussian classification facts


def parameter_count(N: int) -> int:
    """Drifts plus free entries of a real symmetric matrix over the chart of U_q(N)."""
    n = len(chart_labels(AlgebraCtx(N, "Uq")))
    return n + n * (n + 1) // 2


def gc_witness(N: int = 2, q0=Fraction(1, 2)) -> HermitianReport:
    """A gaussian cocycle with complex Gram matrix on U_q(N), N >= 2.

    ``eta = eps'_{l1} + i eps'_{l2}`` into C: the Gram entry
    ``<eta_{l1}, eta_{l2}> = i`` is not real, so no functional completes it.
    """
    if N < 2:
        raise UqError("U_q(1) = U(1) is commutative; the witness needs N >= 2")
    ctx = AlgebraCtx(N, "Uq", q0)
    n = len(chart_labels(ctx))
    vec = np.zeros((n, 1), dtype=complex)
    vec[0, 0] = 1.0
    vec[1, 0] = 1j
    return is_hermitian_gaussian(GaussCocycle(ctx, vec))


# ---------------------------------------------------------------------------
# morphism identities


def _same(m1: Morphism, m2: Morphism, words: Sequence[Word]) -> float:
    """Max normal-form difference (evaluated at q0) of images over words; 0 when they agree exactly."""
    worst = 0.0
    src = m1.source
    q0 = ctx_q0(m1.target if isinstance(m1.target, AlgebraCtx) else src)
    for w in words:
        a = src.word(w)
        d = reduce(morphism_apply(m1, a) - morphism_apply(m2, a))
        if not d.is_zero():
            worst = max(worst, max(abs(c.evaluate(q0)) for c in d.terms.values()) or float("inf"))
    return worst


def _battery_words(ctx: AlgebraCtx, degree: int) -> List[Word]:
    codes = list(range(ctx.n_letters)) if ctx.variant == "Uq" else list(range(2 * ctx.N * ctx.N))
    return [w for d in range(1, degree + 1) for w in itertools.product(codes, repeat=d)]


def morphism_identities(n: int, N: int, degree: int = 2) -> Dict[str, float]:
    """Residuals of the two chain identities on words of degree <= ``degree``.

    * ``t̆_n ∘ s̆_{n,N} = s_{n,N} ∘ t̆_N`` on U_q(N);
    * ``t_n ∘ s_{n+1,N+1} = s̆_{n,N} ∘ t_N`` on SU_q(N+1).
    """
    if not 1 <= n < N:
        raise UqError("need 1 <= n < N")
    lhs1 = compose(t_breve(n), s_breve_chain(n, N))
    rhs1 = compose(s_chain(n, N), t_breve(N))
    lhs2 = compose(t_morphism(n), s_chain(n + 1, N + 1))
    rhs2 = compose(s_breve_chain(n, N), t_morphism(N))
    return {
        "breve_t_after_breve_s": _same(lhs1, rhs1, _battery_words(lhs1.source, degree)),
        "t_after_s": _same(lhs2, rhs2, _battery_words(lhs2.source, degree)),
    }


def projection_compatibility(m: Morphism, elts: Sequence[AlgElt]) -> int:
    """Number of battery elements with ``P(m(a)) != m(P(a))`` (normal-form comparison)."""
    bad = 0
    for a in elts:
        lhs = projP(reduce(morphism_apply(m, a)))
        rhs = morphism_apply(m, projP(a))
        if not reduce(lhs - rhs).is_zero():
            bad += 1
    return bad


def counit_preserved(m: Morphism, elts: Sequence[AlgElt]) -> bool:
    return all(counit_exact(morphism_apply(m, a)) == counit_exact(a) for a in elts)


__all__ = [
    "UqContext", "UqError", "UqHuntDecomposition", "PushReport", "section_table", "lift_rep",
    "lift_functional", "lift_params", "push_params", "lift_to_suq", "uq_from_suq", "uq_twist",
    "t_kernel_generators", "push_check", "push_functional", "uq_hunt", "parameter_count", "gc_witness",
    "morphism_identities", "projection_compatibility", "counit_preserved",
]
