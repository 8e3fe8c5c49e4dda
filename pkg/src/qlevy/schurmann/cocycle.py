"""pi-eps-cocycles on SU_q(N) built from a truncated representation.

A cocycle is stored by its values on letters; values on words follow from
``eta(xw) = pi(x) eta(w) + eta(x) eps(w)``.  Values on starred letters that
are not given explicitly come from the expansion of ``u*[j,k]`` as a signed
quantum minor, which only involves unstarred letters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..algebra.core import AlgElt, Word
from ..algebra.determinants import adjoint_expand
from ..hopf.coalgebra import ConvergenceError
from ..repkit.reps import MatRep

DEFAULT_M_RANGE = (4, 20)


def p_schedule(m_min: int = DEFAULT_M_RANGE[0], m_max: int = DEFAULT_M_RANGE[1]) -> List[float]:
    """p_m = 1 - 2^{-m}."""
    return [1.0 - 2.0 ** (-m) for m in range(m_min, m_max + 1)]


class CocycleError(ValueError):
    pass


@dataclass
class Cocycle:
    rep: MatRep
    kind: str
    values: Dict[int, np.ndarray]
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = {c: np.asarray(v, dtype=complex) for c, v in self.values.items()}
        self._words: Dict[Word, np.ndarray] = {}

    @property
    def ctx(self):
        return self.rep.ctx

    @property
    def dim(self) -> int:
        return self.rep.dim

    def letter_value(self, code: int) -> np.ndarray:
        v = self.values.get(code)
        if v is None:
            ctx = self.ctx
            if not ctx.is_starred(code):
                raise CocycleError(f"no value for {ctx.sym(code)}")
            v = self(adjoint_expand(ctx.letter(code)))
            self.values[code] = v
        return v

    def word_value(self, w: Word) -> np.ndarray:
        hit = self._words.get(w)
        if hit is not None:
            return hit
        if not w:
            out = np.zeros(self.dim, dtype=complex)
        elif len(w) == 1:
            out = self.letter_value(w[0])
        else:
            # eta(x w') = pi(x) eta(w') + eta(x) eps(w')
            x, rest = w[0], w[1:]
            out = self.rep.letter_matrix(x) @ self.word_value(rest)
            e = 1.0
            for c in rest:
                e *= self.rep.counit_matrix(c)
                if e == 0.0:
                    break
            if e:
                out = out + e * self.letter_value(x)
        self._words[w] = out
        return out

    def centered_product_value(self, codes: Sequence[int]) -> np.ndarray:
        """``eta(delta(c_1) ... delta(c_k)) = pi(delta(c_1)...delta(c_{k-1})) eta(c_k)``."""
        v = self.letter_value(codes[-1])
        for c in reversed(codes[:-1]):
            v = self.rep.letter_matrix(c) @ v - self.rep.counit_matrix(c) * v
        return v

    def __call__(self, a: AlgElt) -> np.ndarray:
        q0 = self.rep.q0
        out = np.zeros(self.dim, dtype=complex)
        for w, c in a.terms.items():
            out = out + c.evaluate(q0) * self.word_value(w)
        return out

    def generator_values(self) -> Dict[str, np.ndarray]:
        ctx = self.ctx
        return {str(ctx.sym(c)): self.letter_value(c) for c in range(2 * ctx.N * ctx.N)}


def zero_cocycle(pi: MatRep) -> Cocycle:
    z = np.zeros(pi.dim, dtype=complex)
    return Cocycle(pi, "zero", {c: z for c in pi.all_codes()})


def coboundary(pi: MatRep, f: np.ndarray) -> Cocycle:
    """``eta(a) = pi(a - eps(a) 1) f``."""
    f = np.asarray(f, dtype=complex).reshape(-1)
    if f.shape[0] != pi.dim:
        raise CocycleError(f"vector of length {f.shape[0]} for a representation of dimension {pi.dim}")
    vals = {c: pi.letter_matrix(c) @ f - pi.counit_matrix(c) * f for c in pi.all_codes()}
    return Cocycle(pi, "coboundary", vals, {"f": f})


def _corner(pi: MatRep) -> int:
    N = pi.ctx.N
    return (N - 1) * N + (N - 1)


def smallest_singular_value(M) -> float:
    A = M.toarray() if sp.issparse(M) else np.asarray(M)
    if A.size == 0:
        return float("inf")
    return float(np.linalg.svd(A, compute_uv=False).min())


def cocycle_from_eta_nn(pi: MatRep, eta_nn: np.ndarray, method: str = "closed_form", tol: float = 1e-8,
                        schedule: Optional[Sequence[float]] = None) -> Cocycle:
    """The unique cocycle with ``eta(u[N,N]) = eta_nn`` when I - pi(u[N,N]) is injective."""
    if pi.ctx.variant != "SUq":
        raise CocycleError("cocycles are built on SU_q(N); lift U_q data first")
    eta_nn = np.asarray(eta_nn, dtype=complex).reshape(-1)
    if eta_nn.shape[0] != pi.dim:
        raise CocycleError("eta_nn has the wrong length")
    if method == "closed_form":
        return _closed_form(pi, eta_nn, tol)
    if method == "p_limit":
        return _p_limit(pi, eta_nn, tol, schedule)
    raise CocycleError(f"unknown method {method!r}")


def _closed_form(pi: MatRep, eta_nn: np.ndarray, tol: float) -> Cocycle:
    N = pi.ctx.N
    q = float(pi.q0)
    dim = pi.dim
    I = sp.identity(dim, dtype=complex, format="csc")
    A = pi.letter_matrix(_corner(pi)).tocsc()
    smin = smallest_singular_value(I - A)
    if smin <= tol:
        raise CocycleError(f"I - pi(u[N,N]) is not injective on the truncation (smallest singular value {smin:.3e})")
    lu_q = splu((I - q * A).tocsc())
    lu_1 = splu((A - I).tocsc())
    vals: Dict[int, np.ndarray] = {_corner(pi): eta_nn}
    for j in range(N - 1):
        for code in (j * N + (N - 1), (N - 1) * N + j):
            vals[code] = -lu_q.solve(pi.letter_matrix(code) @ eta_nn)
    worst = 0.0
    coef = 1.0 / q - q
    for j in range(N - 1):
        for k in range(N - 1):
            code = j * N + k
            rhs = pi.letter_matrix(code) @ eta_nn - (1.0 if j == k else 0.0) * eta_nn
            rhs = rhs + coef * (pi.letter_matrix(j * N + (N - 1)) @ vals[(N - 1) * N + k])
            x = lu_1.solve(rhs)
            worst = max(worst, float(np.linalg.norm((A - I) @ x - rhs)))
            vals[code] = x
    if worst > 1e-8 * max(1.0, float(np.linalg.norm(eta_nn))):
        raise CocycleError(f"ill-conditioned solve (residual {worst:.3e})")
    return Cocycle(pi, "closed_form", vals, {"eta_nn": eta_nn, "smin": smin, "solve_residual": worst})


@dataclass
class PLimitTrace:
    p: List[float]
    raw_norms: Dict[str, List[float]]
    extrapolated_steps: List[float]
    converged: bool


def coboundary_vectors(pi: MatRep, eta_nn: np.ndarray, ps: Sequence[float]) -> List[np.ndarray]:
    """f_p = -(I - p pi(u[N,N]))^{-1} eta_nn for each p."""
    I = sp.identity(pi.dim, dtype=complex, format="csc")
    A = pi.letter_matrix(_corner(pi)).tocsc()
    return [-splu((I - p * A).tocsc()).solve(np.asarray(eta_nn, dtype=complex)) for p in ps]


def richardson(seq: np.ndarray) -> np.ndarray:
    """One-step extrapolation for errors linear in (1 - p) with p_m = 1 - 2^{-m}."""
    seq = np.asarray(seq)
    return 2.0 * seq[1:] - seq[:-1]


def _p_limit(pi: MatRep, eta_nn: np.ndarray, tol: float, schedule) -> Cocycle:
    ps = list(schedule) if schedule is not None else p_schedule()
    fs = coboundary_vectors(pi, eta_nn, ps)
    codes = pi.all_codes()
    raw = {c: np.array([pi.letter_matrix(c) @ f - pi.counit_matrix(c) * f for f in fs]) for c in codes}
    ext = {c: richardson(v) for c, v in raw.items()}
    steps = []
    for m in range(1, len(ps) - 1):
        steps.append(max(float(np.linalg.norm(ext[c][m] - ext[c][m - 1])) for c in codes))
    scale = max(1.0, max(float(np.linalg.norm(ext[c][-1])) for c in codes))
    converged = bool(steps) and steps[-1] < tol * scale
    ctx = pi.ctx
    trace = PLimitTrace(ps, {str(ctx.sym(c)): [float(np.linalg.norm(x)) for x in raw[c]] for c in codes},
                        steps, converged)
    if not converged:
        raise ConvergenceError(f"p-limit cocycle did not converge (last step {steps[-1] if steps else float('nan'):.3e})",
                               ) from None
    vals = {c: ext[c][-1] for c in codes}
    return Cocycle(pi, "p_limit", vals, {"eta_nn": eta_nn, "trace": trace})


def cocycle_identity_defect(eta: Cocycle, pairs: Sequence, reducer=None) -> float:
    """max ||eta(ab) - pi(a) eta(b) - eta(a) eps(b)|| over pairs of elements.

    ``eta(ab)`` is computed on the normal form of the product, so the check
    exercises the defining relations and not just the word recursion.
    """
    from ..algebra.rewrite import reduce as default_reduce
    from ..hopf.functionals import counit_exact

    red = reducer or default_reduce
    pi = eta.rep
    q0 = pi.q0
    worst = 0.0
    for a, b in pairs:
        lhs = eta(red(a * b))
        ea, eb = eta(a), eta(b)
        rhs = pi.apply(a, eb) + ea * counit_exact(b).evaluate(q0)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def lift_cocycle(tilde: Cocycle, pi: MatRep, n: int) -> Cocycle:
    """``eta_tilde ∘ s_{n,N}`` as a cocycle for ``pi`` (which lives on SU_q(n))."""
    N = pi.ctx.N
    NN, nn = N * N, n * n
    z = np.zeros(pi.dim, dtype=complex)
    vals = {}
    for j in range(N):
        for k in range(N):
            inside = j < n and k < n
            vals[j * N + k] = tilde.letter_value(j * n + k) if inside else z
            vals[NN + j * N + k] = tilde.letter_value(nn + j * n + k) if inside else z
    return Cocycle(pi, f"lifted({tilde.kind})", vals, {"n": n})


__all__ = ["Cocycle", "CocycleError", "coboundary", "zero_cocycle", "cocycle_from_eta_nn", "p_schedule",
           "coboundary_vectors", "richardson", "cocycle_identity_defect", "lift_cocycle", "PLimitTrace",
           "smallest_singular_value"]
