"""Normal forms for the quantum matrix relations and the determinant rule.

The commutation relations among the ``u[j,k]`` are oriented as reductions of
adjacent out-of-order pairs ``X Y`` (``X > Y`` in row-major order).  Writing
``Y = u[i,j]`` and ``X = u[k,l]``::

    same row      (i == k, j < l):  u[i,l] u[i,j] -> q^-1 u[i,j] u[i,l]
    same column   (j == l, i < k):  u[k,j] u[i,j] -> q^-1 u[i,j] u[k,j]
    antidiagonal  (i < k, j > l):   u[k,l] u[i,j] -> u[i,j] u[k,l]
    diagonal      (i < k, j < l):   u[k,l] u[i,j] -> u[i,j] u[k,l] + (1/q - q) u[i,l] u[k,j]

Ordered words are identified with exponent vectors over the generators.
Every reduction replaces a word by its sorted version plus terms that are
strictly smaller in the lexicographic order on exponent vectors in which
``u[1,1]`` is the most significant variable, so the ordered words form a PBW
basis of the quantum matrix algebra.  The determinant ``D`` is central, and
its leading ordered word is the diagonal staircase ``u[1,1]...u[N,N]``; since
leading words multiply, ``D - 1`` (for SU_q) and ``D * Dinv - 1`` (for U_q)
reduce every ordered word containing the staircase to smaller words.  This
is a Groebner-style reduction with a single central relation.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Tuple

from .coeffs import ONE, QINV, Q, QCoeff
from .core import AlgebraCtx, AlgElt, Word

Terms = Dict[Word, QCoeff]

_LEX_CORR = QINV - Q  # 1/q - q


class RewriteError(RuntimeError):
    pass


def _acc(out: Terms, w: Word, c: QCoeff) -> None:
    v = out.get(w)
    if v is None:
        out[w] = c
    else:
        v = v + c
        if v:
            out[w] = v
        else:
            del out[w]


# ---------------------------------------------------------------------------
# pair rules and insertion


_PAIR_CACHE: Dict[Tuple[int, int, int], Tuple[Tuple[QCoeff, Tuple[int, int]], ...]] = {}


def pair_rule(N: int, x: int, y: int):
    """Reduction of the out-of-order pair ``x y`` (codes, ``x > y``)."""
    key = (N, x, y)
    hit = _PAIR_CACHE.get(key)
    if hit is not None:
        return hit
    k, l = divmod(x, N)
    i, j = divmod(y, N)
    if i == k or j == l:
        rule = ((QINV, (y, x)),)
    elif l < j:
        rule = ((ONE, (y, x)),)
    else:
        rule = ((ONE, (y, x)), (_LEX_CORR, (i * N + l, k * N + j)))
    _PAIR_CACHE[key] = rule
    return rule


_INSERT_CACHE: Dict[int, Dict[Tuple[Word, int], Terms]] = {}


def _insert(N: int, v: Word, g: int) -> Terms:
    """Normal form of ``v + (g,)`` for an ordered word ``v``."""
    if not v or v[-1] <= g:
        return {v + (g,): ONE}
    cache = _INSERT_CACHE.setdefault(N, {})
    key = (v, g)
    hit = cache.get(key)
    if hit is not None:
        return hit
    rest = v[:-1]
    out: Terms = {}
    for coef, (a, b) in pair_rule(N, v[-1], g):
        for w1, c1 in _insert(N, rest, a).items():
            c1 = coef * c1
            for w2, c2 in _insert(N, w1, b).items():
                _acc(out, w2, c1 * c2)
    cache[key] = out
    return out


_WORD_CACHE: Dict[int, Dict[Word, Terms]] = {}


def sort_word(N: int, w: Word) -> Terms:
    """Normal form in the quantum matrix algebra of a word of u-letters."""
    if len(w) <= 1 or all(w[i] <= w[i + 1] for i in range(len(w) - 1)):
        return {w: ONE}
    cache = _WORD_CACHE.setdefault(N, {})
    hit = cache.get(w)
    if hit is not None:
        return hit
    # split so that long words reuse the normal forms of their prefixes
    cur = sort_word(N, w[:-1])
    g = w[-1]
    out: Terms = {}
    for v, c in cur.items():
        for v2, c2 in _insert(N, v, g).items():
            _acc(out, v2, c * c2)
    cache[w] = out
    return out


# ---------------------------------------------------------------------------
# determinant reduction


def _staircase(N: int) -> Tuple[int, ...]:
    return tuple(i * N + i for i in range(N))


def _det_words(N: int) -> List[Tuple[QCoeff, Word]]:
    """Words of the quantum determinant, as (coefficient, ordered word)."""
    from .determinants import inversions

    out = []
    for sigma in itertools.permutations(range(N)):
        c = QCoeff.qpow(inversions(sigma), (-1) ** inversions(sigma))
        out.append((c, tuple(r * N + sigma[r] for r in range(N))))
    return out


def _contains_staircase(N: int, m: Word) -> bool:
    s = set(m)
    return all(i * N + i in s for i in range(N))


def _remove_staircase(N: int, m: Word) -> Word:
    out = list(m)
    for d in _staircase(N):
        out.remove(d)
    return tuple(out)


_DET_CACHE: Dict[Tuple[int, str], Dict[Tuple[Word, int], Dict[Tuple[Word, int], QCoeff]]] = {}


def _det_reduce(N: int, variant: str, m: Word, k: int) -> Dict[Tuple[Word, int], QCoeff]:
    """Reduce the ordered word ``m`` (times ``Dinv**k`` for U_q).

    Returns a map ``(ordered word, Dinv power) -> coefficient`` whose words
    no longer contain the staircase when the relation applies.
    """
    applies = (variant == "SUq") or (variant == "Uq" and k > 0)
    if N == 0 or not applies or not _contains_staircase(N, m):
        return {(m, k): ONE}
    cache = _DET_CACHE.setdefault((N, variant), {})
    key = (m, k)
    hit = cache.get(key)
    if hit is not None:
        return hit
    m2 = _remove_staircase(N, m)
    dm: Terms = {}
    for cd, wd in _det_words(N):
        for w, c in sort_word(N, wd + m2).items():
            _acc(dm, w, cd * c)
    lead = dm.pop(m, None)
    if lead is None:
        raise RewriteError("leading word of D*m'' missing; ordering assumption violated")
    inv = lead.inverse()
    k2 = k - 1 if variant == "Uq" else 0
    out: Dict[Tuple[Word, int], QCoeff] = {}

    def put(key2, c):
        v = out.get(key2)
        v = c if v is None else v + c
        if v:
            out[key2] = v
        else:
            out.pop(key2, None)

    # m = inv * (D m'' - rest) and D m'' = m'' (SU_q) or D m'' Dinv^k = m'' Dinv^(k-1)
    for key2, c in _det_reduce(N, variant, m2, k2).items():
        put(key2, inv * c)
    for w, c in dm.items():
        for key2, c2 in _det_reduce(N, variant, w, k).items():
            put(key2, -(inv * c * c2))
    cache[key] = out
    return out


# ---------------------------------------------------------------------------
# public entry points


def _split_dinv(ctx: AlgebraCtx, w: Word) -> Tuple[Word, int]:
    dc = ctx.dinv_code
    k = w.count(dc)
    if k:
        w = tuple(x for x in w if x != dc)
    return w, k


def normal_form(a: AlgElt, apply_det_rule: Optional[bool] = None) -> AlgElt:
    """Normal form of an element without starred letters.

    ``apply_det_rule`` defaults to True for SU_q contexts.  In U_q contexts
    the relation ``D * Dinv = 1`` is always used since it is part of the
    definition of the algebra; ``Dinv`` powers are kept at the end of words.
    """
    ctx = a.ctx
    N = ctx.N
    NN = N * N
    variant = ctx.variant
    if apply_det_rule is None:
        apply_det_rule = variant == "SUq"
    det_variant = variant if (variant == "Uq" or apply_det_rule) else "Mq"
    if apply_det_rule and variant == "Mq":
        det_variant = "SUq"
    out: Terms = {}
    dc = ctx.dinv_code
    for w, c in a.terms.items():
        for x in w:
            if x >= NN and x != dc:
                raise ValueError("normal_form needs an element without starred letters; "
                                 "call adjoint_expand first")
        u_part, k = _split_dinv(ctx, w) if variant == "Uq" else (w, 0)
        for m, c1 in sort_word(N, u_part).items():
            for (m2, k2), c2 in _det_reduce(N, det_variant, m, k).items():
                _acc(out, m2 + (dc,) * k2, c * c1 * c2)
    return AlgElt(ctx, out)


def normal_form_random(a: AlgElt, rng: random.Random, max_steps: int = 10 ** 6) -> AlgElt:
    """Quantum-matrix normal form by random choice of the pair to reduce.

    Used only to test that the result does not depend on the strategy.
    """
    ctx = a.ctx
    N = ctx.N
    todo: Terms = dict(a.terms)
    done: Terms = {}
    steps = 0
    while todo:
        w = rng.choice(sorted(todo))
        c = todo.pop(w)
        pos = [i for i in range(len(w) - 1) if w[i] > w[i + 1]]
        if not pos:
            _acc(done, w, c)
            continue
        i = rng.choice(pos)
        for coef, (x, y) in pair_rule(N, w[i], w[i + 1]):
            _acc(todo, w[:i] + (x, y) + w[i + 2:], c * coef)
        steps += 1
        if steps > max_steps:
            raise RewriteError("step cap exceeded")
    return AlgElt(ctx, done)


def is_normal(a: AlgElt) -> bool:
    ctx = a.ctx
    N = ctx.N
    for w in a.terms:
        u = [x for x in w if x < N * N]
        if any(u[i] > u[i + 1] for i in range(len(u) - 1)):
            return False
        if ctx.variant == "SUq" and _contains_staircase(N, tuple(u)):
            return False
        if ctx.variant == "Uq" and len(u) < len(w) and _contains_staircase(N, tuple(u)):
            return False
    return True


def reduce(a: AlgElt) -> AlgElt:
    """Expand stars, then take the normal form appropriate for the context."""
    from .determinants import adjoint_expand

    if a.has_stars():
        a = adjoint_expand(a)
    return normal_form(a)


EQUAL = "proved-equal"
DIFFERENT = "proved-different-by-evaluation"
UNDECIDED = "undecided"


def equals_exact(a: AlgElt, b: AlgElt):
    """Exact equality test.

    In Mq and Uq contexts returns a bool.  In SUq contexts returns one of
    ``"proved-equal"``, ``"proved-different-by-evaluation"``, ``"undecided"``:
    a zero normal form proves equality, and a nonzero difference is
    confirmed with the truncated-representation evaluation oracle.
    """
    if a.ctx != b.ctx:
        raise ValueError("context mismatch")
    diff = reduce(a - b)
    if a.ctx.variant != "SUq":
        return diff.is_zero()
    if diff.is_zero():
        return EQUAL
    from ..repkit.oracle import evaluation_witness

    return DIFFERENT if evaluation_witness(diff) else UNDECIDED


def check_local_confluence(ctx: AlgebraCtx, samples: int = 200, seed: int = 0,
                           max_degree: Optional[int] = None) -> dict:
    """Machine check of the rewriting system.

    * every overlap ``x y z`` with ``x > y > z`` is resolved to the same
      normal form whichever pair is reduced first;
    * the determinant is central and reduces to 1 (SU_q) or cancels Dinv
      (U_q);
    * on random words of degree up to ``max_degree`` (default ``2N``) the
      normal form is compatible with multiplication:
      ``NF(NF(w1) NF(w2)) == NF(w1 w2)``.
    """
    N = ctx.N
    NN = N * N
    mq = ctx.with_variant("Mq")
    bad_overlaps = 0
    n_overlaps = 0
    for x, y, z in itertools.combinations(range(NN - 1, -1, -1), 3):
        n_overlaps += 1
        left: Terms = {}
        for coef, (a1, b1) in pair_rule(N, x, y):
            for w, c in sort_word(N, (a1, b1, z)).items():
                _acc(left, w, coef * c)
        right: Terms = {}
        for coef, (a1, b1) in pair_rule(N, y, z):
            for w, c in sort_word(N, (x, a1, b1)).items():
                _acc(right, w, coef * c)
        if left != right:
            bad_overlaps += 1
    from .determinants import quantum_determinant

    det_ok = True
    if ctx.variant in ("SUq", "Uq"):
        D = quantum_determinant(mq)
        for g in range(NN):
            comm = D * mq.letter(g) - mq.letter(g) * D
            if not normal_form(comm).is_zero():
                det_ok = False
        Dc = AlgElt(ctx, D.terms)
        if ctx.variant == "SUq":
            det_ok &= normal_form(Dc - ctx.one()).is_zero()
        else:
            det_ok &= normal_form(Dc * ctx.dinv() - ctx.one()).is_zero()
    rng = random.Random(seed)
    max_degree = max_degree or 2 * N
    bad_products = 0
    letters = list(range(NN))
    if ctx.variant == "Uq":
        letters.append(ctx.dinv_code)
    for _ in range(samples):
        d = rng.randint(2, max_degree)
        w = tuple(rng.choice(letters) for _ in range(d))
        cut = rng.randint(1, d - 1)
        full = normal_form(ctx.word(w))
        parts = normal_form(normal_form(ctx.word(w[:cut])) * normal_form(ctx.word(w[cut:])))
        if full != parts:
            bad_products += 1
    return {
        "overlaps_checked": n_overlaps,
        "overlaps_failed": bad_overlaps,
        "determinant_rule_ok": bool(det_ok),
        "products_checked": samples,
        "products_failed": bad_products,
        "confluent": bad_overlaps == 0 and det_ok and bad_products == 0,
    }


def clear_caches() -> None:
    _INSERT_CACHE.clear()
    _WORD_CACHE.clear()
    _DET_CACHE.clear()
    _PAIR_CACHE.clear()
