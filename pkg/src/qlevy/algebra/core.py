"""Contexts, generator symbols and formal linear combinations of words.

Words are stored as tuples of small integer letter codes so that the
rewriting engine can hash and compare them cheaply.  For a context with
matrix size ``N`` the codes are::

    u[j,k]   -> (j-1)*N + (k-1)            in [0, N^2)
    u*[j,k]  -> N^2 + (j-1)*N + (k-1)      in [N^2, 2N^2)
    Dinv     -> 2N^2
    Dinv*    -> 2N^2 + 1

so that the integer order on unstarred codes is the row-major order used
for normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, NamedTuple, Optional, Tuple

from .coeffs import ONE, QCoeff, _coerce

Word = Tuple[int, ...]

VARIANTS = ("Mq", "SUq", "Uq")


class ContextMismatch(ValueError):
    pass


class GenSym(NamedTuple):
    """A generator symbol. ``kind`` is one of U, Ustar, Dinv, DinvStar."""

    kind: str
    j: int = 0
    k: int = 0

    def __str__(self) -> str:
        if self.kind == "U":
            return f"u[{self.j},{self.k}]"
        if self.kind == "Ustar":
            return f"u*[{self.j},{self.k}]"
        return "Dinv" if self.kind == "Dinv" else "Dinv*"


@dataclass(frozen=True)
class AlgebraCtx:
    """Ambient algebra: matrix size, variant and optional rational ``q0``."""

    N: int
    variant: str = "SUq"
    q0: Optional[Fraction] = field(default=None, compare=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.q0 is not None:
            q0 = Fraction(self.q0)
            if not 0 < q0 < 1:
                raise ValueError("q0 must lie in (0, 1)")
            object.__setattr__(self, "q0", q0)

    # -- letter codes ------------------------------------------------------
    @property
    def n_letters(self) -> int:
        return 2 * self.N * self.N + 2

    @property
    def dinv_code(self) -> int:
        return 2 * self.N * self.N

    def code(self, g: GenSym) -> int:
        N = self.N
        if g.kind in ("U", "Ustar"):
            if not (1 <= g.j <= N and 1 <= g.k <= N):
                raise IndexError(f"generator indices {g.j},{g.k} out of range for N={N}")
            base = (g.j - 1) * N + (g.k - 1)
            return base if g.kind == "U" else base + N * N
        if g.kind in ("Dinv", "DinvStar"):
            if self.variant != "Uq":
                raise ValueError("Dinv is only available in Uq contexts")
            return 2 * N * N + (g.kind == "DinvStar")
        raise ValueError(f"unknown generator kind {g.kind!r}")

    def sym(self, c: int) -> GenSym:
        N = self.N
        NN = N * N
        if c < NN:
            return GenSym("U", c // N + 1, c % N + 1)
        if c < 2 * NN:
            c -= NN
            return GenSym("Ustar", c // N + 1, c % N + 1)
        return GenSym("Dinv" if c == 2 * NN else "DinvStar")

    def star_code(self, c: int) -> int:
        NN = self.N * self.N
        if c < NN:
            return c + NN
        if c < 2 * NN:
            return c - NN
        return c ^ 1 if c >= 2 * NN else c

    def is_starred(self, c: int) -> bool:
        NN = self.N * self.N
        return NN <= c < 2 * NN or c == 2 * NN + 1

    def indices(self, c: int) -> Tuple[int, int]:
        """Matrix indices (1-based) of a u or u* code."""
        N = self.N
        c = c % (N * N)
        return c // N + 1, c % N + 1

    # -- element constructors ----------------------------------------------
    def one(self) -> "AlgElt":
        return AlgElt(self, {(): ONE})

    def zero(self) -> "AlgElt":
        return AlgElt(self, {})

    def scalar(self, c) -> "AlgElt":
        c = _coerce(c)
        return AlgElt(self, {(): c} if c else {})

    def u(self, j: int, k: int) -> "AlgElt":
        return AlgElt(self, {(self.code(GenSym("U", j, k)),): ONE})

    def ustar(self, j: int, k: int) -> "AlgElt":
        return AlgElt(self, {(self.code(GenSym("Ustar", j, k)),): ONE})

    def dinv(self) -> "AlgElt":
        if self.variant == "SUq":
            return self.one()
        return AlgElt(self, {(self.code(GenSym("Dinv")),): ONE})

    def dinv_star(self) -> "AlgElt":
        if self.variant == "SUq":
            return self.one()
        return AlgElt(self, {(self.code(GenSym("DinvStar")),): ONE})

    def gen(self, g: GenSym) -> "AlgElt":
        if g.kind in ("Dinv", "DinvStar") and self.variant == "SUq":
            return self.one()
        return AlgElt(self, {(self.code(g),): ONE})

    def letter(self, c: int) -> "AlgElt":
        return AlgElt(self, {(c,): ONE})

    def word(self, w: Iterable[int]) -> "AlgElt":
        return AlgElt(self, {tuple(w): ONE})

    def generators(self, starred: bool = True) -> list:
        """All generator symbols of the context, unstarred first."""
        N = self.N
        out = [GenSym("U", j, k) for j in range(1, N + 1) for k in range(1, N + 1)]
        if starred:
            out += [GenSym("Ustar", j, k) for j in range(1, N + 1) for k in range(1, N + 1)]
        if self.variant == "Uq":
            out.append(GenSym("Dinv"))
            if starred:
                out.append(GenSym("DinvStar"))
        return out

    def with_variant(self, variant: str) -> "AlgebraCtx":
        return AlgebraCtx(self.N, variant, self.q0)


class AlgElt:
    """Finite formal linear combination of words with :class:`QCoeff` weights.

    Arithmetic here is purely formal; relations are applied only by
    :func:`qlevy.algebra.rewrite.normal_form`.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraCtx, terms: Dict[Word, QCoeff]):
        self.ctx = ctx
        self.terms = {w: c for w, c in terms.items() if c}

    def _check(self, other: "AlgElt") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")

    def _lift(self, other) -> "AlgElt":
        if isinstance(other, AlgElt):
            self._check(other)
            return other
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return self.ctx.scalar(c)

    def __add__(self, other) -> "AlgElt":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            out[w] = c if v is None else v + c
        return AlgElt(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "AlgElt":
        return AlgElt(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "AlgElt":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "AlgElt":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "AlgElt":
        if not isinstance(other, AlgElt):
            c = _coerce(other)
            if c is NotImplemented:
                return NotImplemented
            return self.scale(c)
        self._check(other)
        out: Dict[Word, QCoeff] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                v = out.get(w)
                out[w] = c if v is None else v + c
        return AlgElt(self.ctx, out)

    def __rmul__(self, other) -> "AlgElt":
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return self.scale(c)

    def __pow__(self, n: int) -> "AlgElt":
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "AlgElt":
        c = _coerce(c)
        if not c:
            return self.ctx.zero()
        return AlgElt(self.ctx, {w: v * c for w, v in self.terms.items()})

    def adjoint(self) -> "AlgElt":
        """Formal adjoint: reverse words, flip star flags, conjugate scalars."""
        sc = self.ctx.star_code
        return AlgElt(self.ctx, {tuple(sc(x) for x in reversed(w)): c.conjugate()
                                 for w, c in self.terms.items()})

    # -- inspection --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        """Formal equality (same words, same coefficients)."""
        if isinstance(other, AlgElt):
            return self.ctx == other.ctx and self.terms == other.terms
        c = _coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return self.terms == ({(): c} if c else {})

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[Tuple[Word, QCoeff]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def has_stars(self) -> bool:
        st = self.ctx.is_starred
        return any(st(x) for w in self.terms for x in w)

    def constant_term(self) -> QCoeff:
        return self.terms.get((), QCoeff.const(0))

    def words(self) -> list:
        return sorted(self.terms)

    def __str__(self) -> str:
        from .syntax import format_element

        return format_element(self)

    def __repr__(self) -> str:
        return f"AlgElt(N={self.ctx.N}, {self.ctx.variant}: {self})"


# spec-level function names


def mul(a: AlgElt, b: AlgElt) -> AlgElt:
    return a * b


def add(a: AlgElt, b: AlgElt) -> AlgElt:
    return a + b


def adjoint(a: AlgElt) -> AlgElt:
    return a.adjoint()
