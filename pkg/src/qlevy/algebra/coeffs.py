"""Exact scalars for the coordinate algebras: rational functions of ``q``.

A :class:`QCoeff` is ``(R + i*I) / den`` where ``R`` and ``I`` are Laurent
polynomials in ``q`` with rational coefficients and ``den`` is a real monic
polynomial with nonzero constant term.  Normalization divides out
``gcd(den, R, I)`` over the rationals, which makes the representation unique
(equal values have identical fields), so equality and hashing are structural.

Almost every coefficient produced by the rewriting rules is a Laurent
polynomial (``den == 1``); that case never touches polynomial gcds and stays
cheap.  Arithmetic uses :mod:`gmpy2` rationals for speed.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Tuple, Union

from gmpy2 import mpq

Laurent = Dict[int, "mpq"]
Poly = Tuple["mpq", ...]  # coefficients, lowest degree first

_ZERO = mpq(0)
_ONE = mpq(1)
_ONE_POLY: Poly = (_ONE,)


# ---------------------------------------------------------------------------
# Laurent helpers (dicts exponent -> nonzero mpq)


def _ladd(a: Laurent, b: Laurent, sign: int = 1) -> Laurent:
    if not b:
        return dict(a)
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, _ZERO) + (c if sign > 0 else -c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _lmul(a: Laurent, b: Laurent) -> Laurent:
    if not a or not b:
        return {}
    if len(a) == 1 and len(b) == 1:
        (ea, ca), = a.items()
        (eb, cb), = b.items()
        return {ea + eb: ca * cb}
    out: Laurent = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            v = out.get(e, _ZERO) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _lscale(a: Laurent, c) -> Laurent:
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def _lshift(a: Laurent, s: int) -> Laurent:
    return {e + s: v for e, v in a.items()} if s else a


# ---------------------------------------------------------------------------
# dense polynomial helpers over Q (tuples, lowest degree first)


def _ptrim(p) -> Poly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(rem) - 1 < db:
        return (), _ptrim(rem)
    quo = [_ZERO] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if not c:
            continue
        f = c / lb
        quo[i - db] = f
        for j in range(db + 1):
            rem[i - db + j] -= f * b[j]
    return _ptrim(quo), _ptrim(rem[:db])


def _pmonic(p: Poly) -> Poly:
    lead = p[-1]
    return tuple(c / lead for c in p) if lead != 1 else p


def _pgcd(a: Poly, b: Poly) -> Poly:
    a, b = _ptrim(a), _ptrim(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    return _pmonic(a) if a else ()


def _laurent_to_poly(a: Laurent) -> Tuple[int, Poly]:
    """Write ``a = q**shift * poly`` with ``poly(0) != 0``."""
    if not a:
        return 0, ()
    lo = min(a)
    hi = max(a)
    p = [_ZERO] * (hi - lo + 1)
    for e, c in a.items():
        p[e - lo] = c
    return lo, tuple(p)


def _poly_to_laurent(p: Poly, shift: int = 0) -> Laurent:
    return {i + shift: c for i, c in enumerate(p) if c}


def _to_mpq(x) -> "mpq":
    if isinstance(x, type(_ONE)):
        return x
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, (int, Fraction, Rational)):
        return mpq(x.numerator, x.denominator) if not isinstance(x, int) else mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


# ---------------------------------------------------------------------------


class QCoeff:
    """Exact element of Q(i)(q) with a real monic denominator."""

    __slots__ = ("_re", "_im", "_den", "_hash", "_evcache")

    def __init__(self, re: Laurent | None = None, im: Laurent | None = None,
                 den: Poly = _ONE_POLY, _normalized: bool = False):
        re = re or {}
        im = im or {}
        if not den or not any(den):
            raise ZeroDivisionError("QCoeff denominator is the zero polynomial")
        if not _normalized:
            re, im, den = _normalize(re, im, den)
        self._re = re
        self._im = im
        self._den = den
        self._hash = None
        self._evcache = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, x) -> "QCoeff":
        if isinstance(x, QCoeff):
            return x
        if isinstance(x, complex):
            re, im = Fraction(x.real), Fraction(x.imag)
            r = {0: _to_mpq(re)} if re else {}
            i = {0: _to_mpq(im)} if im else {}
            return cls(r, i, _ONE_POLY, True)
        v = _to_mpq(x)
        return cls({0: v} if v else {}, {}, _ONE_POLY, True)

    @classmethod
    def qpow(cls, m: int, c=1) -> "QCoeff":
        """The Laurent monomial ``c * q**m``."""
        v = _to_mpq(c)
        return cls({m: v} if v else {}, {}, _ONE_POLY, True)

    @classmethod
    def imag_unit(cls) -> "QCoeff":
        return cls({}, {0: _ONE}, _ONE_POLY, True)

    @classmethod
    def laurent(cls, coeffs: Dict[int, object], imag: Dict[int, object] | None = None) -> "QCoeff":
        re = {e: _to_mpq(c) for e, c in coeffs.items() if c}
        im = {e: _to_mpq(c) for e, c in (imag or {}).items() if c}
        return cls(re, im, _ONE_POLY, True)

    # -- inspection --------------------------------------------------------
    @property
    def is_laurent(self) -> bool:
        return self._den == _ONE_POLY

    @property
    def is_real(self) -> bool:
        return not self._im

    def is_zero(self) -> bool:
        return not self._re and not self._im

    def __bool__(self) -> bool:
        return bool(self._re or self._im)

    def numerator(self) -> Tuple[Laurent, Laurent]:
        return dict(self._re), dict(self._im)

    def denominator(self) -> Poly:
        return self._den

    def is_monomial(self) -> bool:
        """True for ``c * q**m`` with a Gaussian-rational constant ``c``."""
        if not self.is_laurent:
            return False
        exps = set(self._re) | set(self._im)
        return len(exps) == 1

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other) -> "QCoeff":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._den == other._den:
            re = _ladd(self._re, other._re)
            im = _ladd(self._im, other._im)
            if self._den == _ONE_POLY:
                return QCoeff(re, im, _ONE_POLY, True)
            return QCoeff(re, im, self._den)
        d1 = _poly_to_laurent(self._den)
        d2 = _poly_to_laurent(other._den)
        re = _ladd(_lmul(self._re, d2), _lmul(other._re, d1))
        im = _ladd(_lmul(self._im, d2), _lmul(other._im, d1))
        return QCoeff(re, im, _pmul(self._den, other._den))

    __radd__ = __add__

    def __neg__(self) -> "QCoeff":
        return QCoeff({e: -c for e, c in self._re.items()},
                      {e: -c for e, c in self._im.items()}, self._den, True)

    def __sub__(self, other) -> "QCoeff":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QCoeff":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "QCoeff":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self._re, self._im, other._re, other._im
        if not b and not d:
            re, im = _lmul(a, c), {}
        else:
            re = _ladd(_lmul(a, c), _lmul(b, d), -1)
            im = _ladd(_lmul(a, d), _lmul(b, c))
        if self._den == _ONE_POLY and other._den == _ONE_POLY:
            return QCoeff(re, im, _ONE_POLY, True)
        return QCoeff(re, im, _pmul(self._den, other._den))

    __rmul__ = __mul__

    def inverse(self) -> "QCoeff":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero coefficient")
        re, im = self._re, self._im
        if self.is_monomial():
            (e,) = set(re) | set(im)
            a, b = re.get(e, _ZERO), im.get(e, _ZERO)
            n = a * a + b * b
            r = {-e: a / n} if a else {}
            i = {-e: -b / n} if b else {}
            return QCoeff(r, i, _ONE_POLY, True)
        # 1/((R + iI)/den) = den * (R - iI) / (R^2 + I^2), and R^2 + I^2 is real
        norm = _ladd(_lmul(re, re), _lmul(im, im))
        shift, npoly = _laurent_to_poly(norm)
        dl = _poly_to_laurent(self._den, -shift)
        nre = _lmul(dl, re)
        nim = _lmul(dl, {e: -c for e, c in im.items()})
        return QCoeff(nre, nim, npoly)

    def __truediv__(self, other) -> "QCoeff":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QCoeff":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> "QCoeff":
        if n < 0:
            return self.inverse() ** (-n)
        out = QCoeff.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "QCoeff":
        """Complex conjugation (``q`` is real)."""
        if not self._im:
            return self
        return QCoeff(self._re, {e: -c for e, c in self._im.items()}, self._den, True)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, QCoeff):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self._den == other._den and self._re == other._re and self._im == other._im

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._re.items()), frozenset(self._im.items()), self._den))
        return self._hash

    # -- specialization ----------------------------------------------------
    def evaluate_exact(self, q0) -> Tuple[Fraction, Fraction]:
        """Exact value at rational ``q0`` as (real part, imaginary part)."""
        qv = _to_mpq(q0)
        cache = self._evcache
        if cache is not None and cache[0] == qv:
            return cache[1]
        num_re = sum((c * qv ** e for e, c in self._re.items()), _ZERO)
        num_im = sum((c * qv ** e for e, c in self._im.items()), _ZERO)
        den = sum((c * qv ** k for k, c in enumerate(self._den)), _ZERO)
        if not den:
            raise ZeroDivisionError(f"denominator vanishes at q={q0}")
        val = (Fraction(int((num_re / den).numerator), int((num_re / den).denominator)),
               Fraction(int((num_im / den).numerator), int((num_im / den).denominator)))
        self._evcache = (qv, val)
        return val

    def evaluate(self, q0) -> complex:
        re, im = self.evaluate_exact(q0)
        return complex(float(re), float(im))

    # -- printing ----------------------------------------------------------
    def format(self) -> str:
        num = _format_laurent(self._re, self._im)
        if self._den == _ONE_POLY:
            return num
        den = _format_laurent(_poly_to_laurent(self._den), {})
        return f"({num})/({den})"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"QCoeff({self.format()})"


def _coerce(x):
    if isinstance(x, QCoeff):
        return x
    if isinstance(x, (int, Fraction, complex, Rational)) or isinstance(x, type(_ONE)):
        return QCoeff.const(x)
    return NotImplemented


def _normalize(re: Laurent, im: Laurent, den: Poly):
    den = _ptrim(den)
    if den == _ONE_POLY:
        return re, im, den
    if not re and not im:
        return {}, {}, _ONE_POLY
    # move factors of q out of the denominator
    k = 0
    while not den[k]:
        k += 1
    if k:
        den = den[k:]
        re, im = _lshift(re, -k), _lshift(im, -k)
    lo = min(list(re) + list(im))
    rp = _poly_with_offset(re, lo)
    ip = _poly_with_offset(im, lo)
    g = den
    for p in (rp, ip):
        if p:
            g = _pgcd(g, p)
            if len(g) == 1:
                break
    if len(g) > 1:
        den, _ = _pdivmod(den, g)
        rp = _pdivmod(rp, g)[0] if rp else ()
        ip = _pdivmod(ip, g)[0] if ip else ()
    lead = den[-1]
    if lead != 1:
        den = tuple(c / lead for c in den)
        rp = tuple(c / lead for c in rp)
        ip = tuple(c / lead for c in ip)
    return _poly_to_laurent(rp, lo), _poly_to_laurent(ip, lo), den


def _poly_with_offset(a: Laurent, lo: int) -> Poly:
    if not a:
        return ()
    hi = max(a)
    p = [_ZERO] * (hi - lo + 1)
    for e, c in a.items():
        p[e - lo] = c
    return tuple(p)


def _format_rational(c) -> str:
    return str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_laurent(re: Laurent, im: Laurent) -> str:
    parts = []
    for e in sorted(set(re) | set(im), reverse=True):
        for c, unit in ((re.get(e), ""), (im.get(e), "i")):
            if not c:
                continue
            neg = c < 0
            a = -c if neg else c
            factors = []
            if a != 1 or (not unit and e == 0):
                factors.append(_format_rational(a))
            if unit:
                factors.append(unit)
            if e == 1:
                factors.append("q")
            elif e != 0:
                factors.append(f"q^{e}")
            parts.append(("-" if neg else "+", "*".join(factors)))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        out += f" {sgn} {body}"
    return out


ONE = QCoeff.const(1)
ZERO = QCoeff.const(0)
Q = QCoeff.qpow(1)
QINV = QCoeff.qpow(-1)
I_UNIT = QCoeff.imag_unit()


def q_number(s: int, base_power: int = 2) -> QCoeff:
    """The q-number ``[s]_{q^b} = 1 + q^b + ... + q^{b(s-1)}``."""
    return QCoeff.laurent({base_power * k: 1 for k in range(s)})


CoeffLike = Union[QCoeff, int, Fraction, complex]
