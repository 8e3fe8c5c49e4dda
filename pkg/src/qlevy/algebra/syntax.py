"""Plain-text syntax for algebra elements.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? INT)?
    atom   := INT | 'q' | 'i' | 'u[' j ',' k ']' | 'u*[' j ',' k ']'
            | 'Dinv' | 'Dinv*' | '(' expr ')'

Division is only allowed by scalars.  ``i`` is the imaginary unit; it is
needed to print elements such as ``d_j = (u[j,j] - u*[j,j]) / 2i``.
``format_element`` produces text that ``parse_element`` reads back to the
identical element.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from .coeffs import I_UNIT, ONE, QCoeff
from .core import AlgebraCtx, AlgElt, GenSym

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<ustar>u\*\[\s*(?P<sj>\d+)\s*,\s*(?P<sk>\d+)\s*\])"
    r"|(?P<u>u\[\s*(?P<j>\d+)\s*,\s*(?P<k>\d+)\s*\])"
    r"|(?P<dstar>Dinv\*(?=\s*(?:\*|\+|-|\)|/|\^|$)))"
    r"|(?P<dinv>Dinv)"
    r"|(?P<int>\d+)"
    r"|(?P<q>q)"
    r"|(?P<i>i)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> List[Tuple[str, object]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 12]!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind in ("sj", "sk"):
            kind = "ustar"
        if kind in ("j", "k"):
            kind = "u"
        if m.group("ustar"):
            out.append(("gen", GenSym("Ustar", int(m.group("sj")), int(m.group("sk")))))
        elif m.group("u"):
            out.append(("gen", GenSym("U", int(m.group("j")), int(m.group("k")))))
        elif m.group("dstar"):
            out.append(("gen", GenSym("DinvStar")))
        elif m.group("dinv"):
            out.append(("gen", GenSym("Dinv")))
        elif m.group("int"):
            out.append(("int", int(m.group("int"))))
        elif m.group("q"):
            out.append(("q", None))
        elif m.group("i"):
            out.append(("i", None))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    def __init__(self, ctx: AlgebraCtx, tokens):
        self.ctx = ctx
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ParseError(f"expected {op!r}, got {t[1]!r}")

    def expr(self) -> AlgElt:
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> AlgElt:
        val = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if any(w for w in rhs.terms) or rhs.is_zero():
                    raise ParseError("division is only allowed by nonzero scalars")
                val = val.scale(rhs.constant_term().inverse())
        return val

    def unary(self) -> AlgElt:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> AlgElt:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, n = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer")
            n *= sign
            if n < 0:
                if any(w for w in base.terms) or base.is_zero():
                    raise ParseError("negative powers only for nonzero scalars")
                return self.ctx.scalar(base.constant_term() ** n)
            return base ** n
        return base

    def atom(self) -> AlgElt:
        kind, val = self.take()
        if kind == "int":
            return self.ctx.scalar(val)
        if kind == "q":
            return self.ctx.scalar(QCoeff.qpow(1))
        if kind == "i":
            return self.ctx.scalar(I_UNIT)
        if kind == "gen":
            return self.ctx.gen(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_element(text: str, ctx: AlgebraCtx) -> AlgElt:
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty expression")
    p = _Parser(ctx, toks)
    out = p.expr()
    if p.pos != len(toks):
        raise ParseError(f"trailing input after token {p.pos}")
    return out


def format_element(a: AlgElt) -> str:
    if a.is_zero():
        return "0"
    ctx = a.ctx
    parts = []
    for w in sorted(a.terms, key=lambda w: (len(w), w)):
        c = a.terms[w]
        letters = "*".join(str(ctx.sym(x)) for x in w)
        if c == ONE:
            body, sign = letters or "1", "+"
        elif c == -ONE:
            body, sign = letters or "1", "-"
        else:
            cs = c.format()
            body = f"({cs})" + (f"*{letters}" if letters else "")
            sign = "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
