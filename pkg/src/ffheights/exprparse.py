"""The input expression grammar shared by every front end.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-'? power
    power  := atom ('^' '-'? integer)?
    atom   := integer | 'u' | 'T' | 't' | 'tau' | '(' expr ')'

Integer literals reduce mod p; 'u' is the F_q generator, 'T'/'t' the
transcendental.  Values are tau-graded: multiplication twists through the
q-power Frobenius (tau * c = c^q tau), so twisted-operator expressions like
'T + t*tau + tau^2' mean exactly what they do in k{tau}.  Plain field
elements are the tau-degree-0 case.  Errors carry character positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import FieldSpec
from .ratfunc import RatFunc, RatFuncField


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at column {pos + 1})")
        self.pos = pos


@dataclass
class _Tok:
    kind: str       # int | name | op | end
    text: str
    pos: int


def _tokenize(s: str) -> list[_Tok]:
    out = []
    i = 0
    n = len(s)
    while i < n:
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and s[j].isdigit():
                j += 1
            out.append(_Tok("int", s[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and s[j].isalpha():
                j += 1
            out.append(_Tok("name", s[i:j], i))
            i = j
        elif ch in "+-*/^()":
            out.append(_Tok("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    out.append(_Tok("end", "", n))
    return out


class _Parser:
    """Evaluates into {tau_degree: RatFunc} with twisted multiplication."""

    def __init__(self, K: RatFuncField, text: str):
        self.K = K
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> None:
        t = self.take()
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}", t.pos)

    def parse(self) -> dict[int, RatFunc]:
        v = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"trailing input {t.text!r}", t.pos)
        return v

    def expr(self) -> dict:
        v = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            w = self.term()
            v = _add(self.K, v, w if op == "+" else _neg(w))
        return v

    def term(self) -> dict:
        v = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take()
            w = self.factor()
            if op.text == "*":
                v = _mul(self.K, v, w)
            else:
                if set(w) - {0}:
                    raise ParseError("division by a tau-expression", op.pos)
                if not w or w.get(0, self.K.zero()).is_zero():
                    raise ParseError("division by zero", op.pos)
                v = _mul(self.K, v, {0: w[0].inv()})
        return v

    def factor(self) -> dict:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            return _neg(self.factor())
        return self.power()

    def power(self) -> dict:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            op = self.take()
            neg = False
            if self.peek().kind == "op" and self.peek().text == "-":
                self.take()
                neg = True
            t = self.take()
            if t.kind != "int":
                raise ParseError("exponent must be an integer", t.pos)
            e = int(t.text)
            if neg:
                if set(base) - {0}:
                    raise ParseError("negative power of a tau-expression", op.pos)
                e = -e
            return _pow(self.K, base, e, op.pos)
        return base

    def atom(self) -> dict:
        t = self.take()
        if t.kind == "int":
            c = self.K.from_int(int(t.text))
            return {0: c} if not c.is_zero() else {}
        if t.kind == "name":
            if t.text in ("T", "t"):
                return {0: self.K.gen()}
            if t.text == "u":
                if self.K.base.deg == 1:
                    raise ParseError("'u' needs an extension constant field", t.pos)
                return {0: RatFunc.const(self.K.base, self.K.base.p)}
            if t.text == "tau":
                return {1: self.K.one()}
            raise ParseError(f"unknown name {t.text!r}", t.pos)
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        raise ParseError(f"unexpected token {t.text or 'end of input'!r}", t.pos)


def _add(K: RatFuncField, a: dict, b: dict) -> dict:
    out = dict(a)
    for d, c in b.items():
        s = out.get(d, K.zero()) + c
        if s.is_zero():
            out.pop(d, None)
        else:
            out[d] = s
    return out


def _neg(a: dict) -> dict:
    return {d: -c for d, c in a.items()}


def _mul(K: RatFuncField, a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            c = x * K.frobenius(y, i)
            if c.is_zero():
                continue
            d = i + j
            s = out.get(d, K.zero()) + c
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s
    return out


def _pow(K: RatFuncField, a: dict, e: int, pos: int) -> dict:
    if e < 0:
        x = a.get(0, K.zero())
        if x.is_zero():
            raise ParseError("negative power of zero", pos)
        return {0: x.inv() ** (-e)}
    out = {0: K.one()}
    for _ in range(e):
        out = _mul(K, out, a)
    return out


def parse_element(K: RatFuncField, text: str) -> RatFunc:
    """Parse a plain element of K; tau is rejected."""
    v = _Parser(K, text).parse()
    if set(v) - {0}:
        raise ParseError("tau not allowed in a field element", 0)
    return v.get(0, K.zero())


def parse_twisted(K: RatFuncField, text: str) -> list[RatFunc]:
    """Parse a twisted-operator expression into coefficients [c_0, ..., c_r]."""
    v = _Parser(K, text).parse()
    if not v:
        return [K.zero()]
    r = max(v)
    return [v.get(i, K.zero()) for i in range(r + 1)]


def parse_drinfeld_coeffs(K: RatFuncField, text: str) -> list[RatFunc]:
    """Parse phi_T input 'T + a1*tau + ...'; checks the constant term is T."""
    cs = parse_twisted(K, text)
    if len(cs) < 2:
        raise ParseError("phi_T needs a positive rank (a tau term)", 0)
    if cs[0] != K.gen():
        raise ParseError("the constant term of phi_T must be T", 0)
    return cs[1:]


def format_fraction(x) -> str:
    return f"{x.numerator}/{x.denominator}"
