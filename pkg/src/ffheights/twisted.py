"""The twisted polynomial ring k{tau} with tau * c = c^q * tau.

Coefficients live in K = F_q(T) or in an extension L; the coefficient field
object supplies zero/one/frobenius, elements carry the arithmetic operators.
Evaluation of sum c_i tau^i at x is sum c_i x^{q^i}, an F_q-linear map.
"""

from __future__ import annotations

from typing import Sequence, Union

from .ratfunc import RatFunc, RatFuncField
from .extfield import ExtElement, ExtField

CoeffField = Union[RatFuncField, ExtField]


class TwistedPoly:
    __slots__ = ("cfield", "coeffs")

    def __init__(self, cfield: CoeffField, coeffs: Sequence):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.cfield = cfield
        self.coeffs = tuple(cs)

    @staticmethod
    def zero(cfield: CoeffField) -> "TwistedPoly":
        return TwistedPoly(cfield, ())

    @staticmethod
    def one(cfield: CoeffField) -> "TwistedPoly":
        return TwistedPoly(cfield, (cfield.one(),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TwistedPoly)
            and other.cfield is self.cfield
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return TwistedPoly(self.cfield, out)

    def __neg__(self) -> "TwistedPoly":
        return TwistedPoly(self.cfield, [-c for c in self.coeffs])

    def __sub__(self, other: "TwistedPoly") -> "TwistedPoly":
        return self + (-other)

    def __mul__(self, other: "TwistedPoly") -> "TwistedPoly":
        """Noncommutative product with tau^i * c = c^{q^i} * tau^i."""
        F = self.cfield
        if not self.coeffs or not other.coeffs:
            return TwistedPoly(F, ())
        out = [F.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * F.frobenius(b, i)
        return TwistedPoly(F, out)

    def __pow__(self, e: int) -> "TwistedPoly":
        if e < 0:
            raise ValueError("negative power in the twisted ring")
        r = TwistedPoly.one(self.cfield)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __call__(self, x):
        """Evaluate at x: sum c_i x^{q^i} (F_q-linear additive polynomial)."""
        F = self.cfield
        acc = None
        xq = x
        for i, c in enumerate(self.coeffs):
            if i > 0:
                xq = F.frobenius(xq)
            if c.is_zero():
                continue
            term = c * xq
            acc = term if acc is None else acc + term
        return acc if acc is not None else F.zero()

    def __repr__(self) -> str:
        if not self.coeffs:
            return "TwistedPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = c.format() if hasattr(c, "format") else repr(c)
            if i == 0:
                parts.append(cs)
            else:
                ts = "tau" if i == 1 else f"tau^{i}"
                parts.append(ts if cs == "1" else f"({cs})*{ts}")
        return "TwistedPoly(" + " + ".join(parts) + ")"


def tau_mul(f: TwistedPoly, g: TwistedPoly) -> TwistedPoly:
    if f.cfield is not g.cfield:
        raise ValueError("twisted polynomials over different coefficient fields")
    return f * g
