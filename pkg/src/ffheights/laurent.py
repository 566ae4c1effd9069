"""Truncated Laurent series over a finite field, with honest precision.

A Series is a sparse map {exponent: nonzero coefficient} together with a
precision bound: every exponent below ``prec`` not present in the map is
known to carry coefficient zero.  ``prec`` may be the float infinity, in
which case the series is exact (a Laurent polynomial known completely).

The q-power Frobenius is exact and precision-expanding here: it raises
coefficients to the q-th power and stretches exponents, multiplying the
precision bound as well.  That is what makes iterating additive polynomials
in completions cheap and rigorous.

Any operation that would need an uncertain digit raises NeedsPrecision; the
caller re-embeds its inputs at higher precision and retries.
"""

from __future__ import annotations

from typing import Union

from .gf import FieldSpec

INF = float("inf")
Prec = Union[int, float]


class NeedsPrecision(ArithmeticError):
    """The requested datum is not determined at current working precision."""


class PrecisionExhausted(ArithmeticError):
    """Precision doubling hit the configured hard cap."""


class Series:
    __slots__ = ("field", "terms", "prec")

    def __init__(self, field: FieldSpec, terms: dict, prec: Prec):
        if prec != INF:
            terms = {e: c for e, c in terms.items() if e < prec and c}
        else:
            terms = {e: c for e, c in terms.items() if c}
        self.field = field
        self.terms = terms
        self.prec = prec

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(field: FieldSpec, prec: Prec = INF) -> "Series":
        return Series(field, {}, prec)

    @staticmethod
    def const(field: FieldSpec, c: int, prec: Prec = INF) -> "Series":
        return Series(field, {0: c} if c else {}, prec)

    @staticmethod
    def uniformizer(field: FieldSpec, k: int = 1, prec: Prec = INF) -> "Series":
        return Series(field, {k: 1}, prec)

    # -- inspection -----------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return not self.terms and self.prec == INF

    def lower(self) -> Prec:
        """A certified lower bound for the valuation."""
        return min(self.terms) if self.terms else self.prec

    def valuation(self) -> Prec:
        """Exact valuation; INF for exact zero; NeedsPrecision if uncertain."""
        if self.terms:
            return min(self.terms)
        if self.prec == INF:
            return INF
        raise NeedsPrecision(f"zero modulo rho^{self.prec}")

    def leading(self) -> tuple[int, int]:
        v = self.valuation()
        if v == INF:
            raise ZeroDivisionError("leading term of exact zero")
        return v, self.terms[v]

    def coeff(self, e: int) -> int:
        if e >= self.prec:
            raise NeedsPrecision(f"coefficient at {e} beyond precision {self.prec}")
        return self.terms.get(e, 0)

    def span(self) -> Prec:
        return self.prec - self.lower() if self.terms else INF if self.prec == INF else 0

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        F = self.field
        prec = min(self.prec, other.prec)
        out = dict(self.terms)
        add = F.add
        for e, c in other.terms.items():
            s = add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Series(F, out, prec)

    def __neg__(self) -> "Series":
        neg = self.field.neg
        return Series(self.field, {e: neg(c) for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other: "Series") -> "Series":
        F = self.field
        la, lb = self.lower(), other.lower()
        prec = min(self.prec + lb, other.prec + la)
        if not self.terms or not other.terms:
            return Series(F, {}, prec)
        out: dict = {}
        add, mul = F.add, F.mul
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < prec:
                    s = add(out.get(e, 0), mul(c1, c2))
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return Series(F, out, prec)

    def scale(self, c: int) -> "Series":
        if c == 0:
            return Series(self.field, {}, self.prec)
        mul = self.field.mul
        return Series(self.field, {e: mul(x, c) for e, x in self.terms.items()}, self.prec)

    def shift(self, k: int) -> "Series":
        """Multiply by rho^k."""
        return Series(self.field, {e + k: c for e, c in self.terms.items()}, self.prec + k)

    def inverse(self, max_span: Prec = None) -> "Series":
        v, lead = self.leading()  # NeedsPrecision / ZeroDivisionError as appropriate
        F = self.field
        span = self.prec - v
        # normalize to 1 + x with x of positive valuation
        inv_lead = F.inv(lead)
        u = self.shift(-v).scale(inv_lead)
        if span == INF and len(u.terms) == 1:
            return Series(F, {-v: inv_lead}, INF)
        if span == INF:
            work = max_span if max_span is not None else _INV_EXACT_SPAN
        else:
            work = span if max_span is None else min(span, max_span)
        one = Series(F, {0: 1}, work)
        x = one
        u_t = Series(F, dict(u.terms), work)
        correct = 1
        while correct < work:
            # Newton: x <- x * (2 - u*x)
            x = x * (one + one - u_t * x)
            correct *= 2
        out = x.shift(-v).scale(inv_lead)
        if span == INF:
            # exact input with finitely many terms still has an infinite
            # expansion; report the working window honestly
            out = Series(F, out.terms, work - v)
        return out

    def __truediv__(self, other: "Series") -> "Series":
        return self * other.inverse()

    def qpower(self, k: int = 1, q0: int = None) -> "Series":
        """Frobenius x -> x^(q0^k) for a power q0 of the characteristic.

        Exact and precision-expanding: coefficients are raised to the q0^k,
        exponents and the precision bound stretch by the same factor.  q0
        defaults to the coefficient field's size but callers iterating the
        Frobenius of a subfield (q0 = q of K inside a residue extension)
        pass it explicitly.
        """
        if k == 0:
            return self
        F = self.field
        if q0 is None:
            q0 = F.q
        s = q0 ** k
        terms = {e * s: F.pow(c, s) for e, c in self.terms.items()}
        return Series(F, terms, self.prec * s)

    def __pow__(self, e: int) -> "Series":
        if e < 0:
            return self.inverse() ** (-e)
        r = Series.const(self.field, 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def truncate(self, prec: Prec) -> "Series":
        if prec >= self.prec:
            return self
        return Series(self.field, self.terms, prec)

    def stretch(self, k: int) -> "Series":
        """Exponent rescale rho -> rho^k (variable refinement), exact."""
        if k == 1:
            return self
        return Series(self.field, {e * k: c for e, c in self.terms.items()}, self.prec * k)

    def map_field(self, table: list[int], target: FieldSpec) -> "Series":
        return Series(target, {e: table[c] for e, c in self.terms.items()}, self.prec)

    def residue_at(self, e: int) -> int:
        return self.coeff(e)

    def __repr__(self) -> str:
        items = sorted(self.terms.items())
        body = " + ".join(f"{c}*rho^{e}" for e, c in items[:6])
        if len(items) > 6:
            body += " + ..."
        tail = "" if self.prec == INF else f" + O(rho^{self.prec})"
        return f"Series({body or '0'}{tail})"


_INV_EXACT_SPAN = 64


def eval_poly_series(coeffs: list[Series], x: Series) -> Series:
    """Horner evaluation of a polynomial with Series coefficients at x."""
    if not coeffs:
        raise ValueError("empty polynomial")
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc
