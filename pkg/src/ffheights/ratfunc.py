"""The rational function field K = F_q(T) in canonical form.

A RatFunc is num/den with den monic and gcd(num, den) = 1, so each value has
exactly one representation and equality is structural.  The q-power
Frobenius on K fixes F_q coefficient-wise, so x -> x^q is just the exponent
stretch T -> T^q applied to numerator and denominator.
"""

from __future__ import annotations

from typing import Union

from .gf import FieldSpec
from .fqpoly import Poly, gcd, xgcd


class DivisionByZero(ZeroDivisionError):
    pass


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, *, reduce: bool = True):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if reduce:
            if num.is_zero():
                den = Poly.one(num.field)
            else:
                g = gcd(num, den)
                if not g.is_one():
                    num = num // g
                    den = den // g
                lc = den.lead()
                if lc != 1:
                    inv = num.field.inv(lc)
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, Poly.one(p.field), reduce=False)

    @staticmethod
    def zero(field: FieldSpec) -> "RatFunc":
        return RatFunc(Poly.zero(field), Poly.one(field), reduce=False)

    @staticmethod
    def one(field: FieldSpec) -> "RatFunc":
        return RatFunc(Poly.one(field), Poly.one(field), reduce=False)

    @staticmethod
    def const(field: FieldSpec, c: int) -> "RatFunc":
        return RatFunc(Poly.const(field, c), Poly.one(field), reduce=False)

    @staticmethod
    def gen(field: FieldSpec) -> "RatFunc":
        return RatFunc(Poly.gen(field), Poly.one(field), reduce=False)

    # -- predicates ----------------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_one()

    def const_value(self) -> int:
        if not self.is_const():
            raise ValueError("not a constant")
        return self.num.coeffs[0] if self.num.coeffs else 0

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RatFunc)
            and other.num == self.num
            and other.den == self.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.num.is_zero():
            raise DivisionByZero("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def inv(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num)

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return self.inv() ** (-e)
        r = RatFunc.one(self.field)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def scale(self, c: int) -> "RatFunc":
        return RatFunc(self.num.scale(c), self.den)

    def qpower(self, k: int = 1) -> "RatFunc":
        """self^(q^k): exponent stretch, exact and cheap (F_q coefficients)."""
        return RatFunc(
            self.num.compose_qpower(k), self.den.compose_qpower(k), reduce=False
        )

    def height(self) -> int:
        """Projective degree max(deg num, deg den); 0 exactly on constants."""
        if self.num.is_zero():
            return 0
        return max(self.num.degree, self.den.degree)

    def deg_at_infinity(self) -> int:
        """-v_infinity = deg num - deg den."""
        if self.num.is_zero():
            raise ValueError("valuation of zero")
        return self.num.degree - self.den.degree

    def __repr__(self) -> str:
        return f"RatFunc({self.format()})"

    def format(self, var: str = "T") -> str:
        if self.den.is_one():
            return self.num.format(var)
        ns = self.num.format(var)
        ds = self.den.format(var)
        if self.num.degree > 0 and len(self.num.coeffs) - self.num.coeffs.count(0) > 1:
            ns = f"({ns})"
        if self.den.degree > 0 and len(self.den.coeffs) - self.den.coeffs.count(0) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    """Canonical form of num/den (monic reduced); raises DivisionByZero."""
    return RatFunc(num, den)


Scalar = Union[int, RatFunc]


class RatFuncField:
    """K = F_q(T) as a field object: constructors, Frobenius, coercions."""

    def __init__(self, base: FieldSpec, var: str = "T"):
        self.base = base
        self.var = var
        self.q = base.q
        self._zero = RatFunc.zero(base)
        self._one = RatFunc.one(base)
        self._gen = RatFunc.gen(base)

    def zero(self) -> RatFunc:
        return self._zero

    def one(self) -> RatFunc:
        return self._one

    def gen(self) -> RatFunc:
        return self._gen

    def const(self, c: int) -> RatFunc:
        return RatFunc.const(self.base, c % self.base.q if c >= 0 else c % self.base.q)

    def from_int(self, n: int) -> RatFunc:
        return RatFunc.const(self.base, n % self.base.p)

    def frobenius(self, x: RatFunc, k: int = 1) -> RatFunc:
        return x.qpower(k)

    def coerce(self, x: Scalar) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        return self.from_int(x)

    def random_element(self, rng, max_deg: int = 2, *, nonzero: bool = False) -> RatFunc:
        q = self.base.q
        while True:
            num = Poly(self.base, [rng.randrange(q) for _ in range(max_deg + 1)])
            den = Poly(self.base, [rng.randrange(q) for _ in range(max_deg)] + [1])
            if num.is_zero() and nonzero:
                continue
            return RatFunc(num, den)

    def __repr__(self) -> str:
        return f"{self.base!r}({self.var})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RatFuncField) and other.base == self.base

    def __hash__(self) -> int:
        return hash(("K", self.base))
