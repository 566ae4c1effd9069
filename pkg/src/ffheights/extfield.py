"""Finite extensions L = K[x]/(f) of K = F_q(T).

Elements are coordinate vectors over K in the power basis of the generator,
reduced mod the monic minimal polynomial f.  The q-power Frobenius is the
map sum c_i g^i -> sum c_i^q (g^q)^i; the powers g^{q i} mod f are cached so
iterating additive polynomials over L stays cheap.

Irreducibility of f over K is verified by certificate: rational-root absence
for degree <= 3, and for any degree a good specialization T = c where the
reduced polynomial stays irreducible of full degree over F_q (sufficient by
Gauss's lemma), or an Eisenstein/Newton-polygon slope criterion at a finite
place or infinity.  If no certificate applies the constructor refuses rather
than guessing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .gf import FieldSpec
from .fqpoly import Poly, factor, gcd as poly_gcd, is_irreducible
from .ratfunc import RatFunc, RatFuncField


class IrreducibilityUnknown(ValueError):
    pass


class ExtElement:
    __slots__ = ("ext", "coords")

    def __init__(self, ext: "ExtField", coords: Sequence[RatFunc]):
        self.ext = ext
        self.coords = tuple(coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExtElement)
            and other.ext is self.ext
            and other.coords == self.coords
        )

    def __hash__(self) -> int:
        return hash(self.coords)

    def __add__(self, other: "ExtElement") -> "ExtElement":
        return ExtElement(self.ext, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return ExtElement(self.ext, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "ExtElement":
        return ExtElement(self.ext, [-a for a in self.coords])

    def __mul__(self, other: "ExtElement") -> "ExtElement":
        return self.ext._mul(self, other)

    def __truediv__(self, other: "ExtElement") -> "ExtElement":
        return self * self.ext.inv(other)

    def __pow__(self, e: int) -> "ExtElement":
        if e < 0:
            return self.ext.inv(self) ** (-e)
        r = self.ext.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def max_height(self) -> int:
        return max((c.height() for c in self.coords), default=0)

    def __repr__(self) -> str:
        return f"ExtElement({self.format()})"

    def format(self, gen: str = "g") -> str:
        parts = []
        for i, c in enumerate(self.coords):
            if c.is_zero():
                continue
            cs = c.format()
            if i == 0:
                parts.append(cs)
            else:
                gs = gen if i == 1 else f"{gen}^{i}"
                parts.append(gs if c.is_one() else f"({cs})*{gs}")
        return " + ".join(parts) if parts else "0"


class ExtField:
    """L = K[x]/(f) with f monic irreducible over K."""

    def __init__(self, K: RatFuncField, minpoly: Sequence[RatFunc], *, check: bool = True):
        f = list(minpoly)
        if not f or not f[-1].is_one():
            raise ValueError("minimal polynomial must be monic (coefficient list, low to high)")
        self.K = K
        self.minpoly = tuple(f)
        self.d = len(f) - 1
        if self.d < 2:
            raise ValueError("extension degree must be >= 2 (use K directly)")
        if check:
            cert = irreducibility_certificate(K, self.minpoly)
            if cert is None:
                raise IrreducibilityUnknown(
                    "no irreducibility certificate found for the minimal polynomial"
                )
            self.certificate = cert
        else:
            self.certificate = "trusted"
        self._frob_pows: list[ExtElement] | None = None
        self._places_cache: dict = {}

    # -- constructors ---------------------------------------------------------

    def zero(self) -> ExtElement:
        return ExtElement(self, [self.K.zero()] * self.d)

    def one(self) -> ExtElement:
        return ExtElement(self, [self.K.one()] + [self.K.zero()] * (self.d - 1))

    def gen(self) -> ExtElement:
        cs = [self.K.zero()] * self.d
        cs[1] = self.K.one()
        return ExtElement(self, cs)

    def from_K(self, x: RatFunc) -> ExtElement:
        return ExtElement(self, [x] + [self.K.zero()] * (self.d - 1))

    def from_int(self, n: int) -> ExtElement:
        return self.from_K(self.K.from_int(n))

    def element(self, coords: Sequence[RatFunc]) -> ExtElement:
        cs = list(coords)
        if len(cs) > self.d:
            raise ValueError("too many coordinates")
        cs += [self.K.zero()] * (self.d - len(cs))
        return ExtElement(self, cs)

    # -- arithmetic core --------------------------------------------------------

    def _mul(self, a: ExtElement, b: ExtElement) -> ExtElement:
        d = self.d
        K = self.K
        prod = [K.zero()] * (2 * d - 1)
        for i, x in enumerate(a.coords):
            if x.is_zero():
                continue
            for j, y in enumerate(b.coords):
                if not y.is_zero():
                    prod[i + j] = prod[i + j] + x * y
        # reduce mod f: g^(d+k) rewritten via f
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c.is_zero():
                continue
            for i in range(self.d):
                prod[k - d + i] = prod[k - d + i] - c * self.minpoly[i]
            prod[k] = K.zero()
        return ExtElement(self, prod[:d])

    def inv(self, a: ExtElement) -> ExtElement:
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero in L")
        # extended gcd in K[x] of the coordinate polynomial against f,
        # tracking only the cofactor of a: s*a = r (mod f) throughout
        K = self.K
        r0, r1 = list(self.minpoly), _trim(list(a.coords))
        s0, s1 = [], [K.one()]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1, K)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, K), K)
            if not r1:
                raise ZeroDivisionError("element shares a factor with the modulus")
        c = r1[0]
        return self.element([x / c for x in s1])

    def frobenius(self, a: ExtElement, k: int = 1) -> ExtElement:
        """a -> a^(q^k) via coordinate Frobenius and cached g^(q i) powers."""
        out = a
        for _ in range(k):
            out = self._frob_once(out)
        return out

    def _frob_once(self, a: ExtElement) -> ExtElement:
        if self._frob_pows is None:
            gq = self.gen() ** self.K.q
            pows = [self.one()]
            for _ in range(1, self.d):
                pows.append(pows[-1] * gq)
            self._frob_pows = pows
        acc = self.zero()
        for i, c in enumerate(a.coords):
            if not c.is_zero():
                acc = acc + _scale_ext(self._frob_pows[i], c.qpower())
        return acc

    def __repr__(self) -> str:
        terms = " + ".join(
            f"({c.format()})*x^{i}" if i < self.d else "x^%d" % i
            for i, c in enumerate(self.minpoly)
            if not c.is_zero() or i == self.d
        )
        return f"ExtField(K[x]/({terms}))"


def _scale_ext(a: ExtElement, c: RatFunc) -> ExtElement:
    return ExtElement(a.ext, [x * c for x in a.coords])


def _trim(p: list[RatFunc]) -> list[RatFunc]:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _poly_divmod(a: list[RatFunc], b: list[RatFunc], K: RatFuncField):
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("division by zero polynomial over K")
    q = [K.zero()] * max(0, len(a) - len(b) + 1)
    while a and len(a) >= len(b):
        c = a[-1] / b[-1]
        off = len(a) - len(b)
        q[off] = c
        for i in range(len(b)):
            a[off + i] = a[off + i] - c * b[i]
        a.pop()
        a = _trim(a)
    return q, a


def _poly_mul(a: list[RatFunc], b: list[RatFunc], K: RatFuncField) -> list[RatFunc]:
    if not a or not b:
        return []
    out = [K.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def _poly_sub(a: list[RatFunc], b: list[RatFunc], K: RatFuncField) -> list[RatFunc]:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else K.zero()
        y = b[i] if i < len(b) else K.zero()
        out.append(x - y)
    return out


# -- irreducibility certificates ----------------------------------------------


def rational_roots(K: RatFuncField, coeffs: Sequence[RatFunc]) -> list[RatFunc]:
    """All roots in K of a nonzero polynomial with K coefficients.

    Clears denominators to F_q[T][x] and enumerates candidate roots
    num/den from divisor pairs of the constant and leading coefficients.
    Complete by Gauss's lemma; fine at desk scale.
    """
    cs = _trim(list(coeffs))
    if not cs:
        raise ValueError("zero polynomial")
    # common denominator
    den = Poly.one(K.base)
    for c in cs:
        den = den * (c.den // poly_gcd(den, c.den))
    ics = [c.num * (den // c.den) for c in cs]  # integral coefficients
    roots: list[RatFunc] = []
    lead = ics[-1]
    k = 0
    while ics[k].is_zero():
        k += 1
    if k > 0:
        roots.append(K.zero())
    const = ics[k]
    num_divs = _monic_divisors(const)
    den_divs = _monic_divisors(lead)
    units = range(1, K.base.q)
    seen = set()
    for nd in num_divs:
        for dd in den_divs:
            for u in units:
                cand = RatFunc(nd.scale(u), dd)
                if cand in seen:
                    continue
                seen.add(cand)
                acc = K.zero()
                for c in reversed(cs):
                    acc = acc * cand + c
                if acc.is_zero():
                    roots.append(cand)
    roots.sort(key=lambda r: (r.height(), r.den.coeffs, r.num.coeffs))
    return roots


def _monic_divisors(f: Poly) -> list[Poly]:
    if f.is_zero():
        raise ValueError("divisors of zero")
    facs = factor(f)
    divs = [Poly.one(f.field)]
    for p, m in facs:
        divs = [d * p**i for d in divs for i in range(m + 1)]
    divs.sort(key=lambda d: (d.degree, d.coeffs))
    return divs


def irreducibility_certificate(K: RatFuncField, coeffs: Sequence[RatFunc]) -> str | None:
    """A sufficient certificate that the monic polynomial is irreducible over K.

    Tried in order: constant coefficients (conclusive over F_q); a single-slope
    Newton polygon with slope denominator equal to the degree (totally
    ramified, Eisenstein-style) at infinity or at a prime of the constant
    coefficient; a specialization T = c staying irreducible of full degree;
    finally, absence of rational roots (conclusive only for degree <= 3).
    Returns a description string, or None when nothing applies.
    """
    from math import gcd as _gcd
    from .places import Place

    d = len(coeffs) - 1
    Fq = K.base
    if d == 1:
        return "linear"
    if all(c.is_const() for c in coeffs):
        f0 = Poly(Fq, [c.const_value() for c in coeffs])
        return "constant coefficients irreducible over F_q" if is_irreducible(f0) else None

    candidates: list[Place] = [Place.infinite(Fq)]
    c0 = coeffs[0]
    if not c0.is_zero():
        for p, _ in factor(c0.num) if not c0.num.is_const() else []:
            candidates.append(Place.finite(p))
        for p, _ in factor(c0.den) if not c0.den.is_one() else []:
            candidates.append(Place.finite(p))
    for w in candidates:
        vals = [w.valuation(c) for c in coeffs]
        v0 = vals[0]
        if v0 in (float("inf"), 0) or _gcd(abs(int(v0)), d) != 1:
            continue
        slope = Fraction(int(v0), d)
        # every point (i, v_i) must lie on or above the segment (0,v0)-(d,0)
        if all(
            v == float("inf") or Fraction(int(v)) >= Fraction(int(v0)) - slope * i
            for i, v in enumerate(vals)
        ):
            return f"single Newton slope -{v0}/{d} at {w!r} (totally ramified)"

    if all(c.is_poly() for c in coeffs):
        for c in range(Fq.q):
            fspec = Poly(Fq, [co.num(c) for co in coeffs])
            if fspec.degree == d and is_irreducible(fspec):
                return f"specialization T={c} irreducible over F_q"

    if d <= 3 and not rational_roots(K, coeffs):
        return "degree <= 3 with no rational root"
    return None
