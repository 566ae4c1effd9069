"""Univariate polynomials over a FieldSpec, with complete factorization.

Coefficients are stored low-to-high in a tuple of field encodings with no
trailing zeros; the empty tuple is the zero polynomial, so
``degree == len(coeffs) - 1`` (degree -1 for zero).  Arithmetic is schoolbook,
which is plenty at the degrees this package works at.

Factorization is the classical pipeline: squarefree decomposition (with
p-th-root descent for derivative-zero parts), distinct-degree splitting, and
Cantor-Zassenhaus equal-degree splitting.  The equal-degree stage is the one
randomized step; it draws from an explicit seed so factorizations are
reproducible, and the returned factor list is sorted by (degree,
coefficient tuple).
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator

from .gf import FieldSpec


class Poly:
    """Immutable polynomial over a fixed finite field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(field: FieldSpec) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def one(field: FieldSpec) -> "Poly":
        return Poly(field, (1,))

    @staticmethod
    def const(field: FieldSpec, c: int) -> "Poly":
        return Poly(field, (c,))

    @staticmethod
    def gen(field: FieldSpec) -> "Poly":
        return Poly(field, (0, 1))

    @staticmethod
    def monomial(field: FieldSpec, k: int, c: int = 1) -> "Poly":
        return Poly(field, (0,) * k + (c,))

    # -- basics ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def lead(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Poly)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.format()})"

    def format(self, var: str = "T") -> str:
        if not self.coeffs:
            return "0"
        F = self.field
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(_fmt_coeff(F, c))
            else:
                xs = var if i == 1 else f"{var}^{i}"
                parts.append(xs if c == 1 else f"{_fmt_coeff(F, c)}*{xs}")
        return " + ".join(parts)

    # -- ring operations --------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = F.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return Poly(F, out)

    def __neg__(self) -> "Poly":
        neg = self.field.neg
        return Poly(self.field, [neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        add, neg = F.add, F.neg
        out = [0] * n
        for i in range(n):
            x = a[i] if i < len(a) else 0
            y = b[i] if i < len(b) else 0
            out[i] = add(x, neg(y))
        return Poly(F, out)

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F, ())
        if (F.deg == 1 and len(a) + len(b) > 40
                and min(len(a), len(b)) * (F.p - 1) ** 2 < _PACK_MASK):
            return Poly(F, _packed_mul(a, b, F.p))
        out = [0] * (len(a) + len(b) - 1)
        add, mul = F.add, F.mul
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Poly(F, out)

    def scale(self, c: int) -> "Poly":
        if c == 0:
            return Poly(self.field, ())
        mul = self.field.mul
        return Poly(self.field, [mul(x, c) for x in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by T^k (k >= 0)."""
        if not self.coeffs:
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        F = self.field
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            return Poly(F, ()), self
        inv_lead = F.inv(b[-1])
        add, mul, neg = F.add, F.mul, F.neg
        quot = [0] * (len(a) - db)
        while len(a) - 1 >= db and a:
            c = mul(a[-1], inv_lead)
            off = len(a) - 1 - db
            quot[off] = c
            for i in range(db + 1):
                a[off + i] = add(a[off + i], neg(mul(c, b[i])))
            while a and a[-1] == 0:
                a.pop()
        return Poly(F, quot), Poly(F, a)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly.one(self.field)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def monic(self) -> "Poly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def derivative(self) -> "Poly":
        F = self.field
        p = F.p
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(F.mul(self.coeffs[i], i % p))
        return Poly(F, out)

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        add, mul = F.add, F.mul
        for c in reversed(self.coeffs):
            acc = add(mul(acc, x), c)
        return acc

    def compose_qpower(self, k: int = 1) -> "Poly":
        """T -> T^(q^k) substitution (exponents stretch; F_q coefficients fixed)."""
        if not self.coeffs:
            return self
        step = self.field.q ** k
        out = [0] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return Poly(self.field, out)

    def map_coeffs(self, table: list[int], target: FieldSpec) -> "Poly":
        """Push coefficients through an embedding table into another field."""
        return Poly(target, [table[c] for c in self.coeffs])

    def valuation(self, pi: "Poly") -> int:
        """Multiplicity of the irreducible pi in self (self nonzero)."""
        if not self.coeffs:
            raise ValueError("valuation of the zero polynomial")
        v = 0
        f = self
        while True:
            quo, rem = divmod(f, pi)
            if rem.coeffs:
                return v
            v += 1
            f = quo

    def trailing_valuation(self) -> int:
        """Multiplicity of T (index of first nonzero coefficient)."""
        if not self.coeffs:
            raise ValueError("valuation of the zero polynomial")
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise AssertionError


_PACK_SHIFT = 24
_PACK_MASK = (1 << _PACK_SHIFT) - 1


def _packed_mul(a, b, p: int) -> list[int]:
    """Prime-field polynomial product through one big-integer multiply.

    Coefficients are packed into 24-bit lanes, wide enough that the
    convolution sums min(len) * (p-1)^2 never carry at desk degrees, so
    Python's C-level big-int multiplication does the work."""
    ia = 0
    for c in reversed(a):
        ia = (ia << _PACK_SHIFT) | c
    ib = 0
    for c in reversed(b):
        ib = (ib << _PACK_SHIFT) | c
    prod = ia * ib
    out = []
    for _ in range(len(a) + len(b) - 1):
        out.append((prod & _PACK_MASK) % p)
        prod >>= _PACK_SHIFT
    return out


def _fmt_coeff(F: FieldSpec, c: int) -> str:
    if F.deg == 1 or c < F.p:
        return str(c)
    from .gf import _digits

    ds = _digits(c, F.p)
    parts = []
    for i in range(len(ds) - 1, -1, -1):
        if ds[i] == 0:
            continue
        if i == 0:
            parts.append(str(ds[i]))
        else:
            us = "u" if i == 1 else f"u^{i}"
            parts.append(us if ds[i] == 1 else f"{ds[i]}*{us}")
    return "(" + "+".join(parts) + ")"


def gcd(a: Poly, b: Poly) -> Poly:
    F = a.field
    if (F.deg == 1 and min(len(a.coeffs), len(b.coeffs)) > 48
            and len(a.coeffs) * F.p ** 3 < _PACK_MASK):
        return Poly(F, _packed_gcd(list(a.coeffs), list(b.coeffs), F.p)).monic()
    while b.coeffs:
        a, b = b, a % b
    return a.monic()


def _packed_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    """Euclidean chain on 24-bit-lane packed integers (prime fields).

    The remainder step adds (p - c) * b << shift instead of subtracting, so
    lanes stay nonnegative; lanes are renormalized mod p on extraction.  Lane
    growth per step is < p^2 and chains renormalize each swap, so the guard
    len * p^3 < 2^24 keeps every lane in range."""
    SH = _PACK_SHIFT
    mask = _PACK_MASK
    inv = [0] * p
    for v in range(1, p):
        inv[v] = pow(v, p - 2, p)

    def pack(cs):
        n = 0
        for c in reversed(cs):
            n = (n << SH) | c
        return n

    def lane(n, i):
        return ((n >> (SH * i)) & mask) % p

    A, da = pack(a), len(a) - 1
    B, db = pack(b), len(b) - 1
    if da < db:
        A, da, B, db = B, db, A, da
    while True:
        # normalize the degree of B (lanes can hold multiples of p)
        while db >= 0 and lane(B, db) == 0:
            db -= 1
        if db < 0:
            break
        lead_inv = inv[lane(B, db)]
        while da >= db:
            ca = lane(A, da)
            if ca:
                c = (ca * lead_inv) % p
                A += ((p - c) * B) << (SH * (da - db))
            da -= 1
            while da >= 0 and lane(A, da) == 0:
                da -= 1
        # renormalize A's lanes mod p before swapping (bounds lane growth)
        A = pack([lane(A, i) for i in range(da + 1)]) if da >= 0 else 0
        A, da, B, db = B, db, A, da
    return [lane(A, i) for i in range(da + 1)]


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with g = gcd monic and s*a + t*b = g."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while r1.coeffs:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.coeffs:
        return r0, s0, t0
    c = F.inv(r0.lead())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def powmod(a: Poly, e: int, m: Poly) -> Poly:
    r = Poly.one(a.field)
    a = a % m
    while e:
        if e & 1:
            r = (r * a) % m
        a = (a * a) % m
        e >>= 1
    return r


def _frob_powmod(a: Poly, k: int, m: Poly) -> Poly:
    """a^(q^k) mod m by k successive q-th powers."""
    q = a.field.q
    for _ in range(k):
        a = powmod(a, q, m)
    return a


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun-style decomposition valid in characteristic p.

    Returns [(g_i, m_i)] with f = lead * prod g_i^{m_i}, the g_i monic,
    squarefree and pairwise coprime.
    """
    F = f.field
    p = F.p
    f = f.monic()
    out: list[tuple[Poly, int]] = []

    def rec(f: Poly, mult: int) -> None:
        if f.is_const():
            return
        d = f.derivative()
        if d.is_zero():
            # f = g(T^p); descend via p-th roots on coefficients
            root = _pth_root_poly(f)
            rec(root, mult * p)
            return
        c = gcd(f, d)
        w = f // c
        i = 1
        while not w.is_const():
            y = gcd(w, c)
            z = w // y
            if not z.is_const():
                out.append((z.monic(), i * mult))
            c = c // y
            w = y
            i += 1
        # leftover c is a p-th power (exponents divisible by p); the
        # zero-derivative branch of the recursion applies the factor p
        if not c.is_const():
            rec(c, mult)

    rec(f, 1)
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def _pth_root_poly(f: Poly) -> Poly:
    F = f.field
    p = F.p
    out = [0] * (f.degree // p + 1)
    for i, c in enumerate(f.coeffs):
        if c:
            if i % p:
                raise AssertionError("not a p-th power")
            out[i // p] = F.pth_root(c)
    return Poly(F, out)


def distinct_degree_split(f: Poly) -> list[tuple[Poly, int]]:
    """Split monic squarefree f into products of irreducibles of equal degree.

    Returns [(h_d, d)] with h_d = product of the irreducible factors of
    degree d.
    """
    F = f.field
    out = []
    x = Poly.gen(F)
    h = x % f
    v = f
    d = 0
    while v.degree >= 2 * (d + 1):
        d += 1
        h = _frob_powmod(h, 1, v)
        g = gcd(h - x, v)
        if not g.is_const():
            out.append((g, d))
            v = v // g
            h = h % v
    if not v.is_const():
        out.append((v, v.degree))
    return out


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus: f monic squarefree, all factors of degree d."""
    F = f.field
    n = f.degree
    if n == d:
        return [f]
    q = F.q
    while True:
        a = Poly(F, [rng.randrange(q) for _ in range(n)])
        if a.is_const():
            continue
        g = gcd(a, f)
        if not g.is_const() and g.degree < n:
            left, right = g.monic(), (f // g).monic()
            break
        if q % 2 == 1:
            b = powmod(a, (q ** d - 1) // 2, f) - Poly.one(F)
        else:
            # trace map over F_{2^m}: sum of a^(2^i) for i < m*d
            m = F.deg * d
            b = Poly.zero(F)
            t = a % f
            for _ in range(m):
                b = (b + t) % f
                t = powmod(t, 2, f)
        g = gcd(b, f)
        if not g.is_const() and g.degree < n:
            left, right = g.monic(), (f // g).monic()
            break
    return _equal_degree_split(left, d, rng) + _equal_degree_split(right, d, rng)


def factor(f: Poly, *, seed: int = 0) -> list[tuple[Poly, int]]:
    """Complete factorization of a nonzero polynomial into monic irreducibles.

    Returns [(irreducible, multiplicity)] sorted by (degree, coefficients);
    the product of factor^mult times the leading coefficient of f equals f.
    The equal-degree stage draws randomness from ``seed`` only.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.is_const():
        return []
    rng = random.Random(seed * 0x9E3779B1 + 31 * f.degree + f.coeffs[0])
    out: list[tuple[Poly, int]] = []
    for g, mult in squarefree_decomposition(f):
        for h, d in distinct_degree_split(g):
            for irr in _equal_degree_split(h, d, rng):
                out.append((irr, mult))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def roots(f: Poly) -> list[int]:
    """Roots of f in F_q, sorted by encoding (brute scan: desk-scale q)."""
    if f.is_zero():
        raise ValueError("every element is a root of 0")
    return [a for a in range(f.field.q) if f(a) == 0]


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    sq = squarefree_decomposition(f)
    if len(sq) != 1 or sq[0][1] != 1:
        return False
    dd = distinct_degree_split(sq[0][0])
    return len(dd) == 1 and dd[0][1] == f.degree


def irreducibles(field: FieldSpec, degree: int) -> Iterator[Poly]:
    """All monic irreducibles of the given degree, in encoding order."""
    q = field.q
    for tail in range(q ** degree):
        cs = []
        n = tail
        for _ in range(degree):
            n, r = divmod(n, q)
            cs.append(r)
        cs.append(1)
        f = Poly(field, cs)
        if is_irreducible(f):
            yield f


def poly_sqrt(f: Poly) -> Poly | None:
    """A square root of f, or None; factorization-free (derivative descent).

    Uses gcd(f, f') to peel the squarefree radical and the perfect-field
    p-th-root descent when the derivative vanishes.  Returns a root with
    monic-normalized structure times a square root of the leading unit."""
    F = f.field
    if f.is_zero():
        return f
    lc = f.lead()
    if not F.is_square(lc):
        return None
    if f.degree % 2:
        return None
    root = _monic_sqrt(f.monic())
    if root is None:
        return None
    return root.scale(F.sqrt(lc))


def _monic_sqrt(f: Poly) -> Poly | None:
    F = f.field
    if f.is_one():
        return f
    d = f.derivative()
    if d.is_zero():
        if F.p == 2:
            # squaring is the Frobenius: coefficient roots give the root
            return _pth_root_poly(f)
        # f = h(T^p) with h the plain compression; sqrt(f) = sqrt(h)(T^p)
        # (a square with zero derivative has a zero-derivative square root
        # in odd characteristic, so the root is itself a T^p-composite)
        h = Poly(F, [f.coeffs[i] for i in range(0, len(f.coeffs), F.p)])
        r = _monic_sqrt(h)
        return None if r is None else _recompose(r, F.p)
    g = gcd(f, d)
    quo, rem = divmod(f, g)
    if rem.coeffs:
        return None
    s = quo.monic()          # squarefree radical of the tame part
    ssq = s * s
    quo2, rem2 = divmod(f, ssq)
    if rem2.coeffs:
        return None
    rest = _monic_sqrt(quo2.monic())
    return None if rest is None else s * rest


def _recompose(r: Poly, p: int) -> Poly:
    out = [0] * (r.degree * p + 1) if r.coeffs else []
    for i, c in enumerate(r.coeffs):
        out[i * p] = c
    return Poly(r.field, out)


def interpolate(field: FieldSpec, points: list[tuple[int, int]]) -> Poly:
    """Lagrange interpolation through distinct x-coordinates."""
    out = Poly.zero(field)
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num = Poly.const(field, yi)
        den = 1
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * Poly(field, (field.neg(xj), 1))
            den = field.mul(den, field.sub(xi, xj))
        out = out + num.scale(field.inv(den))
    return out
