"""Small finite fields F_q = F_p[u]/(m) with table-driven exact arithmetic.

Field elements are plain Python ints in range(q).  The integer
``sum(c_i * p**i)`` encodes the residue class ``sum(c_i * u**i)`` of the
generator u, so for prime fields the encoding is just the value itself.
Multiplication runs on discrete-log tables over a fixed primitive element;
addition uses a full q x q table for small q and Zech logarithms above that.
Everything is exact and deterministic: the defining polynomial is the
lexicographically least monic irreducible (most-significant coefficient
first, equivalently smallest integer encoding), and the primitive element is
the least one in encoding order.

Intended scale is "desk" fields (q up to a few thousand); construction
refuses anything larger rather than silently degrading.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

_MAX_Q = 1 << 16
_ADD_TABLE_MAX_Q = 1024


class NotPrime(ValueError):
    """Raised when a field characteristic fails the primality check."""


class FieldTooLarge(ValueError):
    """Raised when q exceeds the supported table-driven size."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale integers)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _digits(n: int, p: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def _encode(digits: Sequence[int], p: int) -> int:
    n = 0
    for d in reversed(digits):
        n = n * p + d
    return n


class FieldSpec:
    """The field F_q, q = p^deg, with exact table arithmetic on int elements.

    Attributes:
        p: characteristic (prime).
        deg: extension degree over F_p.
        q: field size p**deg.
        modulus: coefficients (low to high) of the monic defining polynomial
            of u over F_p; ``(0, 1)`` style tuple, length deg + 1.  For prime
            fields this is ``(0, 1)`` (u = 0, i.e. unused).
    """

    __slots__ = (
        "p", "deg", "q", "modulus", "exp", "log", "_zech", "_neg",
        "_add_table", "_embeddings",
    )

    def __init__(self, p: int, deg: int = 1):
        if not isinstance(p, int) or not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if deg < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** deg
        if q > _MAX_Q:
            raise FieldTooLarge(f"q = {q} exceeds supported table size {_MAX_Q}")
        self.p = p
        self.deg = deg
        self.q = q
        self.modulus = self._least_irreducible(p, deg)
        self._neg = [(-a) % p for a in range(p)] if deg == 1 else [
            _encode([(-c) % p for c in _digits(a, p)], p) for a in range(q)
        ]
        g = self._find_primitive()
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._slow_mul(exp[i - 1], g)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self.exp = exp
        self.log = log
        if q <= _ADD_TABLE_MAX_Q:
            self._add_table = [
                [self._slow_add(a, b) for b in range(q)] for a in range(q)
            ]
            self._zech = None
        else:
            self._add_table = None
            # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
            zech = [-1] * (q - 1)
            for k in range(q - 1):
                s = self._slow_add(1, exp[k])
                zech[k] = log[s] if s else -1
            self._zech = zech
        self._embeddings: dict[tuple[int, int], list[int]] = {}

    # -- construction helpers (slow digit arithmetic, used only at build time)

    @staticmethod
    def _least_irreducible(p: int, deg: int) -> tuple[int, ...]:
        if deg == 1:
            return (0, 1)
        for tail in range(p ** deg):
            coeffs = _digits(tail, p)
            coeffs += [0] * (deg - len(coeffs)) + [1]
            if _poly_is_irreducible(coeffs, p):
                return tuple(coeffs)
        raise AssertionError("no irreducible polynomial found")

    def _slow_add(self, a: int, b: int) -> int:
        p = self.p
        if self.deg == 1:
            return (a + b) % p
        da, db = _digits(a, p), _digits(b, p)
        if len(da) < len(db):
            da, db = db, da
        for i, d in enumerate(db):
            da[i] = (da[i] + d) % p
        return _encode(da, p)

    def _slow_mul(self, a: int, b: int) -> int:
        p = self.p
        if self.deg == 1:
            return (a * b) % p
        da, db = _digits(a, p), _digits(b, p)
        prod = [0] * (len(da) + len(db) - 1) if da and db else []
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        prod = _poly_mod(prod, list(self.modulus), p)
        return _encode(prod, p)

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _find_primitive(self) -> int:
        n = self.q - 1
        prime_divs = list(factorize(n))
        for g in range(1, self.q):
            if all(self._slow_pow(g, n // ell) != 1 for ell in prime_divs):
                return g
        raise AssertionError("no primitive element found")

    # -- fast arithmetic -----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        t = self._add_table
        if t is not None:
            return t[a][b]
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self.log[a], self.log[b]
        z = self._zech[(lb - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self.exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0 in F_q")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0 if e else 1
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def frob_p(self, a: int, k: int = 1) -> int:
        """k-fold p-power Frobenius a -> a^(p^k)."""
        return self.pow(a, pow(self.p, k, self.q - 1)) if a else 0

    def pth_root(self, a: int) -> int:
        """The unique p-th root in a perfect field: a^(p^(n-1)) on F_{p^n}."""
        if a == 0:
            return 0
        return self.frob_p(a, (self.deg - 1) % self.deg) if self.deg > 1 else a

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.log[a] % 2 == 0

    def sqrt(self, a: int) -> int:
        """A square root (the one with even/halved discrete log); raises if none."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.frob_p(a, self.deg - 1)
        l = self.log[a]
        if l % 2:
            raise ValueError(f"{a} is not a square in F_{self.q}")
        return self.exp[l // 2]

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def units(self) -> Iterator[int]:
        return iter(range(1, self.q))

    # -- structure -----------------------------------------------------------

    def embed_from(self, sub: "FieldSpec") -> list[int]:
        """Embedding table of ``sub`` into self (requires sub.deg | self.deg).

        Deterministic: the image of sub's generator is the smallest-encoding
        root of sub.modulus in self.  Returned list maps sub-encodings to
        self-encodings and is cached.
        """
        key = (sub.p, sub.deg)
        cached = self._embeddings.get(key)
        if cached is not None:
            return cached
        if sub.p != self.p or self.deg % sub.deg:
            raise ValueError("no embedding: incompatible fields")
        if sub.deg == 1:
            # prime subfield embeds as 0..p-1 (same digit encoding)
            table = list(range(sub.p))
        else:
            root = None
            for cand in range(self.q):
                acc = 0
                for c in reversed(sub.modulus):
                    acc = self.add(self.mul(acc, cand), c % self.p)
                if acc == 0:
                    root = cand
                    break
            if root is None:
                raise AssertionError("modulus has no root in extension")
            table = []
            for a in range(sub.q):
                acc = 0
                for c in reversed(_digits(a, sub.p)):
                    acc = self.add(self.mul(acc, root), c)
                table.append(acc)
        self._embeddings[key] = table
        return table

    def __repr__(self) -> str:
        if self.deg == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.deg})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and other.p == self.p
            and other.deg == self.deg
        )

    def __hash__(self) -> int:
        return hash((self.p, self.deg))


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = a[:]
    dm = len(m) - 1
    while len(a) > dm:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[off + i] = (a[off + i] - c * mi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_mod(prod, m, p)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _poly_rem(a, b, p)
    return _monic(a, p)


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv_lead) % p
        off = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[off + i] = (a[off + i] - c * bi) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _monic(a: list[int], p: int) -> list[int]:
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [(c * inv) % p for c in a]


def _poly_is_irreducible(f: list[int], p: int) -> bool:
    """Rabin test for f over F_p: x^(p^d) = x mod f, gcd checks at d/ell."""
    d = len(f) - 1
    if d < 1 or f[-1] == 0:
        return False
    x = [0, 1]
    # x^(p^k) mod f by repeated p-th powering
    def frob_iter(g: list[int], times: int) -> list[int]:
        for _ in range(times):
            g = _poly_powmod(g, p, f, p)
        return g

    for ell in factorize(d):
        h = frob_iter(x, d // ell)
        # gcd(h - x, f) must be 1
        diff = _poly_sub(h, x, p)
        if _poly_gcd(diff, f, p) != [1]:
            return False
    h = frob_iter(x, d)
    return _poly_sub(h, x, p) == []


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_powmod(g: list[int], e: int, m: list[int], p: int) -> list[int]:
    r = [1]
    g = _poly_rem(g, m, p)
    while e:
        if e & 1:
            r = _poly_mulmod(r, g, m, p)
        g = _poly_mulmod(g, g, m, p)
        e >>= 1
    return r


@lru_cache(maxsize=None)
def field(p: int, deg: int = 1) -> FieldSpec:
    """Construct (and cache) F_{p^deg} with the deterministic modulus choice."""
    return FieldSpec(p, deg)
