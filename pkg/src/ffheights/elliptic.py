"""Elliptic curves y^2 = x^3 + Bx + C over K = F_q(t), characteristic > 3.

Short Weierstrass models keep the only substitution freedom at (x, y) ->
(u^2 x, u^3 y), so per-place minimality is a lattice walk on valuations:
k_w = min(floor(v(B)/4), floor(v(C)/6)) clears or reduces, and the minimal
data (v_w(Delta_min), v_w(c4_min)) classifies reduction for p > 3:
Delta unit = good; c4 unit = multiplicative I_n; otherwise additive with the
Kodaira type read off (v(c4), v(Delta)).

CurveProfile carries the degree-weighted global invariants: the minimal
discriminant degree, the conductor degree (exponents 0/1/2, no wild part for
p > 3), deg(j), and the inseparable degree p^e of the j-map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .gf import FieldSpec
from .fqpoly import Poly, factor as fq_factor
from .ratfunc import RatFunc, RatFuncField
from .places import Place

INF = float("inf")


class IsotrivialCurve(ValueError):
    pass


class ECPoint:
    """Affine point or the identity O; coordinates in K."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: "ECurve", x: Optional[RatFunc], y: Optional[RatFunc]):
        self.curve = curve
        self.x = x
        self.y = y
        if x is not None:
            lhs = y * y
            rhs = x * x * x + curve.B * x + curve.C
            if lhs != rhs:
                raise ValueError("point is not on the curve")

    @property
    def is_zero(self) -> bool:
        return self.x is None

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ECPoint)
            and other.curve is self.curve
            and other.x == self.x
            and other.y == self.y
        )

    def __hash__(self) -> int:
        return hash((self.x, self.y))

    def __neg__(self) -> "ECPoint":
        if self.is_zero:
            return self
        return ECPoint(self.curve, self.x, -self.y)

    def __add__(self, other: "ECPoint") -> "ECPoint":
        E = self.curve
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        K = E.K
        if self.x == other.x:
            if self.y == -other.y:
                return E.zero()
            # duplication
            num = K.from_int(3) * self.x * self.x + E.B
            den = K.from_int(2) * self.y
            lam = num / den
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return ECPoint(E, x3, y3)

    def __sub__(self, other: "ECPoint") -> "ECPoint":
        return self + (-other)

    def __rmul__(self, n: int) -> "ECPoint":
        if n < 0:
            return (-n) * (-self)
        acc = self.curve.zero()
        add = self
        while n:
            if n & 1:
                acc = acc + add
            n >>= 1
            if n:
                add = add + add
        return acc

    def __repr__(self) -> str:
        if self.is_zero:
            return "O"
        return f"({self.x.format('t')}, {self.y.format('t')})"


@dataclass(frozen=True)
class PlaceData:
    """Per-place minimal-model data of the curve."""

    place: Place
    shift: int                 # k_w: minimal model is x -> pi^{2k} x
    v_disc: int                # v_w(Delta_min)
    v_c4: int | float          # v_w(c4_min); INF when B = 0
    reduction: str             # 'good' | 'mult' | 'add'
    kodaira: str               # 'I0', 'In', 'II', ..., 'In*'
    n: int                     # n of I_n / I_n*, else 0
    cond_exp: int              # 0 / 1 / 2


@dataclass(frozen=True)
class CurveProfile:
    d_EK: int
    f_EK: int
    deg_j: int
    p_e: int
    deg_s_j: int
    semistable: bool
    genus: int
    bad_places: tuple


class ECurve:
    """y^2 = x^3 + Bx + C with B, C in F_q(t), p > 3, Delta != 0."""

    def __init__(self, K: RatFuncField, B: RatFunc, C: RatFunc):
        if K.base.p <= 3:
            raise ValueError("characteristic must exceed 3 for short Weierstrass")
        self.K = K
        self.B = B
        self.C = C
        four = K.from_int(4)
        tseven = K.from_int(27)
        self.disc = K.from_int(-16) * (four * B**3 + tseven * C * C)
        if self.disc.is_zero():
            raise ValueError("singular curve: Delta = 0")
        self.c4 = K.from_int(-48) * B
        self.j = self.c4**3 / self.disc
        self._local: dict[Place, PlaceData] = {}
        self._profile: CurveProfile | None = None

    def zero(self) -> ECPoint:
        return ECPoint(self, None, None)

    def point(self, x: RatFunc, y: RatFunc) -> ECPoint:
        return ECPoint(self, x, y)

    def rhs(self, x: RatFunc) -> RatFunc:
        return x * x * x + self.B * x + self.C

    def is_isotrivial(self) -> bool:
        return self.j.is_const()

    # -- local analysis --------------------------------------------------------

    def local_data(self, w: Place) -> PlaceData:
        cached = self._local.get(w)
        if cached is not None:
            return cached
        vB = w.valuation(self.B)
        vC = w.valuation(self.C)
        k_candidates = []
        if vB != INF:
            k_candidates.append(int(vB) // 4)
        if vC != INF:
            k_candidates.append(int(vC) // 6)
        k = min(k_candidates)
        v_disc = int(w.valuation(self.disc)) - 12 * k
        v_c4 = (int(w.valuation(self.c4)) - 4 * k) if vB != INF else INF
        assert v_disc >= 0 and (v_c4 == INF or v_c4 >= 0)
        data = self._classify(w, k, v_disc, v_c4)
        self._local[w] = data
        return data

    @staticmethod
    def _classify(w: Place, k: int, b: int, a) -> PlaceData:
        if b == 0:
            return PlaceData(w, k, b, a, "good", "I0", 0, 0)
        if a == 0:
            return PlaceData(w, k, b, a, "mult", "In", b, 1)
        if 3 * a < b:
            if a != 2:
                raise ValueError(f"unexpected additive data v(c4)={a}, v(Delta)={b}")
            return PlaceData(w, k, b, a, "add", "In*", b - 6, 2)
        kod = {2: "II", 3: "III", 4: "IV", 6: "I0*", 8: "IV*", 9: "III*", 10: "II*"}.get(b)
        if kod is None:
            raise ValueError(f"unexpected additive data v(c4)={a}, v(Delta)={b}")
        return PlaceData(w, k, b, a, "add", kod, 0, 2)

    def minimal_coeffs(self, w: Place) -> tuple[RatFunc, RatFunc]:
        """(B, C) of the w-minimal model."""
        k = self.local_data(w).shift
        if k == 0:
            return self.B, self.C
        u = w.uniformizer(self.K.one())
        return self.B * u ** (-4 * k), self.C * u ** (-6 * k)

    def bad_place_candidates(self) -> list[Place]:
        """Infinity plus every finite place where Delta vanishes or B, C blow up."""
        pis: dict = {}
        for x in (self.disc, self.B, self.C):
            if x.is_zero():
                continue
            for pi, _ in fq_factor(x.den):
                pis[pi] = True
        for pi, _ in fq_factor(self.disc.num):
            pis[pi] = True
        out = [Place.infinite(self.K.base)]
        out.extend(Place(pi) for pi in sorted(pis, key=lambda p: (p.degree, p.coeffs)))
        return out

    def profile(self) -> CurveProfile:
        if self._profile is not None:
            return self._profile
        if self.is_isotrivial():
            raise IsotrivialCurve("j-invariant is constant")
        d_EK = 0
        f_EK = 0
        semistable = True
        bad = []
        for w in self.bad_place_candidates():
            data = self.local_data(w)
            if data.reduction == "good":
                continue
            bad.append(data)
            d_EK += w.degree * data.v_disc
            f_EK += w.degree * data.cond_exp
            if data.reduction == "add":
                semistable = False
        deg_j = self.j.height()
        p_e = 1
        p = self.K.base.p
        num, den = self.j.num, self.j.den
        while _is_poly_in_tp(num, p) and _is_poly_in_tp(den, p):
            p_e *= p
            num = _compress_tp(num, p)
            den = _compress_tp(den, p)
        prof = CurveProfile(d_EK, f_EK, deg_j, p_e, deg_j // p_e,
                            semistable, 0, tuple(bad))
        self._profile = prof
        return prof

    def transform(self, u: RatFunc) -> "ECurve":
        """The isomorphic model under (x, y) -> (u^2 x, u^3 y)."""
        return ECurve(self.K, self.B * u**-4, self.C * u**-6)

    def map_point(self, P: ECPoint, u: RatFunc, target: "ECurve") -> ECPoint:
        if P.is_zero:
            return target.zero()
        return ECPoint(target, P.x * u**-2, P.y * u**-3)

    def __repr__(self) -> str:
        return f"ECurve(y^2 = x^3 + ({self.B.format('t')})x + {self.C.format('t')})"


def _is_poly_in_tp(f: Poly, p: int) -> bool:
    return all(c == 0 for i, c in enumerate(f.coeffs) if i % p)


def _compress_tp(f: Poly, p: int) -> Poly:
    return Poly(f.field, [f.coeffs[i] for i in range(0, len(f.coeffs), p)])


def s_minimal_model(E: ECurve, S: Sequence[Place]) -> tuple[ECurve, RatFunc]:
    """The S-minimal model: coefficients S-integral, h(Delta) minimal.

    The substitution u is a product of finite uniformizer powers; in F_q(t)
    those exponents are coupled through the product formula (1/t has a zero
    at t = 0), so the minimization runs exhaustively over a finite exponent
    box bounded by the coefficient pole orders rather than place by place.
    Returns (model, u) with the substitution x -> u^2 x used.
    """
    if not S:
        raise ValueError("S must be nonempty")
    K = E.K
    s_keys = {w.sort_key() for w in S}
    inf_in_S = any(w.is_infinite for w in S)
    fin: list[Place] = []
    seen = set()
    for w in list(E.bad_place_candidates()) + list(S):
        if w.is_infinite or w.sort_key() in seen:
            continue
        seen.add(w.sort_key())
        fin.append(w)
    fin.sort(key=lambda w: w.sort_key())
    boxes = []
    for w in fin:
        vB = w.valuation(E.B)
        vC = w.valuation(E.C)
        m_parts = []
        if vB != INF:
            m_parts.append(int(vB) // 4)
        if vC != INF:
            m_parts.append(int(vC) // 6)
        m = min(m_parts)
        if w.sort_key() in s_keys:
            ctr = int(w.valuation(E.disc)) // 12
            boxes.append(range(min(ctr - 2, 0), max(ctr + 2, m) + 1))
        else:
            boxes.append(range(min(0, m), m + 1))
    best = None
    import itertools

    for ks in itertools.product(*boxes) if boxes else [()]:
        u = K.one()
        for w, k in zip(fin, ks):
            if k:
                u = u * RatFunc.from_poly(w.pi) ** k
        B1 = E.B * u**-4
        C1 = E.C * u**-6
        ok = True
        for w in fin:
            if w.sort_key() not in s_keys:
                if w.valuation(B1) < 0 or w.valuation(C1) < 0:
                    ok = False
                    break
        if ok and not inf_in_S:
            if (not B1.is_zero() and B1.deg_at_infinity() > 0) or \
               (not C1.is_zero() and C1.deg_at_infinity() > 0):
                ok = False
        if not ok:
            continue
        h = (E.disc * u**-12).height()
        key = (h, ks)
        if best is None or key < best[0]:
            best = (key, u)
    if best is None:
        raise ValueError("no S-integral model found in the search box")
    u = best[1]
    model = E.transform(u) if not u.is_one() else E
    return model, u


def curve_through(K: RatFuncField, x1: RatFunc, y1: RatFunc,
                  x2: RatFunc, y2: RatFunc) -> tuple[ECurve, ECPoint, ECPoint]:
    """The curve y^2 = x^3 + Bx + C through two prescribed affine points."""
    if x1 == x2:
        raise ValueError("need distinct x-coordinates")
    B = ((y1 * y1 - y2 * y2) - (x1**3 - x2**3)) / (x1 - x2)
    C = y1 * y1 - x1**3 - B * x1
    E = ECurve(K, B, C)
    return E, E.point(x1, y1), E.point(x2, y2)


# -- division polynomials -------------------------------------------------------


def _psi_pair(E: ECurve, n: int, cache: dict) -> tuple:
    """psi_n as (g, e) with psi_n = g(x) * (2y)^e, e in {0, 1}."""
    got = cache.get(n)
    if got is not None:
        return got
    K = E.K
    B, C = E.B, E.C
    if n == 0:
        val = (None, 0)  # zero
    elif n == 1:
        val = ([K.one()], 0)
    elif n == 2:
        val = ([K.one()], 1)
    elif n == 3:
        val = ([-B * B, K.from_int(12) * C, K.from_int(6) * B,
                K.zero(), K.from_int(3)], 0)
    elif n == 4:
        g = [-(K.from_int(8) * C * C + B**3), K.from_int(-4) * B * C,
             K.from_int(-5) * B * B, K.from_int(20) * C,
             K.from_int(5) * B, K.zero(), K.one()]
        val = ([c * K.from_int(2) for c in g], 1)
    elif n % 2 == 1:
        m = n // 2
        a = _pmul(E, _psi_pair(E, m + 2, cache), _ppow(E, _psi_pair(E, m, cache), 3))
        b = _pmul(E, _psi_pair(E, m - 1, cache), _ppow(E, _psi_pair(E, m + 1, cache), 3))
        val = _psub(E, a, b)
        assert val[1] == 0
    else:
        m = n // 2
        a = _pmul(E, _psi_pair(E, m + 2, cache), _ppow(E, _psi_pair(E, m - 1, cache), 2))
        b = _pmul(E, _psi_pair(E, m - 2, cache), _ppow(E, _psi_pair(E, m + 1, cache), 2))
        diff = _psub(E, a, b)
        prod = _pmul(E, _psi_pair(E, m, cache), diff)
        # divide by psi_2 = 2y
        g, e = prod
        assert e == 1
        val = (g, 0)
    cache[n] = val
    return val


def _pmul(E: ECurve, a, b):
    ga, ea = a
    gb, eb = b
    if ga is None or gb is None:
        return (None, 0)
    g = _polyx_mul(E.K, ga, gb)
    e = ea + eb
    if e == 2:
        # (2y)^2 = 4(x^3 + Bx + C)
        four_f = [E.C * E.K.from_int(4), E.B * E.K.from_int(4),
                  E.K.zero(), E.K.from_int(4)]
        g = _polyx_mul(E.K, g, four_f)
        e = 0
    return (g, e)


def _ppow(E: ECurve, a, k: int):
    out = ([E.K.one()], 0)
    for _ in range(k):
        out = _pmul(E, out, a)
    return out


def _psub(E: ECurve, a, b):
    ga, ea = a
    gb, eb = b
    if ga is None:
        return (None if gb is None else [-c for c in gb], eb)
    if gb is None:
        return a
    if ea != eb:
        raise AssertionError("mixed parity subtraction in division polynomials")
    n = max(len(ga), len(gb))
    K = E.K
    out = []
    for i in range(n):
        x = ga[i] if i < len(ga) else K.zero()
        y = gb[i] if i < len(gb) else K.zero()
        out.append(x - y)
    while out and out[-1].is_zero():
        out.pop()
    if not out:
        return (None, 0)
    return (out, ea)


def _polyx_mul(K: RatFuncField, a: list, b: list) -> list:
    out = [K.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
    return out


class DivisionPolynomials:
    """psi_n of a fixed curve, with point evaluation and x-coordinate squares."""

    def __init__(self, E: ECurve):
        self.E = E
        self._cache: dict = {}
        self._eval_cache: dict = {}

    def pair(self, n: int):
        return _psi_pair(self.E, n, self._cache)

    def eval_at(self, P: ECPoint, n: int) -> RatFunc:
        """psi_n(P) as an element of K (P affine); memoized per point."""
        key = (P.x, P.y, n)
        got = self._eval_cache.get(key)
        if got is not None:
            return got
        g, e = self.pair(n)
        if g is None:
            return self.E.K.zero()
        acc = self.E.K.zero()
        for c in reversed(g):
            acc = acc * P.x + c
        if e:
            acc = acc * (self.E.K.from_int(2) * P.y)
        self._eval_cache[key] = acc
        return acc

    def x_poly_of_torsion(self, n: int) -> list:
        """psi_n^2 as a polynomial in x: roots are x-coordinates of n-torsion."""
        sq = _pmul(self.E, self.pair(n), self.pair(n))
        g, e = sq
        assert e == 0 and g is not None
        return g
