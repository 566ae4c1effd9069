"""Drinfeld F_q[T]-modules over K = F_q(T) and their canonical heights, exactly.

A module of rank r is phi_T = T + a_1 tau + ... + a_r tau^r.  The canonical
local height at a place v is computed by iterating beta -> phi_T(beta) and
watching valuations.  Write M_v for the coefficient-comparison threshold
min_i (v(a_i) - v(a_r)) / (q^r - q^i) (over 0 <= i < r with a_i != 0,
a_0 = T) and D_v = min(M_v, -v(a_r)/(q^r - 1)).  Once v(beta) < D_v the top
term dominates and keeps dominating:

    v(phi_T(beta)) = v(a_r) + q^r v(beta) < D_v,

so the local height telescopes to the exact closed form
-(d_v/d) q^{-nr} (v(beta_n) + v(a_r)/(q^r - 1)).  Orbits that stay integral
at an everywhere-integral place are certified zero; orbits that hit zero or
repeat are finite, hence torsion, hence zero.  Anything still undecided at
the iteration cap is reported as CapExceeded together with a rigorous upper
bound (never a guess): from min(0, v(beta_{n+1})) >= q^r min(0, v(beta_n)) - A_v
with A_v = max(0, -min_i v(a_i), -v(T)), the tail after the cap is at most
(d_v/d) (max(0, -min_n min(0, v(beta_n))) + A_v/(q^r-1)) / q^{r cap}.

Iterates are tracked exactly while they stay small and then continued in the
completion at v, where the q-power Frobenius is exact and cheap; this keeps
the cost polynomial even though phi_{T^n}(alpha) has height ~ q^{nr}.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .fqpoly import Poly
from .ratfunc import RatFunc, RatFuncField
from .extfield import ExtElement, ExtField
from .twisted import TwistedPoly
from .places import Place
from .places_ext import ExtPlace
from .laurent import INF, NeedsPrecision, PrecisionExhausted, Series
from .heights import KPlace, AnyPlace, Element, finite_support_places, height, places_over

EXACT = "Exact"
CERTIFIED_ZERO = "CertifiedZero"
CAP_EXCEEDED = "CapExceeded"

_EXACT_SIZE_BUDGET = 250
_PROBE_ITERS = 24


class DrinfeldModule:
    """phi_T = T + a_1 tau + ... + a_r tau^r with a_i in the coefficient field."""

    def __init__(self, cfield, coeffs: Sequence):
        coeffs = list(coeffs)
        if not coeffs or coeffs[-1].is_zero():
            raise ValueError("rank-r module needs a_r != 0")
        self.cfield = cfield
        self.K = cfield if isinstance(cfield, RatFuncField) else cfield.K
        self.q = self.K.q
        self.r = len(coeffs)
        self.coeffs = tuple(coeffs)
        self._phi_pows: list[TwistedPoly] | None = None

    def T_elem(self):
        t = self.K.gen()
        return t if isinstance(self.cfield, RatFuncField) else self.cfield.from_K(t)

    def a(self, i: int):
        """a_i with the convention a_0 = T."""
        if i == 0:
            return self.T_elem()
        return self.coeffs[i - 1]

    def phi_T(self) -> TwistedPoly:
        return TwistedPoly(self.cfield, [self.T_elem(), *self.coeffs])

    def phi(self, g: Poly) -> TwistedPoly:
        """Image of g(T) in F_q[T] under the module map (ring homomorphism)."""
        if self._phi_pows is None:
            self._phi_pows = [TwistedPoly.one(self.cfield)]
        pows = self._phi_pows
        pt = self.phi_T()
        while len(pows) <= g.degree:
            pows.append(pows[-1] * pt)
        acc = TwistedPoly.zero(self.cfield)
        one = self.cfield.one()
        for j, b in enumerate(g.coeffs):
            if b:
                scal = TwistedPoly(self.cfield, [_const_in(self.cfield, b)])
                acc = acc + scal * pows[j]
        return acc

    def eval_T(self, x, F=None):
        """phi_T(x) = Tx + sum a_i x^{q^i} in the field of x."""
        F = F or _field_of(x, self.cfield)
        if isinstance(x, RatFunc) and isinstance(F, ExtField):
            x = F.from_K(x)
        acc = _coerce(F, self.T_elem(), self.cfield) * x
        xq = x
        for i, a in enumerate(self.coeffs, start=1):
            xq = F.frobenius(xq)
            if not a.is_zero():
                acc = acc + _coerce(F, a, self.cfield) * xq
        return acc

    def eval(self, g: Poly, x, F=None):
        """phi_g(x) by Horner composition: acc <- phi_T(acc) + b_j x."""
        F = F or _field_of(x, self.cfield)
        acc = None
        for b in reversed(g.coeffs):
            acc = self.eval_T(acc, F) if acc is not None else F.zero()
            if b:
                acc = acc + _scal(F, b) * x
        return acc if acc is not None else F.zero()

    def coeff_k_elements(self) -> list[RatFunc]:
        """The K-data of the coefficients (coordinates for L-coefficients)."""
        out = [self.K.gen()]
        for a in self.coeffs:
            if isinstance(a, RatFunc):
                out.append(a)
            else:
                out.extend(a.coords)
        return out

    def __repr__(self) -> str:
        return f"DrinfeldModule(rank {self.r}: {self.phi_T()!r})"


def _field_of(x, default):
    if isinstance(x, RatFunc):
        return default if isinstance(default, RatFuncField) else default
    return x.ext


def _coerce(F, a, afield):
    if isinstance(F, RatFuncField):
        return a
    if isinstance(a, RatFunc):
        return F.from_K(a)
    if a.ext is F:
        return a
    raise ValueError("cannot coerce between distinct extensions")


def _const_in(F, b: int):
    return F.from_int(b) if not isinstance(F, RatFuncField) else F.from_int(b)


def _scal(F, b: int):
    return F.from_int(b)


@dataclass(frozen=True)
class LocalThresholds:
    """Dominance data of phi at a place v (valuations normalized on L)."""

    place: AnyPlace
    dominance: Fraction          # min_i (v(a_i)-v(a_r))/(q^r-q^i)
    stable: Fraction             # min(dominance, -v(a_r)/(q^r-1))
    in_bad_set: bool             # pole of T or an a_i, or zero of a_r

    @property
    def M(self) -> Fraction:
        return self.dominance

    @property
    def D(self) -> Fraction:
        return self.stable


def thresholds(phi: DrinfeldModule, v: AnyPlace) -> LocalThresholds:
    q, r = phi.q, phi.r
    v_ar = v.valuation(phi.a(r))
    vals = []
    for i in range(r):
        ai = phi.a(i)
        if ai.is_zero():
            continue
        vals.append(Fraction(int(v.valuation(ai)) - int(v_ar), q**r - q**i))
    M = min(vals)
    D = min(M, Fraction(-int(v_ar), q**r - 1))
    bad = int(v_ar) > 0
    for i in range(r + 1):
        ai = phi.a(i)
        if not ai.is_zero() and v.valuation(ai) < 0:
            bad = True
    return LocalThresholds(v, M, D, bad)


@dataclass(frozen=True)
class LocalHeight:
    value: Fraction
    status: str
    iterations: int
    upper: Fraction              # == value unless CapExceeded
    certificate: str


@dataclass(frozen=True)
class HeightResult:
    value: Fraction
    status: str
    upper: Fraction
    d: int
    per_place: tuple

    def is_exact(self) -> bool:
        return self.status in (EXACT, CERTIFIED_ZERO)


def _size(x: Element) -> int:
    if isinstance(x, RatFunc):
        return x.height()
    return x.max_height()


def _syntactically_integral(v: AnyPlace, alpha: Element) -> bool:
    """True certifies v(alpha) >= 0 from coordinates alone (no embedding)."""
    if isinstance(alpha, RatFunc):
        return v.valuation(alpha) >= 0
    w = v.below
    coords_ok = all(w.valuation(c) >= 0 for c in alpha.coords if not c.is_zero())
    gen_ok = all(w.valuation(c) >= 0 for c in alpha.ext.minpoly[:-1]
                 if not c.is_zero())
    return coords_ok and gen_ok


def _exact_orbit(phi: DrinfeldModule, alpha: Element, max_iters: int):
    """Exact iterates [alpha, phi_T(alpha), ...] while they stay small.

    Returns (orbit, finality) where finality is None (budget/iters ran out),
    ('zero', n), or ('repeat', n, m): orbits that end or repeat certify
    torsion, hence zero height everywhere."""
    orbit = [alpha]
    seen = {alpha: 0}
    beta = alpha
    for n in range(1, max_iters + 1):
        if _size(beta) * phi.q**phi.r > _EXACT_SIZE_BUDGET:
            return orbit, None
        beta = phi.eval_T(beta)
        if beta.is_zero():
            return orbit, ("zero", n)
        prev = seen.get(beta)
        if prev is not None:
            return orbit, ("repeat", n, prev)
        seen[beta] = n
        orbit.append(beta)
    return orbit, None


def local_height(phi: DrinfeldModule, v: AnyPlace, alpha: Element,
                 d: Optional[int] = None, cap: int = 40,
                 orbit: Optional[list] = None) -> LocalHeight:
    """Exact canonical local height of alpha at v (see module docstring).

    ``orbit`` may carry precomputed exact iterates shared across places."""
    if d is None:
        d = 1 if isinstance(alpha, RatFunc) else alpha.ext.d
    if alpha.is_zero():
        return LocalHeight(Fraction(0), CERTIFIED_ZERO, 0, Fraction(0), "zero element")
    q, r = phi.q, phi.r
    qr = q**r
    v_T = v.valuation(phi.a(0))
    coeff_vals = [int(v.valuation(a)) for a in (phi.a(i) for i in range(1, r + 1))
                  if not a.is_zero()]
    if v_T >= 0 and all(cv >= 0 for cv in coeff_vals):
        # the syntactic test avoids materializing completion models at
        # places where everything is visibly integral
        if _syntactically_integral(v, alpha) or v.valuation(alpha) >= 0:
            return LocalHeight(Fraction(0), CERTIFIED_ZERO, 0, Fraction(0),
                               "integral data, forward-invariant")
    th = thresholds(phi, v)
    D = th.stable
    v_ar = int(v.valuation(phi.a(r)))
    ar_term = Fraction(v_ar, qr - 1)
    dv_over_d = Fraction(v.d_v, d)

    def fire(n: int, vn: int) -> LocalHeight:
        val = dv_over_d * (-(vn + ar_term)) / Fraction(qr) ** n
        return LocalHeight(val, EXACT, n, val, f"dominance at n={n}, v={vn}")

    if orbit is None:
        orbit, finality = _exact_orbit(phi, alpha, cap)
        if finality is not None:
            return LocalHeight(Fraction(0), CERTIFIED_ZERO, len(orbit), Fraction(0),
                               "finite orbit (torsion)")
    min_neg = 0
    n = -1
    for n, beta in enumerate(orbit):
        if n > cap:
            break
        vn = v.valuation(beta)
        if vn < D:
            return fire(n, int(vn))
        min_neg = min(min_neg, int(min(0, vn)))
    n = min(n, cap)
    if n >= cap:
        return _capped(dv_over_d, min_neg, v_T, coeff_vals, qr, cap)
    # series continuation from the last exact element
    restarts = 0
    while True:
        try:
            return _series_phase(phi, v, orbit[n], n, min_neg, D, qr, cap,
                                 dv_over_d, ar_term, v_T, coeff_vals, fire)
        except NeedsPrecision:
            restarts += 1
            if restarts > 8:
                raise PrecisionExhausted(
                    f"local height at {v!r} undetermined after {restarts} "
                    "precision doublings"
                ) from None
            v._refresh(getattr(v, "_prec", 64) * 2 if isinstance(v, KPlace)
                       else v._model.prec * 2)


def _series_phase(phi, v, beta, n0, min_neg, D, qr, cap, dv_over_d, ar_term,
                  v_T, coeff_vals, fire):
    q = phi.q
    W = _working_prec(v)
    s = v.series(beta).truncate(W)
    T_s = v.series(phi.a(0))
    a_s = [(i, v.series(phi.a(i))) for i in range(1, phi.r + 1)
           if not phi.a(i).is_zero()]
    n = n0
    while n < cap:
        new = T_s * s
        for i, ai in a_s:
            new = new + ai * s.qpower(i, q0=q)
        # truncating to the working window keeps bounded orbits bounded in
        # size; a lost leading term raises NeedsPrecision and widens it
        s = new.truncate(W)
        n += 1
        vn = s.valuation()  # NeedsPrecision restarts the series phase
        if vn < D:
            return fire(n, int(vn))
        min_neg = min(min_neg, int(min(0, vn)))
    return _capped(dv_over_d, min_neg, v_T, coeff_vals, qr, cap)


def _working_prec(v: AnyPlace) -> int:
    if isinstance(v, KPlace):
        return v._prec
    return v._model.prec * v._model.e_model


def _capped(dv_over_d, min_neg, v_T, coeff_vals, qr, cap) -> LocalHeight:
    A = max(0, -int(v_T), *(-cv for cv in coeff_vals))
    bound = dv_over_d * (Fraction(max(0, -min_neg)) + Fraction(A, qr - 1)) \
        / Fraction(qr) ** cap
    return LocalHeight(Fraction(0), CAP_EXCEEDED, cap, bound,
                       "orbit stayed above the dominance threshold")




def support_places_for(phi: DrinfeldModule, alpha: Element) -> list[AnyPlace]:
    """Places that can carry a nonzero local height: everything else is
    certified zero by integrality."""
    K = phi.K
    kelems = phi.coeff_k_elements()
    if isinstance(alpha, RatFunc):
        field_obj = phi.cfield if isinstance(phi.cfield, ExtField) else K
        kelems = kelems + [alpha]
    else:
        field_obj = alpha.ext
        kelems = kelems + list(alpha.coords) + list(alpha.ext.minpoly[:-1])
    ws = finite_support_places(K, [x for x in kelems if isinstance(x, RatFunc)])
    out: list[AnyPlace] = []
    for w in ws:
        out.extend(places_over(field_obj, w))
    return out


def global_height(phi: DrinfeldModule, alpha: Element, cap: int = 40) -> HeightResult:
    """Canonical height as the sum of local heights over the support set."""
    if isinstance(alpha, RatFunc) and isinstance(phi.cfield, ExtField):
        alpha = phi.cfield.from_K(alpha)
    d = 1 if isinstance(alpha, RatFunc) else alpha.ext.d
    if alpha.is_zero():
        return HeightResult(Fraction(0), CERTIFIED_ZERO, Fraction(0), d, ())
    orbit, finality = _exact_orbit(phi, alpha, cap)
    if finality is not None:
        cert = ("orbit hits zero at n=%d" % finality[1] if finality[0] == "zero"
                else "finite orbit: n=%d repeats m=%d" % (finality[1], finality[2]))
        return HeightResult(Fraction(0), CERTIFIED_ZERO, Fraction(0), d,
                            (("all places", cert),))
    value = Fraction(0)
    upper = Fraction(0)
    capped = False
    per_place = []
    for v in support_places_for(phi, alpha):
        lh = local_height(phi, v, alpha, d=d, cap=cap, orbit=orbit)
        per_place.append((v, lh))
        value += lh.value
        upper += lh.upper
        if lh.status == CAP_EXCEEDED:
            capped = True
    if capped:
        status = CAP_EXCEEDED
    elif value > 0:
        status = EXACT
    else:
        status = CERTIFIED_ZERO
    return HeightResult(value, status, upper, d, tuple(per_place))


def naive_height_estimate(phi: DrinfeldModule, alpha: Element, n_max: int,
                          size_budget: int = 300) -> list[Fraction]:
    """h(phi_{T^n}(alpha)) / q^{nr} for n = 0..n_max: the defining limit.

    Iterates exactly while the elements stay small (heights read off the
    reduced representation), then continues per place in the completions:
    h(beta) = sum_w d_w max(0, -v_w(beta)) over the support set, which is the
    same sum the exact representation computes, at polynomial cost."""
    if isinstance(alpha, RatFunc) and isinstance(phi.cfield, ExtField):
        alpha = phi.cfield.from_K(alpha)
    d = 1 if isinstance(alpha, RatFunc) else alpha.ext.d
    qr = Fraction(phi.q ** phi.r)
    out = [height(alpha)]
    beta = alpha
    n = 0
    while n < n_max:
        if beta.is_zero() or _size(beta) * phi.q**phi.r > size_budget:
            break
        beta = phi.eval_T(beta)
        n += 1
        out.append(height(beta) / qr**n)
    if n >= n_max or beta.is_zero():
        return out
    # series continuation: per-place valuation tables from the last exact beta
    places = support_places_for(phi, alpha)
    tables: list[list] = []
    for v in places:
        restarts = 0
        while True:
            try:
                tables.append(_valuation_trace(phi, v, beta, n_max - n))
                break
            except NeedsPrecision:
                restarts += 1
                if restarts > 8:
                    raise PrecisionExhausted(
                        f"naive estimate at {v!r} undetermined"
                    ) from None
                v._refresh(getattr(v, "_prec", 64) * 2 if isinstance(v, KPlace)
                           else v._model.prec * 2)
    for m in range(1, n_max - n + 1):
        h = Fraction(0)
        for v, tr in zip(places, tables):
            val = tr[m]
            if val != INF and val < 0:
                h += Fraction(v.d_v, d) * (-val)
        out.append(h / qr ** (n + m))
    return out


def _valuation_trace(phi: DrinfeldModule, v: AnyPlace, beta: Element,
                     steps: int) -> list:
    q = phi.q
    W = _working_prec(v)
    s = v.series(beta).truncate(W)
    T_s = v.series(phi.a(0))
    a_s = [(i, v.series(phi.a(i))) for i in range(1, phi.r + 1)
           if not phi.a(i).is_zero()]
    trace = [s.valuation()]
    for _ in range(steps):
        new = T_s * s
        for i, ai in a_s:
            new = new + ai * s.qpower(i, q0=q)
        s = new.truncate(W)
        trace.append(s.valuation())
    return trace


@dataclass(frozen=True)
class TwistData:
    xi: Element
    twisted_coeffs: tuple


def twist(phi: DrinfeldModule, xi: Element):
    """The isomorphic module psi = xi^{-1} phi xi: b_i = a_i xi^{q^i - 1}."""
    if xi.is_zero():
        raise ValueError("twist by zero")
    q = phi.q
    if isinstance(xi, RatFunc):
        F = phi.cfield
        lift = (lambda a: a) if isinstance(F, RatFuncField) else F.from_K
        xi_l = xi if isinstance(F, RatFuncField) else F.from_K(xi)
    else:
        F = xi.ext
        lift = (lambda a: F.from_K(a) if isinstance(a, RatFunc) else a)
        xi_l = xi
    bs = []
    for i, a in enumerate(phi.coeffs, start=1):
        bs.append(lift(a) * xi_l ** (q**i - 1))
    return DrinfeldModule(F, bs), TwistData(xi, tuple(bs))


@dataclass(frozen=True)
class TorsionResult:
    torsion: Optional[bool]          # None = inconclusive
    certificate: str
    annihilator: Optional[str]       # "T^n - T^m" when torsion
    height: Optional[HeightResult]


def is_torsion(phi: DrinfeldModule, alpha: Element,
               degree_bound: int = 24, cap: int = 40) -> TorsionResult:
    """Torsion test: finite orbit (with annihilator) or positive exact height.

    Inconclusive results are reported as such, never guessed."""
    if alpha.is_zero():
        return TorsionResult(True, "zero element", "T", None)
    F = _field_of(alpha, phi.cfield)
    if isinstance(alpha, RatFunc) and isinstance(F, ExtField):
        alpha = F.from_K(alpha)
    seen = {alpha: 0}
    beta = alpha
    for n in range(1, degree_bound + 1):
        beta = phi.eval_T(beta, F)
        if beta.is_zero():
            return TorsionResult(True, f"phi_{{T^{n}}}(alpha) = 0", f"T^{n}", None)
        prev = seen.get(beta)
        if prev is not None:
            return TorsionResult(True,
                                 f"orbit repeats: phi_{{T^{n}}} = phi_{{T^{prev}}}",
                                 f"T^{n} - T^{prev}", None)
        if _size(beta) > _EXACT_SIZE_BUDGET:
            break
        seen[beta] = n
    hr = global_height(phi, alpha, cap=cap)
    if hr.status == EXACT and hr.value > 0:
        return TorsionResult(False, f"exact positive height {hr.value}", None, hr)
    if hr.status == CAP_EXCEEDED and hr.value > 0:
        return TorsionResult(False, f"height at least {hr.value} > 0", None, hr)
    return TorsionResult(None, "orbit unbounded within budget and height "
                               "not certified positive", None, hr)
