"""Places of an extension L = K[x]/(f) above places of K.

The completion of L at a place v over w is modelled inside R((rho)) where R
is a big-enough residue extension and rho^e = pi for the accumulated
ramification e: every tamely ramified extension (and the radical inseparable
ones, via unique p-th roots in perfect residue fields) embeds in such a
model once R absorbs the unramified part.

places_above runs Newton-polygon splitting over K_w: per-segment residual
polynomials *compressed by the slope denominator* (so the conjugate roots
belonging to one place are never counted as several places), Newton lifting
for simple residual factors on tame segments, root shifting and recursion
for repeated ones, and exact-termination detection for purely inseparable
tails.  Anything outside that class raises UnsupportedRamification naming
the residual polynomial.

Place data (e, f_res) is tracked separately from the ambient model, whose
residue field may be strictly larger than the place's.  The fundamental
identity sum(e * f_res) = [L:K] is checked after every splitting as a hard
correctness gate.
"""

from __future__ import annotations

from math import gcd

from .gf import FieldSpec, field as make_field
from .fqpoly import Poly, factor as fq_factor
from .laurent import INF, NeedsPrecision, PrecisionExhausted, Series
from .completion import Completion
from .extfield import ExtElement, ExtField
from .places import Place, newton_polygon
from .ratfunc import RatFunc

_MAX_DEPTH = 6
_PREC_CAP = 2048


class UnsupportedRamification(ArithmeticError):
    pass


class _Model:
    """Ambient completion model R((rho)) with rho^{e_model} = pi."""

    def __init__(self, comp: Completion, resfield: FieldSpec, e_model: int):
        self.comp = comp
        self.resfield = resfield
        self.e_model = e_model
        self._embed_table = resfield.embed_from(comp.residue)
        self._cache: dict = {}

    @property
    def prec(self) -> int:
        return self.comp.prec

    def embed_K(self, x: RatFunc) -> Series:
        key = (x.num.coeffs, x.den.coeffs)
        out = self._cache.get(key)
        if out is None:
            s = self.comp.embed(x)
            out = s.map_field(self._embed_table, self.resfield).stretch(self.e_model)
            self._cache[key] = out
        return out

    def refine(self, new_res: FieldSpec, e_extra: int) -> "_Model":
        return _Model(self.comp, new_res, self.e_model * e_extra)

    def lift_series(self, s: Series, target: "_Model") -> Series:
        table = target.resfield.embed_from(self.resfield)
        return s.map_field(table, target.resfield).stretch(target.e_model // self.e_model)


class ExtPlace:
    """A place v of L above w, with an embedding model for exact valuations.

    The embedding may be a deferred thunk: (e, f_res) and valuations of
    K-elements never build the (possibly large) residue extension."""

    def __init__(self, L: ExtField, below: Place, e: int, f_res: int,
                 payload, index: int):
        self.L = L
        self.below = below
        self.e = e
        self.f_res = f_res
        self.d_v = below.degree * f_res
        self.n_vw = e * f_res
        self.index = index
        self._payload = payload      # (model, gen) or a zero-arg thunk

    def __repr__(self) -> str:
        return f"ExtPlace({self.below!r}; e={self.e}, f={self.f_res})"

    def _materialize(self):
        if callable(self._payload):
            self._payload = self._payload()
        return self._payload

    @property
    def _model(self) -> _Model:
        return self._materialize()[0]

    @property
    def _gen_series(self) -> Series:
        return self._materialize()[1]

    def valuation(self, beta) -> int | float:
        """Exact normalized valuation on L (or K), +inf at 0."""
        if isinstance(beta, RatFunc):
            if beta.is_zero():
                return INF
            return self.e * self.below.valuation(beta)
        if beta.is_zero():
            return INF
        while True:
            try:
                return self._embed_ext(beta).valuation()
            except NeedsPrecision:
                if self._model.prec * 2 > _PREC_CAP:
                    raise PrecisionExhausted(
                        f"valuation at {self!r} undetermined at precision cap"
                    ) from None
                self._refresh(self._model.prec * 2)

    def series(self, beta) -> Series:
        if isinstance(beta, RatFunc):
            return self._model.embed_K(beta)
        return self._embed_ext(beta)

    def _embed_ext(self, beta: ExtElement) -> Series:
        m = self._model
        g = self._gen_series
        acc = m.embed_K(beta.coords[-1])
        for c in reversed(beta.coords[:-1]):
            acc = acc * g + m.embed_K(c)
        return acc

    def _refresh(self, prec: int) -> None:
        fresh = places_above(self.L, self.below, prec=prec)
        mine = fresh[self.index]
        assert (mine.e, mine.f_res) == (self.e, self.f_res)
        self._payload = mine._payload


def places_above(L: ExtField, w: Place, *, prec: int = 32) -> list["ExtPlace"]:
    """All places of L over w in deterministic order.

    Raises UnsupportedRamification outside the supported splitting class.
    """
    key = (w, prec)
    cached = L._places_cache.get(key)
    if cached is not None:
        return cached
    while True:
        comp = Completion(w, prec=prec)
        model = _Model(comp, comp.residue, 1)
        coeffs = [model.embed_K(c) for c in L.minpoly]
        try:
            raw = _split(coeffs, model, e_acc=1, fr_acc=1,
                         prefix=Series.zero(comp.residue), shift_exp=0,
                         top=True, depth=0)
            break
        except NeedsPrecision:
            if prec * 2 > _PREC_CAP:
                raise PrecisionExhausted(
                    f"splitting of minpoly at {w!r} needs precision beyond cap"
                ) from None
            prec *= 2
    total = sum(e * f for e, f, _ in raw)
    if total != L.d:
        raise UnsupportedRamification(
            f"splitting at {w!r} lost degree: sum e*f = {total} != {L.d}"
        )
    out = [ExtPlace(L, w, e, f, payload, i) for i, (e, f, payload) in enumerate(raw)]
    L._places_cache[key] = out
    return out


def _split(g: list[Series], model: _Model, e_acc: int, fr_acc: int,
           prefix: Series, shift_exp: int, top: bool, depth: int,
           digits: int = 0) -> list:
    """Newton-polygon recursion.

    The generator image is prefix + rho^shift_exp * z with z a root of g.
    Returns [(e, f_res, model, gen_series)].  ``depth`` counts genuine
    branchings; ``digits`` counts consecutive single-cluster shifts, which
    each add at least one digit to the root and terminate by precision
    (inseparable roots are infinite series of digit shifts).
    """
    if depth > _MAX_DEPTH:
        raise UnsupportedRamification("branching depth exceeded (wild ramification?)")
    target_prec = model.prec * model.e_model
    if digits > 2 * target_prec + 8:
        raise UnsupportedRamification("digit iteration failed to terminate")
    out = []

    # exact zero tail: z = 0 is an exact root (purely inseparable tail ended)
    k = 0
    n = len(g) - 1
    while k <= n and g[k].is_exact_zero():
        k += 1
    if k > n:
        raise UnsupportedRamification("polynomial vanished identically")
    if k > 0:
        out.append((e_acc, fr_acc, (model, prefix)))
        g = g[k:]
        n = len(g) - 1
        if n == 0:
            return out

    vals = []
    for idx, c in enumerate(g):
        if c.is_exact_zero():
            vals.append(INF)
            continue
        try:
            vals.append(c.valuation())
        except NeedsPrecision:
            if (digits > 0 and idx == 0 and _is_prime_power(n, model.resfield.p)
                    and all(g[i].is_exact_zero() for i in range(1, n))):
                # purely inseparable digit descent: the remaining digits of
                # the unique root lie beyond the working window; emit the
                # truncated root with its honest precision
                out.append((e_acc, fr_acc,
                            (model, Series(model.resfield, prefix.terms,
                                           shift_exp + 1))))
                return out
            raise
    if n == 0:
        return out

    poly = newton_polygon(list(enumerate(vals)))
    segs = [(x1, slope, length)
            for (x1, _), (slope, length) in zip(poly.vertices, poly.segments)
            if top or slope < 0]
    for x1, slope, length in segs:
        h_num = -slope.numerator
        e_s = slope.denominator
        m = length // e_s
        seg_lo = x1
        v_lo = int(vals[seg_lo])
        res_coeffs = []
        for j in range(m + 1):
            i = seg_lo + j * e_s
            res_coeffs.append(g[i].coeff(v_lo - h_num * j) if vals[i] != INF else 0)
        residual = Poly(model.resfield, res_coeffs)
        if residual.degree != m or residual.coeffs[0] == 0:
            raise UnsupportedRamification(
                f"degenerate residual {residual.format('w')} on slope {slope}"
            )
        factors = fq_factor(residual)
        single_cluster = len(segs) == 1 and len(factors) == 1
        for pbar, mult in factors:
            out.extend(_handle_factor(
                g, model, e_acc, fr_acc, prefix, shift_exp,
                seg_lo, v_lo, h_num, e_s, pbar, mult, depth,
                digits + 1 if single_cluster else 0, single_cluster,
            ))
    return out


def _handle_factor(g, model: _Model, e_acc, fr_acc, prefix, shift_exp,
                   seg_lo, v_lo, h_num, e_s, pbar: Poly, mult: int, depth,
                   digits: int, single_cluster: bool) -> list:
    R = model.resfield
    p = R.p
    e_new = e_acc * e_s
    fr_new = fr_acc * pbar.degree

    def extend_and_substitute():
        # residue extension containing a root of the residual factor
        if pbar.degree > 1:
            R1 = make_field(p, R.deg * pbar.degree)
            pbar1 = pbar.map_coeffs(R1.embed_from(R), R1)
        else:
            R1, pbar1 = R, pbar
        theta = next(a for a in range(R1.q) if pbar1(a) == 0)
        # eta with eta^{e_s} = theta (tame part via logs, p-part unique)
        R2, eta = _nth_root_in_extension(R1, theta, e_s)
        model2 = model.refine(R2, e_s)
        # refine the series, substitute z = rho^h y, normalize the segment
        base_val = v_lo * e_s + h_num * seg_lo
        g2 = [model.lift_series(c, model2).shift(h_num * i - base_val)
              for i, c in enumerate(g)]
        prefix2 = model.lift_series(prefix, model2)
        return R2, eta, model2, g2, prefix2

    shift2 = shift_exp * e_s
    if mult == 1 and e_s % p != 0:
        def lift_thunk():
            R2, eta, model2, g2, prefix2 = extend_and_substitute()
            y_root = _newton_lift(g2, R2, eta, model2)
            return model2, prefix2 + y_root.shift(shift2 + h_num)
        return [(e_new, fr_new, lift_thunk)]

    R2, eta, model2, g2, prefix2 = extend_and_substitute()

    # repeated or inseparable: shift y -> eta + y1, keep roots with v(y1) > 0
    prefix3 = prefix2 + Series(R2, {shift2 + h_num: eta}, INF)
    target_prec = model2.prec * model2.e_model
    if single_cluster and shift2 + h_num >= target_prec:
        # the remaining digits sit beyond the working precision: emit the
        # truncated root honestly (users hitting the window refresh/rebuild)
        gen = Series(R2, prefix3.terms, shift2 + h_num)
        return [(e_new, fr_new, (model2, gen))]
    shifted = _taylor_shift(g2, eta, R2)
    return _split(shifted, model2, e_new, fr_new, prefix3,
                  shift2 + h_num, top=False,
                  depth=depth if single_cluster else depth + 1,
                  digits=digits)


def _is_prime_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _nth_root_in_extension(R: FieldSpec, theta: int, n: int) -> tuple[FieldSpec, int]:
    """Smallest-extension residue field containing an n-th root of theta."""
    if theta == 0:
        return R, 0
    for k in (1, 2, 3, 4, 5, 6, 8, 12):
        Rk = make_field(R.p, R.deg * k) if k > 1 else R
        t = Rk.embed_from(R)[theta] if k > 1 else theta
        m = n
        while m % Rk.p == 0:
            t = Rk.pth_root(t)
            m //= Rk.p
        if m == 1:
            return Rk, t
        Q1 = Rk.q - 1
        g = gcd(m, Q1)
        if Rk.pow(t, Q1 // g) != 1:
            continue
        lt = Rk.log[t]
        step = Q1 // g
        inv = pow(m // g, -1, step) if step > 1 else 0
        l0 = ((lt // g) * inv) % step if step > 1 else 0
        x = Rk.exp[l0]
        if Rk.pow(x, m) == t:
            return Rk, x
    raise UnsupportedRamification(f"no {n}-th root of residue in small extensions")


def _newton_lift(gy: list[Series], R: FieldSpec, eta: int, model: _Model) -> Series:
    """Lift a simple residual root eta to the unit root series of gy."""
    p = R.p
    dgy = [gy[i].scale(i % p) for i in range(1, len(gy))]
    t = Series(R, {0: eta}, 1)
    target = model.prec * model.e_model
    correct = 1
    while correct < target:
        t = Series(R, t.terms, min(2 * correct, target))
        num = _eval_series(gy, t)
        den = _eval_series(dgy, t)
        t = t - num * den.inverse()
        correct *= 2
    return Series(R, t.terms, target)


def _eval_series(coeffs: list[Series], x: Series) -> Series:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _taylor_shift(g: list[Series], eta: int, R: FieldSpec) -> list[Series]:
    """Coefficients of g(eta + y), by repeated synthetic division by (y - eta)."""
    if eta == 0:
        return list(g)
    eta_s = Series(R, {0: eta}, INF)
    work = list(g)
    out = []
    while work:
        accs = []
        acc = None
        for c in reversed(work):
            acc = c if acc is None else acc * eta_s + c
            accs.append(acc)
        accs.reverse()
        out.append(accs[0])
        work = accs[1:]
    return out
