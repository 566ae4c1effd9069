"""Completions K_w = F_{q^d}((pi)) and exact embeddings of K.

The model at a finite place w = (pi) is the Laurent series field over the
residue field R = F_{q^{deg pi}} in the uniformizer variable; at infinity it
is F_q((1/T)).  The image of T at a finite place is the series tau solving
pi(tau) = rho, found by Newton iteration from the residue theta of T
(a root of pi in R); for deg pi = 1 this is exactly tau = c + rho.

Embeddings of K-elements factor out the exact pi-multiplicity first, so the
valuation of every embedded element is certified no matter how short the
series window is.
"""

from __future__ import annotations

from .gf import FieldSpec
from .fqpoly import Poly
from .laurent import INF, NeedsPrecision, Series
from .places import Place
from .ratfunc import RatFunc


class Completion:
    """Arithmetic model of K_w with refreshable precision."""

    def __init__(self, place: Place, prec: int = 32):
        self.place = place
        self.base = place.base
        self.residue = place.residue_field()
        self.embed_const = self.residue.embed_from(self.base)
        self.prec = prec
        self.theta = None
        if place.pi is not None and place.degree > 1:
            self.theta = self._find_theta()
        self._tau_cache: Series | None = None

    def _find_theta(self) -> int:
        R = self.residue
        table = self.embed_const
        pi = self.place.pi
        for cand in range(R.q):
            acc = 0
            for c in reversed(pi.coeffs):
                acc = R.add(R.mul(acc, cand), table[c])
            if acc == 0:
                return cand
        raise AssertionError("pi has no root in its residue field")

    def raise_prec(self, prec: int) -> None:
        if prec > self.prec:
            self.prec = prec
            self._tau_cache = None

    # -- the image of T --------------------------------------------------------

    def tau(self) -> Series:
        """Series image of T in R((rho))."""
        if self._tau_cache is not None:
            return self._tau_cache
        w = self.place
        R = self.residue
        if w.pi is None:
            out = Series(R, {-1: 1}, INF)
        elif w.degree == 1:
            # pi = T - c: T = c + rho exactly
            c = R.neg(self.embed_const[w.pi.coeffs[0]])
            out = Series(R, {0: c, 1: 1} if c else {1: 1}, INF)
        else:
            out = self._newton_tau()
        self._tau_cache = out
        return out

    def _newton_tau(self) -> Series:
        R = self.residue
        pi_c = [Series.const(R, self.embed_const[c]) for c in self.place.pi.coeffs]
        dpi_c = []
        p = R.p
        for i in range(1, len(pi_c)):
            k = i % p
            dpi_c.append(pi_c[i].scale(k))
        rho = Series.uniformizer(R)
        t = Series(R, {0: self.theta}, 1)
        correct = 1
        while correct < self.prec:
            t = Series(R, t.terms, 2 * correct)
            num = _eval(pi_c, t) - rho
            den = _eval(dpi_c, t)
            t = t - num * den.inverse()
            correct *= 2
        return Series(R, t.terms, self.prec)

    # -- embeddings -----------------------------------------------------------

    def embed_poly(self, f: Poly) -> Series:
        """Image of f(T) with exact valuation (pi-part factored out first)."""
        if f.is_zero():
            return Series(self.residue, {}, INF)
        w = self.place
        R = self.residue
        if w.pi is None:
            # T -> rho^-1 exactly
            return Series(
                R, {-i: self.embed_const[c] for i, c in enumerate(f.coeffs) if c}, INF
            )
        k = 0
        while True:
            quo, rem = divmod(f, w.pi)
            if rem.coeffs:
                break
            f = quo
            k += 1
        tau = self.tau()
        coeffs = [Series.const(R, self.embed_const[c]) for c in f.coeffs]
        out = _eval(coeffs, tau)
        if k:
            out = out.shift(k)
        return out

    def embed(self, x: RatFunc) -> Series:
        if x.is_zero():
            return Series(self.residue, {}, INF)
        num = self.embed_poly(x.num)
        if x.den.is_one():
            return num
        den = self.embed_poly(x.den)
        return num * den.inverse(max_span=self.prec)

    def valuation(self, x: RatFunc):
        return self.place.valuation(x)


def _eval(coeffs: list[Series], x: Series) -> Series:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc
