"""Weil heights on K and on finite extensions L, in degree units.

Normalization: h(T) = 1.  On K the height of num/den in lowest terms is
max(deg num, deg den); on L = K[x]/(f) it is the degree-weighted pole sum
(1/d) * sum_v d_v * max(0, -v(beta)) over the places of L, which restricts
to the K-height on K and vanishes exactly on constants.

The support helpers below locate every place that can possibly see a pole:
infinity, poles of the coordinates, and base places where the minimal
polynomial has non-integral coefficients (the only places over which the
generator itself can fail to be integral, f being monic).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .fqpoly import Poly, factor as fq_factor
from .ratfunc import RatFunc, RatFuncField
from .extfield import ExtElement, ExtField
from .places import Place
from .places_ext import ExtPlace, places_above
from .completion import Completion
from .laurent import INF, Series

Element = Union[RatFunc, ExtElement]


class KPlace:
    """A place of K wearing the extension-place interface (e = f_res = 1)."""

    def __init__(self, K: RatFuncField, w: Place, prec: int = 32):
        self.K = K
        self.below = w
        self.e = 1
        self.f_res = 1
        self.d_v = w.degree
        self.n_vw = 1
        self._comp: Completion | None = None
        self._prec = prec

    def valuation(self, x: RatFunc):
        return self.below.valuation(x)

    def series(self, x: RatFunc) -> Series:
        if self._comp is None or self._comp.prec < self._prec:
            self._comp = Completion(self.below, prec=self._prec)
        return self._comp.embed(x)

    def _refresh(self, prec: int) -> None:
        self._prec = max(prec, self._prec * 2)
        self._comp = None

    def __repr__(self) -> str:
        return f"KPlace({self.below!r})"


AnyPlace = Union[KPlace, ExtPlace]


def finite_support_places(K: RatFuncField, elements, *, include_infinity: bool = True):
    """Base places where any of the given K-elements is non-integral, plus inf."""
    pis: dict = {}
    for x in elements:
        if x.is_zero() or x.den.is_one():
            continue
        for pi, _ in fq_factor(x.den):
            pis[pi] = True
    ws = []
    if include_infinity:
        ws.append(Place.infinite(K.base))
    ws.extend(Place(pi) for pi in sorted(pis, key=lambda p: (p.degree, p.coeffs)))
    return ws


def support_base_places(alpha: Element, extra: list[RatFunc] = ()) -> list[Place]:
    """Candidate base places for poles of alpha (and of the extra elements)."""
    if isinstance(alpha, RatFunc):
        K = RatFuncField(alpha.field)
        elts = [alpha, *extra]
        return finite_support_places(K, elts)
    L = alpha.ext
    elts = list(alpha.coords) + list(L.minpoly[:-1]) + list(extra)
    return finite_support_places(L.K, elts)


def places_over(field_obj, w: Place) -> list[AnyPlace]:
    """Places of L (or K itself) lying over w, uniform interface."""
    if isinstance(field_obj, RatFuncField):
        return [KPlace(field_obj, w)]
    return places_above(field_obj, w)


def height(alpha: Element) -> Fraction:
    """Absolute Weil height in degree units (h(T) = 1)."""
    if isinstance(alpha, RatFunc):
        return Fraction(alpha.height())
    if alpha.is_zero():
        return Fraction(0)
    L = alpha.ext
    total = Fraction(0)
    for w in support_base_places(alpha):
        for v in places_over(L, w):
            val = v.valuation(alpha)
            if val != INF and val < 0:
                total += Fraction(v.d_v) * (-val)
    return total / L.d


def has_pole(alpha: Element) -> bool:
    """True iff alpha has a pole somewhere, i.e. is not a constant."""
    if isinstance(alpha, RatFunc):
        return alpha.height() > 0
    return height(alpha) > 0
