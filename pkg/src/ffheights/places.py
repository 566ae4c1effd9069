"""Places of K = F_q(T): normalized valuations, degrees, heights.

A place is either Finite(pi) for a monic irreducible pi (with w(pi) = 1) or
the infinite place (with w(T) = -1, uniformizer 1/T).  Degrees are residue
degrees over F_q, so the product formula reads
``sum_w d_w * w(x) = 0`` for x in K*, and the height
``h(x) = sum_w d_w * max(0, -w(x))`` equals max(deg num, deg den).

Also here: Newton polygons (lower convex hulls of valuation points), the
standard tool for reading off root valuations of polynomials over a
completed field.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .gf import FieldSpec, field as make_field
from .fqpoly import Poly, irreducibles
from .ratfunc import RatFunc

INF = float("inf")


class DegeneratePolygon(ValueError):
    pass


class Place:
    """A place of K: Finite(pi) or Infinite.  Immutable and hashable."""

    __slots__ = ("pi", "degree", "base")

    def __init__(self, pi: Optional[Poly], base: Optional[FieldSpec] = None):
        if pi is None:
            if base is None:
                raise ValueError("infinite place needs the constant field")
            self.pi = None
            self.degree = 1
            self.base = base
        else:
            if pi.lead() != 1 or pi.degree < 1:
                raise ValueError("finite place needs a monic irreducible")
            self.pi = pi
            self.degree = pi.degree
            self.base = pi.field

    @staticmethod
    def infinite(base: FieldSpec) -> "Place":
        return Place(None, base)

    @staticmethod
    def finite(pi: Poly) -> "Place":
        return Place(pi)

    @property
    def is_infinite(self) -> bool:
        return self.pi is None

    def valuation(self, x: Union[RatFunc, Poly]) -> Union[int, float]:
        """Normalized valuation; +inf on 0."""
        if isinstance(x, Poly):
            if x.is_zero():
                return INF
            num, den = x, None
        else:
            if x.is_zero():
                return INF
            num, den = x.num, x.den
        if self.pi is None:
            v = -num.degree + (den.degree if den is not None else 0)
            return v
        v = num.valuation(self.pi)
        if den is not None and not den.is_one():
            v -= den.valuation(self.pi)
        return v

    def residue_field(self) -> FieldSpec:
        """The residue field as a table field F_{q^deg} (cached globally)."""
        return make_field(self.base.p, self.base.deg * self.degree)

    def uniformizer(self, K_one: RatFunc) -> RatFunc:
        """pi as an element of K (1/T at infinity)."""
        F = K_one.field
        if self.pi is None:
            return RatFunc(Poly.one(F), Poly.gen(F), reduce=False)
        return RatFunc.from_poly(self.pi)

    def sort_key(self) -> tuple:
        if self.pi is None:
            return (0, 0, ())
        return (1, self.degree, self.pi.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Place) and other.pi == self.pi

    def __hash__(self) -> int:
        return hash(("place", self.pi))

    def __repr__(self) -> str:
        return "inf" if self.pi is None else self.pi.format()


class PlaceTable:
    """Enumeration and bookkeeping of places of one K (deterministic order)."""

    def __init__(self, base: FieldSpec):
        self.base = base
        self.infinite = Place.infinite(base)

    def finite_places(self, max_degree: int) -> Iterator[Place]:
        for d in range(1, max_degree + 1):
            for pi in irreducibles(self.base, d):
                yield Place(pi)

    def all_places(self, max_degree: int) -> list[Place]:
        out = [self.infinite]
        out.extend(self.finite_places(max_degree))
        return out

    def support(self, x: RatFunc, *, seed: int = 0) -> list[tuple[Place, int]]:
        """All (place, valuation) with nonzero valuation, infinite place first."""
        from .fqpoly import factor

        if x.is_zero():
            raise ValueError("support of zero")
        out = []
        v_inf = -x.deg_at_infinity()
        if v_inf:
            out.append((self.infinite, v_inf))
        fin: dict[Poly, int] = {}
        if not x.num.is_const():
            for pi, m in factor(x.num, seed=seed):
                fin[pi] = fin.get(pi, 0) + m
        if not x.den.is_one():
            for pi, m in factor(x.den, seed=seed):
                fin[pi] = fin.get(pi, 0) - m
        for pi in sorted(fin, key=lambda p: (p.degree, p.coeffs)):
            if fin[pi]:
                out.append((Place(pi), fin[pi]))
        return out


def residue_of_infinite(base: FieldSpec) -> FieldSpec:
    return base


def height_K(x: RatFunc) -> Fraction:
    """Weil height in degree units: h(T) = 1, h = 0 exactly on constants."""
    return Fraction(x.height())


def valuation(w: Place, x: RatFunc) -> Union[int, float]:
    return w.valuation(x)


class NewtonPolygon:
    """Lower convex hull of (i, v(c_i)) points; slopes strictly increasing.

    Each segment is (slope: Fraction, length: int); the slopes are the
    negatives of root valuations in a splitting field, with multiplicity
    equal to the horizontal length.
    """

    __slots__ = ("segments", "vertices")

    def __init__(self, segments: Sequence[tuple[Fraction, int]], vertices):
        self.segments = tuple(segments)
        self.vertices = tuple(vertices)

    def __repr__(self) -> str:
        return f"NewtonPolygon({list(self.segments)})"


def newton_polygon(points: Sequence[tuple[int, Union[int, float, Fraction]]]) -> NewtonPolygon:
    """Lower hull of finitely many (i, v_i) points, +inf entries dropped."""
    finite = sorted((i, Fraction(v)) for i, v in points if v != INF)
    if len(finite) < 2:
        raise DegeneratePolygon("need at least two finite points")
    # keep lowest value per abscissa
    best: dict[int, Fraction] = {}
    for i, v in finite:
        if i not in best or v < best[i]:
            best[i] = v
    pts = sorted(best.items())
    if len(pts) < 2:
        raise DegeneratePolygon("need at least two distinct abscissas")
    hull = [pts[0]]
    for pt in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above segment hull[-2]..pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygon(segments, hull)
