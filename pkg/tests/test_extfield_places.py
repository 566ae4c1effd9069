import random
from fractions import Fraction

import pytest

from ffheights import (ExtField, IrreducibilityUnknown, Place, PlaceTable, Poly,
                       RatFuncField, field, height, newton_polygon, places_above,
                       rational_roots)
from ffheights.laurent import INF


def xsq_minus_T(K):
    return ExtField(K, [-K.gen(), K.zero(), K.one()])


def test_irreducibility_certificates(K5, K2):
    T = K5.gen()
    assert xsq_minus_T(K5).certificate
    # x^2 - u for a nonsquare u: constant-coefficient certificate
    L = ExtField(K5, [K5.const(3), K5.zero(), K5.one()])  # x^2 + 3 = x^2 - 2
    assert "constant" in L.certificate
    # reducible inputs refused
    with pytest.raises(IrreducibilityUnknown):
        ExtField(K5, [-(T * T), K5.zero(), K5.one()])
    # inseparable but irreducible: x^2 - T over F_2
    assert xsq_minus_T(K2).certificate


def test_rational_roots_complete(K5):
    T = K5.gen()
    one = K5.one()
    r1, r2 = T, one / (T + one)
    coeffs = [r1 * r2, -(r1 + r2), one]
    assert set(rational_roots(K5, coeffs)) == {r1, r2}
    # no roots
    assert rational_roots(K5, [K5.const(3), K5.zero(), one]) == []


def test_places_above_eisenstein(K5):
    L = xsq_minus_T(K5)
    wT = Place.finite(Poly(K5.base, (0, 1)))
    ps = places_above(L, wT)
    assert [(p.e, p.f_res) for p in ps] == [(2, 1)]
    assert ps[0].valuation(L.gen()) == 1


def test_places_above_inert(K5):
    # x^2 - 2 with 2 a nonsquare: inert at T - 1
    L = ExtField(K5, [K5.const(3), K5.zero(), K5.one()])
    w = Place.finite(Poly(K5.base, (4, 1)))
    ps = places_above(L, w)
    assert [(p.e, p.f_res) for p in ps] == [(1, 2)]


def test_places_above_split(K5):
    # x^2 - T at (T - 1): residue x^2 - 1 splits
    L = xsq_minus_T(K5)
    w = Place.finite(Poly(K5.base, (4, 1)))
    ps = places_above(L, w)
    assert [(p.e, p.f_res) for p in ps] == [(1, 1), (1, 1)]
    assert sorted(p.valuation(L.gen()) for p in ps) == [0, 0]


@pytest.mark.parametrize("qspec", [(2, 1), (3, 1), (5, 1)])
def test_fundamental_identity_all_corpus_extensions(qspec):
    K = RatFuncField(field(*qspec))
    T = K.gen()
    q = K.base.q
    minpolys = [[-T, K.zero(), K.one()]]
    if q > 2:
        minpolys.append([T] + [K.zero()] * (q - 2) + [K.one()])  # x^{q-1} + T
    if q % 3 == 2:
        minpolys.append([-T, K.zero(), K.zero(), K.one()])  # x^3 - T
    pt = PlaceTable(K.base)
    for mp in minpolys:
        L = ExtField(K, mp)
        for w in pt.all_places(2):
            ps = places_above(L, w)
            assert sum(p.e * p.f_res for p in ps) == L.d, (mp, w)


def test_valuation_ext_examples(K5):
    L = xsq_minus_T(K5)
    g = L.gen()
    wT = Place.finite(Poly(K5.base, (0, 1)))
    v = places_above(L, wT)[0]
    assert v.valuation(g) == 1          # the generator is a uniformizer
    assert v.valuation(L.from_K(K5.gen())) == 2
    x = K5.gen() + K5.one()
    assert v.valuation(x) == 2 * wT.valuation(x)  # restriction law e*w
    assert v.valuation(L.zero()) == INF


def test_height_L_examples(K5):
    L = xsq_minus_T(K5)
    g = L.gen()
    assert height(g) == Fraction(1, 2)
    x = (K5.gen() ** 3 + K5.one()) / (K5.gen() + K5.const(2))
    assert height(L.from_K(x)) == height(x) == 3
    assert height(L.from_int(4)) == 0


def test_product_formula_on_L(K5):
    L = xsq_minus_T(K5)
    T = K5.gen()
    rng = random.Random(3)
    pt = PlaceTable(K5.base)
    for _ in range(8):
        a = K5.random_element(rng, 1)
        b = K5.random_element(rng, 1)
        beta = L.element([a, b])
        if beta.is_zero():
            continue
        norm = a * a - T * b * b
        total = 0
        for w, _ in pt.support(norm):
            for v in places_above(L, w):
                total += v.d_v * v.valuation(beta)
        assert total == 0


def test_frobenius_constant_heights_invariant(K5):
    # Frobenius images of constants keep height 0
    L = ExtField(K5, [K5.const(3), K5.zero(), K5.one()])
    c = L.gen()  # a constant of the extension (sqrt of 2)
    assert height(c) == 0
    assert height(L.frobenius(c)) == 0


def test_polygon_matches_places(K5):
    # multiset {(-v(gen)/e, e*f)} against the minimal-polynomial polygon
    L = xsq_minus_T(K5)
    for w in (Place.finite(Poly(K5.base, (0, 1))), Place.infinite(K5.base),
              Place.finite(Poly(K5.base, (4, 1)))):
        pts = [(i, w.valuation(c)) for i, c in enumerate(L.minpoly)]
        poly = newton_polygon(pts)
        polyset = sorted((s, l) for s, l in poly.segments)
        ps = places_above(L, w)
        got = {}
        for v in ps:
            s = Fraction(-int(v.valuation(L.gen())), v.e)
            got[s] = got.get(s, 0) + v.e * v.f_res
        assert sorted(got.items()) == polyset
