import random
from fractions import Fraction

import pytest

from ffheights import (DivisionPolynomials, ECurve, IsotrivialCurve, Place, Poly,
                       curve_through, s_minimal_model)
from ffheights.ec_census import generate_curves, generate_curves_with_point


@pytest.fixture(scope="module")
def E_txt(K5t):
    t = K5t.gen()
    return ECurve(K5t, t, t)


def test_char_le_3_rejected(K3):
    with pytest.raises(ValueError):
        ECurve(K3, K3.gen(), K3.one())


def test_singular_rejected(K5t):
    with pytest.raises(ValueError):
        ECurve(K5t, K5t.zero(), K5t.zero())


def test_profile_worked_example(K5t):
    # y^2 = x^3 + tx + 1: d = 12, deg j = 3, f = 5, additive at infinity
    E = ECurve(K5t, K5t.gen(), K5t.one())
    prof = E.profile()
    assert (prof.d_EK, prof.deg_j, prof.f_EK, prof.p_e) == (12, 3, 5, 1)
    assert not prof.semistable
    inf_data = [d for d in prof.bad_places if d.place.is_infinite][0]
    assert inf_data.v_disc == 9 and inf_data.reduction == "add"
    mult_degs = sorted(d.place.degree for d in prof.bad_places
                       if d.reduction == "mult")
    assert mult_degs == [1, 2]  # the three simple roots, degree-weighted
    assert prof.d_EK % 12 == 0


def test_isotrivial_raises(K5t):
    E = ECurve(K5t, K5t.zero(), K5t.gen())  # j = 0
    with pytest.raises(IsotrivialCurve):
        E.profile()


def test_group_law(E_txt, K5t):
    P = E_txt.point(K5t.from_int(-1), K5t.from_int(2))
    O = E_txt.zero()
    assert P + O == P
    assert (P + (-P)).is_zero
    Q, R = 2 * P, 3 * P
    assert (P + Q) + R == P + (Q + R)
    assert P + Q == Q + P
    assert 5 * P == P + P + P + P + P
    assert (R - Q) == P


def test_point_must_lie_on_curve(E_txt, K5t):
    with pytest.raises(ValueError):
        E_txt.point(K5t.one(), K5t.one())


def test_duplication_formula_consistency(E_txt, K5t):
    P = E_txt.point(K5t.from_int(-1), K5t.from_int(2))
    x = P.x
    B, C = E_txt.B, E_txt.C
    num = x**4 - K5t.from_int(2) * B * x**2 - K5t.from_int(8) * C * x + B * B
    den = K5t.from_int(4) * (x**3 + B * x + C)
    assert (2 * P).x == num / den


def test_division_polynomials(E_txt, K5t):
    dp = DivisionPolynomials(E_txt)
    P = E_txt.point(K5t.from_int(-1), K5t.from_int(2))
    assert dp.eval_at(P, 2) == K5t.from_int(2) * P.y
    # x(nP) = x - psi_{n-1} psi_{n+1} / psi_n^2 for a few n
    for n in (2, 3, 4):
        Q = n * P
        lhs = Q.x
        rhs = P.x - dp.eval_at(P, n - 1) * dp.eval_at(P, n + 1) / dp.eval_at(P, n) ** 2
        assert lhs == rhs, n


def test_two_torsion_x_poly(K5t):
    # rhs factors (x)(x-t)(x+t) for B = -t^2, C = 0 (isotrivial; group-law
    # level unit test only, as flagged)
    t = K5t.gen()
    E = ECurve(K5t, -(t * t), K5t.zero())
    dp = DivisionPolynomials(E)
    xp = dp.x_poly_of_torsion(2)
    # psi_2^2 = 4(x^3 + Bx + C): roots 0, t, -t
    from ffheights.extfield import rational_roots
    roots = rational_roots(K5t, xp)
    assert set(roots) == {K5t.zero(), t, -t}
    for x0 in roots:
        P = E.point(x0, K5t.zero())
        assert (P + P).is_zero


def test_s_minimal_model_examples(K5t):
    t = K5t.gen()
    S = [Place.infinite(K5t.base)]
    # already-minimal integral model unchanged
    E = ECurve(K5t, t, t)
    Em, u = s_minimal_model(E, S)
    assert u.is_one() and Em is E
    # B = 2 t^-4: u = 1/t clears it
    Enon = ECurve(K5t, t**-4 * K5t.from_int(2), K5t.one())
    Em2, u2 = s_minimal_model(Enon, S)
    assert Em2.B.is_poly() and Em2.C.is_poly()
    assert Em2.disc.height() <= Enon.disc.height()


def test_generated_corpus(K5t):
    semis = generate_curves(K5t, 3, semistable=True, seed=5)
    for E in semis:
        prof = E.profile()
        assert prof.semistable and prof.deg_j == prof.d_EK
    gens = generate_curves(K5t, 3, semistable=False, seed=6)
    for E in gens:
        prof = E.profile()
        assert not prof.semistable and prof.deg_j <= prof.d_EK
        assert prof.d_EK % 12 == 0


def test_curves_with_point(K5t):
    for E, P in generate_curves_with_point(K5t, 4, seed=9):
        assert not P.is_zero
        lhs = P.y * P.y
        assert lhs == E.rhs(P.x)
