import random
from fractions import Fraction

import pytest

from ffheights import (CAP_EXCEEDED, CERTIFIED_ZERO, EXACT, DrinfeldModule,
                       ExtField, KPlace, Place, Poly, global_height, is_torsion,
                       local_height, naive_height_estimate, thresholds, twist)
from ffheights.drinfeld import _exact_orbit
from ffheights.heights import height


def place_T(K):
    return KPlace(K, Place.finite(Poly(K.base, (0, 1))))


def place_inf(K):
    return KPlace(K, Place.infinite(K.base))


def test_thresholds_carlitz(carlitz3, carlitz5, K3, K5):
    th = thresholds(carlitz3, place_inf(K3))
    assert th.M == Fraction(-1, 2) and th.D == Fraction(-1, 2) and th.in_bad_set
    th2 = thresholds(carlitz3, place_T(K3))
    assert th2.M == Fraction(1, 2) and th2.D == 0 and not th2.in_bad_set
    th5 = thresholds(carlitz5, place_inf(K5))
    assert th5.M == Fraction(-1, 4) and th5.D == Fraction(-1, 4)


def test_thresholds_skip_zero_coefficients(K5):
    # rank 2 with a_1 = 0: only i = 0 contributes to the minimum
    phi = DrinfeldModule(K5, [K5.zero(), K5.one()])
    th = thresholds(phi, place_T(K5))
    assert th.M == Fraction(1, 24)  # (v(T) - v(a_2)) / (q^2 - q^0)


def test_local_height_carlitz_f3(carlitz3, K3):
    lh = local_height(carlitz3, place_inf(K3), K3.one())
    assert lh.value == Fraction(1, 3) and lh.status == EXACT and lh.iterations == 1


def test_local_height_pole_fires_immediately(carlitz5, K5):
    # alpha = 1/T at (T): v not in S, fires at n = 0 with value 1
    lh = local_height(carlitz5, place_T(K5), K5.one() / K5.gen())
    assert lh.value == 1 and lh.status == EXACT and lh.iterations == 0


def test_local_height_integral_zero(carlitz5, K5):
    lh = local_height(carlitz5, place_T(K5), K5.gen() + K5.one())
    assert lh.status == CERTIFIED_ZERO and lh.value == 0


def test_global_height_carlitz_examples(carlitz3, carlitz5, K3, K5):
    assert global_height(carlitz3, K3.one()).value == Fraction(1, 3)
    hr = global_height(carlitz5, K5.one() / K5.gen())
    assert hr.value == Fraction(26, 25) and hr.status == EXACT
    hr5 = global_height(carlitz5, K5.one())
    assert hr5.value == Fraction(1, 5)


def test_naive_estimates(carlitz3, carlitz5, K3, K5):
    ests = naive_height_estimate(carlitz3, K3.one(), 4)
    assert ests[1:] == [Fraction(1, 3)] * 4
    ests5 = naive_height_estimate(carlitz5, K5.one() / K5.gen(), 3)
    assert ests5[0] == 1 and ests5[2] == Fraction(26, 25) == ests5[3]


def test_certified_dominance_property(K3, K5):
    # 1000 random (phi, v, beta) with v(beta) < D: exact dominance persists
    rng = random.Random(404)
    checked = 0
    while checked < 1000:
        K = K3 if rng.random() < 0.5 else K5
        r = rng.choice([1, 2])
        coeffs = [K.random_element(rng, 1) for _ in range(r)]
        if coeffs[-1].is_zero():
            continue
        phi = DrinfeldModule(K, coeffs)
        w = rng.choice([Place.infinite(K.base),
                        Place.finite(Poly(K.base, (0, 1))),
                        Place.finite(Poly(K.base, (1, 1)))])
        v = KPlace(K, w)
        beta = K.random_element(rng, 2, nonzero=True)
        th = thresholds(phi, v)
        vb = v.valuation(beta)
        if vb >= th.D:
            continue
        q_r = K.q ** r
        img = phi.eval_T(beta)
        vi = v.valuation(img)
        assert vi == v.valuation(phi.a(r)) + q_r * vb
        assert vi < th.D
        checked += 1


def test_local_scaling_under_phi_T(carlitz5, K5):
    # hhat_v(phi_T(alpha)) = q^r hhat_v(alpha) for Exact results
    rng = random.Random(9)
    v = place_inf(K5)
    for _ in range(20):
        alpha = K5.random_element(rng, 2, nonzero=True)
        lh = local_height(carlitz5, v, alpha)
        if lh.status != EXACT:
            continue
        lh2 = local_height(carlitz5, v, carlitz5.eval_T(alpha))
        assert lh2.status == EXACT and lh2.value == 5 * lh.value


def test_twist_examples(carlitz5, K5):
    T = K5.gen()
    psi, td = twist(carlitz5, K5.one())
    assert td.twisted_coeffs == carlitz5.coeffs
    psiT, tdT = twist(carlitz5, T)
    assert tdT.twisted_coeffs[0] == T**4
    # mapped-point identity psi_{T^n}(xi^-1 x) = xi^-1 phi_{T^n}(x)
    rng = random.Random(3)
    for _ in range(10):
        xi = K5.random_element(rng, 1, nonzero=True)
        psi, _ = twist(carlitz5, xi)
        x = K5.random_element(rng, 2)
        assert psi.eval_T(x / xi) == carlitz5.eval_T(x) / xi


def test_twist_threshold_shift(K5):
    # M_{psi,v} = M_{phi,v} - v(xi) for 10 random xi
    rng = random.Random(6)
    phi = DrinfeldModule(K5, [K5.gen(), K5.gen() + K5.one()])
    for w in (Place.infinite(K5.base), Place.finite(Poly(K5.base, (0, 1)))):
        v = KPlace(K5, w)
        M = thresholds(phi, v).M
        for _ in range(10):
            xi = K5.random_element(rng, 1, nonzero=True)
            psi, _ = twist(phi, xi)
            assert thresholds(psi, v).M == M - v.valuation(xi)


def test_twist_mapped_height_equality(carlitz5, K5):
    # hhat_{psi,v}(xi^-1 alpha) = hhat_{phi,v}(alpha) exactly
    rng = random.Random(14)
    v = place_inf(K5)
    for _ in range(8):
        xi = K5.random_element(rng, 1, nonzero=True)
        alpha = K5.random_element(rng, 2, nonzero=True)
        psi, _ = twist(carlitz5, xi)
        a = local_height(carlitz5, v, alpha)
        b = local_height(psi, v, alpha / xi)
        if a.status == EXACT and b.status == EXACT:
            assert a.value == b.value


def test_torsion_examples(carlitz2, carlitz3, carlitz5, K2, K3, K5):
    # q=2: alpha=1 is torsion with annihilator T^2 - T
    tr = is_torsion(carlitz2, K2.one())
    assert tr.torsion and tr.annihilator == "T^2 - T^1"
    # generator of K[x]/(x^{q-1} + T): phi_T kills it
    for K, carlitz in ((K3, carlitz3), (K5, carlitz5)):
        q = K.q
        L = ExtField(K, [K.gen()] + [K.zero()] * (q - 2) + [K.one()])
        g = L.gen()
        tr = is_torsion(carlitz, g)
        assert tr.torsion and tr.annihilator == "T^1"
        assert global_height(carlitz, g).value == 0
    # non-torsion with positive height certificate
    tr3 = is_torsion(carlitz3, K3.one())
    assert tr3.torsion is False and tr3.height.value == Fraction(1, 3)


def test_torsion_iff_zero_height(carlitz3, K3):
    rng = random.Random(21)
    for _ in range(25):
        alpha = K3.random_element(rng, 1, nonzero=True)
        hr = global_height(carlitz3, alpha)
        tr = is_torsion(carlitz3, alpha)
        if hr.is_exact():
            assert (hr.value == 0) == bool(tr.torsion)


def test_extension_generator_heights(carlitz5, K5):
    # sqrt(T): d * hhat = 2 * hhat >= 1 (pole case of the degree-d bound)
    L = ExtField(K5, [-K5.gen(), K5.zero(), K5.one()])
    hr = global_height(carlitz5, L.gen())
    assert hr.status == EXACT
    assert 2 * hr.value >= 1


def test_decomposition_oracle_random(K2, K3, K5):
    # naive-limit estimates vs the exact local sum, 50 random (phi, alpha)
    rng = random.Random(2024)
    tol = Fraction(1, 1000)
    done = 0
    while done < 50:
        K = rng.choice([K2, K3, K5])
        r = 1 if K.q == 5 else rng.choice([1, 2])
        coeffs = [K.random_element(rng, 1) for _ in range(r)]
        if coeffs[-1].is_zero():
            continue
        phi = DrinfeldModule(K, coeffs)
        alpha = K.random_element(rng, 1, nonzero=True)
        hr = global_height(phi, alpha)
        if not hr.is_exact():
            continue
        ests = naive_height_estimate(phi, alpha, 14)
        ok = False
        for i in range(1, len(ests)):
            delta = abs(ests[i] - ests[i - 1])
            if delta <= tol and abs(hr.value - ests[i]) <= delta:
                ok = True
                break
        assert ok, (phi, alpha.format(), hr.value, ests)
        done += 1


def test_capped_bound_is_conservative(K3):
    # alpha = T^{-6} at infinity with a tiny cap: status capped, bound > 0,
    # and the true local height lies inside [0, bound]
    carlitz = DrinfeldModule(K3, [K3.one()])
    v = place_inf(K3)
    alpha = K3.one() / K3.gen() ** 6
    lh_capped = local_height(carlitz, v, alpha, cap=3)
    assert lh_capped.status == CAP_EXCEEDED
    lh_true = local_height(carlitz, v, alpha, cap=40)
    assert lh_true.status == EXACT
    assert 0 <= lh_true.value <= lh_capped.upper


def test_orbit_detects_zero_and_repeat(carlitz2, K2):
    orbit, fin = _exact_orbit(carlitz2, K2.one(), 10)
    assert fin is not None and fin[0] == "repeat"


def test_nonintegral_coefficient_counterexample(K3):
    """A certified violation of the degree-d lower bound on a module with a
    non-integral coefficient.

    phi_T = T + (2/T) tau, alpha = T + 1: the orbit at infinity oscillates
    inside [D_v, 0) forever (the twist that the bound's proof uses shifts the
    threshold and the point's valuation equally, so it cannot unstick it),
    and the capped envelope certifies hhat <= 1/2 + 3/(2 * 3^40) < 1 while
    alpha is non-torsion with a pole.  The independent naive-limit oracle
    agrees: h(phi_{T^n} alpha)/3^n -> 1/2.
    """
    T = K3.gen()
    phi = DrinfeldModule(K3, [K3.const(2) / T])
    alpha = T + K3.one()
    assert height(alpha) > 0  # alpha has a pole
    hr = global_height(phi, alpha, cap=40)
    assert hr.status == CAP_EXCEEDED
    assert hr.value == Fraction(1, 2)
    assert hr.upper < 1                        # certified: d * hhat < 1
    assert hr.upper - hr.value == Fraction(3, 2 * 3**40)
    tr = is_torsion(phi, alpha)
    assert tr.torsion is False                 # hhat >= 1/2 > 0
    # independent oracle: the defining limit settles near 1/2, far below 1
    ests = naive_height_estimate(phi, alpha, 12)
    assert abs(ests[-1] - Fraction(1, 2)) < Fraction(1, 1000)
    # the sweep reports it as a violation row instead of asserting the bound
    from ffheights.sweep import classify
    row = classify(phi, alpha)
    assert row.pole_case and row.violation is True
