import random

import pytest

from ffheights import NotPrime, field


def test_prime_field_construction():
    F5 = field(5)
    assert F5.q == 5 and F5.deg == 1
    assert F5.modulus == (0, 1)


def test_f4_has_the_unique_irreducible_quadratic():
    F4 = field(2, 2)
    # u^2 + u + 1 is the only monic irreducible quadratic over F_2
    assert F4.modulus == (1, 1, 1)
    assert F4.q == 4


def test_not_prime_rejected():
    with pytest.raises(NotPrime):
        field(4, 1)
    with pytest.raises(NotPrime):
        field(1)


@pytest.mark.parametrize("p,deg", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2), (2, 4), (3, 3)])
def test_field_axioms_on_random_samples(p, deg):
    F = field(p, deg)
    rng = random.Random(20240 + F.q)
    for _ in range(300):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.div(b, a) == F.mul(b, F.inv(a))


@pytest.mark.parametrize("q,k", [(2, 2), (2, 3), (3, 2), (2, 4), (3, 4), (9, 2)])
def test_frobenius_fixes_exactly_the_subfield(q, k):
    # exhaustive for q^k <= 81
    from ffheights.gf import factorize

    fac = factorize(q)
    (p, d), = fac.items()
    if q ** k > 81:
        pytest.skip("beyond the exhaustive bound")
    big = field(p, d * k)
    sub = field(p, d)
    emb = big.embed_from(sub)
    fixed = sorted(a for a in range(big.q) if big.pow(a, q) == a)
    assert fixed == sorted(emb)


def test_frobenius_is_additive_exhaustive():
    F = field(3, 2)
    for a in range(9):
        for b in range(9):
            assert F.pow(F.add(a, b), 3) == F.add(F.pow(a, 3), F.pow(b, 3))


def test_sqrt_and_pth_root():
    for spec in ((5, 1), (3, 2), (2, 3)):
        F = field(*spec)
        for a in range(F.q):
            sq = F.mul(a, a)
            r = F.sqrt(sq)
            assert F.mul(r, r) == sq
            assert F.pow(F.pth_root(a), F.p) == a


def test_big_q_uses_zech_logs():
    F = field(5, 5)  # q = 3125 > the add-table threshold
    assert F._add_table is None and F._zech is not None
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        assert F.add(a, b) == F._slow_add(a, b)
