import random
from fractions import Fraction

import pytest

from cranklab.cyclotomic import CycNum
from cranklab.qseries import (EtaAtom, EtaProduct, QSeries, E_series,
                              bernoulli_p2, eta_series, expand_product,
                              f_series, geta_series)

F = Fraction


def rand_series(rng, D, trunc, span=6):
    terms = {e: rng.randint(-span, span) for e in rng.sample(range(trunc), k=min(8, trunc))}
    return QSeries(D, terms, trunc)


def test_ring_laws_random():
    rng = random.Random(21)
    for _ in range(200):
        D = rng.choice([1, 2, 3, 4])
        a = rand_series(rng, D, rng.randint(8, 20))
        b = rand_series(rng, D, rng.randint(8, 20))
        c = rand_series(rng, D, rng.randint(8, 20))
        lo = min((a * b) * c, a * (b * c), key=lambda s: s.trunc_exponent).trunc_exponent
        assert ((a * b) * c).eq_to_order(a * (b * c), lo)
        lo2 = min((a * (b + c)).trunc_exponent, (a * b + a * c).trunc_exponent)
        assert (a * (b + c)).eq_to_order(a * b + a * c, lo2)
        assert (a + b).eq_to_order(b + a, min(a.trunc_exponent, b.trunc_exponent))


def test_geometric_series_inverse():
    one_minus_q = QSeries(1, {0: 1, 1: -1}, 40)
    geo = one_minus_q.inv()
    assert all(geo.coeff(n) == 1 for n in range(38))
    assert (one_minus_q * geo).eq_to_order(QSeries(1, {0: 1}, 38), 38)


def test_inverse_needs_leading_term():
    with pytest.raises(ValueError):
        QSeries(1, {}, 10).inv()


def test_partition_generating_function():
    eta_tail = eta_series(1, 30).shift(F(-1, 24))  # prod (1-q^n)
    pg = eta_tail.inv()
    for n, v in enumerate([1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]):
        assert pg.coeff(n) == v


def test_shift_and_pow():
    s = QSeries(1, {0: 1, 1: 2}, 10)
    assert s.shift(F(1, 5)).coeff(F(6, 5)) == 2
    assert (s ** 3).coeff(1) == 6
    sq = s ** -2
    assert sq.coeff(0) == 1 and sq.coeff(1) == -4
    assert (eta_series(1, 12) ** 24).leading()[0] == 1


def test_coeff_truncation_guard():
    s = QSeries(1, {0: 1}, 5)
    assert s.coeff(3) == 0
    with pytest.raises(ValueError):
        s.coeff(5)
    with pytest.raises(ValueError):
        s.eq_to_order(QSeries(1, {0: 1}, 4), 5)
    assert s.eq_to_order(s, 5)


def test_eta_pentagonal_support():
    ser = eta_series(1, 40)
    pent = set()
    k = 0
    while k * (3 * k - 1) // 2 < 40:
        pent.add(k * (3 * k - 1) // 2)
        pent.add(k * (3 * k + 1) // 2)
        k += 1
    for e, c in ser.items():
        assert e - F(1, 24) in pent
        assert c in (1, -1)
    assert eta_series(25, 3).leading()[0] == F(25, 24)


def test_geta_leading_exponents():
    assert bernoulli_p2(F(1, 5)) == F(1, 150)
    assert geta_series(5, 1, 2).leading()[0] == F(1, 60)
    assert geta_series(5, 2, 2).leading()[0] == F(-11, 60)
    with pytest.raises(ValueError):
        geta_series(5, 0, 2)


def test_f_leading_and_index_relations():
    assert f_series(5, 1, 2).leading()[0] == F(9, 40)
    assert f_series(11, 5, 2).leading()[0] == F(1, 88)
    assert f_series(5, 6, 12).eq_to_order(f_series(5, 1, 12), 11)
    assert f_series(5, -1, 12).eq_to_order(f_series(5, 1, 12), 11)
    with pytest.raises(ValueError):
        f_series(5, 10, 4)


@pytest.mark.parametrize("N", [5, 11, 13])
def test_f_equals_eta_times_geta(N):
    for rho in range(1, N // 2 + 1):
        lhs = f_series(N, rho, 51)
        rhs = eta_series(N, 51) * geta_series(N, rho, 51)
        assert lhs.eq_to_order(rhs, 50)


@pytest.mark.parametrize("N", [5, 7, 11, 13])
def test_f_coefficients_are_theta_like(N):
    for rho in range(1, N // 2 + 1):
        for _, c in f_series(N, rho, 51).items():
            assert c in (-1, 0, 1)


def test_E_series_basics():
    p = 11
    E = E_series(p, 0, 3, 4)
    lead, coef = E.leading()
    assert lead == F(1, 12)
    assert coef == CycNum.one(p) - CycNum.zeta(p, 3)
    with pytest.raises(ValueError):
        E_series(p, 0, 0, 4)


def test_E_index_reduction():
    p = 11
    a = E_series(p, 3 + p, 4, 5)
    b = E_series(p, 3, 4, 5).scale(-CycNum.zeta(p, -4))
    assert a.eq_to_order(b, 4)


def test_geta_is_E_at_scaled_argument():
    # eta_{N,k}(z) = E_{k,0} with q -> q^N, checked well past order 50
    for N, k in ((5, 1), (5, 2), (13, 4)):
        lhs = geta_series(N, k, 52)
        rhs = E_series(N, k, 0, 52, delta=N)
        assert lhs.eq_to_order(rhs, 50)


def test_E_coefficients_integral():
    for e, c in E_series(7, 2, 3, 8).items():
        assert isinstance(c, CycNum) and c.is_integral()


def test_eta_product_series_with_negative_powers():
    prod = EtaProduct([(EtaAtom.eta(1), -1), (EtaAtom.eta(2), 2)])
    direct = eta_series(2, 15) ** 2 * eta_series(1, 15) ** -1
    assert prod.series(12).eq_to_order(direct, 11)
    assert prod.weight == F(1, 2)
    assert prod.lead_exponent() == F(2, 24) + F(2, 24) - F(1, 24)


def test_expand_product_rejects_bad_exponent():
    with pytest.raises(ValueError):
        expand_product([(0, 1, 1)], 0, 5)


def test_dump_format():
    s = QSeries(2, {1: 3, 4: -1}, 10)
    assert s.dump().splitlines() == ["1/2\t3", "2\t-1"]
