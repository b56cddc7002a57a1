import cmath
import math
import random
from fractions import Fraction

import pytest

from conftest import rand_gamma0, rand_sl2

from cranklab.cyclotomic import CycNum, Phase
from cranklab.etatransform import (Cusp, Matrix2, E_value, decompose_scaled,
                                   eta_product_value, eta_value,
                                   etaquot_ord_closed, f_value, jacobi,
                                   mu_multiplier, nu_eta, nu_theta1,
                                   ord_at_cusp, scale_conjugate, slash_E,
                                   slash_f, slash_value)
from cranklab.qseries import EtaAtom, EtaProduct

F = Fraction

BASE_POINTS = (0.11 + 0.83j, -0.31 + 1.05j, 0.47 + 0.64j)


def test_jacobi():
    assert jacobi(2, 15) == 1
    assert jacobi(3, 5) == -1
    assert jacobi(1, 21) == 1
    assert jacobi(0, 1) == 1
    assert jacobi(-1, 3) == -1
    with pytest.raises(ValueError):
        jacobi(3, 4)


def test_matrix_basics():
    A = Matrix2(3, 1, 11, 4)
    assert (A @ A.inverse()).entries() == (1, 0, 0, 1)
    with pytest.raises(ValueError):
        Matrix2(1, 0, 0, 2)


def test_cusp_canonicalization():
    assert Cusp(2, -4) == Cusp(-1, 2)
    assert Cusp(1, 0).is_infinity and Cusp(-3, 0) == Cusp(1, 0)
    assert str(Cusp(2, 13)) == "2/13"
    assert Cusp.parse("oo").is_infinity
    assert Cusp.parse("2/13") == Cusp(2, 13)
    A = Cusp(3, 7).matrix_to()
    assert (A.a, A.c) == (3, 7)


def test_nu_eta_anchors():
    assert nu_eta(Matrix2.T()) == Phase.of(1, 24)       # e^(pi i/12)
    assert nu_eta(Matrix2.S()) == Phase.of(-1, 8)       # e^(-pi i/4)
    assert nu_eta(Matrix2.identity()) == Phase.one()


def test_nu_eta_numeric_all_quadrants():
    rng = random.Random(42)
    checked = 0
    while checked < 120:
        A = rand_sl2(rng)
        z = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.8, 1.5))
        if A.apply(z).imag < 0.02:
            continue
        lhs = slash_value(eta_value, A, F(1, 2), z)
        rhs = nu_eta(A).to_complex() * eta_value(z)
        assert abs(lhs - rhs) < 1e-9 * abs(rhs), A
        checked += 1


def test_nu_eta_specific_matrix_numeric():
    A = Matrix2(3, 1, 11, 4)
    z = 0.2 + 0.9j
    lhs = slash_value(eta_value, A, F(1, 2), z)
    rhs = nu_eta(A).to_complex() * eta_value(z)
    assert abs(lhs - rhs) < 1e-9 * abs(rhs)


def test_multiplier_cocycle_numeric():
    # nu(AB) = sigma(A,B) nu(A) nu(B), sigma the +-1 branch cocycle of the
    # principal square root; both are read off numerically at a base point
    rng = random.Random(5)
    z0 = 0.07 + 1.21j
    checked = 0
    while checked < 200:
        A, B = rand_sl2(rng, 5), rand_sl2(rng, 5)
        C = A @ B
        w = B.apply(z0)
        if w.imag < 0.03 or C.apply(z0).imag < 0.03:
            continue
        wC = (C.c * z0 + C.d) ** -0.5
        wsplit = (A.c * w + A.d) ** -0.5 * (B.c * z0 + B.d) ** -0.5
        sigma = wC / wsplit
        assert min(abs(sigma - 1), abs(sigma + 1)) < 1e-9
        sigma = 1 if abs(sigma - 1) < 1 else -1
        prod = nu_eta(A).to_complex() * nu_eta(B).to_complex() * sigma
        assert abs(nu_eta(C).to_complex() - prod) < 1e-9
        checked += 1


def test_scale_conjugate():
    A = Matrix2(3, 1, 11, 4)
    NA = scale_conjugate(A, 11)
    assert NA.entries() == (3, 11, 1, 4)
    with pytest.raises(ValueError):
        scale_conjugate(A, 5)


def test_slash_f_worked_example_phases():
    # the Gamma0(11) example: f_{11,rho} | [3 1; 11 4] for rho = 3, 1, 4
    A = Matrix2(3, 1, 11, 4)
    assert nu_theta1(scale_conjugate(A, 11)) == Phase.minus_one()
    res3 = slash_f(11, 3, A)
    assert res3.phase == Phase.of(27, 22)           # e^(27 pi i/11)
    assert res3.target.factors == ((EtaAtom.f(11, 9), 1),)
    assert EtaAtom.f(11, 9) == EtaAtom.f(11, 2)
    res1 = slash_f(11, 1, A)
    assert res1.phase == Phase.of(3, 22) and res1.target.factors == ((EtaAtom.f(11, 3), 1),)
    res4 = slash_f(11, 4, A)
    assert res4.phase == Phase.of(48, 22) and res4.target.factors == ((EtaAtom.f(11, 1), 1),)


def test_slash_f_identity_matrix():
    res = slash_f(13, 5, Matrix2.identity())
    assert res.phase == Phase.one()
    assert res.target.factors == ((EtaAtom.f(13, 5), 1),)


def test_slash_f_requires_gamma0():
    with pytest.raises(ValueError):
        slash_f(11, 3, Matrix2.S())


@pytest.mark.parametrize("N", [5, 11, 13])
def test_slash_f_numeric(N):
    # series-level validation at three base points, error < 1e-8
    rng = random.Random(N)
    mats = [rand_gamma0(rng, N) for _ in range(6)]
    for A in mats:
        for rho in range(1, (N - 1) // 2 + 1):
            res = slash_f(N, rho, A)
            ((atom, _),) = res.target.factors
            for z in BASE_POINTS:
                if A.apply(z).imag < 0.01:
                    continue
                lhs = slash_value(lambda w: f_value(N, rho, w), A, F(1, 2), z)
                rhs = res.phase.to_complex() * f_value(N, atom.b, z)
                assert abs(lhs - rhs) < 1e-8 * abs(rhs), (N, rho, A)


def test_slash_f_cocycle_random_pairs():
    # phase of the composed action matches the product of phases
    rng = random.Random(77)
    N = 11
    checked = 0
    while checked < 100:
        A, B = rand_gamma0(rng, N), rand_gamma0(rng, N)
        C = A @ B
        if C.c == 0 and C.d < 0:
            continue
        for rho in (1, 2, 3):
            rA = slash_f(N, rho, C)
            rB = slash_f(N, rho, B)
            mid = (rho * B.a) % N
            rAB = slash_f(N, mid, A)
            # f|C = f|B then |A up to the half-integral branch: compare numerically
            z = 0.13 + 0.91j
            lhs = rA.phase.to_complex() * f_value(N, (rho * C.a) % N, z)
            w = B.apply(z)
            rhs = slash_value(lambda u: f_value(N, rho, u), C, F(1, 2), z)
            assert abs(lhs - rhs) < 1e-7 * abs(lhs)
        checked += 1


def test_slash_E_anchors():
    p = 11
    for ell in (1, 2, 5):
        resT = slash_E(p, 0, ell, Matrix2.T())
        assert resT.phase == Phase.of(1, 12)        # e^(pi i/6)
        assert resT.target.factors == ((EtaAtom.E(p, 0, ell), 1),)
        resS = slash_E(p, 0, ell, Matrix2.S())
        assert resS.phase == Phase.from_half_turns(F(-1, 2) + F(ell, p))
        assert resS.target.factors == ((EtaAtom.E(p, ell, 0), 1),)


def test_slash_E_row_vector_action():
    p, g, h = 11, 3, 7
    A = Matrix2(2, 1, 1, 1)
    res = slash_E(p, g, h, A)
    ((atom, _),) = res.target.factors
    assert (atom.b, atom.c) == ((g * 2 + h * 1) % p, (g * 1 + h * 1) % p)


def test_slash_E_numeric():
    rng = random.Random(13)
    p = 11
    checked = 0
    while checked < 60:
        A = rand_sl2(rng, 6)
        g, h = rng.randrange(p), rng.randrange(p)
        if g == 0 and h == 0:
            continue
        z = complex(rng.uniform(-0.3, 0.3), rng.uniform(1.0, 1.6))
        if A.apply(z).imag < 0.02:
            continue
        res = slash_E(p, g, h, A)
        ((atom, _),) = res.target.factors
        lhs = E_value(p, g, h, A.apply(z))
        rhs = res.phase.to_complex() * E_value(p, atom.b, atom.c, z)
        assert abs(lhs - rhs) < 1e-8 * max(abs(rhs), 1e-30)
        checked += 1


def test_F2_slash_S_numeric():
    # eta^2/E_{ell,0} | S = zeta_{2p}^{-ell} eta^2/E_{0,-ell}
    p = 11
    z = 0.03 + 0.9j
    for ell in (1, 2, 3):
        lhs = slash_value(lambda w: eta_value(w) ** 2 / E_value(p, ell, 0, w),
                          Matrix2.S(), 1, z)
        rhs = cmath.exp(-1j * math.pi * ell / p) * eta_value(z) ** 2 \
            / E_value(p, 0, -ell % p, z)
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)


def test_mu_multiplier():
    p = 11
    assert mu_multiplier(p, Matrix2.identity(), 3) == Phase.one()
    with pytest.raises(ValueError):
        mu_multiplier(p, Matrix2.S(), 1)
    # trivial on Gamma0(p^2) intersect Gamma1(p)
    rng = random.Random(4)
    found = 0
    while found < 12:
        A = rand_gamma0(rng, p * p, cmax=1, dmax=3 * p)
        if A.a % p == 1 and A.d % p == 1:
            for ell in (1, 4):
                assert mu_multiplier(p, A, ell) == Phase.one(), A
            found += 1


def test_mu_numeric():
    p = 11
    rng = random.Random(6)
    checked = 0
    while checked < 25:
        A = rand_gamma0(rng, p, cmax=1, dmax=6)
        ell = rng.randrange(1, p)
        z = complex(rng.uniform(-0.2, 0.2), rng.uniform(1.0, 1.4))
        if A.apply(z).imag < 0.015:
            continue
        lhs = slash_value(lambda w: eta_value(w) ** 2 / E_value(p, 0, ell, w), A, 1, z)
        rhs = mu_multiplier(p, A, ell).to_complex() \
            * eta_value(z) ** 2 / E_value(p, 0, (A.d * ell) % p, z)
        assert abs(lhs - rhs) < 1e-8 * abs(rhs), A
        checked += 1


def test_mu_gamma0_p2_shape():
    # on matrices (a b; p^2 d) the multiplier collapses to a signed power
    # of zeta_p depending only on d
    p = 11
    rng = random.Random(9)
    for _ in range(10):
        A = rand_gamma0(rng, p * p, cmax=1, dmax=12)
        if A.c == 0:
            continue
        c1 = A.c // (p * p)
        want = Phase.from_half_turns(F(A.d - 1, p) + c1 * (A.d - p * c1))
        assert mu_multiplier(p, A, 1) == want


def test_decompose_scaled():
    A = Matrix2(3, 1, 11, 4)
    B, (x, y, w) = decompose_scaled(1, A)
    assert B == A and (x, y, w) == (1, 0, 1)
    rng = random.Random(11)
    for _ in range(500):
        delta = rng.choice([1, 2, 3, 5, 11, 13, 25, 121, 169])
        M = rand_sl2(rng, 9)
        B, (x, y, w) = decompose_scaled(delta, M)
        assert x * w == delta and 0 <= y < w
        assert (B.a * x, B.a * y + B.b * w, B.c * x, B.c * y + B.d * w) == \
            (delta * M.a, delta * M.b, M.c, M.d)


def test_ord_eta_at_any_cusp():
    prod = EtaProduct([(EtaAtom.eta(1), 1)])
    for c in (Cusp.infinity(), Cusp(0, 1), Cusp(1, 2), Cusp(2, 13), Cusp(3, 7)):
        assert ord_at_cusp(prod, c) == F(1, 24)
        assert etaquot_ord_closed(prod, c) == F(1, 24)


def test_ord_quotient_at_zero():
    # eta(p^2 z)/eta(z) at the cusp 0: ORD = -(p^2-1)/(24 p) after width scaling
    for p in (11, 13):
        prod = EtaProduct([(EtaAtom.eta(p * p), 1), (EtaAtom.eta(1), -1)])
        o = ord_at_cusp(prod, Cusp(0, 1))
        assert o == -F(p * p - 1, 24 * p * p)
        assert p * o == -F(p * p - 1, 24 * p)


def test_ord_F1_F2_at_infinity():
    p = 13
    for a in range(1, p):
        F1 = EtaProduct([(EtaAtom.eta(1), 2), (EtaAtom.E(p, 0, a), -1)])
        assert ord_at_cusp(F1, Cusp.infinity()) == 0
        F2 = EtaProduct([(EtaAtom.eta(1), 2), (EtaAtom.E(p, a, 0), -1)])
        assert ord_at_cusp(F2, Cusp.infinity()) == F(a, 2 * p) - F(a * a, 2 * p * p)
    assert ord_at_cusp(
        EtaProduct([(EtaAtom.eta(1), 2), (EtaAtom.E(13, 1, 0), -1)]),
        Cusp.infinity()) == F(6, 169)


def test_ord_closed_form_agreement_random():
    rng = random.Random(3)
    scales = [1, 2, 3, 4, 5, 6, 11, 13, 22, 25, 121, 169]
    for _ in range(200):
        factors = []
        for _ in range(rng.randint(1, 5)):
            factors.append((EtaAtom.eta(rng.choice(scales)), rng.randint(-4, 4)))
        prod = EtaProduct(factors)
        cusp = rng.choice([Cusp.infinity(), Cusp(0, 1), Cusp(1, 2), Cusp(1, 5),
                           Cusp(2, 11), Cusp(3, 13), Cusp(5, 13), Cusp(7, 3)])
        assert ord_at_cusp(prod, cusp) == etaquot_ord_closed(prod, cusp)


def test_ord_independent_of_matrix_choice():
    rng = random.Random(14)
    atoms = [EtaAtom.eta(13), EtaAtom.f(13, 2), EtaAtom.geta(13, 5),
             EtaAtom.E(11, 3, 4), EtaAtom.eta(1)]
    count = 0
    while count < 100:
        prod = EtaProduct([(rng.choice(atoms), rng.randint(-3, 3))
                           for _ in range(rng.randint(1, 4))])
        cusp = rng.choice([Cusp(0, 1), Cusp(1, 2), Cusp(2, 13), Cusp(3, 11),
                           Cusp(1, 4)])
        A0 = cusp.matrix_to()
        t = rng.randint(-4, 4)
        A1 = A0 @ Matrix2.T(t)          # another matrix sending oo to the cusp
        o0 = ord_at_cusp(prod, cusp, A0)
        o1 = ord_at_cusp(prod, cusp, A1)
        assert o0 == o1
        count += 1


def test_etaquot_closed_form_rejects_other_atoms():
    with pytest.raises(ValueError):
        etaquot_ord_closed(EtaProduct([(EtaAtom.f(11, 1), 1)]), Cusp(0, 1))


def test_eta_product_numeric_matches_series():
    # one sanity bridge between the symbolic series and the numeric values
    prod = EtaProduct([(EtaAtom.eta(1), 1), (EtaAtom.f(5, 2), 1)])
    z = 0.05 + 0.8j
    q = cmath.exp(2j * cmath.pi * z)
    ser = prod.series(12)
    approx = sum(complex(c) * q ** float(e) for e, c in ser.items()
                 if not isinstance(c, CycNum))
    assert abs(approx - eta_product_value(prod, z)) < 1e-10
