"""Crank dissection elements K_{p,m}(zeta_p^ell, z), built two ways.

Combinatorial route (the defining series):

    K_{p,m} = q^(m/p) prod(1-q^(pn)) sum_{n >= ceil((s_p-m)/p)}
              (sum_k M(k,p,pn+m-s_p) zeta^(k ell)) q^n,     s_p = (p^2-1)/24,

with M in the series convention (coefficients of C(zeta,q)).

Modular route: the same function arises from the weight-1 form
SF = eta(p^2 z) eta(z) / E_{0,ell}(z), whose q-expansion has integer
exponents and leading term q^(s_p)/(1-zeta^ell), by applying the
twisted Atkin operator U_{p,m} and scaling by (1-zeta^ell):

    K_{p,m} = (1-zeta^ell) * (SF | U_{p,m}).

No extra power of q is needed for the two to agree coefficient by
coefficient; the dual-construction test pins that normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycNum, Rational
from .partitions import crank_series
from .qseries import EtaAtom, EtaProduct, QSeries, expand_product

__all__ = [
    "DissectionElement",
    "U_pm",
    "K_combinatorial",
    "K_modular",
    "pi_r",
    "j_product",
    "j_series",
    "s_p",
]


def s_p(p: int) -> int:
    """(p^2 - 1)/24, an integer for every prime p > 3."""
    if (p * p - 1) % 24:
        raise ValueError(f"(p^2-1)/24 is not integral for p={p}")
    return (p * p - 1) // 24


@dataclass(frozen=True)
class DissectionElement:
    """One element of the p-dissection, with its construction recorded."""

    p: int
    m: int
    ell: int
    series: QSeries
    provenance: str

    def __post_init__(self):
        if self.series.terms:
            lead, _ = self.series.leading()
            start = Fraction(self.m, self.p) + _ceil_div(s_p(self.p) - self.m, self.p)
            if lead < start:
                raise ValueError(
                    f"K_{{{self.p},{self.m}}} leading exponent {lead} below {start}")


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def U_pm(F: QSeries, p: int, m: int) -> QSeries:
    """Twisted Atkin operator: sum a(n) q^n  ->  q^(m/p) sum a(pn+m) q^n.

    Requires integer exponents (D = 1); callers normalize first.
    """
    if F.D != 1:
        raise ValueError(f"U_{{p,m}} needs integer exponents, got denominator {F.D}")
    if not 0 <= m < p:
        raise ValueError(f"m must lie in 0..{p - 1}")
    n_bound = _ceil_div(F.trunc - m, p)  # a(pn+m) known for n < n_bound
    terms = {}
    for e, c in F.terms.items():
        if e % p == m % p:
            n = (e - m) // p
            terms[p * n + m] = c
    return QSeries(p, terms, p * n_bound + m, F.p)


def K_combinatorial(p: int, m: int, ell: int, order: Rational) -> DissectionElement:
    """The defining series, from crank counts in the series convention."""
    _check_args(p, m, ell)
    order = Fraction(order)
    sp = s_p(p)
    base = crank_series(p, ell, p * order + sp)  # C(zeta^ell, q)
    shifted = {}
    for e, c in base.terms.items():
        # q^N with N = pn+m-s_p contributes to q^(m/p + n)
        if (e + sp - m) % p == 0:
            n = (e + sp - m) // p
            shifted[p * n + m] = c
    n_bound = _ceil_div(base.trunc + sp - m, p)
    inner = QSeries(p, shifted, p * n_bound + m, p)
    pent = expand_product([(p * n, 1, 1) for n in range(1, int(order // p) + 1)],
                          0, order)
    ser = (inner * pent).cut(order)
    return DissectionElement(p, m, ell, ser, "combinatorial")


_SF_CACHE: dict = {}


def _sf_series(p: int, ell: int, order_int: int) -> QSeries:
    """(1 - zeta^ell) * eta(p^2 z) eta(z) / E_{0,ell}(z), integer exponents.

    Expanded directly from the defining products: the pentagonal factors
    of the two etas and geometric passes for 1/E.  Leading term q^(s_p).
    The expansion is shared across all m of one dissection.
    """
    cached = _SF_CACHE.get((p, ell))
    if cached is not None and cached.trunc >= order_int:
        return cached.cut(order_int)
    zl = CycNum.zeta(p, ell % p)
    zli = CycNum.zeta(p, (-ell) % p)
    fac = []
    n = 1
    while n < order_int:
        fac.append((n, 1, 1))              # eta(z) product
        fac.append((n, zl, -1))            # 1/(1 - zeta^ell q^n)
        fac.append((n, zli, -1))           # 1/(1 - zeta^-ell q^n)
        n += 1
    n = p * p
    while n < order_int:
        fac.append((n, 1, 1))              # eta(p^2 z) product
        n += p * p
    out = expand_product(fac, s_p(p), order_int, p=p)
    _SF_CACHE[(p, ell)] = out
    return out


def K_modular(p: int, m: int, ell: int, order: Rational) -> DissectionElement:
    """(1 - zeta^ell) SF|U_{p,m} with SF = eta(p^2 z) eta(z)/E_{0,ell}."""
    _check_args(p, m, ell)
    order = Fraction(order)
    need = int(p * order) + 1
    sf = _sf_series(p, ell, need)
    ser = U_pm(sf, p, m).cut(order)
    return DissectionElement(p, m, ell, ser, "modular")


def _check_args(p: int, m: int, ell: int):
    if p <= 3:
        raise ValueError("p must be a prime > 3")
    if not 0 <= m <= p - 1:
        raise ValueError(f"m must lie in 0..{p - 1}")
    if not 1 <= ell <= p - 1:
        raise ValueError(f"ell must lie in 1..{p - 1}")


# ----------------------------------------------------------------------
# permuted eta vectors
# ----------------------------------------------------------------------

def pi_r(p: int, r: int, i: int) -> int:
    """The permutation of {1, ..., (p-1)/2} with r * pi_r(i) = +-i mod p."""
    half = (p - 1) // 2
    if not (1 <= r <= half and 1 <= i <= half):
        raise ValueError(f"indices must lie in 1..{half}")
    rinv = pow(r, -1, p)
    v = (rinv * i) % p
    return min(v, p - v)


def j_product(p: int, nvec, r: int = 1) -> EtaProduct:
    """The permuted eta vector eta(pz)^(n0) prod_k f_{p, r*k}^(n_k)."""
    nvec = tuple(nvec)
    if len(nvec) != (p + 1) // 2:
        raise ValueError(f"need {(p + 1) // 2} exponents for p={p}, got {len(nvec)}")
    factors = [(EtaAtom.eta(p), nvec[0])]
    for k in range(1, (p + 1) // 2):
        if nvec[k]:
            factors.append((EtaAtom.f(p, r * k), nvec[k]))
    return EtaProduct(factors)


def j_series(p: int, nvec, r: int, order: Rational) -> QSeries:
    """Series expansion of j(p, pi_r(nvec), z)."""
    return j_product(p, nvec, r).series(order)
