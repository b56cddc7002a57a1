"""Partitions, the Andrews-Garvan crank, and crank-residue counting.

Two independent constructions of the counts M(k, p, n) live here:

* the *combinatorial* convention enumerates partitions and counts cranks
  directly (exponential, used as the oracle for small n);
* the *series* convention reads the coefficient of z^k q^n off the
  two-variable generating function

      C(z, q) = (q;q)_inf / ((zq;q)_inf (z^{-1}q;q)_inf),

  with z-exponents folded mod p.  The two agree for n >= 2; at n = 1 the
  series gives (-1, 1, 0, ..., 0, 1) against the single partition (1) of
  crank -1, reflecting the (1-z)q correction between C(z,q) and the
  bivariate crank count.

The series table is computed in the group ring Z[z]/(z^p - 1) via the
Jacobi triple product: with D(z,q) = sum_{k>=0} (-1)^k (z^-k+...+z^k)
q^(k(k+1)/2), one has C = (q;q)^2 / D, and D has unit constant term, so
the whole table costs O(n^(3/2)) ring operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .cyclotomic import CycNum
from .qseries import QSeries

__all__ = [
    "enumerate_partitions",
    "crank",
    "p_of",
    "M_comb",
    "M_class",
    "CrankTable",
    "crank_series",
]


def enumerate_partitions(n: int, max_part: "int | None" = None) -> Iterator[tuple]:
    """All partitions of n as weakly decreasing tuples, each exactly once."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        yield ()
        return
    if max_part is None or max_part > n:
        max_part = n
    for first in range(max_part, 0, -1):
        for rest in enumerate_partitions(n - first, first):
            yield (first,) + rest


def crank(parts: Sequence[int]) -> int:
    """Andrews-Garvan crank: largest part if there are no ones, else
    (#parts larger than #ones) - #ones."""
    if not parts:
        raise ValueError("crank of the empty partition is undefined")
    ones = sum(1 for x in parts if x == 1)
    if ones == 0:
        return parts[0]
    return sum(1 for x in parts if x > ones) - ones


@lru_cache(maxsize=None)
def _p_of_table(nmax: int) -> tuple:
    ps = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        s = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = -1 if k % 2 == 0 else 1
            s += sign * ps[n - g1]
            if g2 <= n:
                s += sign * ps[n - g2]
            k += 1
        ps[n] = s
    return tuple(ps)


def p_of(n: int) -> int:
    """Number of partitions of n, by the pentagonal-number recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _p_of_table(max(n, 64))[n]


@lru_cache(maxsize=None)
def _crank_counts(n: int) -> dict:
    counts: dict[int, int] = {}
    for lam in enumerate_partitions(n):
        c = crank(lam)
        counts[c] = counts.get(c, 0) + 1
    return counts


def M_comb(m: int, n: int) -> int:
    """Number of partitions of n with crank exactly m (enumeration)."""
    if n < 1:
        raise ValueError("combinatorial crank counts need n >= 1")
    return _crank_counts(n).get(m, 0)


@dataclass(frozen=True)
class CrankTable:
    """Rows of crank counts by residue: rows[n][k] = M(k, p, n).

    convention is "comb" (enumeration) or "series" (coefficients of
    C(z,q) folded mod p).  Combinatorial rows satisfy
    sum_k M(k,p,n) = p(n); series rows differ only at n = 1.
    """

    p: int
    convention: str
    rows: tuple

    @classmethod
    def compute(cls, p: int, nmax: int, convention: str = "series") -> "CrankTable":
        if convention == "series":
            rows = _series_rows(p, nmax)
        elif convention == "comb":
            rows = []
            for n in range(nmax + 1):
                row = [0] * p
                if n == 0:
                    row[0] = 1
                else:
                    for m, cnt in _crank_counts(n).items():
                        row[m % p] += cnt
                rows.append(tuple(row))
        else:
            raise ValueError(f"unknown convention {convention!r}")
        return cls(p, convention, tuple(rows))

    def row(self, n: int) -> tuple:
        return self.rows[n]

    def coefficient(self, n: int, ell: int = 1) -> CycNum:
        """sum_k M(k,p,n) zeta^(k*ell) as an exact cyclotomic number."""
        return CycNum.from_zeta_powers(
            self.p, {(k * ell) % self.p: v for k, v in enumerate(self.rows[n]) if v})


@lru_cache(maxsize=None)
def _series_rows_cached(p: int, nmax: int) -> tuple:
    T = nmax
    # D(z,q) = sum_{k>=0} (-1)^k (z^-k + ... + z^k) q^(k(k+1)/2), unit constant term
    theta = [[0] * p for _ in range(T + 1)]
    k = 0
    while k * (k + 1) // 2 <= T:
        e = k * (k + 1) // 2
        s = -1 if k % 2 else 1
        for j in range(-k, k + 1):
            theta[e][j % p] += s
        k += 1
    inv = [[0] * p for _ in range(T + 1)]
    inv[0][0] = 1
    nz = []
    for e in range(1, T + 1):
        row = [(kk, v) for kk, v in enumerate(theta[e]) if v]
        if row:
            nz.append((e, row))
    for e in range(1, T + 1):
        row = inv[e]
        for ee, entries in nz:
            if ee > e:
                break
            prev = inv[e - ee]
            for kk, v in entries:
                if kk:
                    for k2 in range(p):
                        row[(k2 + kk) % p] -= v * prev[k2]
                else:
                    for k2 in range(p):
                        row[k2] -= v * prev[k2]
    # multiply by (q;q)_inf twice, using the pentagonal expansion
    pent = []
    k = 1
    while k * (3 * k - 1) // 2 <= T:
        sign = -1 if k % 2 else 1
        pent.append((k * (3 * k - 1) // 2, sign))
        if k * (3 * k + 1) // 2 <= T:
            pent.append((k * (3 * k + 1) // 2, sign))
        k += 1
    for _ in range(2):
        out = [r[:] for r in inv]
        for e0, sign in pent:
            for e in range(e0, T + 1):
                prev = inv[e - e0]
                row = out[e]
                if sign > 0:
                    for k2 in range(p):
                        row[k2] += prev[k2]
                else:
                    for k2 in range(p):
                        row[k2] -= prev[k2]
        inv = out
    return tuple(tuple(r) for r in inv)


def _series_rows(p: int, nmax: int) -> tuple:
    # round the cache size up so nearby requests share one computation
    size = max(64, 1 << (nmax - 1).bit_length()) if nmax > 0 else 64
    return _series_rows_cached(p, size)[: nmax + 1]


def M_class(k: int, p: int, n: int, convention: str = "comb") -> int:
    """M(k, p, n): partitions of n with crank congruent to k mod p."""
    if convention == "comb":
        if n == 0:
            return 1 if k % p == 0 else 0
        return sum(cnt for m, cnt in _crank_counts(n).items() if (m - k) % p == 0)
    if convention == "series":
        return _series_rows(p, n)[n][k % p]
    raise ValueError(f"unknown convention {convention!r}")


def crank_series(p: int, ell: int, order) -> QSeries:
    """C(zeta_p^ell, q) as a QSeries with CycNum coefficients.

    The q^1 coefficient is -1 + zeta^ell + zeta^(-ell); from q^2 on the
    coefficients are sum_k M(k,p,n) zeta^(k*ell) in either convention.
    """
    if ell % p == 0:
        raise ValueError("ell must be nonzero mod p")
    order = Fraction(order)
    tr = -((-order.numerator) // order.denominator)  # ceil
    rows = _series_rows(p, max(tr - 1, 0))
    terms = {}
    for n in range(tr):
        c = CycNum.from_zeta_powers(
            p, {(k * ell) % p: v for k, v in enumerate(rows[n]) if v})
        if not c.is_zero():
            terms[n] = c
    return QSeries(1, terms, tr, p)
