"""Truncated sparse series in fractional powers of q, and eta-type products.

A :class:`QSeries` stores finitely many known coefficients of a series
sum a(e/D) q^(e/D) together with a truncation bound: coefficients at
scaled exponents >= ``trunc`` are *unknown*, not zero.  Arithmetic
propagates truncation pessimistically, so the ring never claims a
coefficient it has not actually computed.

Coefficients may be ints, Fractions, or :class:`~cranklab.cyclotomic.CycNum`
values; the eta-type atoms below all have integer coefficients except the
generalized products E_{g,h}, whose coefficients live in Z[zeta_p].

Atoms
-----
eta_series      Dedekind eta(delta*z) = q^(delta/24) prod (1-q^(delta*n))
geta_series     generalized eta_{N,k}(delta*z), exponent N*P2(k/N)/2
f_series        Biagioli's theta f_{N,rho}(delta*z)
E_series        Yang's generalized Dedekind eta E_{g,h}
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Union

from .cyclotomic import CycNum, Rational

Coef = Union[int, Fraction, CycNum]

__all__ = [
    "QSeries",
    "EtaAtom",
    "EtaProduct",
    "expand_product",
    "eta_series",
    "geta_series",
    "f_series",
    "E_series",
    "bernoulli_p2",
]


def _is_zero(c: Coef) -> bool:
    if isinstance(c, CycNum):
        return c.is_zero()
    return c == 0


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _merge_p(a: "int | None", b: "int | None") -> "int | None":
    if a is not None and b is not None and a != b:
        raise ValueError(f"mixed coefficient fields p={a} and p={b}")
    return a if a is not None else b


class QSeries:
    """Sparse truncated series in q^(1/D) with exact coefficients."""

    __slots__ = ("D", "terms", "trunc", "p")

    def __init__(self, D: int, terms: dict, trunc: int, p: "int | None" = None):
        if D < 1:
            raise ValueError("exponent denominator D must be >= 1")
        self.D = D
        self.terms = {e: c for e, c in terms.items() if e < trunc and not _is_zero(c)}
        self.trunc = trunc
        self.p = p

    # ---- constructors ----

    @classmethod
    def zero(cls, order: Rational, D: int = 1, p: "int | None" = None) -> "QSeries":
        return cls(D, {}, _ceil_scaled(order, D), p)

    @classmethod
    def monomial(cls, coef: Coef, exponent: Rational, order: Rational,
                 p: "int | None" = None) -> "QSeries":
        exponent = Fraction(exponent)
        D = exponent.denominator
        tr = _ceil_scaled(order, D)
        return cls(D, {int(exponent * D): coef}, tr, p)

    # ---- basic queries ----

    @property
    def trunc_exponent(self) -> Fraction:
        """Exponent bound: coefficients are known exactly below this."""
        return Fraction(self.trunc, self.D)

    def items(self):
        """(exponent: Fraction, coefficient) pairs, sorted by exponent."""
        return [(Fraction(e, self.D), c) for e, c in sorted(self.terms.items())]

    def is_zero(self) -> bool:
        return not self.terms

    def leading(self):
        """(exponent, coefficient) of the lowest-order known term."""
        if not self.terms:
            raise ValueError("series has no nonzero known terms")
        e = min(self.terms)
        return Fraction(e, self.D), self.terms[e]

    def coeff(self, exponent: Rational) -> Coef:
        """Coefficient of q^exponent; zero if absent, error if past trunc."""
        exponent = Fraction(exponent)
        if exponent >= self.trunc_exponent:
            raise ValueError(
                f"coefficient at q^{exponent} is beyond truncation {self.trunc_exponent}")
        scaled = exponent * self.D
        if scaled.denominator != 1:
            return 0
        return self.terms.get(int(scaled), 0)

    def eq_to_order(self, other: "QSeries", order: Rational) -> bool:
        """True iff all coefficients with exponent < order agree.

        Raises if either series is truncated below ``order`` — equality
        may never be claimed vacuously.
        """
        order = Fraction(order)
        if order > self.trunc_exponent or order > other.trunc_exponent:
            raise ValueError(
                f"cannot compare to order {order}: truncations are "
                f"{self.trunc_exponent} and {other.trunc_exponent}")
        return (self - other).cut(order).is_zero()

    def cut(self, order: Rational) -> "QSeries":
        """Restrict to exponents < order (and lower the truncation bound)."""
        tr = _ceil_scaled(order, self.D)
        if tr > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.D, {e: c for e, c in self.terms.items() if e < tr},
                       tr, self.p)

    # ---- rescaling ----

    def rescale(self, D: int) -> "QSeries":
        if D == self.D:
            return self
        if D % self.D:
            raise ValueError(f"new denominator {D} incompatible with {self.D}")
        f = D // self.D
        return QSeries(D, {e * f: c for e, c in self.terms.items()},
                       self.trunc * f, self.p)

    def _common(self, other: "QSeries"):
        D = _lcm(self.D, other.D)
        return self.rescale(D), other.rescale(D)

    # ---- ring operations ----

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._common(other)
        tr = min(a.trunc, b.trunc)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out[e] + c if e in out else c
        return QSeries(a.D, out, tr, _merge_p(self.p, other.p))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return QSeries(self.D, {e: -c for e, c in self.terms.items()},
                       self.trunc, self.p)

    def scale(self, c: Coef) -> "QSeries":
        """Multiply every coefficient by the scalar c."""
        if _is_zero(c):
            return QSeries(self.D, {}, self.trunc, self.p)
        p = self.p
        if isinstance(c, CycNum):
            p = _merge_p(p, c.p)
        return QSeries(self.D, {e: c * v for e, v in self.terms.items()}, self.trunc, p)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._common(other)
        # truncation: unknown terms of one factor meet the leading term of the other
        if a.terms and b.terms:
            tr = min(a.trunc + min(b.terms), b.trunc + min(a.terms))
        elif a.terms:
            tr = b.trunc + min(a.terms)
        elif b.terms:
            tr = a.trunc + min(b.terms)
        else:
            tr = min(a.trunc, b.trunc)
        out = {}
        bi = sorted(b.terms.items())
        for e1, c1 in a.terms.items():
            for e2, c2 in bi:
                e = e1 + e2
                if e >= tr:
                    break
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return QSeries(a.D, out, tr, _merge_p(self.p, other.p))

    __rmul__ = __mul__

    def shift(self, r: Rational) -> "QSeries":
        """Multiply by q^r: add r to every exponent."""
        r = Fraction(r)
        D = _lcm(self.D, r.denominator)
        s = self.rescale(D)
        d = int(r * D)
        return QSeries(D, {e + d: c for e, c in s.terms.items()}, s.trunc + d, s.p)

    def inv(self) -> "QSeries":
        """Multiplicative inverse of a series with invertible leading term."""
        if not self.terms:
            raise ValueError("cannot invert a series with no known nonzero term")
        e0 = min(self.terms)
        a0 = self.terms[e0]
        if isinstance(a0, CycNum):
            inv0 = a0.inv()
        else:
            inv0 = Fraction(1) / Fraction(a0)
            if inv0.denominator == 1:
                inv0 = int(inv0)
        # work on the unit part: exponents relative to e0, on their step lattice
        rel = sorted(e - e0 for e in self.terms)
        tr = self.trunc - e0
        step = 0
        for e in rel[1:]:
            step = gcd(step, e)
        if step == 0:
            out = {-e0: inv0}
            return QSeries(self.D, out, tr - 2 * e0, self.p)
        tail = {(e - e0) // step: c for e, c in self.terms.items() if e != e0}
        n_max = (tr - 1) // step
        b = [0] * (n_max + 1)
        b[0] = inv0
        tail_items = sorted(tail.items())
        unit_lead = isinstance(inv0, int) and inv0 == 1
        for n in range(1, n_max + 1):
            acc = None
            for k, c in tail_items:
                if k > n:
                    break
                v = b[n - k]
                if _is_zero(v):
                    continue
                term = c * v
                acc = term if acc is None else acc + term
            if acc is not None and not _is_zero(acc):
                b[n] = -acc if unit_lead else -(inv0 * acc)
        out = {n * step - e0: v for n, v in enumerate(b) if not _is_zero(v)}
        return QSeries(self.D, out, tr - 2 * e0, self.p)

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.inv() ** (-n)
        if n == 0:
            if self.terms:
                e0 = min(self.terms)
                return QSeries(self.D, {0: 1}, self.trunc - e0, self.p)
            return QSeries(self.D, {0: 1}, self.trunc, self.p)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ---- output ----

    def dump(self) -> str:
        """One line per term: "num/den<TAB>coefficient", sorted by exponent."""
        lines = []
        for e, c in self.items():
            es = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
            if isinstance(c, CycNum):
                cs = "[" + ", ".join(
                    str(Fraction(x).numerator) if Fraction(x).denominator == 1
                    else f"{Fraction(x).numerator}/{Fraction(x).denominator}"
                    for x in c.coords) + "]"
            else:
                cs = str(c)
            lines.append(f"{es}\t{cs}")
        return "\n".join(lines)

    def __repr__(self):
        n = len(self.terms)
        return (f"QSeries(D={self.D}, {n} terms, trunc=q^{self.trunc_exponent}"
                + (f", p={self.p}" if self.p else "") + ")")


def _ceil_scaled(order: Rational, D: int) -> int:
    f = Fraction(order) * D
    return -int((-f.numerator) // f.denominator)


# ----------------------------------------------------------------------
# product expansion engine
# ----------------------------------------------------------------------

def expand_product(factors, lead: Rational, order: Rational,
                   scalar: Coef = 1, p: "int | None" = None) -> QSeries:
    """Expand scalar * q^lead * prod (1 - c*q^e)^power up to q^order.

    ``factors`` is an iterable of (e, c, power) with e a positive rational,
    c a coefficient and power a (possibly negative) integer.  Negative
    powers are expanded through in-place geometric passes, so quotients of
    eta products cost the same as products.
    """
    lead = Fraction(lead)
    order = Fraction(order)
    factors = [(Fraction(e), c, pw) for e, c, pw in factors if pw != 0]
    for e, _, _ in factors:
        if e <= 0:
            raise ValueError(f"factor exponent must be positive, got {e}")
    D = lead.denominator
    for e, _, _ in factors:
        D = _lcm(D, e.denominator)
    D = _lcm(D, order.denominator)
    span = order - lead
    if span <= 0:
        return QSeries(D, {}, _ceil_scaled(order, D), p)
    steps = [int(e * D) for e, _, _ in factors]
    g = 0
    for s in steps:
        g = gcd(g, s)
    if g == 0:
        g = 1
    L = int((span * D + g - 1) // g)  # lattice points at or above the lead
    buf = [0] * L
    buf[0] = 1
    for (e, c, pw), s in zip(factors, steps):
        st = s // g
        if st >= L:
            continue
        zeta_fast = None
        if isinstance(c, CycNum):
            zeta_fast = _as_signed_zeta(c)
        for _ in range(abs(pw)):
            if pw > 0:
                rng = range(L - 1, st - 1, -1)
            else:
                rng = range(st, L)
            if c == 1 and not isinstance(c, CycNum):
                for i in rng:
                    v = buf[i - st]
                    if not _is_zero(v):
                        buf[i] = buf[i] - v if pw > 0 else buf[i] + v
            elif zeta_fast is not None:
                sgn, k = zeta_fast
                for i in rng:
                    v = buf[i - st]
                    if not _is_zero(v):
                        w = _zeta_shift(v, c.p, k, sgn)
                        buf[i] = buf[i] - w if pw > 0 else buf[i] + w
            else:
                for i in rng:
                    v = buf[i - st]
                    if not _is_zero(v):
                        w = c * v
                        buf[i] = buf[i] - w if pw > 0 else buf[i] + w
    lead_scaled = int(lead * D)
    tr = _ceil_scaled(order, D)
    terms = {}
    use_scalar = not (isinstance(scalar, int) and scalar == 1)
    for i, v in enumerate(buf):
        if _is_zero(v):
            continue
        e = lead_scaled + i * g
        if e >= tr:
            continue
        terms[e] = scalar * v if use_scalar else v
    if p is None and isinstance(scalar, CycNum):
        p = scalar.p
    return QSeries(D, terms, tr, p)


def _as_signed_zeta(c: CycNum):
    """(sign, k) if c == sign * zeta^k, else None."""
    coords = c.coords
    if all(x == -1 for x in coords):
        return (1, c.p - 1)
    if all(x == 1 for x in coords):
        return (-1, c.p - 1)
    hits = [(i, x) for i, x in enumerate(coords) if x != 0]
    if len(hits) == 1 and hits[0][1] in (1, -1):
        return (hits[0][1], hits[0][0])
    return None


def _zeta_shift(v, p: int, k: int, sgn: int):
    if isinstance(v, CycNum):
        w = v.mul_zeta(k)
    else:
        w = CycNum.rational(p, v).mul_zeta(k)
    return -w if sgn < 0 else w


def bernoulli_p2(t: Rational) -> Fraction:
    """Second periodic Bernoulli polynomial P2({t}) = {t}^2 - {t} + 1/6."""
    x = Fraction(t) % 1
    return x * x - x + Fraction(1, 6)


# ----------------------------------------------------------------------
# eta-type atoms
# ----------------------------------------------------------------------

def eta_series(delta: int, order: Rational) -> QSeries:
    """eta(delta*z) = q^(delta/24) prod_{n>=1} (1 - q^(delta*n)).

    Expanded sparsely through the pentagonal number theorem:
    prod (1-q^n) = sum_{k in Z} (-1)^k q^(k(3k-1)/2).
    """
    if delta < 1:
        raise ValueError(f"eta scale must be >= 1, got {delta}")
    lead = Fraction(delta, 24)
    order = Fraction(order)
    D = _lcm(lead.denominator, order.denominator)
    tr = _ceil_scaled(order, D)
    terms = {}
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = lead + delta * Fraction(kk * (3 * kk - 1), 2)
            es = int(e * D)
            if es < tr:
                terms[es] = terms.get(es, 0) + (-1) ** (kk & 1)
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return QSeries(D, terms, tr)


def geta_series(N: int, k: int, order: Rational, delta: int = 1) -> QSeries:
    """Generalized eta_{N,k}(delta*z) = q^(delta*N*P2(k/N)/2) prod_{m = +-k mod N} (1-q^(delta*m))."""
    kk = k % N
    if kk == 0:
        raise ValueError(f"eta_{{N,k}} needs k not divisible by N (N={N}, k={k})")
    lead = Fraction(N, 2) * bernoulli_p2(Fraction(kk, N)) * delta
    order = Fraction(order)
    span = order - lead
    fac = []
    for base in {kk, N - kk}:
        m = base
        while delta * m < span:
            fac.append((delta * m, 1, 1))
            m += N
    return expand_product(fac, lead, order)


def f_series(N: int, rho: int, order: Rational, delta: int = 1) -> QSeries:
    """Biagioli's theta block f_{N,rho}(delta*z).

    f_{N,rho} = (-1)^floor(rho/N) q^((N-2 rho)^2/(8N)) (q^rho, q^(N-rho), q^N; q^N)_inf.
    The index relations f_{N,rho} = f_{N,N+rho} = f_{N,-rho} hold on the
    nose (the sign prefactor absorbs the reduction), so any rho not
    divisible by N is accepted and reduced to 1 <= rho <= N-1.
    """
    r = rho % N
    if r == 0:
        raise ValueError(f"f_{{N,rho}} undefined for rho = 0 mod N (N={N}, rho={rho})")
    lead = Fraction((N - 2 * r) ** 2, 8 * N) * delta
    order = Fraction(order)
    span = order - lead
    fac = []
    for base in (r, N - r, N):
        m = base
        while delta * m < span:
            fac.append((delta * m, 1, 1))
            m += N
    return expand_product(fac, lead, order)


def E_series(p: int, g: int, h: int, order: Rational, delta: int = 1) -> QSeries:
    """Yang's generalized Dedekind eta E_{g,h}(delta*z) over Z[zeta_p].

    E_{g,h} = q^(B(g/p)/2) prod_{m>=1} (1 - zeta^h q^(m-1+g/p))(1 - zeta^(-h) q^(m-g/p)),
    B(x) = x^2 - x + 1/6.  Indices reduce by E_{g+p,h} = -zeta^(-h) E_{g,h}
    and E_{g,h+p} = E_{g,h}; the reduction factor is kept exactly, so the
    returned series is E at the *unreduced* indices.
    """
    if g % p == 0 and h % p == 0:
        raise ValueError("E_{g,h} needs (g,h) not both divisible by p")
    scalar = CycNum.one(p)
    gg, hh = g, h % p
    while gg >= p:
        gg -= p
        scalar = scalar * (-CycNum.zeta(p, (-hh) % p))
    while gg < 0:
        scalar = scalar * (-CycNum.zeta(p, hh % p))
        gg += p
    lead = bernoulli_p2(Fraction(gg, p)) / 2 * delta
    order = Fraction(order)
    span = order - lead
    fac = []
    m = 1
    while True:
        e1 = delta * (Fraction(m - 1) + Fraction(gg, p))
        e2 = delta * (Fraction(m) - Fraction(gg, p))
        if e1 >= span and e2 >= span:
            break
        if e1 == 0 and span > 0:
            scalar = scalar * (CycNum.one(p) - CycNum.zeta(p, hh))
        elif 0 < e1 < span:
            fac.append((e1, CycNum.zeta(p, hh), 1))
        if e2 < span:
            fac.append((e2, CycNum.zeta(p, (-hh) % p), 1))
        m += 1
    return expand_product(fac, lead, order, scalar=scalar, p=p)


# ----------------------------------------------------------------------
# formal eta products
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class EtaAtom:
    """One factor of an eta product: eta(.), f_{N,rho}(.), eta_{N,k}(.) or E_{g,h}.

    kind is one of "eta", "f", "geta", "E".  ``delta`` scales the argument,
    atom(z) -> atom(delta*z).  Indices are stored canonically:
    f: 1 <= rho <= floor(N/2); geta: 1 <= k <= floor(N/2); E: 0 <= g,h < p.
    Reductions are sign-free for f/geta; E reductions belong to the caller
    (see E_series), so EtaAtom("E", ...) requires canonical indices.
    """

    kind: str
    a: int = 0   # N for f/geta, p for E, unused for eta
    b: int = 0   # rho / k / g
    c: int = 0   # h for E
    delta: int = 1

    @staticmethod
    def eta(delta: int = 1) -> "EtaAtom":
        return EtaAtom("eta", delta=delta)

    @staticmethod
    def f(N: int, rho: int, delta: int = 1) -> "EtaAtom":
        r = rho % N
        if r == 0:
            raise ValueError("f atom needs rho not divisible by N")
        return EtaAtom("f", N, min(r, N - r), delta=delta)

    @staticmethod
    def geta(N: int, k: int, delta: int = 1) -> "EtaAtom":
        kk = k % N
        if kk == 0:
            raise ValueError("geta atom needs k not divisible by N")
        return EtaAtom("geta", N, min(kk, N - kk), delta=delta)

    @staticmethod
    def E(p: int, g: int, h: int, delta: int = 1) -> "EtaAtom":
        if not (0 <= g < p and 0 <= h < p):
            raise ValueError("E atom requires canonical 0 <= g,h < p")
        if g == 0 and h == 0:
            raise ValueError("E atom needs (g,h) != (0,0)")
        return EtaAtom("E", p, g, h, delta=delta)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, 2) if self.kind in ("eta", "f") else Fraction(0)

    def lead_exponent(self) -> Fraction:
        if self.kind == "eta":
            return Fraction(self.delta, 24)
        if self.kind == "f":
            return Fraction((self.a - 2 * self.b) ** 2, 8 * self.a) * self.delta
        if self.kind == "geta":
            return Fraction(self.a, 2) * bernoulli_p2(Fraction(self.b, self.a)) * self.delta
        if self.kind == "E":
            if self.b == 0:
                return Fraction(self.delta, 12)
            return Fraction(bernoulli_p2(Fraction(self.b, self.a)), 2) * self.delta
        raise ValueError(f"unknown atom kind {self.kind}")

    def series(self, order: Rational) -> QSeries:
        if self.kind == "eta":
            return eta_series(self.delta, order)
        if self.kind == "f":
            return f_series(self.a, self.b, order, self.delta)
        if self.kind == "geta":
            return geta_series(self.a, self.b, order, self.delta)
        if self.kind == "E":
            return E_series(self.a, self.b, self.c, order, self.delta)
        raise ValueError(f"unknown atom kind {self.kind}")

    def _factors(self, span: Fraction):
        """(e, c, 1) factors of the infinite product, exponents < span."""
        out = []
        if self.kind == "eta":
            m = self.delta
            while m < span:
                out.append((Fraction(m), 1, 1))
                m += self.delta
        elif self.kind in ("f", "geta"):
            N, idx = self.a, self.b
            bases = (idx, N - idx, N) if self.kind == "f" else {idx, N - idx}
            for base in bases:
                m = base
                while self.delta * m < span:
                    out.append((Fraction(self.delta * m), 1, 1))
                    m += N
        else:  # E
            p, g, h = self.a, self.b, self.c
            m = 1
            while True:
                e1 = self.delta * (Fraction(m - 1) + Fraction(g, p))
                e2 = self.delta * (Fraction(m) - Fraction(g, p))
                if e1 >= span and e2 >= span:
                    break
                if 0 < e1 < span:
                    out.append((e1, CycNum.zeta(p, h), 1))
                if e2 < span:
                    out.append((e2, CycNum.zeta(p, (-h) % p), 1))
                m += 1
        return out

    def _unit_scalar(self, p_field: "int | None"):
        """Constant factor of the product part (nontrivial only for E with g=0)."""
        if self.kind == "E" and self.b == 0:
            return CycNum.one(self.a) - CycNum.zeta(self.a, self.c)
        return 1

    def __str__(self):
        d = f"{self.delta}z" if self.delta != 1 else "z"
        if self.kind == "eta":
            return f"eta({d})"
        if self.kind == "f":
            return f"f[{self.a},{self.b}]({d})"
        if self.kind == "geta":
            return f"eta[{self.a},{self.b}]({d})"
        return f"E[{self.a};{self.b},{self.c}]({d})"


class EtaProduct:
    """A formal product scalar * prod atom_i^(n_i) of eta-type atoms."""

    __slots__ = ("scalar", "factors")

    def __init__(self, factors, scalar: Coef = 1):
        merged: dict[EtaAtom, int] = {}
        for atom, n in factors:
            if n:
                merged[atom] = merged.get(atom, 0) + n
        self.factors = tuple((a, n) for a, n in merged.items() if n)
        self.scalar = scalar

    @property
    def weight(self) -> Fraction:
        return sum((Fraction(n) * a.weight for a, n in self.factors), Fraction(0))

    def lead_exponent(self) -> Fraction:
        return sum((a.lead_exponent() * n for a, n in self.factors), Fraction(0))

    def field(self) -> "int | None":
        p = self.scalar.p if isinstance(self.scalar, CycNum) else None
        for a, _ in self.factors:
            if a.kind == "E":
                p = a.a if p is None else p
        return p

    def __mul__(self, other: "EtaProduct") -> "EtaProduct":
        return EtaProduct(list(self.factors) + list(other.factors),
                          self.scalar * other.scalar)

    def scaled(self, c: Coef) -> "EtaProduct":
        return EtaProduct(self.factors, self.scalar * c)

    def inverse_factors(self) -> "EtaProduct":
        """The product with all exponents negated (scalar untouched)."""
        return EtaProduct([(a, -n) for a, n in self.factors], self.scalar)

    def series(self, order: Rational) -> QSeries:
        """Expand to q^order by per-factor passes (geometric for negative powers)."""
        order = Fraction(order)
        lead = self.lead_exponent()
        span = order - lead
        scalar = self.scalar
        fac = []
        for atom, n in self.factors:
            for e, c, _ in atom._factors(span):
                fac.append((e, c, n))
            u = atom._unit_scalar(None)
            if not (isinstance(u, int) and u == 1):
                if n >= 0:
                    scalar = scalar * u ** n
                else:
                    scalar = scalar * u.inv() ** (-n)
        return expand_product(fac, lead, order, scalar=scalar, p=self.field())

    def __str__(self):
        bits = []
        for a, n in self.factors:
            bits.append(f"{a}" + (f"^{n}" if n != 1 else ""))
        body = " * ".join(bits) if bits else "1"
        if isinstance(self.scalar, int) and self.scalar == 1:
            return body
        return f"({self.scalar}) * {body}"

    def __repr__(self):
        return f"EtaProduct({self})"
