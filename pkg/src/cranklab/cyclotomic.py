"""Exact arithmetic in the cyclotomic field Q(zeta_p) for an odd prime p.

Elements are stored in the power basis 1, zeta, ..., zeta^(p-2), with
zeta^(p-1) rewritten through the minimal polynomial relation
1 + zeta + ... + zeta^(p-1) = 0.  Coordinates are arbitrary-precision
rationals (plain ints where possible, ``fractions.Fraction`` otherwise),
so all arithmetic is exact.

Roots of unity that do not live in Q(zeta_p) (transformation multipliers
like e^(pi*i/12)) are carried separately as :class:`Phase` values, exact
rationals t representing e^(2*pi*i*t).  A phase embeds back into
Q(zeta_p) exactly whenever its denominator divides 2p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import cos, sin, pi, gcd
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

__all__ = ["CycNum", "Phase", "Rational", "half_power", "sin_ratio"]


def _as_fraction_str(x: Rational) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


class CycNum:
    """An element of Q(zeta_p), zeta_p = exp(2*pi*i/p), p an odd prime >= 5.

    Immutable.  Supports +, -, *, /, ** and mixed arithmetic with ints
    and Fractions.  Equality is exact structural equality of the reduced
    coordinate vector; no floating point is involved.
    """

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords: Iterable[Rational]):
        coords = tuple(coords)
        if p < 5 or p % 2 == 0:
            raise ValueError(f"p must be an odd prime >= 5, got {p}")
        if len(coords) != p - 1:
            raise ValueError(f"need {p - 1} coordinates for p={p}, got {len(coords)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("CycNum is immutable")

    # ---- constructors ----

    @classmethod
    def zero(cls, p: int) -> "CycNum":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def one(cls, p: int) -> "CycNum":
        return cls(p, (1,) + (0,) * (p - 2))

    @classmethod
    def rational(cls, p: int, value: Rational) -> "CycNum":
        return cls(p, (value,) + (0,) * (p - 2))

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CycNum":
        """zeta_p^k, reduced."""
        k %= p
        if k == p - 1:
            return cls(p, (-1,) * (p - 1))
        c = [0] * (p - 1)
        c[k] = 1
        return cls(p, c)

    @classmethod
    def from_zeta_powers(cls, p: int, powers: Mapping[int, Rational]) -> "CycNum":
        """Sum of m * zeta^k over the mapping k -> m."""
        c = [0] * (p - 1)
        for k, m in powers.items():
            k %= p
            if k == p - 1:
                for t in range(p - 1):
                    c[t] -= m
            else:
                c[k] += m
        return cls(p, c)

    # ---- predicates / conversions ----

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.coords[0])

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.coords)

    def complex_embedding(self, t: int = 1) -> complex:
        """Numeric value under zeta -> exp(2*pi*i*t/p).  Cross-checks only."""
        p = self.p
        out = 0j
        for i, x in enumerate(self.coords):
            if x:
                ang = 2 * pi * ((i * t) % p) / p
                out += float(x) * complex(cos(ang), sin(ang))
        return out

    # ---- ring / field operations ----

    def _coerce(self, other) -> "CycNum | None":
        if isinstance(other, CycNum):
            if other.p != self.p:
                raise ValueError(f"mixed cyclotomic orders {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.rational(self.p, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.p, (x + y for x, y in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.p, (x - y for x, y in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycNum(self.p, (-x for x in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CycNum.zero(self.p)
            return CycNum(self.p, (x * other for x in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.p
        acc = [0] * (2 * p - 3)
        for i, x in enumerate(self.coords):
            if x:
                for j, y in enumerate(o.coords):
                    if y:
                        acc[i + j] += x * y
        out = acc[: p - 1]
        for e in range(p - 1, 2 * p - 3):
            v = acc[e]
            if v:
                k = e - p  # e in [p-1, 2p-4]; e mod p = e - p for e >= p, = p-1 for e = p-1
                if e == p - 1:
                    for t in range(p - 1):
                        out[t] -= v
                else:
                    out[k] += v
        return CycNum(p, out)

    __rmul__ = __mul__

    def mul_zeta(self, k: int) -> "CycNum":
        """Multiply by zeta^k.  A coordinate rotation; cheaper than __mul__."""
        p = self.p
        k %= p
        if k == 0:
            return self
        out = [0] * (p - 1)
        last = 0
        for i, x in enumerate(self.coords):
            e = (i + k) % p
            if e == p - 1:
                last = x
            else:
                out[e] = x
        if last:
            for t in range(p - 1):
                out[t] -= last
        return CycNum(p, out)

    def galois(self, d: int) -> "CycNum":
        """Apply the automorphism zeta -> zeta^d, gcd(d, p) = 1."""
        p = self.p
        if d % p == 0:
            raise ValueError(f"galois exponent d={d} is divisible by p={p}")
        out = [0] * (p - 1)
        for i, x in enumerate(self.coords):
            if x:
                e = (i * d) % p
                if e == p - 1:
                    for t in range(p - 1):
                        out[t] -= x
                else:
                    out[e] += x
        return CycNum(p, out)

    def inv(self) -> "CycNum":
        """Multiplicative inverse, via the product of Galois conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_p)")
        p = self.p
        conj = CycNum.one(p)
        for d in range(2, p):
            conj = conj * self.galois(d)
        norm = self * conj
        return conj * (Fraction(1) / norm.as_rational())

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = CycNum.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ---- equality / hashing / display ----

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNum.rational(self.p, other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.p == other.p and all(
            Fraction(x) == Fraction(y) for x, y in zip(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.p, tuple(Fraction(x) for x in self.coords)))

    def __repr__(self):
        return f"CycNum({self.p}, {self})"

    def __str__(self):
        parts = []
        for i, x in enumerate(self.coords):
            if x == 0:
                continue
            mono = "1" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == 0:
                parts.append(_as_fraction_str(x))
            elif x == 1:
                parts.append(mono)
            elif x == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{_as_fraction_str(x)}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    # ---- serialization ----

    def to_json(self) -> dict:
        return {"p": self.p, "coords": [_as_fraction_str(x) for x in self.coords]}

    @classmethod
    def from_json(cls, data: Mapping) -> "CycNum":
        p = int(data["p"])
        coords = [Fraction(s) for s in data["coords"]]
        coords = [int(f) if f.denominator == 1 else f for f in coords]
        return cls(p, coords)


@dataclass(frozen=True)
class Phase:
    """An exact root of unity e^(2*pi*i*t), t rational, stored mod 1.

    The multipliers arising from slash transformations are all of this
    form; keeping t exact lets phase identities be checked with no
    floating point.
    """

    t: Fraction

    @staticmethod
    def of(num: int, den: int = 1) -> "Phase":
        """e^(2*pi*i*num/den)."""
        return Phase(Fraction(num, den) % 1)

    @staticmethod
    def from_half_turns(x: Rational) -> "Phase":
        """e^(pi*i*x): transformation formulas usually come in half turns."""
        return Phase((Fraction(x) / 2) % 1)

    @staticmethod
    def one() -> "Phase":
        return Phase(Fraction(0))

    @staticmethod
    def minus_one() -> "Phase":
        return Phase(Fraction(1, 2))

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t) % 1)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase((self.t + other.t) % 1)

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase((self.t - other.t) % 1)

    def __pow__(self, n: int) -> "Phase":
        return Phase((self.t * n) % 1)

    def conjugate(self) -> "Phase":
        return Phase((-self.t) % 1)

    def to_complex(self) -> complex:
        ang = 2 * pi * float(self.t)
        return complex(cos(ang), sin(ang))

    def to_cyc(self, p: int) -> "CycNum | None":
        """Embed into Q(zeta_p) when the denominator of t divides 2p.

        Returns None (not an error) when the phase does not live there.
        """
        den = self.t.denominator
        num = self.t.numerator
        if den in (1, 2):
            val = 1 if (num * (2 // den)) % 2 == 0 else -1
            return CycNum.rational(p, val)
        if den == p:
            return CycNum.zeta(p, num)
        if den == 2 * p:
            # e^(pi*i*num/p) with num odd: -zeta^((num - p)/2)
            return -CycNum.zeta(p, ((num - p) // 2) % p)
        return None

    def to_json(self) -> dict:
        return {"t": _as_fraction_str(self.t)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Phase":
        return cls(Fraction(data["t"]))

    def __str__(self):
        if self.t == 0:
            return "1"
        if self.t == Fraction(1, 2):
            return "-1"
        return f"e(2*pi*i*{self.t})"


def half_power(p: int, j: int) -> CycNum:
    """zeta_p^(j/2): the square root of zeta^j that is itself a p-th root
    of unity, i.e. zeta^(j*(p+1)/2 mod p)."""
    if p % 2 == 0:
        raise ValueError("p must be odd")
    return CycNum.zeta(p, (j * (p + 1) // 2) % p)


def sin_ratio(p: int, d: int) -> CycNum:
    """The exact element of Q(zeta_p) equal to sin(pi/p)/sin(d*pi/p).

    Built from (1 - zeta) zeta^((d-1)/2) / (1 - zeta^d); the half power is
    taken inside the p-th roots of unity, which differs from the principal
    e^(pi*i*(d-1)/p) by (-1)^(d-1), so that sign is corrected to make the
    principal embedding the positive real ratio.  Every complex embedding
    is real.
    """
    if not 1 <= d <= p - 1:
        raise ValueError(f"d must lie in 1..{p - 1}")
    if d == 1:
        return CycNum.one(p)
    num = (CycNum.one(p) - CycNum.zeta(p)) * half_power(p, d - 1)
    den = CycNum.one(p) - CycNum.zeta(p, d)
    out = num * den.inv()
    return -out if (d - 1) % 2 else out
