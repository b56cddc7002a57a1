"""Exact slash-action calculus for eta-type functions.

Multiplier systems are carried as exact :class:`Phase` values:

* ``nu_eta``     -- Knopp's formula for the weight-1/2 eta multiplier,
  valid on all of SL2(Z) (both parity branches, all sign quadrants);
* ``slash_f``    -- Biagioli's transformation of f_{N,rho} under Gamma0(N);
* ``slash_E``    -- Yang's weight-0 transformation of E_{g,h} under SL2(Z),
  with the index reductions folded into the phase;
* ``mu_multiplier`` -- the weight-1 multiplier of eta^2/E_{0,ell} under
  Gamma0(p).

Invariant orders at cusps are computed by transporting each atom to
infinity: scale matrices are split off with :func:`decompose_scaled`, the
base atom is transformed by the appropriate law, and the leading exponent
is read from the image.  Floating-point evaluation of the atoms (bottom
of the module) exists only so the tests can validate the exact phases
against direct computation on the upper half-plane.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from .cyclotomic import CycNum, Phase
from .qseries import EtaAtom, EtaProduct, bernoulli_p2

__all__ = [
    "Matrix2",
    "Cusp",
    "SlashResult",
    "jacobi",
    "nu_eta",
    "nu_theta1",
    "scale_conjugate",
    "slash_f",
    "slash_E",
    "mu_multiplier",
    "decompose_scaled",
    "ord_at_cusp",
    "etaquot_ord_closed",
    "eta_value",
    "f_value",
    "E_value",
    "eta_product_value",
    "slash_value",
]


@dataclass(frozen=True)
class Matrix2:
    """An element of SL2(Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant must be 1: {self}")

    @staticmethod
    def identity() -> "Matrix2":
        return Matrix2(1, 0, 0, 1)

    @staticmethod
    def S() -> "Matrix2":
        return Matrix2(0, -1, 1, 0)

    @staticmethod
    def T(b: int = 1) -> "Matrix2":
        return Matrix2(1, b, 0, 1)

    def __matmul__(self, o: "Matrix2") -> "Matrix2":
        return Matrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self) -> "Matrix2":
        return Matrix2(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "Matrix2":
        return Matrix2(-self.a, -self.b, -self.c, -self.d)

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


@dataclass(frozen=True)
class Cusp:
    """A cusp a/c in lowest terms, with c >= 0; infinity is 1/0."""

    a: int
    c: int

    def __post_init__(self):
        a, c = self.a, self.c
        if a == 0 and c == 0:
            raise ValueError("0/0 is not a cusp")
        g = gcd(a, c)
        a, c = a // g, c // g
        if c < 0 or (c == 0 and a < 0):
            a, c = -a, -c
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    @staticmethod
    def infinity() -> "Cusp":
        return Cusp(1, 0)

    @property
    def is_infinity(self) -> bool:
        return self.c == 0

    def matrix_to(self) -> Matrix2:
        """Some A in SL2(Z) with A(infinity) = a/c."""
        if self.c == 0:
            return Matrix2.identity()
        g, u, v = _ext_gcd(self.a, self.c)
        # u*a + v*c = 1  ->  det [a, -v; c, u] = a*u + v*c = 1
        return Matrix2(self.a, -v, self.c, u)

    def __str__(self):
        if self.c == 0:
            return "oo"
        return f"{self.a}/{self.c}" if self.c != 1 else str(self.a)

    @staticmethod
    def parse(s: str) -> "Cusp":
        s = s.strip()
        if s in ("oo", "inf", "infinity", "i*oo"):
            return Cusp(1, 0)
        if "/" in s:
            num, den = s.split("/")
            return Cusp(int(num), int(den))
        return Cusp(int(s), 1)


@dataclass(frozen=True)
class SlashResult:
    """Image of an atom (or product) under a weight-k slash action."""

    phase: Phase
    target: EtaProduct
    weight: Fraction


def _ext_gcd(x: int, y: int):
    if y == 0:
        return (x, 1, 0) if x >= 0 else (-x, -1, 0)
    g, u, v = _ext_gcd(y, x % y)
    return g, v, u - (x // y) * v


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs positive odd n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _sign_phase(s: int) -> Phase:
    return Phase.one() if s >= 0 else Phase.minus_one()


def nu_eta(A: Matrix2) -> Phase:
    """Knopp's eta multiplier: eta|[A]_(1/2) = nu_eta(A) eta.

    The branch of (cz+d)^(-1/2) is principal; both parity branches carry
    Jacobi-symbol sign conventions valid for negative entries.  Anchors:
    nu_eta(T) = e^(pi i/12), nu_eta(S) = e^(-pi i/4).
    """
    a, b, c, d = A.entries()
    if c == 0:
        # A = +-T^(+-b); for d = -1 the principal branch contributes e^(-pi i/2)
        if d > 0:
            return Phase.from_half_turns(Fraction(b, 12))
        return Phase.from_half_turns(Fraction(-b, 12) - Fraction(1, 2))
    if c % 2:
        s = jacobi(d, abs(c))
        e = (a + d) * c - b * d * (c * c - 1) - 3 * c
        return _sign_phase(s) * Phase.from_half_turns(Fraction(e, 12))
    s = jacobi(c, abs(d))
    if c < 0 and d < 0:
        s = -s
    e = (a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d
    return _sign_phase(s) * Phase.from_half_turns(Fraction(e, 12))


def nu_theta1(A: Matrix2) -> Phase:
    """The theta multiplier nu_eta^3."""
    return nu_eta(A) ** 3


def scale_conjugate(A: Matrix2, delta: int) -> Matrix2:
    """The conjugate (a, b*delta; c/delta, d), defined when delta | c.

    eta(delta*z)|[A]_(1/2) = nu_eta(scale_conjugate(A, delta)) eta(delta*z).
    """
    if A.c % delta:
        raise ValueError(f"scale conjugate needs {delta} | c, got c={A.c}")
    return Matrix2(A.a, A.b * delta, A.c // delta, A.d)


def slash_f(N: int, rho: int, A: Matrix2) -> SlashResult:
    """Biagioli's transformation of f_{N,rho} under A in Gamma0(N).

    f_{N,rho}|[A]_(1/2) = (-1)^(rho*b + floor(rho*a/N) + floor(rho/N))
                          e^(pi i a b rho^2 / N) nu_theta1(^N A) f_{N, rho*a},
    with ^N A = (a, bN; c/N, d).  The image index is reduced to the
    canonical range (the index relations are sign-free).
    """
    if A.c % N:
        raise ValueError(f"slash_f needs A in Gamma0({N}), got c={A.c}")
    a, b, _, _ = A.entries()
    if (rho * a) % N == 0:
        raise ValueError("image index rho*a vanishes mod N")
    sign_exp = rho * b + (rho * a) // N + rho // N
    phase = (Phase.from_half_turns(sign_exp)
             * Phase.from_half_turns(Fraction(a * b * rho * rho, N))
             * nu_theta1(scale_conjugate(A, N)))
    target = EtaProduct([(EtaAtom.f(N, rho * a), 1)])
    return SlashResult(phase, target, Fraction(1, 2))


def slash_E(p: int, g: int, h: int, A: Matrix2) -> SlashResult:
    """Yang's weight-0 transformation E_{g,h}(Az) = phase * E_{g',h'}(z).

    Valid for every A in SL2(Z); (g' h') = (g h)A, then reduced to
    0 <= g' < p, 0 <= h' < p with the reduction factors -zeta^(+-h)
    folded into the phase.
    """
    if g % p == 0 and h % p == 0:
        raise ValueError("E_{g,h} needs (g,h) not both 0 mod p")
    a, b, c, d = A.entries()
    if c == 0:
        if d < 0:
            a, b, c, d = -a, -b, -c, -d  # weight 0: A and -A act identically
        phase = Phase.from_half_turns(b * bernoulli_p2(Fraction(g, p)))
        g2, h2 = g, b * g + h
    else:
        if c % 2:
            eps = Phase.from_half_turns(Fraction(b * d * (1 - c * c) + c * (a + d - 3), 6))
        else:
            eps = Phase.from_half_turns(Fraction(-1, 2)
                                        + Fraction(a * c * (1 - d * d) + d * (b - c + 3), 6))
        delta = (Fraction(g * g * a * b + 2 * g * h * b * c + h * h * c * d, p * p)
                 - Fraction(g * b + h * (d - 1), p))
        phase = eps * Phase.from_half_turns(delta)
        g2, h2 = g * a + h * c, g * b + h * d
    while g2 >= p:
        g2 -= p
        phase = phase * Phase.from_half_turns(1 + Fraction(-2 * h2, p))
    while g2 < 0:
        phase = phase * Phase.from_half_turns(1 + Fraction(2 * h2, p))
        g2 += p
    h2 %= p
    target = EtaProduct([(EtaAtom.E(p, g2, h2), 1)])
    return SlashResult(phase, target, Fraction(0))


def mu_multiplier(p: int, A: Matrix2, ell: int) -> Phase:
    """Multiplier of eta(z)^2/E_{0,ell} under Gamma0(p), weight 1:

    mu(A, ell) = e^(pi i (ell(d-1)/p + c d ell^2/p^2 - c ell/p)),
    sending the index ell to the least nonnegative residue of d*ell.
    Equals 1 on Gamma0(p^2) intersect Gamma1(p).
    """
    if A.c % p:
        raise ValueError(f"mu needs A in Gamma0({p}), got c={A.c}")
    _, _, c, d = A.entries()
    return Phase.from_half_turns(Fraction(ell * (d - 1), p)
                                 + Fraction(c * d * ell * ell, p * p)
                                 - Fraction(c * ell, p))


def decompose_scaled(delta: int, A: Matrix2):
    """Split diag(delta,1)*A = B*T with B in SL2(Z), T = (x y; 0 w) upper
    triangular, x*w = delta, x,w > 0, 0 <= y < w."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    a, b, c, d = A.entries()
    x = gcd(delta * a, c)
    if x == 0:
        raise ValueError("degenerate matrix")
    b1, b3 = (delta * a) // x, c // x
    g, u, v = _ext_gcd(b1, b3)
    if g != 1:
        raise ValueError("internal error: nontrivial gcd after division")
    # u*b1 + v*b3 = 1 -> take b4 = u, b2 = -v so b1*b4 - b2*b3 = 1
    b4, b2 = u, -v
    w = delta // x
    y = b4 * delta * b - b2 * d
    j = y // w
    y -= j * w
    B = Matrix2(b1, b1 * j + b2, b3, b3 * j + b4)
    # sanity: B * T = diag(delta,1) * A
    assert (B.a * x, B.a * y + B.b * w, B.c * x, B.c * y + B.d * w) == \
        (delta * a, delta * b, c, d)
    return B, (x, y, w)


def _atom_ord(atom: EtaAtom, A: Matrix2) -> Fraction:
    """Invariant order contribution of one atom at the cusp A(infinity)."""
    if atom.kind == "eta":
        _, (x, _, w) = decompose_scaled(atom.delta, A)
        return Fraction(1, 24) * Fraction(x, w)
    if atom.kind == "E":
        B, (x, _, w) = decompose_scaled(atom.delta, A)
        res = slash_E(atom.a, atom.b, atom.c, B)
        ((target, _),) = res.target.factors
        return bernoulli_p2(Fraction(target.b, atom.a)) / 2 * Fraction(x, w)
    if atom.kind == "geta":
        # eta_{N,k}(delta z) = E_{k,0}(N delta z) with modulus N
        inner = EtaAtom.E(atom.a, atom.b, 0, delta=atom.a * atom.delta)
        return _atom_ord(inner, A)
    if atom.kind == "f":
        # f_{N,rho}(delta z) = eta(N delta z) * eta_{N,rho}(delta z)
        eta_part = _atom_ord(EtaAtom.eta(atom.a * atom.delta), A)
        geta_part = _atom_ord(EtaAtom.geta(atom.a, atom.b, atom.delta), A)
        return eta_part + geta_part
    raise ValueError(f"unsupported atom kind {atom.kind!r}")


def ord_at_cusp(F: EtaProduct, cusp: Cusp, A: "Matrix2 | None" = None) -> Fraction:
    """Invariant order ord(F; a/c) = ord(F|[A]; infinity), A(infinity) = a/c.

    Independent of the choice of A; pass one explicitly to exercise that.
    """
    if A is None:
        A = cusp.matrix_to()
    elif Cusp(A.a, A.c) != cusp:
        raise ValueError(f"{A} does not send infinity to {cusp}")
    total = Fraction(0)
    for atom, n in F.factors:
        total += n * _atom_ord(atom, A)
    return total


def etaquot_ord_closed(F: EtaProduct, cusp: Cusp) -> Fraction:
    """Closed-form order of a pure eta quotient prod eta(m z)^(r_m):

    ord(F; a/c) = sum_m gcd(m, c)^2 r_m / (24 m),  with gcd(m, 0) = m.
    """
    total = Fraction(0)
    for atom, n in F.factors:
        if atom.kind != "eta":
            raise ValueError(f"closed form only covers eta atoms, got {atom.kind}")
        m = atom.delta
        g = m if cusp.c == 0 else gcd(m, cusp.c)
        total += Fraction(g * g * n, 24 * m)
    return total


# ----------------------------------------------------------------------
# numeric evaluation (cross-checks only)
# ----------------------------------------------------------------------

def _product_terms(im: float) -> int:
    return max(80, int(15.0 / im) + 20)


def eta_value(z: complex, delta: int = 1) -> complex:
    """eta(delta z) evaluated by the defining product."""
    w = delta * z
    q = cmath.exp(2j * cmath.pi * w)
    val = cmath.exp(2j * cmath.pi * w / 24)
    qq = q
    for _ in range(_product_terms(w.imag)):
        val *= 1 - qq
        qq *= q
        if abs(qq) < 1e-21:
            break
    return val


def E_value(p: int, g: int, h: int, z: complex, delta: int = 1) -> complex:
    w = delta * z
    scale = 1.0 + 0j
    while g >= p:
        g -= p
        scale *= -cmath.exp(-2j * cmath.pi * h / p)
    while g < 0:
        scale *= -cmath.exp(2j * cmath.pi * h / p)
        g += p
    val = cmath.exp(2j * cmath.pi * w * float(bernoulli_p2(Fraction(g, p)) / 2))
    zh = cmath.exp(2j * cmath.pi * h / p)
    for m in range(1, _product_terms(w.imag)):
        f1 = cmath.exp(2j * cmath.pi * w * (m - 1 + g / p))
        f2 = cmath.exp(2j * cmath.pi * w * (m - g / p))
        val *= (1 - zh * f1) * (1 - zh.conjugate() * f2)
        if abs(f1) < 1e-21 and abs(f2) < 1e-21:
            break
    return scale * val


def f_value(N: int, rho: int, z: complex, delta: int = 1) -> complex:
    r = rho % N
    if r == 0:
        raise ValueError("f_{N,rho} undefined for rho = 0 mod N")
    return eta_value(z, N * delta) * E_value(N, r, 0, N * z, delta)


def _geta_value(N: int, k: int, z: complex, delta: int = 1) -> complex:
    return E_value(N, k % N, 0, N * z, delta)


def eta_product_value(F: EtaProduct, z: complex) -> complex:
    val = 1 + 0j
    for atom, n in F.factors:
        if atom.kind == "eta":
            v = eta_value(z, atom.delta)
        elif atom.kind == "f":
            v = f_value(atom.a, atom.b, z, atom.delta)
        elif atom.kind == "geta":
            v = _geta_value(atom.a, atom.b, z, atom.delta)
        else:
            v = E_value(atom.a, atom.b, atom.c, z, atom.delta)
        val *= v ** n
    s = F.scalar
    if isinstance(s, CycNum):
        val *= s.complex_embedding()
    else:
        val *= float(s)
    return val


def slash_value(F, A: Matrix2, weight, z: complex) -> complex:
    """(cz+d)^(-weight) F(Az), principal branch; F maps complex -> complex."""
    w = A.c * z + A.d
    return F(A.apply(z)) * w ** (-float(weight))
