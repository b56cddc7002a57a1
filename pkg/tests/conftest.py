import pathlib
import sys
from math import gcd

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cranklab.etatransform import Matrix2

TESTDATA = pathlib.Path(__file__).resolve().parents[1] / "testdata"


@pytest.fixture(scope="session")
def testdata():
    return TESTDATA


def _ext_gcd(x, y):
    if y == 0:
        return (x, 1, 0) if x >= 0 else (-x, -1, 0)
    g, u, v = _ext_gcd(y, x % y)
    return g, v, u - (x // y) * v


def rand_sl2(rng, bound=8):
    """A random SL2(Z) element with entries of moderate size."""
    while True:
        a = rng.randint(-bound, bound)
        c = rng.randint(-bound, bound)
        if (a, c) != (0, 0) and gcd(a, c) == 1:
            break
    g, u, v = _ext_gcd(a, c)
    d, b = u, -v
    t = rng.randint(-3, 3)
    return Matrix2(a, b + t * a, c, d + t * c)


def rand_gamma0(rng, N, cmax=2, dmax=8):
    """A random element of Gamma0(N)."""
    while True:
        c = N * rng.randint(-cmax, cmax)
        d = rng.randint(-dmax, dmax)
        if gcd(c, d) == 1 and not (c == 0 and d < 0):
            break
    g, u, v = _ext_gcd(d, -c)
    if g == -1:
        u, v = -u, -v
    return Matrix2(u, v, c, d)
