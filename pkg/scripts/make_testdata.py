#!/usr/bin/env python3
"""Regenerate the identity corpus under testdata/.

The mod-11 and mod-13 coefficients are the known closed forms (checked
exactly against the dissection series by the test suite); the mod-17 and
mod-19 files carry only the basis shapes, with zero coefficients, for the
fitting pipeline to fill in.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cranklab.cyclotomic import CycNum
from cranklab.qseries import EtaAtom
from cranklab.verifier import IdentitySpec, IdentityTerm

OUT = pathlib.Path(__file__).resolve().parents[1] / "testdata"


def Z(p, powers):
    return CycNum.from_zeta_powers(p, powers)


def write(spec, name):
    spec.save(OUT / name)
    print("wrote", name)


def mod11():
    p = 11
    vec_a = (3, -1, 0, 0, 0, 0)      # eta(11z)^3 / f_{11,r}
    vec_b = (3, 1, 0, 0, -1, -1)     # eta(11z)^3 f_{11,r} / (f_{11,4r} f_{11,5r})
    data = {
        0: None,
        5: (vec_a, 1, Z(p, {0: 1})),
        9: (vec_a, 2, Z(p, {0: 1, 2: 1, 4: 1, 7: 1, 9: 1})),
        1: (vec_a, 3, -Z(p, {0: 1, 2: 1, 3: 1, 5: 1, 6: 1, 8: 1, 9: 1})),
        3: (vec_a, 4, -Z(p, {0: 1, 4: 1, 7: 1})),
        4: (vec_a, 5, -Z(p, {3: 1, 8: 1})),
        2: (vec_b, 1, -Z(p, {0: 1, 2: 1, 5: 1, 6: 1, 9: 1})),
        8: (vec_b, 2, Z(p, {0: 1, 3: 1, 8: 1})),
        7: (vec_b, 3, Z(p, {2: 1, 9: 1})),
        10: (vec_b, 4, -Z(p, {2: 1, 4: 1, 7: 1, 9: 1})),
        6: (vec_b, 5, -Z(p, {0: 2, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1, 7: 1, 8: 1, 9: 1})),
    }
    for m in range(11):
        if data[m] is None:
            spec = IdentitySpec(p=p, m=0, weight=1, prefactor=(), terms=())
        else:
            nvec, r, coeff = data[m]
            spec = IdentitySpec(p=p, m=m, weight=1, prefactor=(),
                                terms=(IdentityTerm(coeff, nvec, r, 0),))
        write(spec, f"k11_{m}.json")


def mod13():
    p = 13
    n1 = (15, -1, -3, -2, -2, -2, -3)
    c_m0 = {
        1: Z(p, {0: 2, 2: 2, 11: 2, 4: 1, 9: 1, 5: 1, 8: 1, 6: 1, 7: 1}),
        2: -Z(p, {11: 1, 10: 1, 7: 1, 6: 1, 3: 1, 2: 1}),
        3: Z(p, {11: 1, 10: 1, 9: 1, 8: 1, 5: 1, 4: 1, 3: 1, 2: 1, 0: 1}),
        4: Z(p, {10: 1, 9: -1, 8: 1, 5: 1, 4: -1, 3: 1, 0: 1}),
        5: -Z(p, {10: 1, 9: 1, 7: 1, 6: 1, 4: 1, 3: 1, 0: 2}),
        6: -Z(p, {8: 1, 5: 1}),
    }
    write(IdentitySpec(p=p, m=0, weight=1, prefactor=(),
                       terms=tuple(IdentityTerm(c_m0[r], n1, r, 0) for r in range(1, 7))),
          "k13_0.json")

    c2_0 = {
        1: -Z(p, {0: 1, 2: 1, 4: 1, 6: 1, 7: 1, 9: 1, 11: 1}),
        2: Z(p, {0: -1, 2: 1, 4: -1, 5: -1, 8: -1, 9: -1, 11: 1}),
        3: -Z(p, {4: 1, 9: 1}),
        4: Z(p, {0: 2, 2: 1, 3: 1, 5: 1, 8: 1, 10: 1, 11: 1}),
        5: -Z(p, {3: 1, 6: 1, 7: 1, 10: 1}),
        6: -Z(p, {2: 1, 3: 1, 4: 1, 5: 2, 6: 2, 7: 2, 8: 2, 9: 1, 10: 1, 11: 1}),
    }
    c2_m1 = {6: -Z(p, {3: 1, 6: 1, 7: 1, 10: 1})}
    terms = [IdentityTerm(c2_0[r], n1, r, 0) for r in range(1, 7)]
    terms += [IdentityTerm(c2_m1.get(r, CycNum.zero(p)), n1, r, -1) for r in range(1, 7)]
    write(IdentitySpec(p=p, m=2, weight=1,
                       prefactor=((EtaAtom.f(p, 1), 1), (EtaAtom.f(p, 6), -1)),
                       terms=tuple(terms)),
          "k13_2.json")

    c1_0 = {
        1: Z(p, {11: 1, 9: 1, 7: 1, 6: 1, 4: 1, 2: 1, 0: 2}),
        2: -Z(p, {9: 1, 8: 1, 5: 1, 4: 1}),
        3: Z(p, {11: 1, 10: 1, 9: 1, 4: 1, 3: 1, 2: 1}),
        4: -Z(p, {11: 1, 10: 1, 9: 1, 8: 1, 7: 1, 6: 1, 5: 1, 4: 1, 3: 1, 2: 1, 0: 1}),
        5: Z(p, {11: -1, 10: 1, 8: -1, 5: -1, 3: 1, 2: -1, 0: 1}),
        6: -Z(p, {10: 1, 9: 1, 8: 1, 7: 2, 6: 2, 5: 1, 4: 1, 3: 1}),
    }
    c1_m1 = {6: -Z(p, {11: 1, 10: 1, 9: 1, 8: 1, 7: 1, 6: 1, 5: 1, 4: 1, 3: 1, 2: 1, 0: 1})}
    terms = [IdentityTerm(c1_0[r], n1, r, 0) for r in range(1, 7)]
    terms += [IdentityTerm(c1_m1.get(r, CycNum.zero(p)), n1, r, -1) for r in range(1, 7)]
    write(IdentitySpec(p=p, m=1, weight=1,
                       prefactor=((EtaAtom.f(p, 1), 1), (EtaAtom.f(p, 5), -1)),
                       terms=tuple(terms)),
          "k13_1.json")


def shapes_17_19():
    z17 = CycNum.zero(17)
    n1 = (15, -3, -1, -2, -1, -2, -1, -2, -1)
    n2 = (27, -2, -2, -3, -2, -4, -4, -4, -4)

    def terms17(kr):
        out = []
        for k in kr:
            for nv in (n1, n2):
                for r in range(1, 9):
                    out.append(IdentityTerm(z17, nv, r, k))
        return tuple(out)

    write(IdentitySpec(p=17, m=0, weight=1, prefactor=(), terms=terms17((0, 1))),
          "k17_0_shape.json")
    write(IdentitySpec(p=17, m=12, weight=1,
                       prefactor=((EtaAtom.f(17, 7), 1), (EtaAtom.f(17, 5), -1)),
                       terms=terms17((-1, 0, 1))),
          "k17_12_shape.json")
    write(IdentitySpec(p=17, m=1, weight=1,
                       prefactor=((EtaAtom.f(17, 7), 1), (EtaAtom.f(17, 8), -1)),
                       terms=terms17((-1, 0, 1))),
          "k17_1_shape.json")

    z19 = CycNum.zero(19)
    m0_vecs = (
        (27, -3, -2, -4, -4, -3, -3, -2, -3, -1),
        (39, -5, -2, -5, -5, -3, -5, -2, -5, -5),
        (39, -5, -4, -3, -4, -5, -4, -4, -5, -3),
    )
    mres_vecs = (
        (39, -5, -5, -4, -5, -4, -5, -3, -5, -1),
        (39, -3, -5, -5, -5, -3, -2, -4, -5, -5),
        (39, -4, -5, -4, -3, -3, -4, -5, -5, -4),
    )

    def terms19(vecs, kr):
        out = []
        for k in kr:
            for nv in vecs:
                for r in range(1, 10):
                    out.append(IdentityTerm(z19, nv, r, k))
        return tuple(out)

    write(IdentitySpec(p=19, m=0, weight=1, prefactor=(),
                       terms=terms19(m0_vecs, (0, 1))),
          "k19_0_shape.json")
    write(IdentitySpec(p=19, m=15, weight=1,
                       prefactor=((EtaAtom.f(19, 6), 1), (EtaAtom.f(19, 5), -1)),
                       terms=terms19(mres_vecs, (-1, 0, 1))),
          "k19_15_shape.json")
    write(IdentitySpec(p=19, m=1, weight=1,
                       prefactor=((EtaAtom.f(19, 8), 1), (EtaAtom.f(19, 9), -1)),
                       terms=terms19(mres_vecs, (-1, 0, 1))),
          "k19_1_shape.json")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    mod11()
    mod13()
    shapes_17_19()
