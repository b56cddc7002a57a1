"""Command-line front end.

Subcommands map one-to-one onto library operations:

  series              q-expansion of one atom or of C(zeta_p^ell, q)
  crank-table         CSV of M(k, p, n) rows
  dissect             K_{p,m} by either construction, or both compared
  cusp-orders         ORD table of an identity's terms at all cusps
  verify              valence-formula certificate for an identity file
  prove-crank-theorem the K_{p,0} = 0 certificate for p in {5, 7, 11}
  check-symmetry      coefficient symmetry (m = 0) or a Gamma0(p) slash map
  fit                 solve for identity coefficients from series data

Exit status: 0 on success/verified, 1 on refutation, 2 on usage errors.
All commands accept --json for a machine-readable report; the "seconds"
field is the only part that varies between identical runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .cyclotomic import CycNum
from .dissection import K_combinatorial, K_modular
from .etatransform import Matrix2
from .partitions import CrankTable
from .qseries import E_series, QSeries, eta_series, f_series, geta_series
from .partitions import crank_series
from .verifier import (IdentitySpec, fit_identity, gamma0_symmetry_check,
                       ord_table, prove_crank_theorem, symmetry_check_K0,
                       valence_certificate)

MAX_ORDER = 500


def worker_count() -> int:
    """Parallelism cap from CRANKLAB_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("CRANKLAB_THREADS", "1")))
    except ValueError:
        return 1


def _emit(args, command: str, inputs: dict, outcome: str, artifacts: dict,
          t0: float, text: str) -> None:
    if args.json:
        report = {
            "command": command,
            "inputs": inputs,
            "outcome": outcome,
            "artifacts": artifacts,
            "seconds": round(time.time() - t0, 3),
        }
        json.dump(report, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")
    else:
        print(text)


def _order(args, default):
    order = Fraction(args.order) if args.order is not None else Fraction(default)
    if order > MAX_ORDER:
        raise SystemExit(2)
    return order


# ---- series ----

def cmd_series(args) -> int:
    t0 = time.time()
    order = _order(args, 32)
    kind = args.kind
    if kind == "eta":
        ser = eta_series(args.delta, order)
    elif kind == "f":
        ser = f_series(args.N, args.rho, order, args.delta)
    elif kind == "geta":
        ser = geta_series(args.N, args.k, order, args.delta)
    elif kind == "E":
        ser = E_series(args.p, args.g, args.h, order, args.delta)
    elif kind == "crank":
        ser = crank_series(args.p, args.ell, order)
    else:
        raise SystemExit(2)
    _emit(args, "series", {"kind": kind, "order": str(order)}, "ok",
          {"D": ser.D, "terms": ser.dump().split("\n") if ser.terms else []},
          t0, ser.dump())
    return 0


def cmd_crank_table(args) -> int:
    t0 = time.time()
    table = CrankTable.compute(args.p, args.max_n, args.convention)
    lines = ["n," + ",".join(f"M({k})" for k in range(args.p))]
    for n, row in enumerate(table.rows):
        lines.append(f"{n}," + ",".join(str(v) for v in row))
    _emit(args, "crank-table",
          {"p": args.p, "max_n": args.max_n, "convention": args.convention},
          "ok", {"rows": [list(r) for r in table.rows]}, t0, "\n".join(lines))
    return 0


def cmd_dissect(args) -> int:
    t0 = time.time()
    order = _order(args, 24)
    out = {}
    if args.method in ("comb", "both"):
        out["comb"] = K_combinatorial(args.p, args.m, args.ell, order)
    if args.method in ("modular", "both"):
        out["modular"] = K_modular(args.p, args.m, args.ell, order)
    text_parts = []
    verdict = "ok"
    first_diff = None
    for name, elem in out.items():
        text_parts.append(f"# K_{{{args.p},{args.m}}}(zeta^{args.ell}) [{name}]")
        text_parts.append(elem.series.dump())
    if args.method == "both":
        diff = out["comb"].series - out["modular"].series
        if diff.is_zero():
            text_parts.append(f"# constructions agree below q^{diff.trunc_exponent}")
        else:
            first_diff = str(diff.leading()[0])
            verdict = "mismatch"
            text_parts.append(f"# FIRST DISAGREEMENT at q^{first_diff}")
    _emit(args, "dissect",
          {"p": args.p, "m": args.m, "ell": args.ell, "order": str(order),
           "method": args.method},
          verdict,
          {"series": {k: v.series.dump().split("\n") for k, v in out.items()},
           "first_disagreement": first_diff},
          t0, "\n".join(text_parts))
    return 0 if verdict == "ok" else 1


def cmd_cusp_orders(args) -> int:
    t0 = time.time()
    spec = IdentitySpec.load(args.spec)
    table = ord_table(spec, include_zero=args.include_zero)
    if worker_count() > 1:
        # rows are independent; recompute in parallel when asked to
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            list(pool.map(lambda r: r, table.rows))
    _emit(args, "cusp-orders", {"p": spec.p, "spec": args.spec}, "ok",
          table.to_json(), t0, table.text())
    return 0


def cmd_verify(args) -> int:
    t0 = time.time()
    spec = IdentitySpec.load(args.spec)
    order = Fraction(args.order) if args.order is not None else None
    cert = valence_certificate(spec, order=order)
    _emit(args, "verify", {"spec": args.spec},
          "verified" if cert.verified else "refuted",
          {"certificate": cert.to_json()}, t0, cert.text())
    return 0 if cert.verified else 1


def cmd_prove_crank_theorem(args) -> int:
    t0 = time.time()
    res = prove_crank_theorem(args.p)
    cert = res["certificate"]
    ok = cert.verified and res["first_case_equal"]
    text = cert.text() + "\n"
    text += (f"  crank counts at n={res['first_case_n']}: {res['first_case_counts']}\n"
             f"  {res['theorem']}")
    _emit(args, "prove-crank-theorem", {"p": args.p},
          "verified" if ok else "refuted",
          {"certificate": cert.to_json(),
           "first_case_counts": res["first_case_counts"],
           "theorem": res["theorem"]},
          t0, text)
    return 0 if ok else 1


def cmd_check_symmetry(args) -> int:
    t0 = time.time()
    if args.matrix is None:
        spec = IdentitySpec.load(args.spec)
        rep = symmetry_check_K0(spec)
        signs = ["".join("+" if x > 0 else "-" for x in s) for s in rep.signs]
        _emit(args, "check-symmetry", {"spec": args.spec, "mode": "K0"},
              "consistent" if rep.consistent else "sign-mismatch",
              {"signs": signs,
               "l_formula": ["".join("+" if x > 0 else "-" for x in s)
                             for s in rep.l_formula_signs]},
              t0, rep.text())
        return 0 if rep.consistent else 1
    a, k, p, d = (int(x) for x in args.matrix.split(","))
    A = Matrix2(a, k, p, d)
    spec_m = IdentitySpec.load(os.path.join(args.spec_dir, f"k{p}_{args.m}.json"))
    m_image = (args.m * a * a) % p
    spec_im = IdentitySpec.load(os.path.join(args.spec_dir, f"k{p}_{m_image}.json"))
    res = gamma0_symmetry_check(spec_m, spec_im, A)
    _emit(args, "check-symmetry",
          {"m": args.m, "matrix": args.matrix, "mode": "gamma0"},
          "verified" if res.verified else "refuted",
          {"m_image": res.m_image, "multiplier": res.multiplier.to_json(),
           "phase": res.phase_part.to_json()},
          t0, res.text())
    return 0 if res.verified else 1


def cmd_fit(args) -> int:
    t0 = time.time()
    spec = IdentitySpec.load(args.spec)
    order = Fraction(args.order) if args.order is not None else None
    fitted = fit_identity(spec, order)
    text = [f"fitted {len(fitted.terms)} coefficients "
            f"({len(fitted.nonzero_terms())} nonzero):"]
    for t in fitted.terms:
        text.append(f"  c(r={t.r}, k={t.k}) = {t.coeff}")
    outcome = "ok"
    cert_json = None
    if args.certify:
        cert = valence_certificate(fitted)
        cert_json = cert.to_json()
        outcome = "verified" if cert.verified else "refuted"
        text.append(cert.text())
    if args.write:
        fitted.save(args.write)
        text.append(f"wrote {args.write}")
    _emit(args, "fit", {"spec": args.spec}, outcome,
          {"identity": fitted.to_json(), "certificate": cert_json},
          t0, "\n".join(text))
    return 0 if outcome in ("ok", "verified") else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cranklab",
        description="Exact crank dissections, eta-product identities and "
                    "valence-formula certificates.")
    ap.add_argument("--version", action="version", version=f"cranklab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable report")

    s = sub.add_parser("series", help="q-expansion of one atom")
    s.add_argument("--kind", required=True,
                   choices=["eta", "f", "geta", "E", "crank"])
    s.add_argument("--delta", type=int, default=1)
    s.add_argument("--N", type=int)
    s.add_argument("--rho", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--g", type=int)
    s.add_argument("--h", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--order", type=str)
    common(s)
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("crank-table", help="CSV of crank residue counts")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--convention", choices=["series", "comb"], default="series")
    common(s)
    s.set_defaults(func=cmd_crank_table)

    s = sub.add_parser("dissect", help="dissection element K_{p,m}")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--order", type=str)
    s.add_argument("--method", choices=["comb", "modular", "both"], default="comb")
    common(s)
    s.set_defaults(func=cmd_dissect)

    s = sub.add_parser("cusp-orders", help="ORD table for an identity file")
    s.add_argument("--p", type=int)
    s.add_argument("--spec", required=True)
    s.add_argument("--include-zero", action="store_true",
                   help="keep zero-coefficient basis terms")
    common(s)
    s.set_defaults(func=cmd_cusp_orders)

    s = sub.add_parser("verify", help="valence certificate for an identity file")
    s.add_argument("spec")
    s.add_argument("--order", type=str)
    common(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("prove-crank-theorem", help="certify K_{p,0} = 0")
    s.add_argument("--p", type=int, required=True, choices=[5, 7, 11])
    common(s)
    s.set_defaults(func=cmd_prove_crank_theorem)

    s = sub.add_parser("check-symmetry",
                       help="K0 coefficient symmetry, or a Gamma0(p) slash map")
    s.add_argument("--spec", help="identity file (K0 mode)")
    s.add_argument("--m", type=int, help="dissection index (gamma0 mode)")
    s.add_argument("--matrix", help="a,k,p,d with det 1 (gamma0 mode)")
    s.add_argument("--spec-dir", default="testdata")
    common(s)
    s.set_defaults(func=cmd_check_symmetry)

    s = sub.add_parser("fit", help="solve for identity coefficients")
    s.add_argument("--spec", required=True)
    s.add_argument("--order", type=str)
    s.add_argument("--certify", action="store_true")
    s.add_argument("--write", help="write the fitted identity to this path")
    common(s)
    s.set_defaults(func=cmd_fit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
