"""Command-line entry point: ``fanokstab classify|beta|barycenter|selftest``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .beta import beta_report, lambda_closed_form, zariski_decomposition
from .classify import CURATED_FACTS, classify_all, emit_table, parse_table_json
from .construction_b import (
    ConstructionB,
    all_families,
    basis_atoms,
    atom_class,
    quartic_number,
)
from .exact import format_rational, poly_integrate
from .polytopes import PolytopeError, barycenter, dual, is_reflexive, load_polytope, moment_polytope_of_del_pezzo, volume
from .surfaces import RejectedFamilyError, make_class, parse_coords, surface


def _cmd_classify(args) -> int:
    sys.stdout.write(emit_table(args.table, args.format))
    return 0


def _cmd_beta(args) -> int:
    T = surface(args.surface)
    try:
        fam = ConstructionB(T, make_class(T, parse_coords(args.n)))
    except (RejectedFamilyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = beta_report(fam)
    if args.json:
        print(report.to_json())
    elif args.report:
        print(report.to_text())
    else:
        print(f"{report.family_id}  lambda={format_rational(report.lam)}  beta={format_rational(report.beta)}")
    return 0


def _cmd_barycenter(args) -> int:
    try:
        fan_polytope = load_polytope(args.file)
    except (OSError, PolytopeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not is_reflexive(fan_polytope):
        print(f"error: {args.file} is not reflexive", file=sys.stderr)
        return 2
    # the file lists fan rays; the barycenter test is on the dual
    moment = dual(fan_polytope)
    bc = barycenter(moment)
    out = {
        "polytope": fan_polytope.name,
        "vertices": len(fan_polytope.vertices),
        "volume": format_rational(volume(moment)),
        "barycenter": [format_rational(x) for x in bc],
        "zero": all(x == 0 for x in bc),
    }
    print(json.dumps(out, indent=2))
    return 0


def _selftest_checks():
    """(name, callable returning bool) pairs; cheap enough to run interactively."""
    expected = {
        "B:p2:N=1": Fraction(-18, 5),
        "B:p2:N=2": Fraction(-192, 5),
        "B:f1:N=(1,0)": Fraction(-38, 5),
        "B:p1xp1:N=(1,1)": Fraction(-96, 5),
    }
    reports = {f.family_id: beta_report(f) for f in all_families()}

    def lambdas():
        return all(reports[k].lam == v for k, v in expected.items()) and reports["B:p1xp1:N=(0,1)"].lam > 0

    def closed_form():
        return all(r.lam == lambda_closed_form(r.b, r.c, r.d, r.e, r.f) for r in reports.values())

    def piece_integrals():
        for fam in all_families():
            inv = fam.invariants
            r = reports[fam.family_id]
            if poly_integrate(r.vol_poly_piece1, 0, 1) != r.a - Fraction(8, 5) * inv.b - 8 * inv.c - 6 * inv.d:
                return False
            if poly_integrate(r.vol_poly_piece2, 1, 2) != Fraction(6, 5) * inv.b - 4 * inv.f + 4 * inv.e:
                return False
        return True

    def zariski():
        for fam in all_families():
            pieces = zariski_decomposition(fam)
            if [p.t_hi for p in pieces] != [1, 2]:
                return False
            neg = pieces[1].negative
            if [neg.slope.coef(n) for n in ("H0", "E2", "E3")] != [1, 1, 1]:
                return False
            if [neg.const.coef(n) for n in ("H0", "E2", "E3")] != [-1, -1, -1]:
                return False
        return True

    def self_intersections():
        for fam in all_families():
            b = fam.invariants.b
            D = fam.divisor("D")
            if quartic_number(D, D, D, D) != -3 * b:
                return False
            for n in ("H0", "E2", "E3"):
                x = fam.divisor(n)
                if quartic_number(x, x, x, x) != -b:
                    return False
        return True

    def vanishing():
        for fam in all_families():
            H0, D = fam.divisor("H0"), fam.divisor("D")
            for a in basis_atoms(fam):
                x = atom_class(a, fam)
                if quartic_number(H0, H0, D, x) != 0:
                    return False
                for m in fam.T.basis():
                    s = fam.sigma(m)
                    if quartic_number(s, s, s, x) != 0:
                        return False
        return True

    def toric():
        zero = {k: all(v == 0 for v in barycenter(moment_polytope_of_del_pezzo(k))) for k in ("P2", "P1xP1", "F1", "F_2pts", "F_3pts")}
        if zero != {"P2": True, "P1xP1": True, "F1": False, "F_2pts": False, "F_3pts": True}:
            return False
        return barycenter(moment_polytope_of_del_pezzo("F1")) == (Fraction(1, 12), Fraction(1, 12))

    def table():
        verdicts = classify_all()
        marks = [v.kpoly for v in verdicts]
        rows = parse_table_json(emit_table("delta3", "json"))
        return (
            len(verdicts) == 19
            and sum(marks) == 5
            and sum(v.family.toric for v in verdicts) == 14
            and [r["kpoly"] for r in rows] == marks
            and set(CURATED_FACTS) == {v.family.id for v in verdicts if v.beta_sign == "+"}
        )

    return [
        ("lambda values", lambdas),
        ("lambda integral vs closed form", closed_form),
        ("volume piece integrals", piece_integrals),
        ("Zariski chambers", zariski),
        ("exceptional self-intersections", self_intersections),
        ("vanishing monomials", vanishing),
        ("toric del Pezzo barycenters", toric),
        ("delta=3 verdict table", table),
    ]


def _cmd_selftest(args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            ok = bool(check())
        except Exception as exc:  # report and keep going
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fanokstab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="print a verdict table")
    p.add_argument("--table", choices=("delta3", "high-delta"), default="delta3")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("beta", help="beta invariant of D on a Construction-B 4-fold")
    p.add_argument("--surface", required=True, choices=("p2", "p1xp1", "f1"))
    p.add_argument("--n", required=True, help='coordinates of N, e.g. "1" or "0,1" (F1 basis: line, exceptional curve)')
    group = p.add_mutually_exclusive_group()
    group.add_argument("--report", action="store_true", help="full text report")
    group.add_argument("--json", action="store_true", help="full report as JSON")
    p.set_defaults(func=_cmd_beta)

    p = sub.add_parser("barycenter", help="barycenter of the moment polytope of a fan-polytope file")
    p.add_argument("--file", required=True)
    p.set_defaults(func=_cmd_barycenter)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
