#!/usr/bin/env python3
"""Regenerate src/fanokstab/data/{K1..K4,U1..U8}.txt from the twisted F-bundle fans.

With --check, also re-run the enumeration over every toric del Pezzo base
and confirm the labelled families are exactly the Fano ones found.
"""

import argparse
import sys
from pathlib import Path

from fanokstab.polytopes import LatticePolytope, format_polytope
from fanokstab.toric_fans import (
    BASE_KINDS,
    TORIC_FAMILIES,
    enumerate_construction_a,
    isomorphic,
    toric_family_fan,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "fanokstab" / "data"
RADIUS = {"P2": 3, "P1xP1": 2, "F1": 2, "F_2pts": 2, "F_3pts": 1}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="re-run the full enumeration")
    args = ap.parse_args()

    for fid, (base, twists) in TORIC_FAMILIES.items():
        fan = toric_family_fan(fid)
        assert fan.is_smooth() and fan.is_fano(), fid
        poly = LatticePolytope(sorted(fan.rays), name=fid)
        comments = [
            f"{fid}: smooth toric Fano 4-fold, rho={fan.picard_rank()}, (-K)^4={fan.anticanonical_degree()}",
            "vertices are the primitive ray generators of the fan; the moment polytope is the dual",
            f"F-bundle over {base}, base-ray twists {list(twists)}",
        ]
        (DATA / f"{fid}.txt").write_text(format_polytope(poly, comments), encoding="utf-8")
        print(f"wrote {fid}")

    if args.check:
        labelled = [toric_family_fan(f) for f in TORIC_FAMILIES]
        found = []
        for base in BASE_KINDS:
            classes = enumerate_construction_a(base, RADIUS[base])
            print(f"{base}: {len(classes)} Fano class(es)")
            found.extend(classes)
        unmatched = [f for f in found if not any(isomorphic(f, g) for g in labelled)]
        print(f"total {len(found)}, not among K/U: {len(unmatched)} (expected 2: F'xF and FxF)")
        return 0 if len(found) == 14 and len(unmatched) == 2 else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
