"""K-polystability verdicts for the smooth Fano 4-folds with Lefschetz defect >= 3.

Dispatch by family kind:

* Construction B (non-toric): sign of beta(D).  A negative value rules out
  K-semistability.  A positive value proves nothing by itself; the one
  positive family is settled by a curated product fact.
* toric, not a product: barycenter of the moment polytope.
* products of surfaces: conjunction of the factors' verdicts.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .beta import beta_report
from .construction_b import FAMILIES as B_FAMILIES
from .construction_b import family as b_family
from .exact import format_rational
from .polytopes import barycenter, dual, is_reflexive
from .toric_fans import load_toric_family


class UnknownFamilyError(KeyError):
    pass


class InconclusiveError(RuntimeError):
    """The available criteria do not decide this family."""


# -- del Pezzo surfaces ----------------------------------------------------------------

# kind -> Picard rank; "dp<k>" is P^2 blown up at k general points
DEL_PEZZO_RHO = {"P2": 1, "P1xP1": 2, "F1": 2, "F'": 3, "F": 4, **{f"dp{k}": k + 1 for k in range(4, 9)}}


def del_pezzo_kpoly(kind: str) -> bool:
    """Only F_1 and the blow-up of P^2 at two points fail."""
    if kind not in DEL_PEZZO_RHO:
        raise UnknownFamilyError(f"unknown del Pezzo kind {kind!r}")
    return kind not in ("F1", "F'")


def product_rule(verdicts) -> bool:
    verdicts = list(verdicts)
    if not verdicts:
        raise ValueError("product of no factors")
    return all(verdicts)


def del_pezzo_of_rho(rho: int) -> str:
    """The del Pezzo kind with rho >= 5 (P^2 blown up at rho - 1 points)."""
    if not 5 <= rho <= 9:
        raise ValueError(f"no del Pezzo surface of this kind with rho={rho}")
    return f"dp{rho - 1}"


# -- family descriptors ------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyDescriptor:
    id: str
    rho: int
    toric: bool
    kind: str  # ConstructionB | ToricData | ProductOfSurfaces | HighDelta
    label: str
    factors: tuple[str, ...] = ()
    delta: int = 3


# row order of the emitted delta=3 table
_ROSTER = [
    FamilyDescriptor("B:p2:N=1", 5, False, "ConstructionB", "T=P2, N=O(1)"),
    FamilyDescriptor("B:p2:N=2", 5, False, "ConstructionB", "T=P2, N=O(2)"),
    FamilyDescriptor("B:p1xp1:N=(0,1)", 6, False, "ConstructionB", "T=P1xP1, N=O(0,1)"),
    FamilyDescriptor("B:p1xp1:N=(1,1)", 6, False, "ConstructionB", "T=P1xP1, N=O(1,1)"),
    FamilyDescriptor("B:f1:N=(1,0)", 6, False, "ConstructionB", "T=F1, N=pi*L"),
    FamilyDescriptor("K1", 5, True, "ToricData", "K1"),
    FamilyDescriptor("K2", 5, True, "ToricData", "K2"),
    FamilyDescriptor("K3", 5, True, "ToricData", "K3"),
    FamilyDescriptor("K4", 5, True, "ProductOfSurfaces", "K4 = P2xF", ("P2", "F")),
    FamilyDescriptor("U1", 6, True, "ToricData", "U1"),
    FamilyDescriptor("U2", 6, True, "ToricData", "U2"),
    FamilyDescriptor("U3", 6, True, "ToricData", "U3"),
    FamilyDescriptor("U4", 6, True, "ProductOfSurfaces", "U4 = F1xF", ("F1", "F")),
    FamilyDescriptor("U5", 6, True, "ProductOfSurfaces", "U5 = P1xP1xF", ("P1xP1", "F")),
    FamilyDescriptor("U6", 6, True, "ToricData", "U6"),
    FamilyDescriptor("U7", 6, True, "ToricData", "U7"),
    FamilyDescriptor("U8", 6, True, "ToricData", "U8"),
    FamilyDescriptor("F'xF", 7, True, "ProductOfSurfaces", "F'xF", ("F'", "F")),
    FamilyDescriptor("FxF", 8, True, "ProductOfSurfaces", "FxF", ("F", "F")),
]

ROSTER: dict[str, FamilyDescriptor] = {f.id: f for f in _ROSTER}

# Non-toric families settled outside the beta test, with their justification.
CURATED_FACTS = {
    "B:p1xp1:N=(0,1)": (
        ("P1", "Y"),
        "X = P1 x Y with Y K-polystable [Araujo23 §5.23]",
    ),
}


def delta3_roster() -> list[FamilyDescriptor]:
    return list(_ROSTER)


def high_delta(surface_s: str, surface_t: str, delta: int) -> FamilyDescriptor:
    """X = S x T with delta_X = delta >= 4, rho_S = delta + 1 and rho_T <= delta + 1."""
    if delta < 4:
        raise ValueError("high-delta families need delta >= 4")
    if DEL_PEZZO_RHO.get(surface_s) != delta + 1:
        raise ValueError(f"S must be a del Pezzo surface with rho = {delta + 1}, got {surface_s!r}")
    if surface_t not in DEL_PEZZO_RHO:
        raise UnknownFamilyError(f"unknown del Pezzo kind {surface_t!r}")
    if DEL_PEZZO_RHO[surface_t] > delta + 1:
        raise ValueError(f"rho_T must be at most {delta + 1}")
    rho = delta + DEL_PEZZO_RHO[surface_t] + 1
    return FamilyDescriptor(
        f"S×T:delta{delta}:{surface_s}x{surface_t}",
        rho,
        False,
        "HighDelta",
        f"{surface_s}x{surface_t}",
        (surface_s, surface_t),
        delta,
    )


def lookup(family_id: str) -> FamilyDescriptor:
    try:
        return ROSTER[family_id]
    except KeyError:
        raise UnknownFamilyError(f"unknown family id {family_id!r}") from None


# -- verdicts ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Reason:
    kind: str  # BetaNegative | ToricBarycenter | ProductRule | DelPezzoBase | CuratedFact
    detail: str
    lam: Fraction | None = None
    barycenter: tuple[Fraction, ...] | None = None
    sub_verdicts: tuple[tuple[str, bool], ...] = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class Verdict:
    family: FamilyDescriptor
    kpoly: bool
    reason: Reason
    beta_sign: str | None = None  # "+", "-" or None when not applicable

    def row(self) -> dict:
        return {
            "family": self.family.id,
            "rho": self.family.rho,
            "toric": self.family.toric,
            "beta_sign": self.beta_sign,
            "kpoly": self.kpoly,
            "reason": str(self.reason),
        }


def _factors_reason(factors) -> Reason:
    subs = tuple((k, del_pezzo_kpoly(k)) for k in factors)
    detail = ", ".join(f"{k} {'K-polystable' if ok else 'not K-polystable'}" for k, ok in subs)
    return Reason("ProductRule", detail, sub_verdicts=subs)


def classify(family: FamilyDescriptor | str) -> Verdict:
    if isinstance(family, str):
        family = lookup(family)
    if family.kind == "ConstructionB":
        return _classify_b(family)
    if family.kind == "ToricData":
        P = load_toric_family(family.id)
        if not is_reflexive(P):
            raise InconclusiveError(f"shipped polytope for {family.id} is not reflexive")
        bc = barycenter(dual(P))
        zero = all(x == 0 for x in bc)
        detail = "moment polytope barycenter (" + ",".join(format_rational(x) for x in bc) + ")"
        return Verdict(family, zero, Reason("ToricBarycenter", detail, barycenter=bc))
    if family.kind in ("ProductOfSurfaces", "HighDelta"):
        reason = _factors_reason(family.factors)
        return Verdict(family, product_rule(ok for _, ok in reason.sub_verdicts), reason)
    raise UnknownFamilyError(f"no classifier for kind {family.kind!r}")


def _classify_b(family: FamilyDescriptor) -> Verdict:
    if family.id not in B_FAMILIES:
        raise UnknownFamilyError(family.id)
    report = beta_report(b_family(family.id))
    sign = "+" if report.lam > 0 else "-" if report.lam < 0 else "0"
    if report.lam < 0:
        detail = f"lambda={format_rational(report.lam)}, beta(D)={format_rational(report.beta)}"
        return Verdict(family, False, Reason("BetaNegative", detail, lam=report.lam), sign)
    if family.id in CURATED_FACTS:
        factors, citation = CURATED_FACTS[family.id]
        detail = f"beta(D)={format_rational(report.beta)}, not decisive; {citation}"
        subs = tuple((f, True) for f in factors)
        return Verdict(
            family, True, Reason("CuratedFact+ProductRule", detail, lam=report.lam, sub_verdicts=subs), sign
        )
    raise InconclusiveError(f"{family.id}: beta(D) >= 0 and no further criterion available")


@lru_cache(maxsize=1)
def _roster_verdicts() -> tuple[Verdict, ...]:
    return tuple(classify(f) for f in _ROSTER)


def classify_all() -> list[Verdict]:
    return list(_roster_verdicts())


# -- high-delta row classes ------------------------------------------------------------------

HIGH_DELTA_ROWS = (
    ("X=S×T, rho_T<=delta+1, T not F1, F'", "delta+rho_T+1", lambda t: t not in ("F1", "F'")),
    ("X=S×F1", "delta+3", lambda t: t == "F1"),
    ("X=S×F'", "delta+4", lambda t: t == "F'"),
)


@dataclass(frozen=True)
class RowClassVerdict:
    label: str
    rho_formula: str
    kpoly: bool
    instances: tuple[Verdict, ...] = field(repr=False)

    def row(self) -> dict:
        return {
            "family": self.label,
            "rho": None,
            "rho_formula": self.rho_formula,
            "toric": False,
            "beta_sign": None,
            "kpoly": self.kpoly,
            "reason": f"ProductRule over {len(self.instances)} instances (S del Pezzo with rho_S=delta+1)",
        }


def classify_high_delta() -> list[RowClassVerdict]:
    out = []
    for label, formula, selects in HIGH_DELTA_ROWS:
        verdicts = []
        for delta in range(4, 9):
            s = del_pezzo_of_rho(delta + 1)
            for t, rho_t in DEL_PEZZO_RHO.items():
                if rho_t <= delta + 1 and selects(t):
                    verdicts.append(classify(high_delta(s, t, delta)))
        marks = {v.kpoly for v in verdicts}
        if len(marks) != 1:
            raise InconclusiveError(f"row class {label!r} has mixed verdicts")
        out.append(RowClassVerdict(label, formula, marks.pop(), tuple(verdicts)))
    return out


# -- tables --------------------------------------------------------------------------------

YES, NO = "✓", "✗"


def _beta_col(sign: str | None) -> str:
    return {"+": "+ve", "-": "-ve", "0": "0"}.get(sign, "-")


def table_rows(which: str) -> list[dict]:
    if which == "delta3":
        return [v.row() | {"label": v.family.label} for v in classify_all()]
    if which in ("high_delta", "high-delta"):
        return [r.row() | {"label": r.label} for r in classify_high_delta()]
    raise ValueError(f"unknown table {which!r}")


def emit_table(which: str, fmt: str = "text") -> str:
    rows = table_rows(which)
    if fmt == "json":
        return json.dumps([{k: v for k, v in r.items() if k != "label"} for r in rows], indent=2, ensure_ascii=False) + "\n"
    delta3 = which == "delta3"
    header = ["4-fold", "rho", "beta(D)", "K-polystable"] if delta3 else ["4-fold", "rho", "K-polystable"]
    body = []
    for r in rows:
        rho = str(r["rho"]) if r["rho"] is not None else r["rho_formula"]
        mark = YES if r["kpoly"] else NO
        body.append([r["label"], rho, _beta_col(r["beta_sign"]), mark] if delta3 else [r["label"], rho, mark])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]

    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    out = [line(header), "  ".join("-" * w for w in widths)]
    if delta3:
        out.append("Non-toric")
        out.extend(line(b) for b, r in zip(body, rows) if not r["toric"])
        out.append("Toric")
        out.extend(line(b) for b, r in zip(body, rows) if r["toric"])
    else:
        out.extend(line(b) for b in body)
    return "\n".join(out) + "\n"


def parse_table_json(text: str) -> list[dict]:
    rows = json.loads(text)
    for r in rows:
        missing = {"family", "rho", "toric", "beta_sign", "kpoly", "reason"} - r.keys()
        if missing:
            raise ValueError(f"row {r.get('family')!r} lacks {sorted(missing)}")
    return rows
