"""Exact K-polystability checks for smooth Fano 4-folds with Lefschetz defect at least 3."""

from .beta import beta_report, zariski_decomposition
from .classify import classify, classify_all, emit_table
from .construction_b import ConstructionB, all_families, family, quartic_number
from .exact import PolyQ, Q, format_rational, parse_rational, poly_eval, poly_integrate
from .polytopes import LatticePolytope, Polytope, barycenter, dual, is_reflexive, parse_polytope

__version__ = "0.1.0"

__all__ = [
    "ConstructionB",
    "LatticePolytope",
    "PolyQ",
    "Polytope",
    "Q",
    "all_families",
    "barycenter",
    "beta_report",
    "classify",
    "classify_all",
    "dual",
    "emit_table",
    "family",
    "format_rational",
    "is_reflexive",
    "parse_polytope",
    "parse_rational",
    "poly_eval",
    "poly_integrate",
    "quartic_number",
    "zariski_decomposition",
]
