"""Exact convex polytopes: facets, duals, triangulations and barycenters.

Everything here works over Q with exhaustive facet search, which is plenty
for the instance sizes at hand (dimension 4, a few dozen vertices).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from pathlib import Path
from typing import Iterable, Sequence

from .exact import as_q, det, dot, format_rational, rank

log = logging.getLogger(__name__)

Vector = tuple[Fraction, ...]


class PolytopeError(ValueError):
    """Invalid polytope input (degenerate, origin not interior, bad file, ...)."""


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane ``<normal, x> = offset`` with the polytope on the ``>=`` side."""

    normal: tuple[int, ...]
    offset: Fraction
    vertex_ids: frozenset[int]


def _vec(v: Iterable) -> Vector:
    return tuple(as_q(x) for x in v)


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _cofactor_normal(diffs: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer vector orthogonal to the d-1 given d-vectors (generalized cross product)."""
    d = len(diffs) + 1
    out = []
    for i in range(d):
        minor = [[row[j] for j in range(d) if j != i] for row in diffs]
        out.append((-1) ** i * det(minor))
    return tuple(out)


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(math.gcd, (abs(x) for x in v), 0)
    return tuple(x // g for x in v) if g else tuple(v)


def _facet_candidates_exact(pts, d):
    out = set()
    for combo in itertools.combinations(range(len(pts)), d):
        p0 = pts[combo[0]]
        diffs = [[a - b for a, b in zip(pts[i], p0)] for i in combo[1:]]
        normal = _cofactor_normal(diffs)
        if not any(normal):
            continue
        normal = _primitive(normal)
        c = dot(normal, p0)
        vals = [dot(normal, p) for p in pts]
        if all(x >= c for x in vals):
            out.add((normal, c))
        elif all(x <= c for x in vals):
            out.add((tuple(-x for x in normal), -c))
    return sorted(out)


def _facet_candidates_int64(pts, d, chunk=200_000):
    import numpy as np

    P = np.array(pts, dtype=np.int64)
    n = len(pts)
    perms = [(p, _perm_sign(p)) for p in itertools.permutations(range(d - 1))]
    out = set()
    combos_iter = itertools.combinations(range(n), d)
    while True:
        block = list(itertools.islice(combos_iter, chunk))
        if not block:
            break
        C = np.array(block, dtype=np.int64)
        base = P[C[:, 0]]
        diffs = P[C[:, 1:]] - base[:, None, :]
        normals = np.empty((len(C), d), dtype=np.int64)
        for i in range(d):
            cols = [j for j in range(d) if j != i]
            minor = diffs[:, :, cols]
            acc = np.zeros(len(C), dtype=np.int64)
            for perm, sgn in perms:
                term = np.ones(len(C), dtype=np.int64)
                for r, col in enumerate(perm):
                    term = term * minor[:, r, col]
                acc += sgn * term
            normals[:, i] = (-1) ** i * acc
        nonzero = normals.any(axis=1)
        vals = normals @ P.T
        cs = np.einsum("ij,ij->i", normals, base)
        ge = (vals >= cs[:, None]).all(axis=1)
        le = (vals <= cs[:, None]).all(axis=1)
        for idx in np.nonzero(nonzero & (ge | le))[0]:
            normal = tuple(int(x) for x in normals[idx])
            c = int(cs[idx])
            if not ge[idx]:
                normal = tuple(-x for x in normal)
                c = -c
            g = reduce(math.gcd, (abs(x) for x in normal), 0)
            out.add((tuple(x // g for x in normal), c // g))
    return sorted(out)


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


class Polytope:
    """Convex hull of finitely many rational points, full-dimensional.

    The vertex list is kept as given; with ``irredundant=True`` every point
    has to be extreme.
    """

    def __init__(self, vertices: Iterable[Iterable], irredundant: bool = True, name: str = ""):
        verts = tuple(_vec(v) for v in vertices)
        if not verts:
            raise PolytopeError("empty vertex list")
        dims = {len(v) for v in verts}
        if len(dims) != 1:
            raise PolytopeError("vertices of mixed dimension")
        self.dimension = dims.pop()
        self.vertices: tuple[Vector, ...] = verts
        self.name = name
        if len(set(verts)) != len(verts):
            raise PolytopeError("repeated vertex")
        if rank([[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]) != self.dimension:
            raise PolytopeError("polytope is not full-dimensional")
        if irredundant:
            bad = [i for i in range(len(verts)) if not self._is_extreme(i)]
            if bad:
                raise PolytopeError(f"non-extreme points in vertex list: {[verts[i] for i in bad]}")

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<{type(self).__name__}{label} dim={self.dimension} n_vertices={len(self.vertices)}>"

    @cached_property
    def _scale(self) -> int:
        return _lcm(x.denominator for v in self.vertices for x in v)

    @cached_property
    def _int_vertices(self) -> tuple[tuple[int, ...], ...]:
        s = self._scale
        return tuple(tuple(int(x * s) for x in v) for v in self.vertices)

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        """All facets, found by testing every affinely independent d-subset."""
        d = self.dimension
        pts = self._int_vertices
        bound = max(abs(x) for p in pts for x in p)
        # int64 stays exact while |normal . x| <= d * (d-1)! * (2*bound)^(d-1) * bound
        if d <= 6 and d * math.factorial(d - 1) * (2 * bound + 1) ** d < 2**62:
            candidates = _facet_candidates_int64(pts, d)
        else:
            candidates = _facet_candidates_exact(pts, d)
        found: dict[tuple, Facet] = {}
        for normal, c in candidates:
            vals = [dot(normal, p) for p in pts]
            if not all(x >= c for x in vals):
                continue
            ids = frozenset(i for i, x in enumerate(vals) if x == c)
            found[(normal, c)] = Facet(normal, Fraction(c, self._scale), ids)
        return tuple(sorted(found.values(), key=lambda f: (sorted(f.vertex_ids), f.normal)))

    def _is_extreme(self, i: int) -> bool:
        normals = [f.normal for f in self.facets if i in f.vertex_ids]
        return rank(normals) == self.dimension if normals else False

    def contains_origin_in_interior(self) -> bool:
        return all(f.offset < 0 for f in self.facets)

    # -- faces and triangulation ------------------------------------------------

    def _affine_dim(self, ids: Iterable[int]) -> int:
        ids = list(ids)
        if not ids:
            return -1
        base = self.vertices[ids[0]]
        return rank([[a - b for a, b in zip(self.vertices[i], base)] for i in ids[1:]])

    def _subfacets(self, face: frozenset[int]) -> list[frozenset[int]]:
        k = self._affine_dim(face)
        out = []
        for f in self.facets:
            sub = face & f.vertex_ids
            if sub != face and sub not in out and self._affine_dim(sub) == k - 1:
                out.append(sub)
        return out

    def _pulling(self, face: frozenset[int], priority: dict[int, int], cache: dict) -> list[tuple[int, ...]]:
        if face in cache:
            return cache[face]
        if self._affine_dim(face) == 0:
            result = [tuple(face)]
        else:
            apex = min(face, key=priority.__getitem__)
            result = []
            for sub in self._subfacets(face):
                if apex in sub:
                    continue
                result.extend(s + (apex,) for s in self._pulling(sub, priority, cache))
        cache[face] = result
        return result

    def _priority(self, order: str | Sequence[int]) -> dict[int, int]:
        n = len(self.vertices)
        if order == "lex":
            ranked = sorted(range(n), key=lambda i: self.vertices[i])
        elif order == "revlex":
            ranked = sorted(range(n), key=lambda i: self.vertices[i], reverse=True)
        else:
            ranked = list(order)
            if sorted(ranked) != list(range(n)):
                raise ValueError("order must be a permutation of vertex indices")
        return {v: r for r, v in enumerate(ranked)}

    def fan_triangulation(self, apex: Sequence | None = None, order: str | Sequence[int] = "lex"):
        """Simplices (as point tuples) coning ``apex`` over a pulling triangulation of each facet.

        The apex defaults to the origin, or to the vertex average when the
        origin is not interior; an explicit apex must lie strictly inside.
        """
        if apex is not None:
            apex_pt = _vec(apex)
        elif self.contains_origin_in_interior():
            apex_pt = tuple(Fraction(0) for _ in range(self.dimension))
        else:
            apex_pt = interior_point(self)
        for f in self.facets:
            if dot(f.normal, apex_pt) <= f.offset:
                raise PolytopeError("triangulation apex is not an interior point")
        prio = self._priority(order)
        cache: dict = {}
        simplices = []
        for f in self.facets:
            for s in self._pulling(f.vertex_ids, prio, cache):
                simplices.append((apex_pt,) + tuple(self.vertices[i] for i in s))
        return simplices

    def pulling_triangulation(self, order: str | Sequence[int] = "lex"):
        """Simplices of the pulling triangulation of the whole polytope (vertices only)."""
        prio = self._priority(order)
        whole = frozenset(range(len(self.vertices)))
        return [tuple(self.vertices[i] for i in s) for s in self._pulling(whole, prio, {})]


def simplex_volume(points: Sequence[Vector]) -> Fraction:
    p0 = points[0]
    d = len(p0)
    m = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return abs(Fraction(det(m))) / math.factorial(d)


def _weighted_centroid(simplices) -> tuple[Fraction, Vector]:
    total = Fraction(0)
    d = len(simplices[0][0])
    moment = [Fraction(0)] * d
    for s in simplices:
        vol = simplex_volume(s)
        if vol == 0:
            continue
        total += vol
        for k in range(d):
            moment[k] += vol * sum(p[k] for p in s) / len(s)
    if total == 0:
        raise PolytopeError("degenerate polytope (zero volume)")
    return total, tuple(m / total for m in moment)


def volume(P: Polytope, apex=None, order="lex") -> Fraction:
    return _weighted_centroid(P.fan_triangulation(apex, order))[0]


def barycenter(P: Polytope, apex=None, order="lex") -> Vector:
    """Volume-weighted centroid of ``P``, exactly."""
    return _weighted_centroid(P.fan_triangulation(apex, order))[1]


def interior_point(P: Polytope) -> Vector:
    d = P.dimension
    n = len(P.vertices)
    return tuple(sum(v[k] for v in P.vertices) / n for k in range(d))


@dataclass(frozen=True)
class BarycenterReport:
    polytope_id: str
    volume: Fraction
    barycenter: Vector
    is_zero: bool = field(init=False)

    def __post_init__(self):
        if self.volume <= 0:
            raise PolytopeError("volume must be positive")
        object.__setattr__(self, "is_zero", all(x == 0 for x in self.barycenter))

    def to_dict(self) -> dict:
        return {
            "polytope": self.polytope_id,
            "volume": format_rational(self.volume),
            "barycenter": [format_rational(x) for x in self.barycenter],
            "is_zero": self.is_zero,
        }


def barycenter_report(P: Polytope, polytope_id: str = "") -> BarycenterReport:
    vol, bc = _weighted_centroid(P.fan_triangulation())
    return BarycenterReport(polytope_id or P.name, vol, bc)


# -- lattice polytopes, duality ----------------------------------------------------


class LatticePolytope(Polytope):
    """Integer-vertex polytope with the origin strictly in its interior."""

    def __init__(self, vertices: Iterable[Iterable], irredundant: bool = True, name: str = ""):
        verts = [tuple(v) for v in vertices]
        for v in verts:
            for x in v:
                if as_q(x).denominator != 1:
                    raise PolytopeError(f"non-integral vertex {v}")
        super().__init__(verts, irredundant=irredundant, name=name)
        if not self.contains_origin_in_interior():
            raise PolytopeError("origin is not an interior point")

    @property
    def int_vertices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in v) for v in self.vertices)


RationalPolytope = Polytope


def dual(P: Polytope) -> Polytope:
    """``{y : <y, v> >= -1 for every vertex v of P}``, one vertex per facet of ``P``."""
    if not P.contains_origin_in_interior():
        raise PolytopeError("dual requires the origin in the interior")
    verts = []
    for f in P.facets:
        verts.append(tuple(Fraction(n) / -f.offset for n in f.normal))
    verts.sort()
    name = f"dual({P.name})" if P.name else ""
    if all(x.denominator == 1 for v in verts for x in v):
        return LatticePolytope(verts, name=name)
    return Polytope(verts, name=name)


def is_reflexive(P: Polytope) -> bool:
    if any(x.denominator != 1 for v in P.vertices for x in v):
        return False
    return all(x.denominator == 1 for v in dual(P).vertices for x in v)


def same_vertex_set(P: Polytope, Q: Polytope) -> bool:
    return set(P.vertices) == set(Q.vertices)


def product(P: Polytope, Q: Polytope) -> Polytope:
    verts = [p + q for p in P.vertices for q in Q.vertices]
    name = f"{P.name}x{Q.name}" if P.name and Q.name else ""
    cls = LatticePolytope if isinstance(P, LatticePolytope) and isinstance(Q, LatticePolytope) else Polytope
    return cls(verts, name=name)


def transform(P: Polytope, U: Sequence[Sequence[int]]) -> Polytope:
    """Image of ``P`` under the linear map ``x -> U x``."""
    verts = [tuple(dot(row, v) for row in U) for v in P.vertices]
    return type(P)(verts, name=P.name)


def kpoly_verdict_toric(P: Polytope) -> bool:
    """K-polystability of the toric Fano with moment polytope ``P``: barycenter is the origin."""
    if not is_reflexive(P):
        raise PolytopeError("K-polystability test needs a reflexive polytope")
    return all(x == 0 for x in barycenter(P))


# -- del Pezzo surfaces ------------------------------------------------------------

DEL_PEZZO_FAN_RAYS: dict[str, tuple[tuple[int, int], ...]] = {
    "P2": ((1, 0), (0, 1), (-1, -1)),
    "P1xP1": ((1, 0), (0, 1), (-1, 0), (0, -1)),
    "F1": ((1, 0), (1, 1), (0, 1), (-1, -1)),
    "F_2pts": ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1)),
    "F_3pts": ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)),
}


def moment_polytope_of_del_pezzo(kind: str) -> LatticePolytope:
    """Anticanonical polytope of a toric del Pezzo: the dual of its fan-ray hull."""
    try:
        rays = DEL_PEZZO_FAN_RAYS[kind]
    except KeyError:
        raise PolytopeError(f"unknown toric del Pezzo kind {kind!r}") from None
    fan_poly = LatticePolytope(rays, name=kind)
    m = dual(fan_poly)
    return LatticePolytope(m.vertices, name=kind)


# -- file format -------------------------------------------------------------------


def parse_polytope(text: str, name: str = "") -> LatticePolytope:
    """Parse ``"<dim> <count>"`` then one integer vertex per line; ``#`` starts a comment line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise PolytopeError("empty polytope file")
    header = lines[0].split()
    try:
        dim, count = (int(x) for x in header)
    except ValueError:
        raise PolytopeError(f"bad header line {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != count:
        raise PolytopeError(f"header announces {count} vertices, found {len(body)}")
    verts = []
    for ln in body:
        try:
            v = tuple(int(x) for x in ln.split())
        except ValueError:
            raise PolytopeError(f"non-integer vertex line {ln!r}") from None
        if len(v) != dim:
            raise PolytopeError(f"vertex {v} does not have dimension {dim}")
        verts.append(v)
    hull = Polytope(verts, irredundant=False)
    redundant = [i for i in range(len(verts)) if not hull._is_extreme(i)]
    if redundant:
        log.warning("%s: dropping non-extreme points %s", name or "polytope", [verts[i] for i in redundant])
        verts = [v for i, v in enumerate(verts) if i not in redundant]
    return LatticePolytope(verts, name=name)


def load_polytope(path: str | Path) -> LatticePolytope:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PolytopeError(f"cannot read {path}: {exc}") from exc
    return parse_polytope(text, name=path.stem)


def format_polytope(P: LatticePolytope, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"{P.dimension} {len(P.vertices)}")
    out.extend(" ".join(str(int(x)) for x in v) for v in P.vertices)
    return "\n".join(out) + "\n"
