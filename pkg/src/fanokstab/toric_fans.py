"""Complete simplicial fans of smooth toric Fano 4-folds with an F-fibration.

F is the toric del Pezzo surface of degree 6.  Blowing up the three
torus-invariant sections of a split P^2-bundle over a toric del Pezzo
surface T gives a toric 4-fold whose fan has the twisted base rays
``(v_i, a_i)`` and the six fiber rays of F.  Enumerating the twists and
keeping the Fano ones up to lattice isomorphism produces the toric
4-folds with Lefschetz defect 3; the shipped polytope files under
``data/`` were generated here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact import det, dot, solve
from .polytopes import DEL_PEZZO_FAN_RAYS, LatticePolytope, dual

# fiber P^2 rays u0, u1, u2 interleaved with the three blow-up rays, in cyclic order
HEXAGON_FIBER = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))

# cyclic order of the base fans (DEL_PEZZO_FAN_RAYS lists them counterclockwise)
BASE_KINDS = ("P2", "P1xP1", "F1", "F_2pts", "F_3pts")


@dataclass(frozen=True)
class Fan:
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[frozenset[int], ...]
    name: str = ""

    @property
    def dimension(self) -> int:
        return len(self.rays[0])

    def is_smooth(self) -> bool:
        return all(abs(det([self.rays[i] for i in sorted(c)])) == 1 for c in self.cones)

    def is_fano(self) -> bool:
        """Each maximal cone's dual functional takes value 1 on its rays and < 1 elsewhere."""
        for cone in self.cones:
            idx = sorted(cone)
            m = solve([self.rays[i] for i in idx], [1] * len(idx))
            for j, r in enumerate(self.rays):
                if j not in cone and dot(m, r) >= 1:
                    return False
        return True

    @cached_property
    def fan_polytope(self) -> LatticePolytope:
        return LatticePolytope(self.rays, name=self.name)

    @cached_property
    def moment_polytope(self) -> LatticePolytope:
        m = dual(self.fan_polytope)
        return LatticePolytope(m.vertices, name=self.name)

    def picard_rank(self) -> int:
        return len(self.rays) - self.dimension

    def anticanonical_degree(self) -> int:
        """(-K)^n = n! * vol(moment polytope)."""
        from math import factorial

        from .polytopes import volume

        return int(volume(self.moment_polytope) * factorial(self.dimension))


def construction_a_fan(base: str, twists: Sequence[Sequence[int]], name: str = "") -> Fan:
    """Fan of the F-bundle over toric surface ``base`` with base rays lifted by ``twists``."""
    base_rays = DEL_PEZZO_FAN_RAYS[base]
    if len(twists) != len(base_rays):
        raise ValueError("one twist vector per base ray")
    nb, nf = len(base_rays), len(HEXAGON_FIBER)
    rays = [tuple(v) + tuple(a) for v, a in zip(base_rays, twists)]
    rays += [(0, 0) + f for f in HEXAGON_FIBER]
    cones = []
    for i in range(nb):
        for j in range(nf):
            cones.append(frozenset({i, (i + 1) % nb, nb + j, nb + (j + 1) % nf}))
    return Fan(tuple(rays), tuple(cones), name)


def product_fan(base: str) -> Fan:
    return construction_a_fan(base, [(0, 0)] * len(DEL_PEZZO_FAN_RAYS[base]), name=f"{base}xF")


def _inverse_unimodular(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    cols = []
    for k in range(n):
        e = [1 if i == k else 0 for i in range(n)]
        cols.append(solve(m, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def linear_map_between(fan_a: Fan, fan_b: Fan):
    """A lattice automorphism carrying the rays of ``fan_a`` onto those of ``fan_b``, or None.

    Rays determine a Fano fan (it is the face fan of their convex hull), so
    matching ray sets is enough.
    """
    if len(fan_a.rays) != len(fan_b.rays) or fan_a.dimension != fan_b.dimension:
        return None
    d = fan_a.dimension
    src_cone = sorted(fan_a.cones[0])
    src = [fan_a.rays[i] for i in src_cone]
    # columns are the source rays; U = T * S^{-1}
    s_inv = _inverse_unimodular([[src[j][i] for j in range(d)] for i in range(d)])
    target_set = set(fan_b.rays)
    for cone in fan_b.cones:
        for perm in itertools.permutations(sorted(cone)):
            tgt = [fan_b.rays[i] for i in perm]
            t_mat = [[tgt[j][i] for j in range(d)] for i in range(d)]
            U = [[sum(t_mat[i][k] * s_inv[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
            if any(x.denominator != 1 for row in U for x in row):
                continue
            U = [[int(x) for x in row] for row in U]
            image = {tuple(dot(row, r) for row in U) for r in fan_a.rays}
            if image == target_set:
                return U
    return None


def isomorphic(fan_a: Fan, fan_b: Fan) -> bool:
    return linear_map_between(fan_a, fan_b) is not None


def enumerate_construction_a(base: str, radius: int) -> list[Fan]:
    """Fano F-bundles over ``base`` up to isomorphism, twists bounded by ``radius``.

    The first two base rays form a lattice basis, so a shear of the
    lattice makes their twists zero; only the remaining ones vary.
    """
    base_rays = DEL_PEZZO_FAN_RAYS[base]
    free = len(base_rays) - 2
    rng = range(-radius, radius + 1)
    classes: list[Fan] = []
    for flat in itertools.product(rng, repeat=2 * free):
        twists = [(0, 0), (0, 0)] + [flat[2 * k: 2 * k + 2] for k in range(free)]
        fan = construction_a_fan(base, twists)
        if not fan.is_fano():
            continue
        if not any(isomorphic(fan, seen) for seen in classes):
            classes.append(fan)
    return classes


# Batyrev labels of the toric 4-folds with an F-fibration over P^2 (K) and
# over P^1 x P^1 or F_1 (U).  Twists follow the ray order of DEL_PEZZO_FAN_RAYS.
TORIC_FAMILIES: dict[str, tuple[str, tuple[tuple[int, int], ...]]] = {
    "K1": ("P2", ((0, 0), (0, 0), (-2, -2))),
    "K2": ("P2", ((0, 0), (0, 0), (-2, -1))),
    "K3": ("P2", ((0, 0), (0, 0), (-1, -1))),
    "K4": ("P2", ((0, 0), (0, 0), (0, 0))),
    "U1": ("P1xP1", ((0, 0), (0, 0), (-1, -1), (-1, -1))),
    "U2": ("P1xP1", ((0, 0), (0, 0), (-1, -1), (-1, 0))),
    "U3": ("F1", ((0, 0), (0, 0), (0, 0), (-1, -1))),
    "U4": ("F1", ((0, 0), (0, 0), (0, 0), (0, 0))),
    "U5": ("P1xP1", ((0, 0), (0, 0), (0, 0), (0, 0))),
    "U6": ("P1xP1", ((0, 0), (0, 0), (-1, -1), (0, 0))),
    "U7": ("P1xP1", ((0, 0), (0, 0), (-1, -1), (0, 1))),
    "U8": ("P1xP1", ((0, 0), (0, 0), (-1, -1), (1, 1))),
}


def toric_family_fan(family_id: str) -> Fan:
    base, twists = TORIC_FAMILIES[family_id]
    return construction_a_fan(base, twists, name=family_id)


def data_path(family_id: str):
    from importlib.resources import files

    return files("fanokstab").joinpath("data").joinpath(f"{family_id}.txt")


def load_toric_family(family_id: str) -> LatticePolytope:
    """Shipped fan polytope (convex hull of the ray generators) of a K/U family."""
    from .polytopes import parse_polytope

    if family_id not in TORIC_FAMILIES:
        raise KeyError(f"no shipped polytope for {family_id!r}")
    return parse_polytope(data_path(family_id).read_text(encoding="utf-8"), name=family_id)
