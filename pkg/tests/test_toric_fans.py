import itertools
from fractions import Fraction

import pytest

from fanokstab.polytopes import barycenter, dual, is_reflexive, same_vertex_set
from fanokstab.toric_fans import (
    BASE_KINDS,
    TORIC_FAMILIES,
    Fan,
    construction_a_fan,
    enumerate_construction_a,
    isomorphic,
    linear_map_between,
    load_toric_family,
    product_fan,
    toric_family_fan,
)

DEGREES = {
    "K1": 364, "K2": 354, "K3": 334, "K4": 324,
    "U1": 308, "U2": 298, "U3": 298, "U4": 288,
    "U5": 288, "U6": 288, "U7": 278, "U8": 268,
}  # fmt: skip
ZERO_BARYCENTER = {"K4", "U5", "U8"}


@pytest.mark.parametrize("fid", sorted(TORIC_FAMILIES))
def test_shipped_family(fid):
    fan = toric_family_fan(fid)
    assert fan.is_smooth() and fan.is_fano()
    assert fan.picard_rank() == (5 if fid.startswith("K") else 6)
    assert fan.anticanonical_degree() == DEGREES[fid]
    P = load_toric_family(fid)
    assert P.dimension == 4
    assert is_reflexive(P)
    assert same_vertex_set(dual(dual(P)), P)
    # the file is the family's fan polytope up to a lattice automorphism
    shipped = Fan(tuple(P.int_vertices), (), fid)
    assert set(shipped.rays) == set(fan.rays)
    bc = barycenter(dual(P))
    assert all(x == 0 for x in bc) == (fid in ZERO_BARYCENTER)


def test_u4_barycenter_is_f1_times_zero():
    assert barycenter(dual(load_toric_family("U4"))) == (Fraction(1, 12), Fraction(1, 12), 0, 0)


def test_products_of_surfaces():
    assert isomorphic(toric_family_fan("K4"), product_fan("P2"))
    assert isomorphic(toric_family_fan("U4"), product_fan("F1"))
    assert isomorphic(toric_family_fan("U5"), product_fan("P1xP1"))
    assert product_fan("F_2pts").anticanonical_degree() == 252
    assert product_fan("F_3pts").anticanonical_degree() == 216
    assert product_fan("F_3pts").picard_rank() == 8


def test_families_pairwise_distinct():
    fans = [toric_family_fan(f) for f in TORIC_FAMILIES] + [product_fan("F_2pts"), product_fan("F_3pts")]
    degree = {f.name: f.anticanonical_degree() for f in fans}
    for a, b in itertools.combinations(fans, 2):
        # the degree is an invariant, so only equal-degree pairs need the search
        if degree[a.name] == degree[b.name] and len(a.rays) == len(b.rays):
            assert not isomorphic(a, b), (a.name, b.name)


def test_isomorphism_is_a_lattice_map():
    a = toric_family_fan("U8")
    U = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    swapped = Fan(tuple(tuple(sum(r[k] * v[k] for k in range(4)) for r in U) for v in a.rays), a.cones)
    M = linear_map_between(a, swapped)
    assert M is not None
    assert set(tuple(sum(r[k] * v[k] for k in range(4)) for r in M) for v in a.rays) == set(swapped.rays)


def test_twist_length_checked():
    with pytest.raises(ValueError):
        construction_a_fan("P2", [(0, 0)])


def _blow_up(fan, pair):
    a, b = pair
    new = tuple(x + y for x, y in zip(fan.rays[a], fan.rays[b]))
    rays = fan.rays + (new,)
    k = len(rays) - 1
    cones = []
    for c in fan.cones:
        if a in c and b in c:
            cones += [(c - {a}) | {k}, (c - {b}) | {k}]
        else:
            cones.append(c)
    return Fan(rays, tuple(cones))


def test_u8_is_the_blow_up_of_p1_times_w_along_two_sections():
    """P1 x P(O + O(1,-1)) over P1xP1, blown up along {p} x S and {q} x S' with S, S' the two sections."""
    base = [(1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, -1)]
    rays = [v + (0,) for v in base] + [(0, 0, 1, 0), (0, 0, -1, 0), (0, 0, 0, 1), (0, 0, 0, -1)]
    cones = [
        frozenset({i, (i + 1) % 4, s, p}) for i in range(4) for s in (4, 5) for p in (6, 7)
    ]
    W = Fan(tuple(rays), tuple(cones))
    assert W.is_smooth() and W.is_fano()
    X = _blow_up(_blow_up(W, (4, 6)), (5, 7))
    assert X.is_smooth() and X.is_fano()
    assert isomorphic(X, toric_family_fan("U8"))
    # blowing up P1 x (invariant curve) instead lands on U6
    Y = _blow_up(_blow_up(W, (0, 5)), (2, 5))
    assert isomorphic(Y, toric_family_fan("U6"))


@pytest.mark.slow
def test_enumeration_finds_fourteen_families():
    radius = {"P2": 3, "P1xP1": 2, "F1": 2, "F_2pts": 2, "F_3pts": 1}
    found = [fan for base in BASE_KINDS for fan in enumerate_construction_a(base, radius[base])]
    assert len(found) == 14
    labelled = [toric_family_fan(f) for f in TORIC_FAMILIES] + [product_fan("F_2pts"), product_fan("F_3pts")]
    for fan in found:
        assert sum(isomorphic(fan, g) for g in labelled) == 1
