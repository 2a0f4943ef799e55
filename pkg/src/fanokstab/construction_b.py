"""Divisor classes and quartic intersection numbers on Construction-B 4-folds.

X is the blow-up of Z = P_T(O(N) + O + O) along S_1, S_2, S_3, with
sigma: X -> T.  Numerical divisor classes are written over the basis

    sigma^* M,  D (strict transform of D),  H0 (strict transform of H_0),  E2,  E3

and the remaining exceptional divisors E1, G2, G3 are eliminated through
the linear relations among sigma-exceptional divisors.

Intersection numbers are computed by restricting to one of the P^1-bundles
D, H0, E2, E3 over T and pushing the resulting triple product down to T:

* D = P_T(N + N) with tautological eta,  eta^2 = 2N eta - N^2
* H0, E2, E3 = P_T(N + O) with tautological xi,  xi^2 = N xi

with restriction rules (M any class on T)

    on D:          D -> -eta,   H0, E2, E3 -> eta - N,   sigma^* M -> M
    on H0/E2/E3:   itself -> -xi,   D -> xi - N,   the other two -> 0,   sigma^* M -> M
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .exact import Rational, as_q, format_rational
from .surfaces import (
    P1XP1,
    P2,
    F1,
    SurfaceClass,
    SurfaceInvariants,
    SurfaceModel,
    check_admissible,
    invariants,
    pair,
)

EXCEPTIONAL = ("D", "H0", "E2", "E3")
TRIPLE = ("H0", "E2", "E3")
EXOTIC = ("E1", "G2", "G3")


class IntersectionError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionB:
    """The family determined by a base surface T and a divisor N on it."""

    T: SurfaceModel
    N: SurfaceClass

    def __post_init__(self):
        check_admissible(self.T, self.N)

    @property
    def family_id(self) -> str:
        coords = [int(x) for x in self.N.coords]
        if self.T.rank == 1:
            return f"B:{self.T.kind}:N={coords[0]}"
        return f"B:{self.T.kind}:N=({','.join(map(str, coords))})"

    @property
    def rho(self) -> int:
        # rho_T + (P^2-bundle) + three blow-ups
        return self.T.rank + 1 + 3

    @cached_property
    def invariants(self) -> SurfaceInvariants:
        return invariants(self.T, self.N)

    # basis classes
    def sigma(self, M: SurfaceClass | Sequence[Rational]) -> "XDivisorClass":
        if not isinstance(M, SurfaceClass):
            M = SurfaceClass(self.T, tuple(M))
        return XDivisorClass(self, M)

    def divisor(self, name: str) -> "XDivisorClass":
        if name in EXCEPTIONAL:
            coefs = {k: Fraction(int(k == name)) for k in EXCEPTIONAL}
            return XDivisorClass(self, self.T.zero(), **coefs)
        if name in EXOTIC:
            return reduce_exotic(name, self)
        raise KeyError(f"unknown divisor {name!r}")

    @property
    def anticanonical(self) -> "XDivisorClass":
        return anticanonical(self)

    def __str__(self):
        return self.family_id


@dataclass(frozen=True)
class XDivisorClass:
    family: ConstructionB
    base: SurfaceClass
    D: Fraction = Fraction(0)
    H0: Fraction = Fraction(0)
    E2: Fraction = Fraction(0)
    E3: Fraction = Fraction(0)

    def __post_init__(self):
        if self.base.surface != self.family.T:
            raise ValueError("base part does not live on the family's surface")
        for k in EXCEPTIONAL:
            object.__setattr__(self, k, as_q(getattr(self, k)))

    def coef(self, name: str) -> Fraction:
        return getattr(self, name)

    def _same(self, other: "XDivisorClass"):
        if other.family != self.family:
            raise IntersectionError(f"classes from different families: {self.family} vs {other.family}")

    def __add__(self, other: "XDivisorClass") -> "XDivisorClass":
        self._same(other)
        return XDivisorClass(
            self.family, self.base + other.base, **{k: self.coef(k) + other.coef(k) for k in EXCEPTIONAL}
        )

    def __sub__(self, other: "XDivisorClass") -> "XDivisorClass":
        return self + (-other)

    def __neg__(self) -> "XDivisorClass":
        return self * -1

    def __mul__(self, k: Rational) -> "XDivisorClass":
        k = as_q(k)
        return XDivisorClass(self.family, self.base * k, **{n: k * self.coef(n) for n in EXCEPTIONAL})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.base.is_zero() and not any(self.coef(k) for k in EXCEPTIONAL)

    def __str__(self) -> str:
        parts = []
        if not self.base.is_zero():
            parts.append(f"sigma*{self.base}")
        for k in EXCEPTIONAL:
            c = self.coef(k)
            if c:
                parts.append(f"{format_rational(c)}*{k}")
        return " + ".join(parts) if parts else "0"


def anticanonical(family: ConstructionB) -> XDivisorClass:
    """-K_X = sigma^*(-K_T + N) + H0 + 2D + E2 + E3."""
    T = family.T
    return XDivisorClass(family, T.anticanonical + family.N, D=2, H0=1, E2=1, E3=1)


# E1 + H0 - sigma^*N = D + E2 + E3 and its two images under the Z/3 symmetry
_EXOTIC_EXPANSION = {
    "E1": {"D": 1, "E2": 1, "E3": 1, "H0": -1},
    "G2": {"D": 1, "H0": 1, "E3": 1, "E2": -1},
    "G3": {"D": 1, "H0": 1, "E2": 1, "E3": -1},
}


def reduce_exotic(name: str, family: ConstructionB) -> XDivisorClass:
    """Express E1, G2 or G3 over the basis (each is D + two of the triple - the third + sigma^*N)."""
    try:
        coefs = _EXOTIC_EXPANSION[name]
    except KeyError:
        raise KeyError(f"{name!r} is not one of {EXOTIC}") from None
    return XDivisorClass(family, family.N, **coefs)


# -- P^1-bundles over T ----------------------------------------------------------------


@dataclass(frozen=True)
class BundleClass:
    """taut * tau + pi^* base on a P^1-bundle over T."""

    taut: Fraction
    base: SurfaceClass


@dataclass(frozen=True)
class P1Bundle:
    """P^1-bundle with tautological tau obeying tau^2 = c1 * tau - c2."""

    name: str
    c1: SurfaceClass
    c2: Fraction

    def triple(self, x: BundleClass, y: BundleClass, z: BundleClass) -> Fraction:
        """Degree of x.y.z pushed down to T."""
        # pi_*(tau . pi^*A . pi^*B) = A.B,  pi_*(tau^2 . pi^*A) = c1.A,  pi_*(tau^3) = c1^2 - c2
        cls = (x, y, z)
        out = Fraction(0)
        t = [c.taut for c in cls]
        m = [c.base for c in cls]
        out += t[0] * t[1] * t[2] * (pair(self.c1, self.c1) - self.c2)
        for k in range(3):
            i, j = [q for q in range(3) if q != k]
            out += t[i] * t[j] * pair(self.c1, m[k])
            out += t[k] * pair(m[i], m[j])
        return out


def bundle_of(family: ConstructionB, name: str) -> P1Bundle:
    N = family.N
    if name == "D":
        return P1Bundle("D", N * 2, pair(N, N))
    if name in TRIPLE:
        return P1Bundle(name, N, Fraction(0))
    raise KeyError(name)


# An atom of a monomial is either a basis exceptional divisor (by name) or ("S", M)
Atom = object


def restrict(atom, onto: str, family: ConstructionB) -> BundleClass:
    T = family.T
    N = family.N
    if isinstance(atom, tuple):
        return BundleClass(Fraction(0), atom[1])
    if onto == "D":
        if atom == "D":
            return BundleClass(Fraction(-1), T.zero())
        return BundleClass(Fraction(1), -N)
    if atom == onto:
        return BundleClass(Fraction(-1), T.zero())
    if atom == "D":
        return BundleClass(Fraction(1), -N)
    # two distinct members of the triple are disjoint
    return BundleClass(Fraction(0), T.zero())


def monomial_by_restriction(atoms: Sequence, onto: str, family: ConstructionB) -> Fraction:
    """Evaluate a quartic monomial by restricting to the exceptional divisor ``onto``."""
    atoms = list(atoms)
    if onto not in atoms:
        raise IntersectionError(f"monomial has no factor {onto}")
    atoms.remove(onto)
    bundle = bundle_of(family, onto)
    x, y, z = (restrict(a, onto, family) for a in atoms)
    return bundle.triple(x, y, z)


def admissible_restrictions(atoms: Sequence) -> list[str]:
    return [n for n in EXCEPTIONAL if n in atoms]


def monomial(atoms: Sequence, family: ConstructionB) -> Fraction:
    """Quartic monomial in basis atoms, with the vanishing shortcuts applied first."""
    return _monomial_cached(tuple(sorted(atoms, key=repr)), family)


@lru_cache(maxsize=8192)
def _monomial_cached(atoms: tuple, family: ConstructionB) -> Fraction:
    names = [a for a in atoms if not isinstance(a, tuple)]
    if len(atoms) - len(names) >= 3:
        return Fraction(0)
    triple_present = {n for n in names if n in TRIPLE}
    if len(triple_present) >= 2:
        return Fraction(0)
    counts = Counter(names)
    if "D" in counts and any(counts[n] >= 2 for n in TRIPLE):
        return Fraction(0)
    onto = "D" if "D" in counts else next(iter(triple_present))
    return monomial_by_restriction(atoms, onto, family)


def _components(x: XDivisorClass) -> list[tuple[Fraction, object]]:
    comps: list[tuple[Fraction, object]] = []
    if not x.base.is_zero():
        comps.append((Fraction(1), ("S", x.base)))
    for n in EXCEPTIONAL:
        c = x.coef(n)
        if c:
            comps.append((c, n))
    return comps


def quartic_number(d1: XDivisorClass, d2: XDivisorClass, d3: XDivisorClass, d4: XDivisorClass) -> Fraction:
    """The intersection number d1.d2.d3.d4 on X, by multilinear expansion."""
    fam = d1.family
    for d in (d2, d3, d4):
        if d.family != fam:
            raise IntersectionError(f"classes from different families: {fam} vs {d.family}")
    # collect coefficients per unordered monomial so each is evaluated once
    atoms: list = []
    collected: dict[tuple[int, ...], Fraction] = {}
    for combo in itertools.product(*(_components(d) for d in (d1, d2, d3, d4))):
        coef = Fraction(1)
        key = []
        for c, a in combo:
            coef *= c
            if a not in atoms:
                atoms.append(a)
            key.append(atoms.index(a))
        key = tuple(sorted(key))
        collected[key] = collected.get(key, Fraction(0)) + coef
    return sum(
        (coef * monomial([atoms[i] for i in key], fam) for key, coef in collected.items() if coef),
        Fraction(0),
    )


def self_intersection(x: XDivisorClass) -> Fraction:
    return quartic_number(x, x, x, x)


def basis_atoms(family: ConstructionB) -> list:
    """Pullbacks of a basis of Pic(T) followed by D, H0, E2, E3."""
    return [("S", b) for b in family.T.basis()] + list(EXCEPTIONAL)


def atom_class(atom, family: ConstructionB) -> XDivisorClass:
    if isinstance(atom, tuple):
        return family.sigma(atom[1])
    return family.divisor(atom)


# -- the degree 5 del Pezzo fiber ------------------------------------------------------

FIBER_POINTS = ("1", "1'", "2", "3")


@dataclass(frozen=True)
class FiberClass:
    """d*h - m1*e1 - m1'*e1' - m2*e2 - m3*e3 on the general fiber, written (d; m1, m1', m2, m3)."""

    coords: tuple[int | Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != 5:
            raise ValueError("fiber classes have 5 coordinates")
        object.__setattr__(self, "coords", tuple(as_q(x) for x in self.coords))

    def __add__(self, other: "FiberClass") -> "FiberClass":
        return FiberClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "FiberClass") -> "FiberClass":
        return FiberClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, k: Rational) -> "FiberClass":
        return FiberClass(tuple(as_q(k) * a for a in self.coords))

    __rmul__ = __mul__

    def __str__(self):
        d, *m = (format_rational(x) for x in self.coords)
        return f"({d};{','.join(m)})"


FIBER_GRAM = (1, -1, -1, -1, -1)


def fiber_pair(x: FiberClass, y: FiberClass) -> Fraction:
    return sum((g * a * b for g, a, b in zip(FIBER_GRAM, x.coords, y.coords)), Fraction(0))


def exceptional_curve(point: str) -> FiberClass:
    m = [0, 0, 0, 0]
    m[FIBER_POINTS.index(point)] = -1
    return FiberClass((0, *m))


def line_through(p: str, q: str) -> FiberClass:
    m = [0, 0, 0, 0]
    m[FIBER_POINTS.index(p)] = 1
    m[FIBER_POINTS.index(q)] = 1
    return FiberClass((1, *m))


MINUS_ONE_CURVES: dict[str, FiberClass] = {
    **{f"e{p}": exceptional_curve(p) for p in FIBER_POINTS},
    **{f"l{p},{q}": line_through(p, q) for p, q in itertools.combinations(FIBER_POINTS, 2)},
}

# generators of the seven extremal rays of NE(sigma); e1' ~ e1, l1',i ~ l1,i
RAY_GENERATORS: dict[str, FiberClass] = {
    name: MINUS_ONE_CURVES[name] for name in ("e1", "e2", "e3", "l1,1'", "l1,2", "l1,3", "l2,3")
}

# exceptional divisor of the elementary contraction of each ray
RAY_DIVISOR = {"e1": "E1", "e2": "E2", "e3": "E3", "l1,1'": "H0", "l1,2": "G2", "l1,3": "G3", "l2,3": "D"}

_FIBER_IMAGE = {
    "D": FiberClass((1, 0, 0, 1, 1)),
    "H0": FiberClass((1, 1, 1, 0, 0)),
    "E2": FiberClass((0, 0, 0, -1, 0)),
    "E3": FiberClass((0, 0, 0, 0, -1)),
}


def restrict_to_fiber(x: XDivisorClass) -> FiberClass:
    out = FiberClass((0, 0, 0, 0, 0))
    for n in EXCEPTIONAL:
        out = out + _FIBER_IMAGE[n] * x.coef(n)
    return out


def pair_with_curve(x: XDivisorClass, curve: FiberClass | str) -> Fraction:
    if isinstance(curve, str):
        curve = MINUS_ONE_CURVES[curve]
    return fiber_pair(restrict_to_fiber(x), curve)


# -- Z/3 symmetry ------------------------------------------------------------------------

# (E1, G2, G3) and (E2, E3, H0) are rotated; D and sigma^* M are fixed
SYMMETRY = {"E1": "G2", "G2": "G3", "G3": "E1", "E2": "E3", "E3": "H0", "H0": "E2", "D": "D"}


def relations() -> list[Counter]:
    """The three linear relations, each as {symbol: coefficient} summing to zero (N for sigma^*N)."""
    out = []
    for a, b, rest in (("H0", "E1", ("E2", "E3")), ("E2", "G2", ("H0", "E3")), ("E3", "G3", ("H0", "E2"))):
        rel = Counter({a: 1, b: 1, "N": -1, "D": -1})
        for r in rest:
            rel[r] -= 1
        out.append(rel)
    return out


def apply_symmetry(rel: Counter) -> Counter:
    return Counter({SYMMETRY.get(k, k): v for k, v in rel.items()})


FAMILIES = {
    "B:p2:N=1": (P2, (1,)),
    "B:p2:N=2": (P2, (2,)),
    "B:p1xp1:N=(0,1)": (P1XP1, (0, 1)),
    "B:p1xp1:N=(1,1)": (P1XP1, (1, 1)),
    "B:f1:N=(1,0)": (F1, (1, 0)),
}


def family(family_id: str) -> ConstructionB:
    try:
        T, coords = FAMILIES[family_id]
    except KeyError:
        raise KeyError(f"unknown Construction-B family {family_id!r}") from None
    return ConstructionB(T, SurfaceClass(T, coords))


def all_families() -> list[ConstructionB]:
    return [family(k) for k in FAMILIES]
