"""Picard lattices of the base surfaces P^2, P^1 x P^1 and F_1."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import Rational, as_q, format_rational


class RejectedFamilyError(ValueError):
    """The pair (T, N) does not satisfy the positivity conditions of the construction."""


@dataclass(frozen=True)
class SurfaceModel:
    """A base surface: intersection form, canonical class and generators of its cone of curves.

    Curve classes are written in the same basis as divisors (the lattice is
    unimodular, so they are identified through the form).
    """

    kind: str
    gram: tuple[tuple[int, ...], ...]
    canonical_coords: tuple[int, ...]
    curve_generators: tuple[tuple[int, ...], ...]
    label: str

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def canonical(self) -> "SurfaceClass":
        return SurfaceClass(self, self.canonical_coords)

    @property
    def anticanonical(self) -> "SurfaceClass":
        return -self.canonical

    def cls(self, *coords: Rational) -> "SurfaceClass":
        return SurfaceClass(self, coords)

    def zero(self) -> "SurfaceClass":
        return SurfaceClass(self, (0,) * self.rank)

    def basis(self) -> list["SurfaceClass"]:
        return [SurfaceClass(self, tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def __repr__(self):
        return f"SurfaceModel({self.kind})"


P2 = SurfaceModel(
    kind="p2",
    gram=((1,),),
    canonical_coords=(-3,),
    curve_generators=((1,),),
    label="P2",
)

# basis: the two rulings, O(1,0) and O(0,1)
P1XP1 = SurfaceModel(
    kind="p1xp1",
    gram=((0, 1), (1, 0)),
    canonical_coords=(-2, -2),
    curve_generators=((1, 0), (0, 1)),
    label="P1xP1",
)

# basis: pullback of a line L and the exceptional curve e; the ruling is L - e
F1 = SurfaceModel(
    kind="f1",
    gram=((1, 0), (0, -1)),
    canonical_coords=(-3, 1),
    curve_generators=((0, 1), (1, -1)),
    label="F1",
)

SURFACES = {m.kind: m for m in (P2, P1XP1, F1)}


def surface(kind: str) -> SurfaceModel:
    try:
        return SURFACES[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown base surface {kind!r}; expected one of {sorted(SURFACES)}") from None


@dataclass(frozen=True)
class SurfaceClass:
    surface: SurfaceModel
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(as_q(x) for x in self.coords)
        if len(coords) != self.surface.rank:
            raise ValueError(f"{self.surface.kind} classes have {self.surface.rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "SurfaceClass"):
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        if other.surface != self.surface:
            raise ValueError(f"classes live on different surfaces: {self.surface.kind} vs {other.surface.kind}")
        return other

    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        self._check(other)
        return SurfaceClass(self.surface, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "SurfaceClass") -> "SurfaceClass":
        self._check(other)
        return SurfaceClass(self.surface, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "SurfaceClass":
        return SurfaceClass(self.surface, tuple(-a for a in self.coords))

    def __mul__(self, k: Rational) -> "SurfaceClass":
        k = as_q(k)
        return SurfaceClass(self.surface, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(format_rational(x) for x in self.coords) + ")"


def pair(x: SurfaceClass, y: SurfaceClass) -> Fraction:
    """Intersection number x . y."""
    x._check(y)
    g = x.surface.gram
    return sum(
        (x.coords[i] * g[i][j] * y.coords[j] for i in range(len(g)) for j in range(len(g))),
        Fraction(0),
    )


def _curve_degrees(x: SurfaceClass) -> list[Fraction]:
    return [pair(x, SurfaceClass(x.surface, c)) for c in x.surface.curve_generators]


def is_nef(x: SurfaceClass) -> bool:
    return all(v >= 0 for v in _curve_degrees(x))


def is_ample(x: SurfaceClass) -> bool:
    """Kleiman's criterion against the (finitely generated) cone of curves."""
    return all(v > 0 for v in _curve_degrees(x))


@dataclass(frozen=True)
class SurfaceInvariants:
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.b, self.c, self.d, self.e, self.f)


def check_admissible(T: SurfaceModel, N: SurfaceClass) -> None:
    if N.surface != T:
        raise ValueError("N is not a class on T")
    minus_k = T.anticanonical
    problems = []
    if not is_ample(minus_k - N):
        problems.append(f"-K_T - N = {minus_k - N} is not ample")
    if not is_ample(minus_k + N):
        problems.append(f"-K_T + N = {minus_k + N} is not ample")
    if not is_nef(N):
        problems.append(f"N = {N} is not nef")
    if problems:
        raise RejectedFamilyError(f"({T.kind}, N={N}) rejected: " + "; ".join(problems))


def invariants(T: SurfaceModel, N: SurfaceClass) -> SurfaceInvariants:
    """The five pairings b, c, d, e, f of N against -K_T -/+ N."""
    check_admissible(T, N)
    km, kp = T.anticanonical - N, T.anticanonical + N
    return SurfaceInvariants(
        b=pair(N, N),
        c=pair(km, km),
        d=pair(N, km),
        e=pair(kp, kp),
        f=pair(N, kp),
    )


def parse_coords(text: str) -> tuple[int, ...]:
    """``"1,1"`` or ``"(0,1)"`` -> integer tuple."""
    body = text.strip().strip("()")
    try:
        return tuple(int(part) for part in body.split(",") if part.strip())
    except ValueError:
        raise ValueError(f"bad coordinate list {text!r}; expected comma-separated integers") from None


def make_class(T: SurfaceModel, coords: Sequence[Rational] | Iterable[Rational]) -> SurfaceClass:
    return SurfaceClass(T, tuple(coords))
