"""Zariski decomposition of -K_X - tD, its volume, and beta(D) on Construction-B 4-folds.

The decomposition is found, not assumed: starting from -K_X - tD, walk t
upward until a ray of NE(sigma) is hit, subtract the exceptional divisors
of the rays that went negative so that the positive part stays orthogonal
to them, and continue until the positive part is pulled back from T.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .construction_b import (
    EXCEPTIONAL,
    RAY_DIVISOR,
    RAY_GENERATORS,
    ConstructionB,
    XDivisorClass,
    pair_with_curve,
    quartic_number,
    restrict_to_fiber,
)
from .exact import PolyQ, format_rational, poly_eval, poly_integrate, solve
from .surfaces import is_ample


class InternalInconsistencyError(RuntimeError):
    """A self-check of the computation failed; this signals a bug, not bad input."""


@dataclass(frozen=True)
class AffineDivisor:
    """t -> const + t * slope."""

    const: XDivisorClass
    slope: XDivisorClass

    def at(self, t) -> XDivisorClass:
        return self.const + self.slope * t

    def __add__(self, other: "AffineDivisor") -> "AffineDivisor":
        return AffineDivisor(self.const + other.const, self.slope + other.slope)

    def __sub__(self, other: "AffineDivisor") -> "AffineDivisor":
        return AffineDivisor(self.const - other.const, self.slope - other.slope)

    def ray_pairing(self, ray: str) -> tuple[Fraction, Fraction]:
        """Pairing with a ray generator as (value at t=0, slope)."""
        curve = RAY_GENERATORS[ray]
        return pair_with_curve(self.const, curve), pair_with_curve(self.slope, curve)

    def __str__(self):
        return f"[{self.const}] + t*[{self.slope}]"


@dataclass(frozen=True)
class ZariskiPiece:
    t_lo: Fraction
    t_hi: Fraction
    positive: AffineDivisor
    negative: AffineDivisor
    lo_open: bool = False

    def contains(self, t) -> bool:
        return (self.t_lo < t if self.lo_open else self.t_lo <= t) and t <= self.t_hi


def _zero(family: ConstructionB) -> XDivisorClass:
    return family.sigma(family.T.zero())


def _next_wall(div: AffineDivisor, after: Fraction) -> tuple[Fraction | None, list[str]]:
    """First t > ``after`` where some ray pairing crosses zero, and the rays that go negative there."""
    best, rays = None, []
    for ray in RAY_GENERATORS:
        p0, p1 = div.ray_pairing(ray)
        if p1 >= 0:
            continue
        root = -p0 / p1
        if root <= after:
            if p0 + p1 * after < 0:
                raise InternalInconsistencyError(f"ray {ray} already negative at t={after}")
            continue
        if best is None or root < best:
            best, rays = root, [ray]
        elif root == best:
            rays.append(ray)
    return best, rays


def _is_pulled_back(div: XDivisorClass) -> bool:
    return all(x == 0 for x in restrict_to_fiber(div).coords)


def _check_piece(piece: ZariskiPiece, total: AffineDivisor) -> None:
    if (piece.positive + piece.negative) != total:
        raise InternalInconsistencyError("positive + negative part differs from -K_X - tD")
    # both sides affine in t: endpoint checks cover the interval
    for t in (piece.t_lo, piece.t_hi):
        for ray in RAY_GENERATORS:
            if pair_with_curve(piece.positive.at(t), RAY_GENERATORS[ray]) < 0:
                raise InternalInconsistencyError(f"positive part not nef on {ray} at t={t}")
        neg = piece.negative.at(t)
        if not neg.base.is_zero() or any(neg.coef(n) < 0 for n in EXCEPTIONAL):
            raise InternalInconsistencyError(f"negative part not effective at t={t}")


def zariski_decomposition(family: ConstructionB, max_pieces: int = 4) -> list[ZariskiPiece]:
    """Piecewise Zariski decomposition of -K_X - tD on [0, tau(D)]."""
    # nefness against curves outside NE(sigma) rests on -K_T + N being ample
    if not is_ample(family.T.anticanonical + family.N):
        raise InternalInconsistencyError("-K_T + N is not ample")
    minus_k = family.anticanonical
    D = family.divisor("D")
    zero = _zero(family)
    total = AffineDivisor(minus_k, -D)
    positive = total
    negative = AffineDivisor(zero, zero)
    support: list[str] = []
    pieces: list[ZariskiPiece] = []
    t_lo = Fraction(0)
    while len(pieces) < max_pieces:
        wall, rays = _next_wall(positive, t_lo)
        if wall is None:
            raise InternalInconsistencyError("positive part never leaves the nef cone")
        piece = ZariskiPiece(t_lo, wall, positive, negative, lo_open=bool(pieces))
        _check_piece(piece, total)
        pieces.append(piece)
        if _is_pulled_back(positive.at(wall)):
            return pieces
        # contract the divisors of the rays hit at the wall
        for ray in rays:
            name = RAY_DIVISOR[ray]
            if name not in EXCEPTIONAL:
                raise InternalInconsistencyError(f"wall meets ray {ray} whose divisor {name} is outside the basis")
            if name not in support:
                support.append(name)
        curves = [r for r, n in RAY_DIVISOR.items() if n in support]
        gens = [family.divisor(n) for n in support]
        matrix = [[pair_with_curve(g, RAY_GENERATORS[c]) for g in gens] for c in curves]
        rhs0 = [pair_with_curve(total.const, RAY_GENERATORS[c]) for c in curves]
        rhs1 = [pair_with_curve(total.slope, RAY_GENERATORS[c]) for c in curves]
        x0, x1 = solve(matrix, rhs0), solve(matrix, rhs1)
        neg_const, neg_slope = zero, zero
        for g, a0, a1 in zip(gens, x0, x1):
            neg_const = neg_const + g * a0
            neg_slope = neg_slope + g * a1
        negative = AffineDivisor(neg_const, neg_slope)
        positive = total - negative
        if not negative.at(wall).is_zero():
            raise InternalInconsistencyError("negative part does not vanish at the wall")
        t_lo = wall
    raise InternalInconsistencyError(f"more than {max_pieces} Zariski chambers")


def pseudoeffective_threshold(pieces: list[ZariskiPiece]) -> Fraction:
    return pieces[-1].t_hi


def volume_poly(piece: ZariskiPiece) -> PolyQ:
    """(positive part)^4 as a polynomial in t."""
    c, s = piece.positive.const, piece.positive.slope
    coeffs = []
    for k in range(5):
        args = [c] * (4 - k) + [s] * k
        coeffs.append(comb(4, k) * quartic_number(*args))
    return PolyQ(tuple(coeffs))


def lambda_closed_form(b, c, d, e, f) -> Fraction:
    return Fraction(2, 5) * b + 8 * c + 6 * d - 4 * e + 4 * f


@dataclass(frozen=True)
class BetaReport:
    family_id: str
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction
    tau: Fraction
    s_value: Fraction
    lam: Fraction
    lam_closed_form: Fraction
    beta: Fraction
    vol_poly_piece1: PolyQ
    vol_poly_piece2: PolyQ
    breakpoints: tuple[Fraction, ...] = field(default=())

    @property
    def beta_sign(self) -> str:
        return "+" if self.beta > 0 else ("-" if self.beta < 0 else "0")

    def to_dict(self) -> dict:
        q = format_rational
        return {
            "family": self.family_id,
            "a": q(self.a),
            "b": q(self.b),
            "c": q(self.c),
            "d": q(self.d),
            "e": q(self.e),
            "f": q(self.f),
            "tau": q(self.tau),
            "breakpoints": [q(t) for t in self.breakpoints],
            "S": q(self.s_value),
            "beta": q(self.beta),
            "lambda_integral": q(self.lam),
            "lambda_closed_form": q(self.lam_closed_form),
            "vol_piece1": [q(x) for x in self.vol_poly_piece1.coeffs],
            "vol_piece2": [q(x) for x in self.vol_poly_piece2.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        q = format_rational
        lines = [
            f"family        {self.family_id}",
            f"(b,c,d,e,f)   ({', '.join(q(x) for x in (self.b, self.c, self.d, self.e, self.f))})",
            f"a = (-K_X)^4  {q(self.a)}",
            f"breakpoints   {', '.join(q(t) for t in self.breakpoints)}",
            f"tau(D)        {q(self.tau)}",
            f"vol on [0,1]  {self.vol_poly_piece1}",
            f"vol on [1,2]  {self.vol_poly_piece2}",
            f"S(D)          {q(self.s_value)}",
            f"lambda        {q(self.lam)}  (integral)",
            f"lambda        {q(self.lam_closed_form)}  (closed form 2/5 b + 8c + 6d - 4e + 4f)",
            f"beta(D)       {q(self.beta)}",
        ]
        return "\n".join(lines)


def beta_report(family: ConstructionB) -> BetaReport:
    pieces = zariski_decomposition(family)
    if len(pieces) != 2:
        raise InternalInconsistencyError(f"expected two Zariski chambers, found {len(pieces)}")
    inv = family.invariants
    minus_k = family.anticanonical
    a = quartic_number(minus_k, minus_k, minus_k, minus_k)
    if a <= 0:
        raise InternalInconsistencyError(f"(-K_X)^4 = {a} is not positive")
    polys = [volume_poly(p) for p in pieces]
    if polys[0](0) != a:
        raise InternalInconsistencyError("volume at t=0 differs from (-K_X)^4")
    integral = sum((poly_integrate(p, pc.t_lo, pc.t_hi) for p, pc in zip(polys, pieces)), Fraction(0))
    s_value = integral / a
    # D is a prime divisor on X itself, so its log discrepancy is 1
    beta = 1 - s_value
    lam = a * beta
    lam_cf = lambda_closed_form(*inv.as_tuple())
    if lam != lam_cf:
        raise InternalInconsistencyError(f"lambda mismatch: integral {lam} vs closed form {lam_cf}")
    tau = pseudoeffective_threshold(pieces)
    if poly_eval(polys[-1], tau) != 0:
        raise InternalInconsistencyError("volume does not vanish at the pseudoeffective threshold")
    return BetaReport(
        family_id=family.family_id,
        a=a,
        b=inv.b,
        c=inv.c,
        d=inv.d,
        e=inv.e,
        f=inv.f,
        tau=tau,
        s_value=s_value,
        lam=lam,
        lam_closed_form=lam_cf,
        beta=beta,
        vol_poly_piece1=polys[0],
        vol_poly_piece2=polys[1],
        breakpoints=tuple(p.t_hi for p in pieces),
    )
