"""Exact rational scalars and univariate polynomials over Q.

Scalars are :class:`fractions.Fraction`, which already keeps numerator and
denominator in lowest terms with a positive denominator and uses Python's
arbitrary precision integers.  ``Q`` is the module-wide alias.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Q = Fraction
Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_q(x: Rational | str) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` literal into a Fraction.

    Floats are rejected: nothing in this package may pass through binary
    floating point.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(x: Rational) -> str:
    """Render as ``p/q``, or ``p`` when the denominator is 1."""
    x = as_q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class _NegInf:
    """Degree of the zero polynomial; compares below every integer."""

    def __lt__(self, other):
        return not isinstance(other, _NegInf)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _NegInf)

    def __eq__(self, other):
        return isinstance(other, _NegInf)

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "-inf"


NEG_INF = _NegInf()


@dataclass(frozen=True)
class PolyQ:
    """Univariate polynomial with Fraction coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [as_q(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs: Rational) -> "PolyQ":
        return cls(tuple(as_q(c) for c in coeffs))

    @classmethod
    def const(cls, c: Rational) -> "PolyQ":
        return cls((as_q(c),))

    @classmethod
    def linear(cls, c0: Rational, c1: Rational) -> "PolyQ":
        return cls((as_q(c0), as_q(c1)))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "PolyQ | Rational") -> "PolyQ":
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyQ(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "PolyQ":
        return PolyQ(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "PolyQ | Rational") -> "PolyQ":
        return self + (-_lift(other))

    def __rsub__(self, other: "PolyQ | Rational") -> "PolyQ":
        return _lift(other) - self

    def __mul__(self, other: "PolyQ | Rational") -> "PolyQ":
        other = _lift(other)
        if self.is_zero() or other.is_zero():
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyQ(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PolyQ":
        if k < 0:
            raise ValueError("negative power")
        out = PolyQ.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, t: Rational) -> Fraction:
        return poly_eval(self, t)

    def compose_affine(self, c0: Rational, c1: Rational) -> "PolyQ":
        """Return p(c0 + c1*t)."""
        inner = PolyQ.linear(c0, c1)
        out = PolyQ()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def antiderivative(self) -> "PolyQ":
        return PolyQ((Fraction(0),) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = format_rational(abs(c)) + ("*" + mono if mono else "")
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _lift(x: "PolyQ | Rational") -> PolyQ:
    return x if isinstance(x, PolyQ) else PolyQ.const(x)


def poly_eval(p: PolyQ, t: Rational) -> Fraction:
    t = as_q(t)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * t + c
    return acc


def poly_integrate(p: PolyQ, lo: Rational, hi: Rational) -> Fraction:
    """Exact definite integral of ``p`` over ``[lo, hi]``."""
    lo, hi = as_q(lo), as_q(hi)
    if lo > hi:
        raise ValueError(f"reversed integration bounds: lo={lo} > hi={hi}")
    prim = p.antiderivative()
    return poly_eval(prim, hi) - poly_eval(prim, lo)


def dot(u: Sequence[Rational], v: Sequence[Rational]):
    return sum((a * b for a, b in zip(u, v)), 0)


def det(rows: Sequence[Sequence[Rational]]):
    """Exact determinant by fraction-free Bareiss elimination.

    Integer input gives an int; rational input gives a Fraction.
    """
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) and x.denominator != 1 for r in m for x in r):
        m = [[Fraction(x) for x in r] for r in m]
        return _det_gauss(m)
    m = [[int(x) for x in r] for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _det_gauss(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    out = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            out = -out
        out *= m[k][k]
        for i in range(k + 1, n):
            r = m[i][k] / m[k][k]
            if r:
                for j in range(k, n):
                    m[i][j] -= r * m[k][j]
    return out


def solve(matrix: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> list[Fraction]:
    """Solve a square nonsingular system exactly; raises on singular input."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        aug[k], aug[piv] = aug[piv], aug[k]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                r = aug[i][k] / aug[k][k]
                for j in range(k, n + 1):
                    aug[i][j] -= r * aug[k][j]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def rank(rows: Iterable[Sequence[Rational]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                for j in range(c, ncols):
                    m[i][j] -= f * m[r][j]
        r += 1
        if r == len(m):
            break
    return r
