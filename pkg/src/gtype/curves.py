"""Elliptic curves over Q: invariants, twists, division polynomials, torsion."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .algebra import (
    Poly, as_rational, format_rational, rational_kth_root, rational_roots,
    squarefree_part,
)
from .structures import TorsionStructure


class SingularCurveError(ValueError):
    """The Weierstrass equation has zero discriminant."""


@dataclass(frozen=True)
class Invariants:
    b2: object
    b4: object
    b6: object
    b8: object
    c4: object
    c6: object
    disc: object
    j: object


def weierstrass_invariants(a1, a2, a3, a4, a6) -> tuple:
    """(b2, b4, b6, b8, c4, c6, disc) over any commutative ring."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, c6, disc


class EllipticCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6", "__dict__")

    def __init__(self, ainvs: Sequence, label: str | None = None):
        vals = [as_rational(a) for a in ainvs]
        if len(vals) == 2:
            vals = [0, 0, 0, vals[0], vals[1]]
        if len(vals) != 5:
            raise ValueError("need [a1,a2,a3,a4,a6] or [A,B]")
        self.a1, self.a2, self.a3, self.a4, self.a6 = vals
        self.label = label
        if self.invariants.disc == 0:
            raise SingularCurveError(f"singular curve {self.ainvs}")

    @classmethod
    def short(cls, A, B) -> "EllipticCurve":
        return cls([0, 0, 0, A, B])

    @classmethod
    def parse(cls, text: str) -> "EllipticCurve":
        """``[a1,a2,a3,a4,a6]`` or ``[A,B]`` with exact rationals (quoted or not)."""
        text = text.strip()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = None
        if data is None:
            body = text.strip("[]() ")
            data = [v.strip().strip('"') for v in body.split(",") if v.strip()]
        return cls([as_rational(v) if isinstance(v, str) else v for v in data])

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def invariants(self) -> Invariants:
        b2, b4, b6, b8, c4, c6, disc = weierstrass_invariants(*self.ainvs)
        j = _r(Fraction(c4) ** 3 / disc) if disc else None
        return Invariants(*(_r(v) for v in (b2, b4, b6, b8, c4, c6, disc)), j)

    @property
    def discriminant(self):
        return self.invariants.disc

    @property
    def j(self):
        return self.invariants.j

    def __eq__(self, other) -> bool:
        return isinstance(other, EllipticCurve) and self.ainvs == other.ainvs

    def __hash__(self) -> int:
        return hash(self.ainvs)

    def __repr__(self) -> str:
        return f"EllipticCurve({self.to_json()})"

    def to_json(self) -> list[str]:
        return [format_rational(a) for a in self.ainvs]

    # points
    def contains(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        return y * y + self.a1 * x * y + self.a3 * y == x ** 3 + self.a2 * x * x + self.a4 * x + self.a6

    def negate(self, P):
        if P is None:
            return None
        x, y = P
        return (x, _r(-y - self.a1 * x - self.a3))

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            den = Fraction(2 * y1 + a1 * x1 + a3)
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
            nu = (-x1 ** 3 + a4 * x1 + 2 * a6 - a3 * y1) / den
        else:
            den = Fraction(x2 - x1)
            lam = (y2 - y1) / den
            nu = (y1 * x2 - y2 * x1) / den
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (_r(x3), _r(y3))

    def multiply(self, P, n: int):
        if n < 0:
            return self.multiply(self.negate(P), -n)
        R = None
        while n:
            if n & 1:
                R = self.add(R, P)
            n >>= 1
            if n:
                P = self.add(P, P)
        return R

    def point_order(self, P, bound: int = 12):
        """Exact order of P if at most ``bound``, else None."""
        Q = P
        for k in range(1, bound + 1):
            if Q is None:
                return k
            Q = self.add(Q, P)
        return None

    def points_with_x(self, x) -> list:
        """Rational points with the given x-coordinate."""
        a1, a2, a3, a4, a6 = self.ainvs
        lin = a1 * x + a3
        rhs = x ** 3 + a2 * x * x + a4 * x + a6
        disc = Fraction(lin * lin + 4 * rhs)
        if disc < 0:
            return []
        root = rational_kth_root(disc, 2)
        if root is None:
            return []
        ys = {_r((-lin + root) / Fraction(2)), _r((-lin - root) / Fraction(2))}
        return sorted((_r(Fraction(x)), y) for y in ys)

    # models
    def short_model(self) -> "EllipticCurve":
        """y^2 = x^3 - 27 c4 x - 54 c6, isomorphic over Q."""
        inv = self.invariants
        return EllipticCurve([0, 0, 0, -27 * inv.c4, -54 * inv.c6])

    def two_torsion_polynomial(self) -> Poly:
        inv = self.invariants
        return Poly((inv.b6, 2 * inv.b4, inv.b2, 4))


def _r(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def invariants(E: EllipticCurve) -> Invariants:
    return E.invariants


# ---------------------------------------------------------- division polys

def division_polynomial_f(b2, b4, b6, b8, m: int, cache: dict | None = None):
    """f_m: psi_m for odd m and psi_m / psi_2 for even m, as a Poly in x.

    Coefficients may live in any ring (e.g. polynomials in a parameter).
    """
    one = b2 * 0 + 1
    F = Poly((b6, 2 * b4, b2, 4 * one))
    cache = {} if cache is None else cache

    def f(n):
        if n in cache:
            return cache[n]
        if n == -1:
            val = Poly((-one,))
        elif n == 0:
            val = Poly(())
        elif n in (1, 2):
            val = Poly((one,))
        elif n == 3:
            val = Poly((b8, 3 * b6, 3 * b4, b2, 3 * one))
        elif n == 4:
            val = -F * F + Poly((b4, b2, 6 * one)) * f(3)
        else:
            k = n // 2
            if n % 2:
                B = F * F
                if k % 2 == 0:
                    val = B * f(k + 2) * f(k) ** 3 - f(k - 1) * f(k + 1) ** 3
                else:
                    val = f(k + 2) * f(k) ** 3 - B * f(k - 1) * f(k + 1) ** 3
            else:
                val = f(k) * (f(k - 1) ** 2 * f(k + 2) - f(k - 2) * f(k + 1) ** 2)
        cache[n] = val
        return val

    return f(m)


def division_polynomial(E: EllipticCurve, m: int) -> Poly:
    """psi_m for odd m; psi_m * psi_2 = f_m * (4x^3 + b2 x^2 + 2 b4 x + b6) for even m.

    Roots are the x-coordinates of the nonzero points killed by m.
    """
    if not 1 <= m <= 12:
        raise ValueError("division polynomials are provided for 1 <= m <= 12")
    inv = E.invariants
    cache = E.__dict__.setdefault("_divpoly_cache", {})
    f = division_polynomial_f(inv.b2, inv.b4, inv.b6, inv.b8, m, cache)
    if m % 2 == 0:
        return f * E.two_torsion_polynomial()
    return f


def division_polynomial_degree(m: int) -> int:
    return (m * m - 1) // 2 if m % 2 else (m * m + 2) // 2


# ------------------------------------------------------------ rational torsion

@dataclass(frozen=True)
class TorsionReport:
    structure: TorsionStructure
    points: tuple

    def to_json(self) -> dict:
        return {
            "structure": self.structure.to_json(),
            "points": [[format_rational(x), format_rational(y)] for x, y in self.points],
        }


def torsion_points(E: EllipticCurve) -> list:
    """All rational torsion points other than O, with x found as rational
    roots of division polynomials (orders 1..10 and 12 divide 7, 8, 9, 10 or 12)."""
    inv = E.invariants
    cache = E.__dict__.setdefault("_divpoly_cache", {})
    xs = set(rational_roots(E.two_torsion_polynomial()))
    for m in (7, 8, 9, 10, 12):
        f = division_polynomial_f(inv.b2, inv.b4, inv.b6, inv.b8, m, cache)
        xs |= set(rational_roots(f))
    pts = []
    for x in sorted(xs):
        for P in E.points_with_x(x):
            if E.point_order(P) is not None:
                pts.append(P)
    return pts


def rational_torsion_report(E: EllipticCurve) -> TorsionReport:
    pts = torsion_points(E)
    n = len(pts) + 1
    two = sum(1 for P in pts if E.point_order(P) == 2)
    a = 2 if two == 3 else 1
    return TorsionReport(TorsionStructure(a, n // a), tuple(pts))


def rational_torsion(E: EllipticCurve) -> TorsionStructure:
    cached = E.__dict__.get("_torsion")
    if cached is None:
        cached = rational_torsion_report(E).structure
        E.__dict__["_torsion"] = cached
    return cached


def two_torsion_count(E: EllipticCurve) -> int:
    """Number of rational points of order 2."""
    return len(set(rational_roots(E.two_torsion_polynomial())))


# ----------------------------------------------------------------- twists

def quadratic_twist(E: EllipticCurve, d) -> EllipticCurve:
    """Twist by d: [0, d b2/4, 0, d^2 b4/2, d^3 b6/4] (short models scale as d^2, d^3)."""
    d = as_rational(d)
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    inv = E.invariants
    d = Fraction(d)
    return EllipticCurve([0, d * inv.b2 / 4, 0, d * d * inv.b4 / 2, d ** 3 * inv.b6 / 4])


class NotTwistsError(ValueError):
    pass


def twist_parameter(E: EllipticCurve, E2: EllipticCurve) -> int:
    """Squarefree d with E2 isomorphic over Q to the twist of E by d."""
    if E.j != E2.j:
        raise NotTwistsError("curves have different j-invariants")
    if E.j in (0, 1728):
        raise ValueError("j = 0 and j = 1728 have larger twist groups; use the CM rules")
    i1, i2 = E.invariants, E2.invariants
    return squarefree_part(Fraction(i2.c6 * i1.c4) / Fraction(i1.c6 * i2.c4))


def sextic_parameter(E: EllipticCurve):
    """s with E isomorphic to y^2 = x^3 + s (requires j = 0)."""
    if E.j != 0:
        raise ValueError("sextic parameter needs j = 0")
    return _r(Fraction(-54 * E.invariants.c6))


def quartic_parameter(E: EllipticCurve):
    """s with E isomorphic to y^2 = x^3 + s x (requires j = 1728)."""
    if E.j != 1728:
        raise ValueError("quartic parameter needs j = 1728")
    return _r(Fraction(-27 * E.invariants.c4))


def is_Q_isomorphic(E: EllipticCurve, E2: EllipticCurve) -> bool:
    if E.j != E2.j:
        return False
    if E.j == 0:
        return rational_kth_root(Fraction(sextic_parameter(E)) / sextic_parameter(E2), 6) is not None
    if E.j == 1728:
        return rational_kth_root(Fraction(quartic_parameter(E)) / quartic_parameter(E2), 4) is not None
    return twist_parameter(E, E2) == 1
