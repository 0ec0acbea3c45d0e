"""Parameterised families of j-invariants and Weierstrass models.

The j-map database lists, for each of the 26 torsion structures that occur
over the compositum of generalized A4-type fields, the rational maps (or the
finite j-sets) whose rational values are the j-invariants of curves whose
torsion contains that structure.  Fibers are found exactly; a sieve over
P^1(F_p) discards most non-members before any root finding.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .algebra import (
    Poly, RationalFunction, _squarefree_factors, as_rational, format_rational,
    is_kth_power_rational, is_square_rational, parse_expression, primes,
    rational_roots, squarefree_part,
)
from .curves import EllipticCurve, SingularCurveError, weierstrass_invariants
from .structures import TorsionStructure


class UnknownFamilyError(KeyError):
    """No family is stored for the requested torsion structure."""


class FamilyBuildError(RuntimeError):
    """A stored identity failed its exact verification."""


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "infinity"


INFINITY = _Infinity()


def _as_rf(obj, var: str = "t") -> RationalFunction:
    return RationalFunction.coerce(obj, var)


def _parse_rf(text: str, var: str = "t") -> RationalFunction:
    return _as_rf(parse_expression(text, (var,)), var)


# ------------------------------------------------------------------ sieve

def _integer_pair(rf: RationalFunction) -> tuple[list[int], list[int]]:
    """Coprime integer numerator/denominator coefficient lists of ``rf``."""
    import math
    coeffs = list(rf.num.coeffs) + list(rf.den.coeffs)
    lcm = 1
    for c in coeffs:
        d = Fraction(c).denominator
        lcm = lcm * d // math.gcd(lcm, d)
    num = [int(Fraction(c) * lcm) for c in rf.num.coeffs]
    den = [int(Fraction(c) * lcm) for c in rf.den.coeffs]
    return num, den


def _horner(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


class _ImageSieve:
    """Images of a rational map on P^1(F_p) for primes of good reduction.

    A point (a:b) of P^1(F_p) is sent to (N(a,b) : D(a,b)) with N, D the
    homogenised numerator and denominator; a prime is used only if N and D
    never vanish together, so every rational value reduces into the image.
    The point at infinity of the target is encoded as ``p``.
    """

    PRIME_POOL = [p for p in primes(400) if p >= 5]

    def __init__(self, rf: RationalFunction, depth: int = 24):
        self.num, self.den = _integer_pair(rf)
        self.depth = depth
        self._images: list[tuple[int, frozenset]] = []
        self._pool = iter(self.PRIME_POOL)

    def _image(self, p: int):
        deg = max(len(self.num), len(self.den)) - 1
        img = set()
        for x in range(p):
            n = _horner(self.num, x, p)
            d = _horner(self.den, x, p)
            if n == 0 and d == 0:
                return None
            img.add(p if d == 0 else n * pow(d, -1, p) % p)
        n = self.num[deg] % p if len(self.num) > deg else 0
        d = self.den[deg] % p if len(self.den) > deg else 0
        if n == 0 and d == 0:
            return None
        img.add(p if d == 0 else n * pow(d, -1, p) % p)
        return frozenset(img)

    def _prime(self, k: int):
        while len(self._images) <= k:
            for p in self._pool:
                img = self._image(p)
                if img is not None:
                    self._images.append((p, img))
                    break
            else:
                return None
        return self._images[k]

    def may_contain(self, j0) -> bool:
        j0 = Fraction(j0)
        u, v = j0.numerator, j0.denominator
        for k in range(self.depth):
            entry = self._prime(k)
            if entry is None:
                break
            p, img = entry
            r = p if v % p == 0 else u * pow(v, -1, p) % p
            if r not in img:
                return False
        return True


# ----------------------------------------------------------------- j-maps

@dataclass(eq=False)
class JMap:
    """A rational j-map, optionally written as outer(u) with u = u(t)."""

    text: str
    substitution: str | None = None

    @cached_property
    def outer(self) -> RationalFunction:
        return _parse_rf(self.text, "u" if self.substitution else "t")

    @cached_property
    def inner(self) -> RationalFunction | None:
        return _parse_rf(self.substitution, "t") if self.substitution else None

    @cached_property
    def composed(self) -> RationalFunction:
        if self.inner is None:
            return self.outer
        comp = self.outer.compose(self.inner)
        return RationalFunction(comp.num.with_var("t"), comp.den.with_var("t"))

    @cached_property
    def _sieve(self) -> _ImageSieve:
        return _ImageSieve(self.composed)

    def __call__(self, t):
        return self.composed(as_rational(t))

    def evaluate_stepwise(self, t):
        """outer(inner(t)), following the two-step presentation."""
        if self.inner is None:
            return self(t)
        return self.outer(self.inner(as_rational(t)))

    def value_at_infinity(self):
        rf = self.composed
        if rf.num.degree > rf.den.degree:
            return None
        if rf.num.degree < rf.den.degree:
            return 0
        return as_rational(Fraction(rf.num.lc) / Fraction(rf.den.lc))

    def fibers(self, j0, sieve: bool = True) -> list:
        """All t in P^1(Q) with j(t) = j0 (INFINITY for the point at infinity)."""
        j0 = as_rational(j0)
        if sieve and not self._sieve.may_contain(j0):
            return []
        rf = self.composed
        out = []
        target = rf.num - rf.den * j0
        if not target.is_zero():
            for t in sorted(set(rational_roots(target))):
                if rf.den(t) != 0:
                    out.append(t)
        if self.value_at_infinity() == j0:
            out.append(INFINITY)
        return out

    def to_json(self) -> dict:
        data = {"expression": self.text, **self.composed.to_json()}
        if self.substitution:
            data["substitution"] = self.substitution
        return data


@dataclass(frozen=True)
class Fiber:
    """Result of a fiber query: membership and the parameters that reach j0."""

    family: TorsionStructure
    j: object
    member: bool
    parameters: tuple = ()  # (map index, t) pairs

    def __contains__(self, t) -> bool:
        return any(v == t for _, v in self.parameters)

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "j": format_rational(self.j),
            "member": self.member,
            "parameters": [[i, "infinity" if t is INFINITY else format_rational(t)]
                           for i, t in self.parameters],
        }


@dataclass(eq=False)
class JFamily:
    label: TorsionStructure
    kind: str  # "rational-map" or "finite-set"
    maps: tuple = ()
    jset: tuple = ()

    def __post_init__(self):
        if (self.kind == "rational-map") != bool(self.maps) or bool(self.maps) == bool(self.jset):
            raise FamilyBuildError(f"family {self.label}: exactly one of maps/jset must be given")

    def fiber(self, j0) -> Fiber:
        j0 = as_rational(j0)
        if self.kind == "finite-set":
            return Fiber(self.label, j0, j0 in self.jset)
        params = tuple((i, t) for i, m in enumerate(self.maps) for t in m.fibers(j0))
        return Fiber(self.label, j0, bool(params), params)

    def to_json(self) -> dict:
        out = {"label": self.label.to_json(), "name": str(self.label), "kind": self.kind}
        if self.maps:
            out["maps"] = [m.to_json() for m in self.maps]
        else:
            out["jset"] = [format_rational(j) for j in self.jset]
        return out


_T = TorsionStructure

_JMAP_ROWS: list[tuple[TorsionStructure, tuple]] = [
    (_T(1, 1), ("t",)),
    (_T(1, 3), ("(t+27)*(t+3)^3/t",)),
    (_T(1, 5), ("(t^4-12*t^3+14*t^2+12*t+1)^3/(t^5*(t^2-11*t-1))",)),
    (_T(1, 7), ("(t^2+13*t+49)*(t^2+5*t+1)^3/t",)),
    (_T(1, 9), ("t^3*(t^3-24)^3/(t^3-27)",)),
    (_T(1, 13), ("(t^4-t^3+5*t^2+t+1)*(t^8-5*t^7+7*t^6-5*t^5+5*t^3+7*t^2+5*t+1)^3"
                 "/(t^13*(t^2-3*t-1))",)),
    (_T(1, 15), {"-121945/32", "46969655/32768"}),
    (_T(1, 21), {"-140625/8", "3375/2", "-1159088625/2097152", "-189613868625/128"}),
    (_T(2, 2), ("t^3/(t+16)",)),
    (_T(2, 4), ("(t^2-48)^3/((t-8)*(t+8))",)),
    (_T(2, 6), ("(t+6)^3*(t^3+18*t^2+84*t+24)^3/(t*(t+8)^3*(t+9)^2)",)),
    (_T(2, 8), ("(t^4-16*t^2+16)^3/(t^2*(t-4)*(t+4))",)),
    (_T(2, 10), (("(u^6+4*u^5-16*u+16)^3/(u^5*(u-1)^2*(u+4))", "t-1/t"),)),
    (_T(2, 12), ("(t^2-3)^3*(t^6-9*t^4+3*t^2-3)^3/((t-3)*(t-1)^3*t^4*(t+1)^3*(t+3))",)),
    (_T(2, 14), {"-3375", "16581375"}),
    (_T(2, 16), ("(t^16-8*t^14+12*t^12+8*t^10-10*t^8+8*t^6+12*t^4-8*t^2+1)^3"
                 "/(t^16*(t-1)^4*(t+1)^4*(t^2+1)^2*(t^2-2*t-1)*(t^2+2*t-1))",)),
    (_T(2, 18), ("(t^3-2)^3*(t^9-6*t^6-12*t^3-8)^3/(t^9*(t^3-8)*(t^3+1)^2)",)),
    (_T(3, 3), ("27*(t+1)^3*(t+3)^3*(t^2+3)^3/(t^3*(t^2+3*t+3)^3)",)),
    (_T(3, 9), {"0"}),
    (_T(4, 4), ("t^2+1728",
                "-4*(4*t^2-8*t+1)^3*(4*t^2+8*t+1)^3/(t^2*(4*t^2+1)^4)")),
    (_T(4, 8), ("256*(t^4-t^2+1)^3/((t-1)^2*t^4*(t+1)^2)",
                "-4*(t^4-8*t^3+2*t^2+8*t+1)^3*(t^4+8*t^3+2*t^2-8*t+1)^3"
                "/(t^2*(t-1)^2*(t+1)^2*(t^2+1)^8)")),
    (_T(4, 12), ("(729*t^8+756*t^6+270*t^4+36*t^2+1)/t^6",)),
    (_T(4, 16), (("2^8*(u^2-u+1)^3/(u^2*(u-1)^2)", "((t-1/t)/2)^4"),)),
    (_T(4, 28), ("(t^4+13*t^2+49)*(t^4+5*t^2+1)^3/t^2",)),
    (_T(6, 6), ("(t^3-57*t^2+3*t-1)^3*(53*t^3+3*t^2-3*t+1)^3"
                "*(8587*t^6-8214*t^5+2283*t^4+304*t^3-39*t^2-6*t+1)^3"
                "/(729*(t-1)^3*(4*t-1)^6*t^6*(5*t+1)^3*(43*t^2-8*t+1)^3*(7*t^2+t+1)^6)",)),
    (_T(8, 8), ("16*(t^4-2*t^3+2*t^2+2*t+1)^3*(t^4+2*t^3+2*t^2-2*t+1)^3"
                "/((t-1)^4*t^4*(t+1)^4*(t^2+1)^4)",)),
]

# Structures realised by only finitely many j-invariants, with the number of
# Qbar-isomorphism classes (cited, not recomputed).
FINITE_OCCURRENCE = {_T(1, 21): 4, _T(1, 15): 2, _T(2, 14): 2, _T(3, 9): 1}


def _build_family(label, row) -> JFamily:
    if isinstance(row, set):
        jset = tuple(sorted(as_rational(v) for v in row))
        return JFamily(label, "finite-set", jset=jset)
    maps = tuple(JMap(*m) if isinstance(m, tuple) else JMap(m) for m in row)
    return JFamily(label, "rational-map", maps=maps)


@lru_cache(maxsize=None)
def jmap_database() -> dict:
    """TorsionStructure -> JFamily for all 26 structures, in table order."""
    return {label: _build_family(label, row) for label, row in _JMAP_ROWS}


ALLOWED_A4INF = tuple(label for label, _ in _JMAP_ROWS)


def family(T) -> JFamily:
    if not isinstance(T, TorsionStructure):
        T = TorsionStructure.parse(str(T)) if isinstance(T, str) else TorsionStructure(*T)
    fam = jmap_database().get(T)
    if fam is None:
        raise UnknownFamilyError(f"no j-map family for {T}")
    return fam


def jmap_eval(T, t, index: int = 0):
    """j(t) for the family of T; finite-set families return their single value
    when the set has one element and raise otherwise."""
    fam = family(T)
    if fam.kind == "finite-set":
        if len(fam.jset) == 1:
            return fam.jset[0]
        raise ValueError(f"{fam.label} is a finite set of j-invariants, not a map")
    return fam.maps[index](t)


def jmap_fibers(T, j0) -> Fiber:
    return family(T).fiber(j0)


def matched_families(j0) -> list[TorsionStructure]:
    """All T whose family reaches j0, in table order."""
    j0 = as_rational(j0)
    return [label for label, fam in jmap_database().items() if fam.fiber(j0).member]


# ---------------------------------------------------------- family models

def square_class_kernel(rf: RationalFunction) -> Poly:
    """Squarefree k with rf * k a square in Q(t): the odd-multiplicity factors
    of num*den, times the squarefree part of its leading coefficient."""
    f = rf.num * rf.den
    kernel = Poly((1,), f.var)
    for g, m in _squarefree_factors(f):
        if m % 2:
            kernel = kernel * g.monic()
    return kernel * squarefree_part(f.lc)


@dataclass(eq=False)
class FamilyModel:
    """A Weierstrass model whose coefficients are rational functions of t."""

    name: str
    texts: tuple  # five coefficient expressions a1, a2, a3, a4, a6
    kernel_text: str | None = None
    note: str = ""

    @cached_property
    def coefficients(self) -> tuple:
        return tuple(_parse_rf(s) for s in self.texts)

    @cached_property
    def invariants(self) -> tuple:
        return weierstrass_invariants(*self.coefficients)

    @property
    def discriminant(self) -> RationalFunction:
        return _as_rf(self.invariants[6])

    @cached_property
    def j_map(self) -> RationalFunction:
        c4 = _as_rf(self.invariants[4])
        return c4 ** 3 / self.discriminant

    @cached_property
    def disc_square_kernel(self) -> Poly | None:
        return Poly.from_text(self.kernel_text, "t") if self.kernel_text else None

    def square_identity_root(self):
        """r with disc * kernel == r^2, or None when the identity fails."""
        if self.disc_square_kernel is None:
            raise ValueError(f"{self.name} has no stored kernel")
        return (self.discriminant * _as_rf(self.disc_square_kernel)).sqrt()

    def verify(self) -> bool:
        return self.square_identity_root() is not None

    def curve_at(self, t) -> EllipticCurve:
        t = as_rational(t)
        return EllipticCurve([c(t) for c in self.coefficients], label=f"{self.name}(t={format_rational(t)})")

    def members_with_j(self, j0) -> list:
        """Rational t with j(model(t)) = j0 and a nonsingular model."""
        j0 = as_rational(j0)
        rf = self.j_map
        target = rf.num - rf.den * j0
        if target.is_zero():
            return []
        out = []
        for t in sorted(set(rational_roots(target))):
            if rf.den(t) == 0 or any(c.den(t) == 0 for c in self.coefficients):
                continue
            out.append(t)
        return out

    def contains_curve(self, E: EllipticCurve) -> list:
        """Parameters t with model(t) isomorphic to E over Q."""
        from .curves import is_Q_isomorphic
        hits = []
        for t in self.members_with_j(E.j):
            try:
                Et = self.curve_at(t)
            except SingularCurveError:
                continue
            if is_Q_isomorphic(E, Et):
                hits.append(t)
        return hits

    def to_json(self) -> dict:
        out = {"name": self.name, "coefficients": list(self.texts)}
        if self.kernel_text:
            out["disc_square_kernel"] = self.kernel_text
        if self.note:
            out["note"] = self.note
        return out


def _long_j_model(name: str, j_minus_1728: str, kernel: str) -> FamilyModel:
    """y^2 + xy = x^3 - 36/(j-1728) x - 1/(j-1728): a model with the given j."""
    inv = f"1/({j_minus_1728})"
    return FamilyModel(name, ("1", "0", "0", f"-36*{inv}", f"-{inv}"), kernel)


_ISOGENY_MODELS = {
    "13-isogeny": _long_j_model(
        "13-isogeny",
        "(t^2+6*t+13)*(t^6+10*t^5+46*t^4+108*t^3+122*t^2+38*t-1)^2/t",
        "t^3+6*t^2+13*t"),
    "7-isogeny": _long_j_model(
        "7-isogeny", "(t^4+14*t^3+63*t^2+70*t-7)^2/t", "t"),
    "5-torsion": FamilyModel(
        "5-torsion", ("1-t", "-t", "-t", "0", "0"), "t^3-11*t^2-t"),
    "3-isogeny": _long_j_model(
        "3-isogeny", "(t^2+18*t-27)^2/t", "t"),
}


@lru_cache(maxsize=None)
def isogeny_family_models() -> dict:
    """The four families used for discriminant-square arguments, verified."""
    for model in _ISOGENY_MODELS.values():
        if not model.verify():
            raise FamilyBuildError(f"disc * kernel is not a square for {model.name}")
    return dict(_ISOGENY_MODELS)


def isogeny_family(name: str) -> FamilyModel:
    models = isogeny_family_models()
    if name not in models:
        raise UnknownFamilyError(f"no family model {name!r}; have {sorted(models)}")
    return models[name]


def disc_square_kernel(model: FamilyModel | str) -> Poly:
    if isinstance(model, str):
        model = isogeny_family(model)
    if model.disc_square_kernel is None:
        raise UnknownFamilyError(f"{model.name} has no stored kernel")
    return model.disc_square_kernel


_STRONG_MODELS = {
    3: FamilyModel("strong-3", ("1", "0", "t", "0", "0"),
                   note="y^2 + a xy + b y = x^3 with a = 1 (allowed when j != 0); b renamed t"),
    5: FamilyModel("strong-5", ("1-t", "-t", "-t", "0", "0"), "t^3-11*t^2-t"),
    7: FamilyModel("strong-7", (
        "0", "0", "0",
        "-27*(t^2+5*t+1)*(t^2+13*t+49)^3",
        "54*(t^2+13*t+49)^4*(t^4+14*t^3+63*t^2+70*t-7)")),
    9: FamilyModel("strong-9", ("t", "0", "1", "0", "0")),
    13: FamilyModel("strong-13", (
        "0", "0", "0",
        "-27*(t^4-t^3+5*t^2+t+1)^3*(t^8-5*t^7+7*t^6-5*t^5+5*t^3+7*t^2+5*t+1)",
        "54*(t^2+1)*(t^4-t^3+5*t^2+t+1)^4*(t^12-8*t^11+25*t^10-44*t^9+40*t^8+18*t^7"
        "-40*t^6-18*t^5+40*t^4+44*t^3+25*t^2+8*t+1)")),
}

EXAMPLE_MODELS = {
    "2x14": FamilyModel("example-2x14", (
        "0", "0", "0",
        "-27*(t^2-t+7)^3*(t^2+t+7)^3*(t^4+5*t^2+1)",
        "54*(t^2-t+7)^4*(t^2+t+7)^4*(t^8+14*t^6+63*t^4+70*t^2-7)")),
    "2x6": FamilyModel("example-2x6", (
        "0", "0", "0", "-27*(t^2+3)*(t^2+27)^3", "54*(t^2+27)^4*(t^4+18*t^2-27)")),
    "18": FamilyModel("example-18", ("t^3-2", "0", "t^3", "0", "0"),
                      note="point of order 18 over the splitting field of "
                           "x^3 - t(t^3+3t-2)x^2 + t^3(t^3-2)x + t^6"),
}


def strong_model(N: int) -> FamilyModel:
    if N not in _STRONG_MODELS:
        raise UnknownFamilyError(f"no strong model for N={N}; have {sorted(_STRONG_MODELS)}")
    return _STRONG_MODELS[N]


def eighteen_resolvent(t) -> Poly:
    """The cubic whose splitting field carries the order-18 point of the
    order-18 example model at parameter t."""
    t = as_rational(t)
    return Poly((t ** 6, t ** 3 * (t ** 3 - 2), -t * (t ** 3 + 3 * t - 2), 1))


# --------------------------------------------------------------- CM rules

def cm_rule_j0(s) -> TorsionStructure:
    """Torsion over the generalized-A4 compositum of y^2 = x^3 + s."""
    s = as_rational(s)
    if s == 0:
        raise ValueError("s must be nonzero")
    if is_kth_power_rational(4 * s, 3):
        return TorsionStructure(3, 9)
    if is_kth_power_rational(s, 3):
        return TorsionStructure(2, 6)
    return TorsionStructure(1, 3)


def cm_rule_j1728(s) -> TorsionStructure:
    """Torsion over the generalized-A4 compositum of y^2 = x^3 + s x."""
    s = as_rational(s)
    if s == 0:
        raise ValueError("s must be nonzero")
    if is_square_rational(s) or is_square_rational(-s):
        return TorsionStructure(4, 4)
    return TorsionStructure(2, 2)


# j-invariants of the 13 rational CM orders, keyed by discriminant.
# External data: the standard list of class-number-one j-invariants.
CM_J_INVARIANTS = {
    -3: 0, -4: 1728, -7: -3375, -8: 8000, -11: -32768, -12: 54000,
    -16: 287496, -19: -884736, -27: -12288000, -28: 16581375,
    -43: -884736000, -67: -147197952000, -163: -262537412640768000,
}

# CM curves with j not in {0, 1728}: label -> torsion over the compositum.
CM_TABLE = {
    "27a4": _T(1, 9), "32a4": _T(2, 4), "36a2": _T(2, 6), "49a1": _T(2, 14),
    "121b1": _T(1, 1), "256a1": _T(2, 2), "361a1": _T(1, 1), "784h2": _T(2, 14),
    "1849a1": _T(1, 1), "4489a1": _T(1, 1), "26569a1": _T(1, 1),
}

# CM curves with j in {0, 1728}.  27a1 here is y^2 + y = x^3 (j = 0), not 54b3.
CM_SPECIAL_TABLE = {
    "27a1": _T(3, 9), "36a1": _T(2, 6), "64a4": _T(4, 4), "108a1": _T(1, 3),
    "256c1": _T(2, 2),
}


def cm_table_by_j(curves: dict) -> dict:
    """j -> (label, torsion) for CM_TABLE, using ``curves`` (label -> EllipticCurve)."""
    out = {}
    for label, T in CM_TABLE.items():
        j = curves[label].j
        if j not in CM_J_INVARIANTS.values():
            raise FamilyBuildError(f"{label} has j = {j}, not a CM j-invariant")
        out[j] = (label, T)
    return out


# ----------------------------------------------------------------- catalog

def catalog() -> dict:
    """JSON-ready export of every stored family."""
    return {
        "jmaps": [fam.to_json() for fam in jmap_database().values()],
        "finite_occurrence": [{"label": T.to_json(), "classes": n}
                              for T, n in FINITE_OCCURRENCE.items()],
        "isogeny_models": [m.to_json() for m in _ISOGENY_MODELS.values()],
        "strong_models": {str(N): m.to_json() for N, m in _STRONG_MODELS.items()},
        "example_models": {k: m.to_json() for k, m in EXAMPLE_MODELS.items()},
        "cm_j_invariants": {str(D): str(j) for D, j in CM_J_INVARIANTS.items()},
        "cm_table": {k: v.to_json() for k, v in CM_TABLE.items()},
        "cm_special_table": {k: v.to_json() for k, v in CM_SPECIAL_TABLE.items()},
    }


def write_catalog(path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(catalog(), fh, indent=2, sort_keys=True)
