"""Torsion classification of E/Q over three infinite extensions.

``A4inf``  the compositum of all generalized A4-type fields,
``QA4``    the compositum of all A4-extensions,
``C3inf``  the compositum of all cyclic cubic fields.

Each classifier returns a report with an ordered rule trace so that every
verdict can be audited against the result it relies on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import format_rational, is_square_rational
from .curves import (
    EllipticCurve, is_Q_isomorphic, quartic_parameter, rational_torsion,
    sextic_parameter, two_torsion_count,
)
from .families import (
    ALLOWED_A4INF, EXAMPLE_MODELS, INFINITY, cm_rule_j0, cm_rule_j1728, jmap_database,
    strong_model,
)
from .structures import TorsionStructure, poset_leq

__all__ = [
    "ALLOWED_A4INF", "ALLOWED_QA4", "ClassificationError", "ClassificationReport",
    "TraceStep", "classify", "classify_A4inf", "classify_C3inf", "classify_QA4",
    "maximal_elements", "poset_leq",
]

FIELDS = ("A4inf", "QA4", "C3inf")

ALLOWED_QA4 = tuple(
    [TorsionStructure(1, m) for m in (*range(1, 11), 12, 13, 14, 18, 21)]
    + [TorsionStructure(2, 2 * m) for m in (1, 2, 3, 4, 7)]
)

# The unique curve up to Q-isomorphism with a rational 3-torsion point and a
# 7-isogeny whose kernel is generated over a cubic field (Cremona 162b1).
Z21_CURVE = (1, -1, 1, -5, 5)

CITE = {
    "jmap": "j-map parameterisation: T(E) is the unique maximal matched structure",
    "cm0": "CM with j = 0: y^2 = x^3 + s gives 3x9 if 4s is a cube, 2x6 if s is a cube, else 3",
    "cm1728": "CM with j = 1728: y^2 = x^3 + s x gives 4x4 if +-s is a square, else 2x2",
    "allowed_a4": "list of 26 torsion structures over the generalized A4 compositum",
    "rational": "rational torsion via division polynomials",
    "two_growth": "2-torsion grows over the A4 compositum iff E(Q)[2] = 0 and disc is a square",
    "no_order4": "no new points of order 4 over the A4 compositum (no quadratic subfields)",
    "odd35": "points of order 3 or 5 over the A4 compositum are already rational",
    "strong7": "generic curve with a 7-torsion point over a cyclic cubic field",
    "strong13": "generic curve with a 13-torsion point over a cyclic cubic field",
    "strong9": "generic curve with a 9-torsion point over a cyclic cubic field (3-torsion rational)",
    "z21": "order-21 points over cubic fields: only 162b1 up to Q-isomorphism",
    "ex2x14": "2x14 over the A4 compositum iff Q-isomorphic to the 2x14 example model",
    "allowed_qa4": "torsion list over the A4 compositum",
    "cm_conservative": "odd growth for j = 0, 1728 not settled by the generic rules: conservative, Q-torsion",
    "c3": "torsion over the cyclic cubic compositum equals torsion over the A4 compositum",
}


class ClassificationError(RuntimeError):
    """Internal consistency failure: a bug or a wrong fixture, never a result."""


@dataclass(frozen=True)
class TraceStep:
    rule: str
    cite: str
    verdict: str

    def to_json(self) -> dict:
        return {"rule": self.rule, "cite": self.cite, "verdict": self.verdict}


@dataclass
class ClassificationReport:
    curve: EllipticCurve
    field: str
    torsion: TorsionStructure
    matched_families: list = field(default_factory=list)
    rule_trace: list = field(default_factory=list)

    def to_json(self, trace: bool = True) -> dict:
        out = {
            "curve": self.curve.to_json(),
            "field": self.field,
            "torsion": self.torsion.to_json(),
            "families": [T.to_json() for T in self.matched_families],
        }
        if self.curve.label:
            out["label"] = self.curve.label
        if trace:
            out["trace"] = [s.to_json() for s in self.rule_trace]
        return out


def maximal_elements(structures) -> list:
    items = list(dict.fromkeys(structures))
    return [a for a in items if not any(a != b and a.leq(b) for b in items)]


def _fmt_params(ts) -> str:
    return ", ".join(repr(t) if t is INFINITY else format_rational(t) for t in ts)


def _step(trace: list, key: str, rule: str, verdict) -> None:
    trace.append(TraceStep(rule, CITE[key], str(verdict)))


# ---------------------------------------------------------- A4 infinity

def classify_A4inf(E: EllipticCurve) -> ClassificationReport:
    trace: list = []
    j = E.j
    if j == 0:
        s = sextic_parameter(E)
        T = cm_rule_j0(s)
        _step(trace, "cm0", "cm_rule_j0", f"s = {format_rational(s)} -> {T}")
        matched = [T]
    elif j == 1728:
        s = quartic_parameter(E)
        T = cm_rule_j1728(s)
        _step(trace, "cm1728", "cm_rule_j1728", f"s = {format_rational(s)} -> {T}")
        matched = [T]
    else:
        matched = []
        for label, fam in jmap_database().items():
            fib = fam.fiber(j)
            if fib.member:
                matched.append(label)
                where = _fmt_params(t for _, t in fib.parameters) or "j in set"
                _step(trace, "jmap", f"fiber {label}", f"matched: {where}")
        top = maximal_elements(matched)
        if len(top) != 1:
            raise ClassificationError(
                f"j = {format_rational(j)}: maximal matched structures {[str(t) for t in top]}")
        T = top[0]
        _step(trace, "jmap", "unique maximal element", T)
    if T not in ALLOWED_A4INF:
        raise ClassificationError(f"{T} is not an allowed structure")
    _step(trace, "allowed_a4", "allowed list", "ok")
    return ClassificationReport(E, "A4inf", T, matched, trace)


# ---------------------------------------------------------------- A4 / C3

def _model_hits(N_or_key, E: EllipticCurve) -> list:
    model = strong_model(N_or_key) if isinstance(N_or_key, int) else EXAMPLE_MODELS[N_or_key]
    return model.contains_curve(E)


def classify_QA4(E: EllipticCurve, _field: str = "QA4") -> ClassificationReport:
    trace: list = []
    base = rational_torsion(E)
    _step(trace, "rational", "rational torsion", base)

    # 2-primary part
    two = base.p_part(2)
    if two_torsion_count(E) == 0 and is_square_rational(E.discriminant):
        two = TorsionStructure(2, 2)
        _step(trace, "two_growth", "2-part", "E(Q)[2] = 0 and square discriminant: grows to 2x2")
    else:
        _step(trace, "two_growth", "2-part", f"unchanged: {two}")
    _step(trace, "no_order4", "order-4 points", "none gained")

    # odd part
    odd = base.b // base.p_part(2).b
    _step(trace, "odd35", "3- and 5-parts", f"rational odd part Z/{odd}")
    families = []
    if E.j in (0, 1728):
        _step(trace, "cm_conservative", "odd growth", f"j = {E.j}: conservative, Q-torsion")
    else:
        if odd % 7:
            hits = _model_hits(7, E)
            if hits:
                odd *= 7
                families.append(TorsionStructure(1, 7))
            _step(trace, "strong7", "7-part", f"member at t = {_fmt_params(hits)}" if hits else "not a member")
        if odd % 13:
            hits = _model_hits(13, E)
            if hits:
                odd *= 13
                families.append(TorsionStructure(1, 13))
            _step(trace, "strong13", "13-part", f"member at t = {_fmt_params(hits)}" if hits else "not a member")
        if odd % 3 == 0 and odd % 9:
            hits = _model_hits(9, E)
            if hits:
                odd *= 3
                families.append(TorsionStructure(1, 9))
            _step(trace, "strong9", "9-part", f"member at t = {_fmt_params(hits)}" if hits else "not a member")

    T = TorsionStructure(two.a, two.b * odd)

    # cross-checks against the finite lists and the 2x14 example
    if odd % 21 == 0:
        ok = is_Q_isomorphic(E, EllipticCurve(Z21_CURVE))
        _step(trace, "z21", "21 cross-check", "Q-isomorphic to 162b1" if ok else "MISMATCH")
        if not ok:
            raise ClassificationError("order-21 torsion on a curve not isomorphic to 162b1")
    if E.j not in (0, 1728) and (odd % 7 == 0 or T == TorsionStructure(2, 14)):
        in_example = bool(_model_hits("2x14", E))
        if in_example != (T == TorsionStructure(2, 14)):
            raise ClassificationError(f"2x14 example membership {in_example} disagrees with {T}")
        _step(trace, "ex2x14", "2x14 cross-check", "consistent")

    if T not in ALLOWED_QA4:
        raise ClassificationError(f"{T} is not in the torsion list over the A4 compositum")
    _step(trace, "allowed_qa4", "allowed list", "ok")
    if _field == "C3inf":
        _step(trace, "c3", "cyclic cubic compositum", "same torsion")
    return ClassificationReport(E, _field, T, families, trace)


def classify_C3inf(E: EllipticCurve) -> ClassificationReport:
    return classify_QA4(E, _field="C3inf")


def classify(E: EllipticCurve, field_name: str = "A4inf") -> ClassificationReport:
    if field_name == "A4inf":
        return classify_A4inf(E)
    if field_name == "QA4":
        return classify_QA4(E)
    if field_name == "C3inf":
        return classify_C3inf(E)
    raise ValueError(f"unknown field {field_name!r}; expected one of {FIELDS}")
