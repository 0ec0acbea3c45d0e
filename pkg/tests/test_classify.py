import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from gtype.algebra import Poly, is_square_rational, rational_roots, squarefree_part
from gtype.classify import (
    ALLOWED_A4INF, ALLOWED_QA4, ClassificationReport, classify, classify_A4inf,
    classify_C3inf, classify_QA4, maximal_elements,
)
from gtype.curves import EllipticCurve, SingularCurveError, quadratic_twist, rational_torsion
from gtype.families import strong_model
from gtype.structures import TorsionStructure as T, poset_leq
from gtype.verify import REFERENCE_TABLE, embeddable_structures, structures_up_to


def nonsingular(a):
    try:
        EllipticCurve(a)
        return True
    except SingularCurveError:
        return False


curves = st.tuples(*[st.integers(-5, 5)] * 5).filter(nonsingular).map(EllipticCurve)
squarefree = st.integers(-30, 30).filter(lambda d: d not in (0, 1) and squarefree_part(d) == d)


# -------------------------------------------------------------------- poset

@pytest.mark.parametrize("t1,t2,expected", [
    (T(1, 2), T(2, 2), True),
    (T(2, 2), T(1, 4), False),
    (T(1, 4), T(2, 8), True),
    (T(2, 4), T(1, 8), False),
    (T(1, 7), T(4, 28), True),
    (T(3, 3), T(3, 9), True),
    (T(1, 9), T(3, 9), True),
    (T(3, 3), T(1, 9), False),
    (T(1, 1), T(1, 1), True),
])
def test_poset_examples(t1, t2, expected):
    assert poset_leq(t1, t2) is expected


def test_poset_against_subgroup_enumeration():
    structs = structures_up_to(12)
    for t2 in structs:
        emb = embeddable_structures(t2)
        for t1 in structs:
            assert poset_leq(t1, t2) == ((t1.a, t1.b) in emb)


@given(st.sampled_from(ALLOWED_A4INF), st.sampled_from(ALLOWED_A4INF), st.sampled_from(ALLOWED_A4INF))
def test_poset_is_a_partial_order(a, b, c):
    assert poset_leq(a, a)
    if poset_leq(a, b) and poset_leq(b, a):
        assert a == b
    if poset_leq(a, b) and poset_leq(b, c):
        assert poset_leq(a, c)


def test_maximal_elements():
    assert maximal_elements([T(1, 2), T(2, 2), T(1, 4)]) == [T(2, 2), T(1, 4)]
    assert maximal_elements([T(1, 1), T(1, 7), T(1, 7)]) == [T(1, 7)]


# ------------------------------------------------------------ A4 compositum

@pytest.mark.parametrize("ainvs,expected", [
    ((0, 0, 0, 0, 2), T(3, 9)),   # 4s = 8 is a cube
    ((0, 0, 0, 0, 1), T(2, 6)),
    ((0, 0, 0, 0, 3), T(1, 3)),
    ((0, 0, 0, 1, 0), T(4, 4)),
    ((0, 0, 0, -1, 0), T(4, 4)),
    ((0, 0, 0, 2, 0), T(2, 2)),
])
def test_cm_curves(ainvs, expected):
    assert classify(EllipticCurve(ainvs)).torsion == expected


@pytest.mark.parametrize("label", sorted(REFERENCE_TABLE))
def test_reference_curves(curve, label):
    assert classify_A4inf(curve(label)).torsion == T(*REFERENCE_TABLE[label])


def test_j_minus_3375_gives_2x14(curve):
    rep = classify(curve("49a1"))
    assert curve("49a1").j == -3375
    assert rep.torsion == T(2, 14)


def with_j(j):
    k = Fraction(j) / (1728 - j)
    return EllipticCurve((0, 0, 0, 3 * k, 2 * k))


def test_j_21609_matches_order_seven():
    E = with_j(21609)
    assert E.j == 21609
    rep = classify(E)
    assert T(1, 7) in rep.matched_families
    assert T(1, 7).leq(rep.torsion)


def test_cm_pairs_256c1_and_64a4(curve):
    # coefficients decide: 64a4 is y^2 = x^3 + x, 256c1 is y^2 = x^3 + 2x
    assert curve("64a4").ainvs == (0, 0, 0, 1, 0)
    assert curve("256c1").ainvs == (0, 0, 0, 2, 0)
    assert classify(curve("64a4")).torsion == T(4, 4)
    assert classify(curve("256c1")).torsion == T(2, 2)


@given(curves, squarefree)
def test_a4_torsion_depends_only_on_j(E, d):
    assume(E.j not in (0, 1728))
    assert classify(quadratic_twist(E, d)).torsion == classify(E).torsion


@given(curves)
def test_a4_torsion_is_allowed_and_contains_rational(E):
    rep = classify(E)
    assert rep.torsion in ALLOWED_A4INF
    assert rational_torsion(E).leq(rep.torsion)


# ----------------------------------------------------- A4 / cyclic cubic

def test_49a4_has_order_14(curve):
    assert classify(curve("49a4"), "QA4").torsion == T(1, 14)


def test_nine_model_at_one(curve):
    E = strong_model(9).curve_at(1)
    rep = classify(E, "QA4")
    assert rep.torsion == T(1, 9)
    assert T(1, 9) in rep.matched_families


def test_1922_pair(curve):
    assert classify(curve("1922c1"), "QA4").torsion == T(2, 14)
    assert classify(curve("1922e2"), "QA4").torsion == T(2, 2)


def test_162b1_order_21(curve):
    assert classify(curve("162b1"), "QA4").torsion == T(1, 21)


def cubic_has_rational_root(E):
    b2, b4, b6 = E.invariants.b2, E.invariants.b4, E.invariants.b6
    return bool(rational_roots(Poly((b6, 2 * b4, b2, 4))))


@given(curves)
def test_two_part_growth(E):
    rep = classify(E, "QA4")
    base = rational_torsion(E).p_part(2)
    grows = not cubic_has_rational_root(E) and is_square_rational(E.discriminant)
    assert rep.torsion.p_part(2) == (T(2, 2) if grows else base)


@given(curves)
def test_qa4_list_and_monotone(E):
    q = classify(E, "QA4").torsion
    assert q in ALLOWED_QA4
    assert rational_torsion(E).leq(q)
    assert q.leq(classify(E).torsion)


@given(curves)
def test_cyclic_cubic_equals_qa4(E):
    assert classify_C3inf(E).torsion == classify_QA4(E).torsion


def test_fixture_curves_monotone(fixture_data):
    for label, entry in fixture_data["curves"].items():
        E = EllipticCurve(entry["ainvs"], label=label)
        r = rational_torsion(E)
        assert r.order == entry["torsion_order"], label
        q = classify(E, "QA4").torsion
        a = classify(E).torsion
        assert r.leq(q) and q.leq(a), label
        assert classify(E, "C3inf").torsion == q


def test_trivial_curve_all_fields():
    E = EllipticCurve((0, 0, 1, -1, 0))  # 37a1
    assert classify(E, "QA4").torsion == T(1, 1)
    assert classify(E, "C3inf").torsion == T(1, 1)


# ------------------------------------------------------------------ reports

def test_report_json_schema(curve):
    rep = classify(curve("11a1"))
    assert isinstance(rep, ClassificationReport)
    data = json.loads(json.dumps(rep.to_json()))
    assert set(data) == {"curve", "field", "torsion", "families", "label", "trace"}
    assert data["field"] == "A4inf" and data["torsion"] == [1, 5]
    for step in data["trace"]:
        assert set(step) == {"rule", "cite", "verdict"}
    assert "trace" not in rep.to_json(trace=False)


@pytest.mark.parametrize("field", ["A4inf", "QA4", "C3inf"])
def test_trace_is_deterministic(curve, field):
    a = classify(curve("14a1"), field).to_json()
    b = classify(curve("14a1"), field).to_json()
    assert a == b and a["trace"]


def test_unknown_field():
    with pytest.raises(ValueError):
        classify(EllipticCurve((0, 0, 0, 1, 1)), "Qbar")
