from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from gtype.algebra import Poly, squarefree_part
from gtype.curves import (
    EllipticCurve, NotTwistsError, SingularCurveError, division_polynomial,
    division_polynomial_degree, is_Q_isomorphic, quadratic_twist, rational_torsion,
    rational_torsion_report, twist_parameter,
)
from gtype.structures import TorsionStructure

MAZUR = {TorsionStructure(1, n) for n in (*range(1, 11), 12)} | {TorsionStructure(2, 2 * n) for n in range(1, 5)}
small_ints = st.integers(-6, 6)
squarefree = st.integers(-30, 30).filter(lambda d: d not in (0, 1) and squarefree_part(d) == d)


def curves_strategy():
    return st.tuples(small_ints, small_ints, small_ints, small_ints, small_ints).filter(_nonsingular)


def _nonsingular(a):
    try:
        EllipticCurve(a)
        return True
    except SingularCurveError:
        return False


# ------------------------------------------------------------ mod-p oracle

def points_mod_p(E, p):
    a1, a2, a3, a4, a6 = [int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, p)) % p for c in E.ainvs]
    pts = [(x, y) for x in range(p) for y in range(p)
           if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p == 0]
    return pts, (a1, a2, a3, a4, a6)


def add_mod_p(P, Q, a, p):
    a1, a2, a3, a4, a6 = a
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2 + a1 * x2 + a3) % p == 0:
        return None
    if x1 == x2:
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(2 * y1 + a1 * x1 + a3, -1, p)
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p)
    x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
    y3 = (-(lam + a1) * x3 - (y1 - lam * x1) - a3) % p
    return (x3, y3)


def order_mod_p(P, a, p):
    Q, k = P, 1
    while Q is not None:
        Q = add_mod_p(Q, P, a, p)
        k += 1
    return k


def poly_mod_p(f: Poly, x, p):
    return sum(int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, p)) * pow(x, i, p)
               for i, c in enumerate(f.coeffs)) % p


# --------------------------------------------------------------- invariants

def test_invariants_examples():
    E = EllipticCurve([1, 0])
    assert E.discriminant == -64 and E.j == 1728
    assert EllipticCurve([0, 1]).j == 0
    assert EllipticCurve([4, 0]).j == 1728


def test_singular_rejected():
    with pytest.raises(SingularCurveError):
        EllipticCurve([0, 0])
    with pytest.raises(ValueError):
        EllipticCurve([0, -1, 0])


def test_parse_forms():
    assert EllipticCurve.parse("[0,0,0,1,0]") == EllipticCurve([1, 0])
    assert EllipticCurve.parse('["1/2", "3"]').a4 == Fraction(1, 2)


def test_known_j_invariants(curve):
    assert curve("11a1").j == Fraction(-122023936, 161051)
    assert curve("49a1").j == -3375


# ---------------------------------------------------------------- division

def test_division_polynomial_examples():
    x = Poly.x()
    assert division_polynomial(EllipticCurve([0, 2]), 3) == 3 * x * (x ** 3 + 8)
    assert division_polynomial(EllipticCurve([1, 0]), 3) == 3 * x ** 4 + 6 * x ** 2 - 1


@pytest.mark.parametrize("m", range(2, 13))
def test_division_polynomial_degree(m):
    E = EllipticCurve([1, -1, 1, -5, 5])
    want = division_polynomial_degree(m)
    assert want == ((m * m - 1) // 2 if m % 2 else (m * m + 2) // 2)
    assert division_polynomial(E, m).degree == want


@pytest.mark.parametrize("ainvs,p", [((0, 0, 1, -1, 0), 11), ((1, 0, 0, -1, 3), 13), ((0, 1, 1, 2, 5), 17),
                                     ((1, 1, 0, -3, 2), 29)])
def test_division_polynomial_against_points_mod_p(ainvs, p):
    E = EllipticCurve(ainvs)
    assert E.discriminant % p != 0
    pts, a = points_mod_p(E, p)
    for m in (3, 4, 5, 6, 7):
        psi = division_polynomial(E, m)
        for P in pts:
            killed = m % order_mod_p(P, a, p) == 0
            assert (poly_mod_p(psi, P[0], p) == 0) == killed, (m, P)


# ------------------------------------------------------------------ torsion

def test_torsion_examples():
    assert rational_torsion(EllipticCurve([0, 4])) == TorsionStructure(1, 3)
    rep = rational_torsion_report(EllipticCurve([0, 4]))
    assert set(rep.points) == {(0, 2), (0, -2)}
    assert rational_torsion(EllipticCurve([-1, 0])) == TorsionStructure(2, 2)
    assert rational_torsion(EllipticCurve([0, 7])) == TorsionStructure(1, 1)


def test_torsion_order_matches_fixture_data(fixture_data):
    bad = []
    for label, entry in fixture_data["curves"].items():
        T = rational_torsion(EllipticCurve(entry["ainvs"]))
        if T.order != entry["torsion_order"]:
            bad.append(label)
    assert not bad


@given(curves_strategy())
def test_torsion_points_are_certified(a):
    E = EllipticCurve(a)
    rep = rational_torsion_report(E)
    assert rep.structure in MAZUR
    for P in rep.points:
        assert E.contains(P)
        k = E.point_order(P)
        assert k is not None and rep.structure.exponent % k == 0
        assert E.multiply(P, rep.structure.exponent) is None


@given(curves_strategy(), st.sampled_from([5, 7, 11, 13]))
def test_torsion_injects_mod_p(a, p):
    E = EllipticCurve(a)
    assume(E.discriminant % p != 0 and p > 2)
    pts, _ = points_mod_p(E, p)
    assert (len(pts) + 1) % rational_torsion(E).order == 0


# ------------------------------------------------------------------- twists

def test_twist_examples():
    E = EllipticCurve([1, 0])
    d = 3
    T = quadratic_twist(E, d)
    assert is_Q_isomorphic(T, EllipticCurve([d * d, 0]))
    F = EllipticCurve([-1, 1])
    assert is_Q_isomorphic(quadratic_twist(F, 1), F)
    assert is_Q_isomorphic(quadratic_twist(quadratic_twist(F, 5), 5), F)
    assert twist_parameter(F, quadratic_twist(F, 5)) == 5
    assert twist_parameter(F, F) == 1
    assert twist_parameter(F, quadratic_twist(F, -3)) == -3


def test_twist_parameter_rejects_other_j():
    with pytest.raises(NotTwistsError):
        twist_parameter(EllipticCurve([-1, 1]), EllipticCurve([-2, 1]))


@given(curves_strategy(), squarefree, st.integers(1, 5))
def test_twist_parameter_recovers_d(a, d, r):
    E = EllipticCurve(a)
    assume(E.j not in (0, 1728))
    assert twist_parameter(E, quadratic_twist(E, d * r * r)) == d
    assert not is_Q_isomorphic(E, quadratic_twist(E, d))
