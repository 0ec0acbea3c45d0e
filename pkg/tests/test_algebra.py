from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from gtype.algebra import (
    Poly, RationalFunction, Residue, discriminant, factor_quartic, factorint,
    format_rational, is_square_rational, parse_expression, parse_rational,
    poly_square_root, rational_roots, resultant, squarefree_part,
)

x = Poly.x()
rationals = st.fractions(min_value=-10 ** 4, max_value=10 ** 4, max_denominator=50)
small_polys = st.lists(st.integers(-9, 9), min_size=1, max_size=9).map(Poly).filter(lambda p: not p.is_zero())


def divisors(n):
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def rrt_roots(p):
    """Rational-root-theorem enumeration; the independent oracle."""
    _, ints = p.integer_form()
    while ints and ints[0] == 0:
        ints = ints[1:]
    roots = {Fraction(0)} if ints != list(p.integer_form()[1]) else set()
    if len(ints) <= 1:
        return roots
    for a, b in product(divisors(ints[0]), divisors(ints[-1])):
        for r in (Fraction(a, b), Fraction(-a, b)):
            if sum(c * r ** i for i, c in enumerate(ints)) == 0:
                roots.add(r)
    return roots


# ---------------------------------------------------------------- squares

def test_square_examples():
    assert is_square_rational(Fraction(4, 9))
    assert not is_square_rational(-1)
    assert not is_square_rational(Fraction(2268945, 128))


def trial_division(n):
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def test_square_example_by_factoring():
    # 2268945 = 3^3 * 5 * 7^5 and 128 = 2^7
    fs = trial_division(2268945)
    assert fs == {3: 3, 5: 1, 7: 5}
    assert factorint(2268945) == fs
    assert squarefree_part(Fraction(2268945, 128)) == 2 * 3 * 5 * 7


@given(st.integers(2, 10 ** 7))
def test_factorint_matches_trial_division(n):
    assert factorint(n) == trial_division(n)


@given(rationals)
def test_squares_and_non_squares(r):
    assert is_square_rational(r * r)
    assert not is_square_rational(-r * r - 1)


# ------------------------------------------------------------------ roots

def test_rational_roots_examples():
    # 3x(x^3 + 8): -2 is also a root; see the decision ledger
    assert sorted(rational_roots(3 * x * (x ** 3 + 8))) == [-2, 0]
    assert sorted(rational_roots(x ** 2 - 1)) == [-1, 1]
    assert rational_roots(3 * x ** 4 + 6 * x ** 2 - 1) == []


def test_rational_roots_multiplicity():
    p = (x - Fraction(1, 2)) ** 3 * (x + 3)
    assert sorted(rational_roots(p)) == [-3, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]


@given(small_polys)
def test_rational_roots_match_enumeration(p):
    got = rational_roots(p)
    assert set(got) == rrt_roots(p)
    assert all(p(r) == 0 for r in got)


@given(st.lists(st.fractions(min_value=-30, max_value=30, max_denominator=12), min_size=1, max_size=6),
       st.integers(1, 7))
def test_rational_roots_of_products(roots, scale):
    p = scale * Poly.from_roots(roots) * (x ** 2 + 1)
    assert sorted(rational_roots(p)) == sorted(roots)


# ------------------------------------------------------------- factoring

def test_factor_quartic_examples():
    f = factor_quartic(x ** 4 + 6 * x ** 2 - 3)
    assert f.is_irreducible()
    f = factor_quartic(x ** 4 - 1)
    assert sorted(str(g) for g, _ in f.factors) == sorted([str(x - 1), str(x + 1), str(x ** 2 + 1)])
    f = factor_quartic(x ** 4 + 2 * x ** 2 + 1)
    assert f.factors == ((x ** 2 + 1, 2),)


def test_factor_quartic_quadratic_pair():
    p = (x ** 2 + 2) * (x ** 2 + x + 3)
    f = factor_quartic(p)
    assert len(f.factors) == 2 and f.expand() == p


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=5).map(Poly).filter(lambda p: p.degree >= 1))
def test_factor_quartic_multiplies_back(p):
    f = factor_quartic(p)
    assert f.expand() == p
    for g, _ in f.factors:
        assert g.lc == 1
        if g.degree > 1:
            assert rational_roots(g) == []


# ------------------------------------------------------------ square roots

def test_poly_square_root_examples():
    assert poly_square_root(x ** 2 + 2 * x + 1) == x + 1
    assert poly_square_root(x ** 3) is None
    t = Poly.x("t")
    q = t ** 2 + 5 * t + 13
    assert poly_square_root(q ** 4) == q ** 2


@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=6), min_size=1, max_size=9)
       .map(Poly).filter(lambda p: not p.is_zero()))
def test_poly_square_root_of_square(q):
    r = poly_square_root(q * q)
    assert r == q or r == -q


def test_poly_square_root_rejects_non_square():
    assert poly_square_root(x ** 2 + 1 + x) is None
    assert poly_square_root(-(x ** 2)) is None


# ------------------------------------------------------ resultants, discs

def test_discriminant_quadratic_and_cubic():
    a, b, c = 3, -5, 7
    assert discriminant(Poly((c, b, a))) == b * b - 4 * a * c
    # x^3 + p x + q -> -4p^3 - 27q^2
    assert discriminant(Poly((5, -2, 0, 1))) == -4 * (-2) ** 3 - 27 * 25


def test_resultant_matches_root_product():
    f = Poly.from_roots([1, 2, -3])
    g = Poly.from_roots([Fraction(1, 2), 5])
    want = 1
    for r in [1, 2, -3]:
        want *= g(r)
    assert resultant(f, g) == want


# ------------------------------------------------------- rational functions

def test_rational_function_normalised():
    t = Poly.x("t")
    rf = RationalFunction(t ** 2 - 1, 2 * t - 2)
    assert rf.den.lc == 1 and rf.den.degree == 0
    assert rf == RationalFunction((t + 1) * Fraction(1, 2), Poly((1,), "t"))


@given(rationals, rationals.filter(lambda q: q != 0))
def test_rational_function_arithmetic_matches_evaluation(a, b):
    t = Poly.x("t")
    f = RationalFunction(t ** 3 - a, t ** 2 + 1)
    g = RationalFunction(t + b, Poly((1,), "t"))
    v = Fraction(3, 7)
    assert (f * g)(v) == f(v) * g(v)
    assert (f + g)(v) == f(v) + g(v)
    assert f.compose(g)(v) == f(g(v))


def test_rational_function_sqrt():
    t = Poly.x("t")
    r = RationalFunction(t ** 2 + 1, t - 3)
    assert (r * r).sqrt() in (r, -r)
    assert RationalFunction(t, Poly((1,), "t")).sqrt() is None


# -------------------------------------------------------------- text forms

def test_rational_text_round_trip():
    for q in (Fraction(-7, 3), Fraction(5), Fraction(0)):
        assert parse_rational(format_rational(q)) == q
    with pytest.raises(ValueError):
        parse_rational("1.5.2")


@given(st.lists(rationals, max_size=8))
def test_poly_text_and_json_round_trip(cs):
    p = Poly(cs)
    assert Poly.from_text(p.to_text()) == p
    assert Poly.from_json(p.to_json()) == p


def test_to_text_form():
    p = Poly((Fraction(-1, 27), Fraction(8, 3), -64, 512), "t")
    assert p.to_text() == "512*t^3 - 64*t^2 + (8/3)*t - (1/27)"


def test_parse_expression_rejects_names():
    with pytest.raises(ValueError):
        parse_expression("t + y")
    with pytest.raises(ValueError):
        parse_expression("__import__('os')")


# ---------------------------------------------------------------- residues

def test_residue_arithmetic():
    a = Residue(5, 9)
    assert (a * a).value == 7
    assert a.inverse().value == 2
    assert not Residue(3, 9).is_unit()
    assert Residue(-1, 7).value == 6
    with pytest.raises(ValueError):
        Residue(1, 1)
