from itertools import product

import pytest
from hypothesis import given, strategies as st

from gtype.corpus import corpus, corpus_by_name
from gtype.gl2 import FULL_NINE_GENERATORS, matrix_group
from gtype.groups import (
    NOT_NILPOTENT, FiniteGroup, PermCarrier, abelian_invariants, alternating_group,
    closure, commutator_subgroup, cyclic_group, dihedral_group, direct_product,
    exponent, is_subdirect_product, isomorphic, lambda_p, nilpotency_class,
    normal_subgroups, parse_permutation, perm_group, quotient, symmetric_group,
    trivial_group,
)

A4 = alternating_group(4)
S3 = dihedral_group(3)
V4 = perm_group(["(1 2)(3 4)", "(1 3)(2 4)"])
C = corpus_by_name()
small = [G for G in corpus() if G.order <= 16]


def brute_commutators(G):
    return closure([G.comm(a, b) for a in G.elements for b in G.elements], G.carrier)


# ----------------------------------------------------------------- closure

def test_closure_examples():
    assert perm_group(["(1 2 3)", "(1 2)(3 4)"]).order == 12
    assert trivial_group(PermCarrier(4)).order == 1
    assert closure([], PermCarrier(3)).order == 1
    H = matrix_group(FULL_NINE_GENERATORS, 9)
    assert all(m[1] == 0 and m[2] == 0 for m in H.elements)


@pytest.mark.parametrize("G", corpus(), ids=lambda G: G.name)
def test_closure_is_idempotent(G):
    assert closure(G.elements, G.carrier).element_set == G.element_set


def test_parse_permutation_positions():
    assert parse_permutation("(1 2 3)(4 5)") == (1, 2, 0, 4, 3)
    with pytest.raises(ValueError, match="column"):
        parse_permutation("(1 2) x")
    with pytest.raises(ValueError):
        parse_permutation("(1 2)(2 3)")


# ------------------------------------------------------ commutators, lambda

def test_commutator_subgroup_examples():
    assert commutator_subgroup(A4).element_set == V4.element_set
    assert commutator_subgroup(cyclic_group(6)).order == 1
    assert commutator_subgroup(S3).order == 3


@pytest.mark.parametrize("G", small, ids=lambda G: G.name)
def test_commutator_subgroup_brute_force(G):
    assert commutator_subgroup(G).element_set == brute_commutators(G).element_set


def test_lambda_examples():
    L = lambda_p(A4, 3)
    assert L.element_set == V4.element_set
    assert lambda_p(cyclic_group(4), 2).order == 2
    assert lambda_p(V4, 2).order == 1


@pytest.mark.parametrize("G", corpus(), ids=lambda G: G.name)
@pytest.mark.parametrize("p", [2, 3])
def test_lambda_quotient_is_elementary(G, p):
    L = lambda_p(G, p)
    assert L.is_normal_in(G)
    Q = quotient(G, L)
    assert all(d == p for d in abelian_invariants(Q))
    assert exponent(Q) in (1, p)
    # brute-force route: closure of commutators and p-th powers
    gens = [G.comm(a, b) for a in G.elements for b in G.elements] + [G.pow(g, p) for g in G.elements]
    assert closure(gens, G.carrier).element_set == L.element_set


# ---------------------------------------------------------------- quotients

def test_quotient_examples():
    Q = quotient(A4, commutator_subgroup(A4))
    assert Q.order == 3 and isomorphic(Q, cyclic_group(3))
    assert quotient(A4, A4).order == 1
    assert isomorphic(quotient(A4, trivial_group(A4.carrier)), A4)


@pytest.mark.parametrize("G", small, ids=lambda G: G.name)
def test_quotient_sizes_multiply(G):
    for N in normal_subgroups(G):
        assert quotient(G, N).order * N.order == G.order


def test_quotient_rejects_non_normal():
    with pytest.raises(ValueError):
        quotient(symmetric_group(3), perm_group(["(1 2)"], degree=3))


# ---------------------------------------------------------------- invariants

def test_abelian_invariants_examples():
    assert abelian_invariants(A4) == [3]
    assert abelian_invariants(V4) == [2, 2]
    assert abelian_invariants(cyclic_group(6)) == [6]


@pytest.mark.parametrize("G", corpus(), ids=lambda G: G.name)
def test_abelian_invariants_multiply_to_index(G):
    inv = abelian_invariants(G)
    prod = 1
    for d in inv:
        prod *= d
    assert prod * commutator_subgroup(G).order == G.order
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))


def test_exponent_examples():
    assert exponent(A4) == 6
    assert exponent(S3) == 6
    assert exponent(cyclic_group(8)) == 8


@pytest.mark.parametrize("G", corpus(), ids=lambda G: G.name)
def test_exponent_divides_order(G):
    assert G.order % exponent(G) == 0


# ---------------------------------------------------------------- subdirect

def test_subdirect_examples():
    P = direct_product([A4, A4])
    diag = closure([(g, g) for g in A4.generators], P.carrier)
    assert is_subdirect_product(diag, [A4, A4])
    left = closure([(g, A4.identity) for g in A4.generators], P.carrier)
    assert not is_subdirect_product(left, [A4, A4])
    # twisted diagonal by the outer automorphism "conjugate by (1 2)"
    t = parse_permutation("(1 2)", 4)
    sigma = lambda g: PermCarrier(4).mul(PermCarrier(4).mul(t, g), t)  # noqa: E731
    tw = closure([(g, sigma(g)) for g in A4.generators], P.carrier)
    assert tw.order == 12 and is_subdirect_product(tw, [A4, A4])


# ---------------------------------------------------------------- nilpotency

def test_nilpotency_examples():
    assert nilpotency_class(C["D4"]) == 2
    assert nilpotency_class(cyclic_group(5)) == 1
    assert nilpotency_class(S3) == NOT_NILPOTENT


# ---------------------------------------------------------------- isomorphism

def test_isomorphic_examples():
    from gtype.gentype import build_Dpq
    assert isomorphic(build_Dpq(3, 2), A4)
    assert not isomorphic(cyclic_group(4), V4)
    assert not isomorphic(C["D4"], C["Q8"])


def test_isomorphism_relation_on_small_corpus():
    names = [G.name for G in small]
    for i, G in enumerate(small):
        assert isomorphic(G, G)
        for H in small[i + 1:]:
            assert not isomorphic(G, H), (G.name, H.name)
    assert len(set(names)) == len(names)


@given(st.integers(0, len(small) - 1), st.integers(0, len(small) - 1))
def test_isomorphic_is_symmetric(i, j):
    assert isomorphic(small[i], small[j]) == isomorphic(small[j], small[i])


# ---------------------------------------------------------------- serialization

@pytest.mark.parametrize("G", [A4, cyclic_group(5), matrix_group(FULL_NINE_GENERATORS, 9), C["Q8"]],
                         ids=["A4", "C5", "mod9", "Q8"])
def test_group_json_round_trip(G):
    H = FiniteGroup.from_json(G.to_json())
    assert H.element_set == G.element_set
