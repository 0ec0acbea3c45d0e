"""Acceptance criteria, one test each, with a wall-clock limit per criterion.

Every test prints ``criterion N: PASS|FAIL (t s, limit L s)`` so the run log
doubles as the acceptance report.
"""
import time
from fractions import Fraction

import pytest

from gtype.algebra import Poly, discriminant
from gtype.classify import ALLOWED_QA4, classify_A4inf, classify_C3inf, classify_QA4
from gtype.corpus import corpus
from gtype.curves import EllipticCurve, division_polynomial_f
from gtype.families import CM_SPECIAL_TABLE, CM_TABLE, isogeny_family_models
from gtype.fetch import bundled_curves, bundled_sweep
from gtype.gentype import build_Dpq, cyclotomic_in_genA4, is_weak_Dpq_type, universal_group
from gtype.gl2 import (
    FULL_NINE_GENERATORS, THREE_BY_NINE_GENERATORS, full_three_torsion_theorem,
    nonsplit_cartan_normalizer_check7, nonsplit_cartan_report, verify_maximal,
)
from gtype.groups import alternating_group, cyclic_group, dihedral_group, direct_product, exponent, isomorphic
from gtype.structures import TorsionStructure as T, poset_leq
from gtype.verify import (
    REFERENCE_TABLE, Z14_EXAMPLES, dpq_pairs, embeddable_structures, structural_genA4,
    structures_up_to, uniqueness_audit,
)

LIMITS = {1: 30, 2: 10, 3: 60, 4: 60, 5: 60, 6: 300, 7: 120, 8: 10, 9: 30, 10: 120,
          11: 300, 12: 180, 13: 60}


@pytest.fixture
def criterion(capsys):
    """Run body(), time it, print the report line and assert pass and limit."""
    def run(n, body, extra=""):
        t0 = time.perf_counter()
        ok = bool(body())
        dt = time.perf_counter() - t0
        passed = ok and dt < LIMITS[n]
        with capsys.disabled():
            tail = f"; {extra()}" if callable(extra) else (f"; {extra}" if extra else "")
            print(f"\ncriterion {n}: {'PASS' if passed else 'FAIL'} "
                  f"({dt:.2f} s, limit {LIMITS[n]} s){tail}")
        assert ok, f"criterion {n} check failed"
        assert dt < LIMITS[n], f"criterion {n} took {dt:.1f} s"
    return run


def curve(label):
    return EllipticCurve(bundled_curves()[label]["ainvs"], label=label)


def test_criterion_01_lambda_criterion(criterion):
    groups = corpus()

    def body():
        return len(groups) == 57 and all(
            is_weak_Dpq_type(G, 3, 2) == structural_genA4(G) for G in groups)
    criterion(1, body)


def test_criterion_02_cyclotomic_scan(criterion):
    criterion(2, lambda: all(cyclotomic_in_genA4(n) == (504 % n == 0) for n in range(1, 601)))


def test_criterion_03_dpq_realization(criterion):
    def body():
        pairs = dpq_pairs(10 ** 4)
        return (isomorphic(build_Dpq(3, 2), alternating_group(4))
                and isomorphic(build_Dpq(2, 3), dihedral_group(3))
                and len(pairs) == 3775
                and all(is_weak_Dpq_type(build_Dpq(p, q), p, q) for p, q in pairs))
    criterion(3, body)


def test_criterion_04_universal_groups(criterion):
    def body():
        c2 = cyclic_group(2)
        if not isomorphic(universal_group(c2, 2), direct_product([c2, c2])):
            return False
        if not isomorphic(universal_group(alternating_group(4), 1), cyclic_group(6)):
            return False
        for G in corpus():
            U = universal_group(G, 1)
            if not any(U.element_order(x) == U.order for x in U.elements):
                return False
            if exponent(G) % U.order:
                return False
        return True
    criterion(4, body)


def test_criterion_05_mod3_full_torsion(criterion):
    def body():
        rep = full_three_torsion_theorem()
        return rep["subgroups_total"] == 55 and rep["qualifying"] > 0 and rep["all_conjugate_into_diagonal"]
    criterion(5, body)


def test_criterion_06_mod9_generators(criterion):
    def body():
        full = verify_maximal(9, FULL_NINE_GENERATORS, "genA4-full-torsion")
        t39 = verify_maximal(9, THREE_BY_NINE_GENERATORS, "genA4-3x9-torsion")
        return (len(FULL_NINE_GENERATORS) == 4 and len(THREE_BY_NINE_GENERATORS) == 5
                and full.satisfies and full.maximal
                and t39.satisfies and t39.maximal and t39.torsion == T(3, 9))
    criterion(6, body)


def test_criterion_07_mod7_cartan(criterion):
    rep = {}

    def body():
        rep.update(nonsplit_cartan_report())
        return nonsplit_cartan_normalizer_check7() and rep["classes"] == 2
    criterion(7, body, extra=lambda: (f"classes {rep.get('classes')}, "
                                      f"nonsplit search {rep.get('nonsplit_qualifying_subgroups')}"))


def test_criterion_08_division_polynomials(criterion):
    def body():
        s, zero = Poly((0, 1), "s"), Poly((), "s")
        c = lambda k: Poly((k,), "s")
        f0 = division_polynomial_f(zero, zero, 4 * s, zero, 3)
        f1 = division_polynomial_f(zero, 2 * s, zero, -(s * s), 3)
        x = Poly((zero, c(1)))
        want0 = c(3) * x * (x ** 3 + Poly((4 * s,)))
        want1 = Poly((-(s * s), zero, 6 * s, zero, c(3)))
        return (f0 == want0 and f1 == want1
                and discriminant(want1) == Poly((0,) * 6 + (-(2 ** 12) * 3 ** 3,), "s"))
    criterion(8, body)


def test_criterion_09_square_identities(criterion):
    kernels = {"13-isogeny": "t^3+6*t^2+13*t", "7-isogeny": "t",
               "5-torsion": "t^3-11*t^2-t", "3-isogeny": "t"}

    def body():
        models = isogeny_family_models()
        return all(str(models[k].disc_square_kernel) == str(Poly.from_text(v, "t"))
                   and models[k].square_identity_root() is not None
                   for k, v in kernels.items())
    criterion(9, body)


def test_criterion_10_reference_and_cm_tables(criterion):
    def body():
        rows = all(classify_A4inf(curve(k)).torsion == T(*v) for k, v in REFERENCE_TABLE.items())
        cm = all(classify_A4inf(curve(k)).torsion == v
                 for table in (CM_TABLE, CM_SPECIAL_TABLE) for k, v in table.items())
        return len(REFERENCE_TABLE) == 26 and rows and cm
    criterion(10, body)


def test_criterion_11_uniqueness_audit(criterion):
    rep = {}

    def body():
        rep.update(uniqueness_audit(samples=500, seed=2024))
        return not rep["failures"] and rep["samples_per_map"] == 500
    criterion(11, body, extra=lambda: f"{rep.get('maps')} maps x 500 parameters")


def test_criterion_12_strong_type_sweep(criterion):
    def body():
        labels = bundled_sweep()
        if len(labels) != 200:
            return False
        for label in labels:
            E = curve(label)
            q = classify_QA4(E).torsion
            if q not in ALLOWED_QA4 or classify_C3inf(E).torsion != q:
                return False
        return all(classify_QA4(curve(k)).torsion == T(1, 14) for k in Z14_EXAMPLES)
    criterion(12, body)


def test_criterion_13_poset_oracle(criterion):
    def body():
        structs = structures_up_to(36)
        for t2 in structs:
            emb = embeddable_structures(t2)
            if any(poset_leq(t1, t2) != ((t1.a, t1.b) in emb) for t1 in structs):
                return False
        return len(structs) == 140
    criterion(13, body)
