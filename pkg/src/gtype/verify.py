"""Verification battery: every computational claim the package relies on,
re-derived from scratch and reported with a short description of its source.

Each check runs independently; an exception inside one check marks that check
as failed and the battery carries on.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import Poly, discriminant
from .classify import (
    ALLOWED_QA4, classify_A4inf, classify_C3inf, classify_QA4, maximal_elements,
)
from .corpus import corpus
from .curves import EllipticCurve, division_polynomial_f
from .families import (
    CM_SPECIAL_TABLE, CM_TABLE, EXAMPLE_MODELS, _ISOGENY_MODELS, jmap_database,
    matched_families,
)
from .fetch import bundled_curves
from .gentype import (
    build_Dpq, cyclotomic_in_genA4, is_weak_Dpq_type, universal_group,
)
from .gl2 import (
    FULL_NINE_GENERATORS, THREE_BY_NINE_GENERATORS, full_three_torsion_theorem,
    nonsplit_cartan_normalizer_check7, nonsplit_cartan_report, verify_maximal,
)
from .groups import (
    alternating_group, cyclic_group, direct_product, dihedral_group, exponent,
    isomorphic, normal_subgroups,
)
from .structures import TorsionStructure, poset_leq

SUITES = ("gtype", "gl2", "families", "classify")

# Reference curves with their torsion over the generalized A4 compositum.
REFERENCE_TABLE = {
    "11a2": (1, 1), "44a1": (1, 3), "11a1": (1, 5), "26b1": (1, 7), "19a2": (1, 9),
    "147b1": (1, 13), "50a3": (1, 15), "162b1": (1, 21), "46a1": (2, 2), "17a3": (2, 4),
    "20a1": (2, 6), "15a5": (2, 8), "66c1": (2, 10), "30a1": (2, 12), "49a1": (2, 14),
    "210e1": (2, 16), "14a3": (2, 18), "19a1": (3, 3), "27a1": (3, 9), "17a1": (4, 4),
    "15a2": (4, 8), "30a2": (4, 12), "210e2": (4, 16), "1922c1": (4, 28), "14a1": (6, 6),
    "15a1": (8, 8),
}

# Curves whose torsion over the A4 compositum grows to Z/14.
Z14_EXAMPLES = ("49a4", "49a3")


@dataclass
class CheckResult:
    suite: str
    name: str
    cite: str
    passed: bool
    detail: object
    seconds: float

    def to_json(self) -> dict:
        return {
            "suite": self.suite, "check": self.name, "cite": self.cite,
            "passed": self.passed, "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    cite: str
    run: Callable  # (options) -> (passed, detail)


def _curve(label: str) -> EllipticCurve:
    return EllipticCurve(bundled_curves()[label]["ainvs"], label=label)


# -------------------------------------------------------------------- gtype

def structural_genA4(G) -> bool:
    """Independent route: a normal elementary abelian 2-subgroup N with G/N
    elementary abelian of exponent 3."""
    e = G.identity
    for N in normal_subgroups(G):
        if any(G.mul(x, x) != e for x in N.elements):
            continue
        Ns = N.element_set
        if all(G.pow(g, 3) in Ns for g in G.elements) and \
                all(G.comm(a, b) in Ns for a in G.generators for b in G.generators):
            return True
    return False


def check_lambda_criterion(opts) -> tuple:
    bad = [G.name for G in corpus() if is_weak_Dpq_type(G, 3, 2) != structural_genA4(G)]
    return not bad, {"groups": len(corpus()), "disagreements": bad}


def check_cyclotomic(opts) -> tuple:
    limit = opts.get("cyclotomic_limit", 600)
    bad = [n for n in range(1, limit + 1) if cyclotomic_in_genA4(n) != (504 % n == 0)]
    hits = [n for n in range(1, limit + 1) if 504 % n == 0]
    return not bad, {"range": [1, limit], "divisors_of_504": len(hits), "mismatches": bad}


def dpq_pairs(bound: int = 10 ** 4) -> list[tuple[int, int]]:
    """Prime pairs (p, q), p != q, with q^f <= bound where f = ord_p(q)."""
    from .algebra import factorint, primes
    out = set()
    for q in primes(bound):
        qf, f = q, 1
        while qf <= bound:
            for p in factorint(qf - 1):
                if pow(q, f, p) == 1 and all(pow(q, k, p) != 1 for k in range(1, f)):
                    out.add((p, q))
            qf *= q
            f += 1
    return sorted(out)


def check_dpq(opts) -> tuple:
    a4 = isomorphic(build_Dpq(3, 2), alternating_group(4))
    s3 = isomorphic(build_Dpq(2, 3), dihedral_group(3))
    pairs = dpq_pairs(opts.get("dpq_bound", 10 ** 4))
    bad = [pq for pq in pairs if not is_weak_Dpq_type(build_Dpq(*pq), *pq)]
    return a4 and s3 and not bad, {
        "D(3,2)=A4": a4, "D(2,3)=S3": s3, "pairs": len(pairs), "failures": bad[:10]}


def check_universal(opts) -> tuple:
    c2 = cyclic_group(2)
    u22 = isomorphic(universal_group(c2, 2), direct_product([c2, c2]))
    ua4 = isomorphic(universal_group(alternating_group(4), 1), cyclic_group(6))
    bad = []
    for G in corpus():
        U = universal_group(G, 1)
        n = U.order
        # a group with an element of order |U| is cyclic, and so is each quotient
        cyclic = any(U.element_order(x) == n for x in U.elements)
        if not cyclic or exponent(G) % n:
            bad.append(G.name)
    return u22 and ua4 and not bad, {
        "U(C2,2)=C2xC2": u22, "U(A4,1)=C6": ua4, "corpus_failures": bad}


# ---------------------------------------------------------------------- gl2

def check_mod3(opts) -> tuple:
    rep = full_three_torsion_theorem()
    return rep["all_conjugate_into_diagonal"] and rep["qualifying"] > 0, rep


def check_mod9(opts) -> tuple:
    full = verify_maximal(9, FULL_NINE_GENERATORS, "genA4-full-torsion")
    t39 = verify_maximal(9, THREE_BY_NINE_GENERATORS, "genA4-3x9-torsion")
    ok = (full.satisfies and full.maximal and t39.satisfies and t39.maximal
          and t39.torsion == TorsionStructure(3, 9))
    return ok, {"four_generators": full.to_json(), "five_generators": t39.to_json()}


def check_mod7(opts) -> tuple:
    rep = nonsplit_cartan_report()
    ok = nonsplit_cartan_normalizer_check7() and rep["classes"] == 2
    return ok, rep


# ----------------------------------------------------------------- families

def _poly_s(*coeffs) -> Poly:
    return Poly(coeffs, "s")


def check_psi3(opts) -> tuple:
    s, zero = _poly_s(0, 1), _poly_s()
    # y^2 = x^3 + s:  b2 = b4 = b8 = 0, b6 = 4s
    f0 = division_polynomial_f(zero, zero, 4 * s, zero, 3)
    want0 = Poly((zero, 12 * s, zero, zero, _poly_s(3)))
    # y^2 = x^3 + s x:  b2 = b6 = 0, b4 = 2s, b8 = -s^2
    f1 = division_polynomial_f(zero, 2 * s, zero, -(s * s), 3)
    want1 = Poly((-(s * s), zero, 6 * s, zero, _poly_s(3)))
    disc = discriminant(want1)
    want_disc = _poly_s(0, 0, 0, 0, 0, 0, -(2 ** 12) * 3 ** 3)
    ok = f0 == want0 and f1 == want1 and disc == want_disc
    return ok, {"j0": str(f0), "j1728": str(f1), "discriminant": str(disc)}


def check_square_identities(opts) -> tuple:
    out = {}
    for name, model in _ISOGENY_MODELS.items():
        root = model.square_identity_root()
        out[name] = {"kernel": model.kernel_text, "square": root is not None}
    return all(v["square"] for v in out.values()), out


def check_jmap_database(opts) -> tuple:
    db = jmap_database()
    bad = []
    for label, fam in db.items():
        for m in fam.maps:
            for t in (Fraction(2), Fraction(-3, 5), Fraction(7, 4)):
                try:
                    a = m(t)
                except ZeroDivisionError:
                    continue
                if a != m.evaluate_stepwise(t):
                    bad.append((str(label), str(t)))
    return len(db) == 26 and not bad, {"rows": len(db), "stepwise_mismatches": bad}


def check_example_models(opts) -> tuple:
    """Both 1922 curves reach Z/4 + Z/28 over the generalized A4 compositum;
    only 1922c1 lies in the 2x14 example model."""
    out = {}
    for label in ("1922c1", "1922e2"):
        E = _curve(label)
        out[label] = {
            "example_parameters": [str(t) for t in EXAMPLE_MODELS["2x14"].contains_curve(E)],
            "A4inf": classify_A4inf(E).torsion.to_json(),
        }
    ok = (bool(out["1922c1"]["example_parameters"]) and not out["1922e2"]["example_parameters"]
          and all(v["A4inf"] == [4, 28] for v in out.values()))
    return ok, out


# ----------------------------------------------------------------- classify

def check_reference_table(opts) -> tuple:
    bad = {}
    for label, want in REFERENCE_TABLE.items():
        got = classify_A4inf(_curve(label)).torsion
        if got.to_json() != list(want):
            bad[label] = [got.to_json(), list(want)]
    return not bad, {"rows": len(REFERENCE_TABLE), "mismatches": bad}


def check_cm_tables(opts) -> tuple:
    bad = {}
    for table in (CM_TABLE, CM_SPECIAL_TABLE):
        for label, want in table.items():
            got = classify_A4inf(_curve(label)).torsion
            if got != want:
                bad[label] = [got.to_json(), want.to_json()]
    return not bad, {"rows": len(CM_TABLE) + len(CM_SPECIAL_TABLE), "mismatches": bad}


def uniqueness_audit(samples: int = 500, seed: int = 2024, height: tuple = (60, 30)) -> dict:
    """Random rational t on every j-map: the matched structures of j(t) must
    have a unique maximal element, and it must contain the family label."""
    rng = random.Random(seed)
    fails, counts = [], {}
    for label, fam in jmap_database().items():
        if fam.kind != "rational-map":
            continue
        for index, m in enumerate(fam.maps):
            n = 0
            while n < samples:
                t = Fraction(rng.randint(-height[0], height[0]), rng.randint(1, height[1]))
                try:
                    j = m(t)
                except ZeroDivisionError:
                    continue
                if j in (0, 1728):
                    continue
                n += 1
                top = maximal_elements(matched_families(j))
                if len(top) != 1 or not label.leq(top[0]):
                    fails.append({"family": str(label), "map": index, "t": str(t),
                                  "maximal": [str(x) for x in top]})
            counts[f"{label}#{index}"] = n
    return {"maps": len(counts), "samples_per_map": samples, "seed": seed, "failures": fails}


def check_audit(opts) -> tuple:
    rep = uniqueness_audit(opts.get("samples", 500), opts.get("seed", 2024))
    return not rep["failures"], rep


def qa4_sweep(labels=None) -> dict:
    data = bundled_curves()
    if labels is None:
        from .fetch import bundled_sweep
        labels = bundled_sweep()
    outside, c3_diff, not_below = [], [], []
    counts: dict = {}
    for label in labels:
        E = EllipticCurve(data[label]["ainvs"], label=label)
        q = classify_QA4(E).torsion
        counts[str(q)] = counts.get(str(q), 0) + 1
        if q not in ALLOWED_QA4:
            outside.append(label)
        if classify_C3inf(E).torsion != q:
            c3_diff.append(label)
        if not q.leq(classify_A4inf(E).torsion):
            not_below.append(label)
    return {"curves": len(labels), "distribution": dict(sorted(counts.items())),
            "outside_list": outside, "c3_differs": c3_diff, "not_below_A4inf": not_below}


def check_qa4(opts) -> tuple:
    rep = qa4_sweep()
    z14 = {k: str(classify_QA4(_curve(k)).torsion) for k in Z14_EXAMPLES}
    rep["z14_examples"] = z14
    ok = (not rep["outside_list"] and not rep["c3_differs"] and not rep["not_below_A4inf"]
          and all(v == "Z/14" for v in z14.values()))
    return ok, rep


def structures_up_to(bmax: int) -> list[TorsionStructure]:
    return [TorsionStructure(a, b) for b in range(1, bmax + 1) for a in range(1, b + 1) if b % a == 0]


def embeddable_structures(T: TorsionStructure) -> set:
    """Brute force: every (a1, b1) such that Z/a + Z/b contains x of order b1
    and y of order a1 with <x> and <y> meeting trivially."""
    a, b = T.a, T.b
    cyc: dict = {}
    for u in range(a):
        for v in range(b):
            sub = frozenset(((k * u) % a, (k * v) % b) for k in range(a * b))
            cyc.setdefault(len(sub), set()).add(sub)
    found = set()
    orders = sorted(cyc)
    for d1 in orders:
        for d2 in orders:
            if d1 % d2:
                continue
            if any(len(c1 & c2) == 1 for c1 in cyc[d1] for c2 in cyc[d2]):
                found.add((d2, d1))
    return found


def check_poset(opts) -> tuple:
    bmax = opts.get("poset_bound", 36)
    structs = structures_up_to(bmax)
    bad = []
    for T2 in structs:
        emb = embeddable_structures(T2)
        for T1 in structs:
            if poset_leq(T1, T2) != ((T1.a, T1.b) in emb):
                bad.append([T1.to_json(), T2.to_json()])
    return not bad, {"structures": len(structs), "pairs": len(structs) ** 2, "mismatches": bad[:10]}


CHECKS = (
    Check("gtype", "lambda-criterion", "weak D(3,2)-type iff lambda_2(lambda_3(H)) = 1, "
          "against normal elementary abelian 2-subgroups with exponent-3 abelian quotient",
          check_lambda_criterion),
    Check("gtype", "cyclotomic-scan", "Q(zeta_n) is of generalized A4-type iff n | 504",
          check_cyclotomic),
    Check("gtype", "dpq-realization", "D(3,2) = A4, D(2,3) = S3, and D(p,q) is weak D(p,q)-type",
          check_dpq),
    Check("gtype", "universal-groups", "universal groups: U(G,1) is cyclic of order dividing exp(G)",
          check_universal),
    Check("gl2", "mod3-full-torsion", "genA4 images with full rational 3-torsion are split Cartan",
          check_mod3),
    Check("gl2", "mod9-maximal", "the two mod-9 generator sets are maximal for their properties",
          check_mod9),
    Check("gl2", "mod7-cartan", "no generalized A4-type image in the mod-7 Cartan normalizer cases",
          check_mod7),
    Check("families", "psi3-cm", "3-division polynomials of y^2 = x^3 + s and y^2 = x^3 + s x",
          check_psi3),
    Check("families", "disc-square", "disc * kernel is a square for the 13-, 7-, 5- and 3-families",
          check_square_identities),
    Check("families", "jmap-database", "26 j-map rows; composed maps equal stepwise evaluation",
          check_jmap_database),
    Check("families", "2x14-example", "the 2x14 example model and the two 1922 reference curves",
          check_example_models),
    Check("classify", "reference-table", "torsion over the A4 compositum for the 26 reference curves",
          check_reference_table),
    Check("classify", "cm-tables", "CM curves: torsion over the A4 compositum", check_cm_tables),
    Check("classify", "uniqueness-audit", "every j(t) has a unique maximal matched structure",
          check_audit),
    Check("classify", "qa4-sweep", "strong-type torsion list and cyclic cubic equality on the sweep",
          check_qa4),
    Check("classify", "poset", "poset order equals subgroup existence in Z/a + Z/b", check_poset),
)


def run_checks(suites=None, names=None, **opts) -> list[CheckResult]:
    suites = tuple(suites) if suites else SUITES
    for s in suites:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}; expected one of {SUITES}")
    out = []
    for c in CHECKS:
        if c.suite not in suites or (names and c.name not in names):
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = c.run(opts)
        except Exception as exc:  # one broken check must not hide the others
            passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        out.append(CheckResult(c.suite, c.name, c.cite, bool(passed), detail,
                               time.perf_counter() - t0))
    return out


def summary(results) -> dict:
    return {
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "checks": [r.to_json() for r in results],
    }

