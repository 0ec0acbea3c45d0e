"""Generalized-type Galois groups and torsion of elliptic curves over their composita."""
from .algebra import Poly, RationalFunction, discriminant, rational_roots
from .classify import (
    ALLOWED_A4INF, ALLOWED_QA4, ClassificationReport, classify, classify_A4inf,
    classify_C3inf, classify_QA4,
)
from .curves import EllipticCurve, division_polynomial, rational_torsion
from .families import jmap_database, jmap_eval, jmap_fibers, matched_families
from .fetch import CurveRecord, fetch_curve
from .gentype import (
    build_Dpq, cyclotomic_in_genA4, is_generalized_A4_type, is_strong_Dpq_type,
    is_weak_Dpq_type, universal_group,
)
from .groups import FiniteGroup, lambda_p
from .structures import TorsionStructure, poset_leq

__version__ = "0.1.0"
