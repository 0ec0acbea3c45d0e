"""gtype command line.

    gtype group-check --perm "(1 2 3),(1 2)(3 4)" --test genA4
    gtype torsion --coeffs 0,0,0,0,2 --field A4inf --trace
    gtype fetch 11a2 49a1
    gtype verify-paper --suite gl2
    gtype catalog --out families.json

Exit codes: 0 ok, 1 check failure, 2 input error, 3 network error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .classify import FIELDS, ClassificationError, classify
from .curves import EllipticCurve, SingularCurveError
from .fetch import (
    FetchError, LabelSyntaxError, LABEL_RE, NetworkError, OfflineError,
    fetch_curve,
)
from .gentype import (
    WordSyntaxError, build_Dpq, genA4_witness, is_strong_Dpq_type, parse_word,
    relation_counterexample, weak_Dpq_witness,
)
from .groups import (
    FiniteGroup, GroupSizeError, PermCarrier, cyclic_group, format_permutation, perm_group,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NETWORK = 0, 1, 2, 3


class InputError(ValueError):
    pass


def emit(data, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _error(kind: str, message: str) -> dict:
    return {"error": kind, "message": message}


# -------------------------------------------------------------- group-check

def split_generators(text: str) -> list[str]:
    """Split "(1 2 3),(1 2)(3 4)" at commas outside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputError(f"unbalanced ')' at column {i + 1}")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise InputError(f"unclosed '(' in {text!r}")
    parts.append(text[start:])
    parts = [p.strip() for p in parts]
    if not all(parts):
        raise InputError(f"empty generator in {text!r}")
    return parts


def format_element(G: FiniteGroup, x):
    if isinstance(G.carrier, PermCarrier):
        return format_permutation(x)
    return G.carrier.encode(x)


def build_group(args) -> FiniteGroup:
    if args.perm is not None:
        try:
            return perm_group(split_generators(args.perm), name=args.perm)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if args.cyclic is not None:
        if args.cyclic < 1:
            raise InputError("--cyclic needs a positive order")
        return cyclic_group(args.cyclic)
    if args.dpq is not None:
        try:
            return build_Dpq(*args.dpq)
        except (ValueError, GroupSizeError) as exc:
            raise InputError(str(exc)) from exc
    if args.group_json is not None:
        try:
            with open(args.group_json, encoding="utf-8") as fh:
                return FiniteGroup.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read group from {args.group_json}: {exc}") from exc
    raise InputError("give one of --perm, --cyclic, --dpq, --group-json")


def _prime_pair(values: Sequence[str], test: str) -> tuple[int, int]:
    if len(values) != 2:
        raise InputError(f"--test {test} needs two primes p q")
    try:
        return int(values[0]), int(values[1])
    except ValueError as exc:
        raise InputError(f"--test {test}: {exc}") from exc


def cmd_group_check(args) -> int:
    G = build_group(args)
    test, rest = args.test[0], args.test[1:]
    report = {"group": {"name": G.name, "order": G.order}, "test": " ".join(args.test)}
    try:
        if test == "genA4":
            w = genA4_witness(G)
            report.update(verdict=w is None,
                          witness=None if w is None else format_element(G, w))
        elif test == "weak-dpq":
            p, q = _prime_pair(rest, test)
            w = weak_Dpq_witness(G, p, q)
            report.update(verdict=w is None,
                          witness=None if w is None else format_element(G, w))
        elif test == "strong-dpq":
            p, q = _prime_pair(rest, test)
            report.update(verdict=is_strong_Dpq_type(G, p, q))
        elif test == "relation":
            if len(rest) != 1:
                raise InputError("--test relation needs one word, e.g. \"[x1,x2]^2\"")
            word = parse_word(rest[0])
            k = args.arity or word.arity
            if G.order ** k > 10 ** 7:
                raise InputError(f"|G|^{k} tuples is beyond the search cap")
            bad = relation_counterexample(G, word, k)
            report.update(word=str(word), arity=k, verdict=bad is None,
                          witness=None if bad is None else [format_element(G, x) for x in bad])
        else:
            raise InputError(f"unknown test {test!r}; use genA4, weak-dpq, strong-dpq or relation")
    except WordSyntaxError as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    emit(report)
    return EXIT_OK


# ------------------------------------------------------------------ torsion

def _parse_coeffs(text: str) -> EllipticCurve:
    try:
        return EllipticCurve.parse(text)
    except SingularCurveError as exc:
        raise InputError(str(exc)) from exc
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read coefficients {text!r}: {exc}") from exc


def _resolve(item: tuple[str, str]) -> EllipticCurve:
    kind, text = item
    if kind == "label":
        return fetch_curve(text).curve()
    return _parse_coeffs(text)


def _stdin_items(stream) -> list[tuple[str, str]]:
    out = []
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(("label" if LABEL_RE.match(line) else "coeffs", line))
    return out


def _torsion_one(item, field_name: str, trace: bool) -> tuple[int, dict]:
    try:
        E = _resolve(item)
    except (OfflineError, NetworkError) as exc:
        return EXIT_NETWORK, _error("network", str(exc))
    except LabelSyntaxError as exc:
        return EXIT_INPUT, _error("input", str(exc))
    except FetchError as exc:
        return EXIT_NETWORK, _error("fetch", str(exc))
    except InputError as exc:
        return EXIT_INPUT, _error("input", str(exc))
    try:
        return EXIT_OK, classify(E, field_name).to_json(trace=trace)
    except ClassificationError as exc:
        return EXIT_FAIL, _error("classification", str(exc))


def cmd_torsion(args) -> int:
    items = [("coeffs", c) for c in args.coeffs or []] + [("label", lab) for lab in args.label or []]
    if not items:
        items = _stdin_items(sys.stdin)
    if not items:
        raise InputError("no curve given: use --coeffs, --label or stdin")
    workers = max(1, min(args.jobs, len(items)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda it: _torsion_one(it, args.field, args.trace), items))
    for (kind, text), (_, out) in zip(items, results):
        if "error" in out:
            out["input"] = text
    payload = results[0][1] if len(results) == 1 else [r[1] for r in results]
    emit(payload)
    return max(code for code, _ in results)


# -------------------------------------------------------------------- fetch

def cmd_fetch(args) -> int:
    records, code = [], EXIT_OK
    for label in args.labels:
        try:
            rec = fetch_curve(label, use_fixtures=not args.no_fixtures)
        except LabelSyntaxError as exc:
            records.append(_error("input", str(exc)) | {"input": label})
            code = max(code, EXIT_INPUT)
            continue
        except FetchError as exc:
            records.append(_error(type(exc).__name__, str(exc)) | {"input": label})
            code = max(code, EXIT_NETWORK)
            continue
        out = rec.to_json()
        out["j"] = str(rec.curve().j)
        records.append(out)
    emit(records[0] if len(records) == 1 else records)
    return code


# ------------------------------------------------------------- verify-paper

def cmd_verify_paper(args) -> int:
    from .verify import run_checks, summary

    results = run_checks(args.suite, args.check, samples=args.samples, seed=args.seed)
    for r in results:
        flag = "PASS" if r.passed else "FAIL"
        print(f"[{flag}] {r.suite}/{r.name} ({r.seconds:.2f}s): {r.cite}", file=sys.stderr)
    emit(summary(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_catalog(args) -> int:
    from .families import catalog, write_catalog

    if args.out:
        write_catalog(args.out)
    else:
        emit(catalog())
    return EXIT_OK


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gtype", description="Generalized-type groups and torsion growth.")
    ap.add_argument("--seed", type=int, default=2024, help="seed for randomized checks")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group-check", help="test a finite group")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--perm", help='generators in cycle notation, e.g. "(1 2 3),(1 2)(3 4)"')
    src.add_argument("--cyclic", type=int, metavar="N")
    src.add_argument("--dpq", type=int, nargs=2, metavar=("P", "Q"))
    src.add_argument("--group-json", metavar="FILE")
    g.add_argument("--test", nargs="+", required=True,
                   help="genA4 | weak-dpq P Q | strong-dpq P Q | relation WORD")
    g.add_argument("--arity", type=int, default=None, help="tuple length for relation tests")
    g.set_defaults(func=cmd_group_check)

    t = sub.add_parser("torsion", help="torsion over an infinite extension")
    t.add_argument("--coeffs", action="append", help="a1,a2,a3,a4,a6 or A,B (repeatable)")
    t.add_argument("--label", action="append", help="Cremona label (repeatable)")
    t.add_argument("--field", choices=FIELDS, default="A4inf")
    t.add_argument("--trace", action="store_true", help="include the rule trace")
    t.add_argument("--jobs", type=int, default=4, help="concurrent workers for batches")
    t.set_defaults(func=cmd_torsion)

    f = sub.add_parser("fetch", help="look up curves by label")
    f.add_argument("labels", nargs="+")
    f.add_argument("--no-fixtures", action="store_true", help="skip the bundled fixtures")
    f.set_defaults(func=cmd_fetch)

    v = sub.add_parser("verify-paper", help="run the verification battery")
    v.add_argument("--suite", action="append", choices=("gtype", "gl2", "families", "classify"))
    v.add_argument("--check", action="append", help="run only the named check (repeatable)")
    v.add_argument("--samples", type=int, default=500, help="parameters per j-map in the audit")
    v.set_defaults(func=cmd_verify_paper)

    c = sub.add_parser("catalog", help="export the family catalog as JSON")
    c.add_argument("--out", help="write to a file instead of stdout")
    c.set_defaults(func=cmd_catalog)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    random.seed(args.seed)
    try:
        return args.func(args)
    except InputError as exc:
        emit(_error("input", str(exc)))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
