"""Small-group corpus: every group of order <= 16 and all fifteen of order 24."""
from __future__ import annotations

from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Sequence

from .groups import (
    FiniteGroup, MatCarrier, TableCarrier, alternating_group, closure, cyclic_group,
    dihedral_group, direct_product, symmetric_group, _small_generating_set,
)


def group_from_rule(elements: Sequence, mul: Callable, name: str) -> FiniteGroup:
    """Tabulate a multiplication rule on an explicit element list."""
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    ident = next(i for i, a in enumerate(elements) if all(mul(a, b) == b for b in elements))
    carrier = TableCarrier(table, ident)
    return FiniteGroup(carrier, _small_generating_set(carrier, range(len(elements))),
                       elements=range(len(elements)), name=name)


def metacyclic(m: int, n: int, k: int, name: str) -> FiniteGroup:
    """Z/m semidirect Z/n, the generator of Z/n acting by multiplication by k."""
    if pow(k, n, m) != 1 % m:
        raise ValueError("k must have order dividing n modulo m")
    elems = list(iproduct(range(m), range(n)))
    return group_from_rule(elems, lambda x, y: ((x[0] + pow(k, x[1], m) * y[0]) % m, (x[1] + y[1]) % n), name)


def dicyclic(n: int, name: str | None = None) -> FiniteGroup:
    """Dicyclic group of order 4n (quaternion for n a power of 2)."""
    m = 2 * n
    elems = list(iproduct(range(m), range(2)))

    def mul(x, y):
        a, e = x
        c, f = y
        if e == 0:
            return ((a + c) % m, f)
        if f == 0:
            return ((a - c) % m, 1)
        return ((a - c + n) % m, 0)

    return group_from_rule(elems, mul, name or f"Dic{n}")


def abelian(*orders: int) -> FiniteGroup:
    if len(orders) == 1:
        return cyclic_group(orders[0])
    g = direct_product([cyclic_group(n) for n in orders])
    g.name = "x".join(f"C{n}" for n in orders)
    return g


def _named(g: FiniteGroup, name: str) -> FiniteGroup:
    g.name = name
    return g


def _product(name: str, *groups: FiniteGroup) -> FiniteGroup:
    return _named(direct_product(list(groups)), name)


def _sl2_3() -> FiniteGroup:
    car = MatCarrier(3)
    return closure([(1, 1, 0, 1), (1, 0, 1, 1)], car, name="SL(2,3)")


def _pauli() -> FiniteGroup:
    car = MatCarrier(5)
    return closure([(0, 1, 1, 0), (1, 0, 0, 4), (2, 0, 0, 2)], car, name="C4oD4")


def _modular16() -> FiniteGroup:
    return metacyclic(8, 2, 5, "M16")


def _g16_3() -> FiniteGroup:
    # (Z4 x Z2) semidirect Z2 with (i, j) -> (i, j + i mod 2)
    elems = list(iproduct(range(4), range(2), range(2)))
    return group_from_rule(
        elems, lambda x, y: ((x[0] + y[0]) % 4, (x[1] + y[1] + x[2] * y[0]) % 2, (x[2] + y[2]) % 2), "(C4xC2):C2")


def _c4_c4() -> FiniteGroup:
    elems = list(iproduct(range(4), range(4)))
    return group_from_rule(elems, lambda x, y: ((x[0] + (-1) ** x[1] * y[0]) % 4, (x[1] + y[1]) % 4), "C4:C4")


def _sign(p: Sequence[int]) -> int:
    seen, s = set(), 1
    for i in range(len(p)):
        if i in seen:
            continue
        j, ln = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            ln += 1
        if ln % 2 == 0:
            s = -s
    return s


def _c3_d4(kernel: str, name: str) -> FiniteGroup:
    """Z/3 semidirect D4 where D4 acts by inversion off an index-2 kernel."""
    d4 = dihedral_group(4)
    rot = set(closure([(1, 2, 3, 0)], d4.carrier).elements)
    if kernel == "cyclic":
        act = {d: (1 if d in rot else -1) for d in d4.elements}
    else:
        act = {d: _sign(d) for d in d4.elements}
    elems = list(iproduct(range(3), d4.elements))
    return group_from_rule(
        elems, lambda x, y: ((x[0] + act[x[1]] * y[0]) % 3, d4.mul(x[1], y[1])), name)


def _builders() -> list[tuple[str, Callable[[], FiniteGroup]]]:
    s3 = lambda: _named(dihedral_group(3), "S3")  # noqa: E731
    d4 = lambda: _named(dihedral_group(4), "D4")  # noqa: E731
    q8 = lambda: dicyclic(2, "Q8")  # noqa: E731
    dic3 = lambda: metacyclic(3, 4, 2, "Dic3")  # noqa: E731
    a4 = lambda: _named(alternating_group(4), "A4")  # noqa: E731
    return [
        ("C1", lambda: _named(cyclic_group(1), "C1")),
        ("C2", lambda: abelian(2)), ("C3", lambda: abelian(3)),
        ("C4", lambda: abelian(4)), ("C2xC2", lambda: abelian(2, 2)),
        ("C5", lambda: abelian(5)),
        ("C6", lambda: abelian(6)), ("S3", s3),
        ("C7", lambda: abelian(7)),
        ("C8", lambda: abelian(8)), ("C4xC2", lambda: abelian(4, 2)), ("C2xC2xC2", lambda: abelian(2, 2, 2)),
        ("D4", d4), ("Q8", q8),
        ("C9", lambda: abelian(9)), ("C3xC3", lambda: abelian(3, 3)),
        ("C10", lambda: abelian(10)), ("D5", lambda: _named(dihedral_group(5), "D5")),
        ("C11", lambda: abelian(11)),
        ("C12", lambda: abelian(12)), ("C2xC6", lambda: abelian(2, 6)), ("A4", a4),
        ("D6", lambda: _named(dihedral_group(6), "D6")), ("Dic3", dic3),
        ("C13", lambda: abelian(13)),
        ("C14", lambda: abelian(14)), ("D7", lambda: _named(dihedral_group(7), "D7")),
        ("C15", lambda: abelian(15)),
        ("C16", lambda: abelian(16)), ("C4xC4", lambda: abelian(4, 4)), ("(C4xC2):C2", _g16_3),
        ("C4:C4", _c4_c4), ("C8xC2", lambda: abelian(8, 2)), ("M16", _modular16),
        ("D8", lambda: _named(dihedral_group(8), "D8")), ("SD16", lambda: metacyclic(8, 2, 3, "SD16")),
        ("Q16", lambda: dicyclic(4, "Q16")), ("C4xC2xC2", lambda: abelian(4, 2, 2)),
        ("C2xD4", lambda: _product("C2xD4", cyclic_group(2), dihedral_group(4))),
        ("C2xQ8", lambda: _product("C2xQ8", cyclic_group(2), dicyclic(2))),
        ("C4oD4", _pauli), ("C2^4", lambda: abelian(2, 2, 2, 2)),
        # order 24
        ("C24", lambda: abelian(24)), ("C2xC12", lambda: abelian(2, 12)), ("C2xC2xC6", lambda: abelian(2, 2, 6)),
        ("S4", lambda: _named(symmetric_group(4), "S4")), ("SL(2,3)", _sl2_3),
        ("C2xA4", lambda: _product("C2xA4", cyclic_group(2), alternating_group(4))),
        ("D12", lambda: _named(dihedral_group(12), "D12")), ("C3:C8", lambda: metacyclic(3, 8, 2, "C3:C8")),
        ("Dic6", lambda: dicyclic(6, "Dic6")),
        ("C4xS3", lambda: _product("C4xS3", cyclic_group(4), dihedral_group(3))),
        ("C2xDic3", lambda: _product("C2xDic3", cyclic_group(2), metacyclic(3, 4, 2, "Dic3"))),
        ("C3:D4", lambda: _c3_d4("klein", "C3:D4")),
        ("C3xD4", lambda: _product("C3xD4", cyclic_group(3), dihedral_group(4))),
        ("C3xQ8", lambda: _product("C3xQ8", cyclic_group(3), dicyclic(2))),
        ("C2xC2xS3", lambda: _product("C2xC2xS3", cyclic_group(2), cyclic_group(2), dihedral_group(3))),
    ]


@lru_cache(maxsize=None)
def corpus() -> tuple[FiniteGroup, ...]:
    """The corpus, ordered by group order."""
    groups = []
    for name, build in _builders():
        g = build()
        g.name = name
        _ = g.element_set
        groups.append(g)
    return tuple(sorted(groups, key=lambda g: g.order))


def corpus_by_name() -> dict[str, FiniteGroup]:
    return {g.name: g for g in corpus()}


def dihedral_of_order(n: int) -> FiniteGroup:
    return dihedral_group(n // 2)
