"""Finite group engine.

A group is a set of hashable, sortable element encodings plus a *carrier*
that knows how to multiply them.  Carriers: permutations, 2x2 matrices mod n,
abstract multiplication tables, affine maps on F_q^f, and direct products.
Products compose left to right: for permutations ``(g*h)[i] == h[g[i]]``.
"""
from __future__ import annotations

import math
import re
from collections import Counter, deque
from functools import cached_property, reduce
from itertools import product as iproduct
from typing import Callable, Hashable, Iterable, Sequence

DEFAULT_CAP = 10 ** 6


class GroupSizeError(RuntimeError):
    """A closure or search exceeded its configured size cap."""


class CarrierMismatch(ValueError):
    """Elements or groups from incompatible carriers were combined."""


# ------------------------------------------------------------------ carriers

class Carrier:
    kind = "abstract"

    identity: Hashable

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.identity
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def order_of(self, a) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def encode(self, a) -> list[int]:
        raise NotImplementedError

    def decode(self, data: Sequence[int]):
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.params() == other.params()

    def __hash__(self) -> int:
        return hash((self.kind, repr(self.params())))


class PermCarrier(Carrier):
    kind = "perm"

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = tuple(range(degree))

    def mul(self, a, b):
        return tuple(b[i] for i in a)

    def inv(self, a):
        out = [0] * len(a)
        for i, j in enumerate(a):
            out[j] = i
        return tuple(out)

    def encode(self, a):
        return list(a)

    def decode(self, data):
        if sorted(data) != list(range(self.degree)):
            raise ValueError(f"not a permutation of {self.degree} points: {data}")
        return tuple(data)

    def params(self):
        return {"degree": self.degree}


class MatCarrier(Carrier):
    """2x2 matrices mod n, stored as (a, b, c, d) for [[a, b], [c, d]]."""

    kind = "matrix"

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = modulus
        self.identity = (1 % modulus, 0, 0, 1 % modulus)

    def mul(self, x, y):
        n = self.modulus
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)

    def inv(self, x):
        n = self.modulus
        a, b, c, d = x
        di = pow((a * d - b * c) % n, -1, n)
        return ((d * di) % n, (-b * di) % n, (-c * di) % n, (a * di) % n)

    def det(self, x) -> int:
        a, b, c, d = x
        return (a * d - b * c) % self.modulus

    def trace(self, x) -> int:
        return (x[0] + x[3]) % self.modulus

    def apply(self, x, v):
        n = self.modulus
        return ((x[0] * v[0] + x[1] * v[1]) % n, (x[2] * v[0] + x[3] * v[1]) % n)

    def encode(self, a):
        return list(a)

    def decode(self, data):
        if len(data) != 4:
            raise ValueError("a 2x2 matrix needs four entries")
        return tuple(int(v) % self.modulus for v in data)

    def params(self):
        return {"modulus": self.modulus}


class TableCarrier(Carrier):
    kind = "table"

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0):
        self.table = tuple(tuple(row) for row in table)
        self.identity = identity
        m = len(self.table)
        inv = [0] * m
        for i, row in enumerate(self.table):
            inv[i] = row.index(identity)
        self._inv = tuple(inv)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def encode(self, a):
        return [a]

    def decode(self, data):
        (a,) = data
        if not 0 <= a < len(self.table):
            raise ValueError(f"table index out of range: {a}")
        return a

    def params(self):
        return {"table": [list(r) for r in self.table], "identity": self.identity}


class AffineCarrier(Carrier):
    """Maps v -> C^k v + w on F_q^f; elements are (k, w) with k mod ``period``."""

    kind = "affine"

    def __init__(self, q: int, matrix: Sequence[Sequence[int]], period: int):
        self.q = q
        self.dim = len(matrix)
        self.matrix = tuple(tuple(r) for r in matrix)
        self.period = period
        powers = [tuple(tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim))]
        for _ in range(period - 1):
            powers.append(_matmul_mod(self.matrix, powers[-1], q))
        if _matmul_mod(self.matrix, powers[-1], q) != powers[0]:
            raise ValueError("matrix order does not divide the stated period")
        self._powers = tuple(powers)
        self.identity = (0, (0,) * self.dim)

    def _act(self, k: int, w):
        m = self._powers[k % self.period]
        q = self.q
        return tuple(sum(m[i][j] * w[j] for j in range(self.dim)) % q for i in range(self.dim))

    def mul(self, a, b):
        ka, wa = a
        kb, wb = b
        cw = self._act(kb, wa)
        return ((ka + kb) % self.period, tuple((x + y) % self.q for x, y in zip(cw, wb)))

    def inv(self, a):
        k, w = a
        back = self._act(-k, w)
        return ((-k) % self.period, tuple((-x) % self.q for x in back))

    def apply(self, a, v):
        k, w = a
        cv = self._act(k, v)
        return tuple((x + y) % self.q for x, y in zip(cv, w))

    def points(self) -> list[tuple[int, ...]]:
        return [tuple(reversed(v)) for v in iproduct(range(self.q), repeat=self.dim)]

    def to_permutation(self, a) -> tuple[int, ...]:
        pts = self.points()
        index = {p: i for i, p in enumerate(pts)}
        return tuple(index[self.apply(a, p)] for p in pts)

    def encode(self, a):
        return [a[0], *a[1]]

    def decode(self, data):
        return (int(data[0]) % self.period, tuple(int(v) % self.q for v in data[1:]))

    def params(self):
        return {"q": self.q, "matrix": [list(r) for r in self.matrix], "period": self.period}


class UnitCarrier(Carrier):
    """Multiplicative residues mod n."""

    kind = "units"

    def __init__(self, modulus: int):
        self.modulus = modulus
        self.identity = 1 % modulus if modulus > 1 else 0

    def mul(self, a, b):
        return a * b % self.modulus if self.modulus > 1 else 0

    def inv(self, a):
        return pow(a, -1, self.modulus) if self.modulus > 1 else 0

    def encode(self, a):
        return [a]

    def decode(self, data):
        (a,) = data
        if math.gcd(a, self.modulus) != 1:
            raise ValueError(f"{a} is not a unit mod {self.modulus}")
        return a % self.modulus

    def params(self):
        return {"modulus": self.modulus}


def _matmul_mod(a, b, q):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % q for j in range(n)) for i in range(n))


class ProductCarrier(Carrier):
    kind = "product"

    def __init__(self, factors: Sequence[Carrier]):
        self.factors = tuple(factors)
        self.identity = tuple(c.identity for c in self.factors)

    def mul(self, a, b):
        return tuple(c.mul(x, y) for c, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(c.inv(x) for c, x in zip(self.factors, a))

    def encode(self, a):
        return [c.encode(x) for c, x in zip(self.factors, a)]

    def decode(self, data):
        return tuple(c.decode(x) for c, x in zip(self.factors, data))

    def params(self):
        return {"factors": [{"kind": c.kind, **c.params()} for c in self.factors]}


def carrier_from_json(data: dict) -> Carrier:
    kind = data["kind"]
    if kind == "perm":
        return PermCarrier(data["degree"])
    if kind == "matrix":
        return MatCarrier(data["modulus"])
    if kind == "table":
        return TableCarrier(data["table"], data.get("identity", 0))
    if kind == "affine":
        return AffineCarrier(data["q"], data["matrix"], data["period"])
    if kind == "units":
        return UnitCarrier(data["modulus"])
    if kind == "product":
        return ProductCarrier([carrier_from_json(f) for f in data["factors"]])
    raise ValueError(f"unknown carrier kind {kind!r}")


# --------------------------------------------------------------- the group

def _bfs(carrier: Carrier, gens: Sequence, seed: Iterable = (), new_gens: Sequence = (), cap: int = DEFAULT_CAP) -> set:
    """Right-multiplication closure.  ``seed`` must already be closed under
    the generators in ``gens`` that are not in ``new_gens``."""
    mul = carrier.mul
    seen = set(seed)
    queue: deque = deque()
    if not seen:
        seen.add(carrier.identity)
        queue.append(carrier.identity)
    else:
        for x in list(seen):
            for g in new_gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupSizeError(f"closure exceeded the size cap of {cap}")
                queue.append(y)
    return seen


class FiniteGroup:
    """Immutable finite group given by a carrier and generators.

    The element set is computed on first use; many operations here work
    from generators alone, so huge groups can still be handled lazily.
    """

    def __init__(self, carrier: Carrier, generators: Iterable = (), *, elements: Iterable | None = None,
                 name: str | None = None, cap: int = DEFAULT_CAP):
        self.carrier = carrier
        gens = []
        for g in generators:
            if g != carrier.identity and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self.name = name
        self.cap = cap
        if elements is not None:
            self.__dict__["element_set"] = frozenset(elements)

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(_bfs(self.carrier, self.generators, cap=self.cap))

    @cached_property
    def elements(self) -> tuple:
        return tuple(sorted(self.element_set))

    @property
    def identity(self):
        return self.carrier.identity

    @property
    def order(self) -> int:
        return len(self.element_set)

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.element_set

    def mul(self, a, b):
        return self.carrier.mul(a, b)

    def inv(self, a):
        return self.carrier.inv(a)

    def pow(self, a, e: int):
        return self.carrier.pow(a, e)

    def conj(self, x, g):
        """g^-1 x g."""
        c = self.carrier
        return c.mul(c.mul(c.inv(g), x), g)

    def comm(self, a, b):
        """[a, b] = a^-1 b^-1 a b."""
        c = self.carrier
        return c.mul(c.mul(c.inv(a), c.inv(b)), c.mul(a, b))

    def element_order(self, a) -> int:
        return self.carrier.order_of(a)

    def is_trivial(self) -> bool:
        return not self.generators

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gs for b in gs)

    def subgroup(self, generators: Iterable, name: str | None = None) -> "FiniteGroup":
        gens = list(generators)
        for g in gens:
            if "element_set" in self.__dict__ and g not in self.element_set:
                raise ValueError("generator is not an element of the group")
        return FiniteGroup(self.carrier, gens, name=name, cap=self.cap)

    def is_subgroup_of(self, other: "FiniteGroup") -> bool:
        return self.carrier == other.carrier and all(g in other for g in self.generators)

    def same_elements(self, other: "FiniteGroup") -> bool:
        return self.carrier == other.carrier and self.element_set == other.element_set

    def is_normal_in(self, other: "FiniteGroup") -> bool:
        if not self.is_subgroup_of(other):
            return False
        return all(other.conj(x, g) in self for x in self.generators for g in other.generators)

    def __repr__(self) -> str:
        label = self.name or self.carrier.kind
        size = self.order if "element_set" in self.__dict__ else "?"
        return f"<FiniteGroup {label} order={size}>"

    def to_json(self) -> dict:
        return {
            "carrier": {"kind": self.carrier.kind, **self.carrier.params()},
            "generators": [self.carrier.encode(g) for g in self.generators],
            **({"name": self.name} if self.name else {}),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        carrier = carrier_from_json(data["carrier"])
        return cls(carrier, [carrier.decode(g) for g in data["generators"]], name=data.get("name"))


# -------------------------------------------------------------- constructors

def closure(generators: Iterable, carrier: Carrier, cap: int = DEFAULT_CAP, name: str | None = None) -> FiniteGroup:
    """The group generated by ``generators``; eager so the size cap applies now."""
    g = FiniteGroup(carrier, generators, name=name, cap=cap)
    _ = g.element_set
    return g


def trivial_group(carrier: Carrier) -> FiniteGroup:
    return FiniteGroup(carrier, (), elements=(carrier.identity,))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int | None = None) -> tuple[int, ...]:
    """Cycle notation with 1-based points, e.g. ``(1 2 3)(4 5)`` or ``()``."""
    text = text.strip()
    if not text:
        raise ValueError("empty permutation")
    cycles = []
    pos = 0
    for m in _CYCLE_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"unexpected text at column {pos + 1} in {text!r}")
        body = m.group(1).replace(",", " ").split()
        try:
            cycles.append([int(v) for v in body])
        except ValueError:
            raise ValueError(f"bad point in cycle at column {m.start() + 1} in {text!r}") from None
        pos = m.end()
    if text[pos:].strip() or not cycles:
        raise ValueError(f"unexpected text at column {pos + 1} in {text!r}")
    top = max((max(c) for c in cycles if c), default=1)
    deg = degree if degree is not None else top
    if top > deg or any(v < 1 for c in cycles for v in c):
        raise ValueError(f"point out of range 1..{deg} in {text!r}")
    img = list(range(deg))
    used = set()
    for c in cycles:
        if len(set(c)) != len(c) or used & set(c):
            raise ValueError(f"cycles are not disjoint in {text!r}")
        used |= set(c)
        for i, v in enumerate(c):
            img[v - 1] = c[(i + 1) % len(c)] - 1
    return tuple(img)


def format_permutation(p: Sequence[int]) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def perm_group(cycles: Iterable[str], degree: int | None = None, name: str | None = None) -> FiniteGroup:
    texts = list(cycles)
    if degree is None:
        degree = max([1] + [max(parse_permutation(t)) + 1 for t in texts])
        degree = max(degree, max([1] + [len(parse_permutation(t)) for t in texts]))
    carrier = PermCarrier(degree)
    return closure([parse_permutation(t, degree) for t in texts], carrier, name=name)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    carrier = PermCarrier(n)
    gen = tuple((i + 1) % n for i in range(n))
    return closure([gen], carrier, name=f"C{n}")


def symmetric_group(d: int) -> FiniteGroup:
    carrier = PermCarrier(d)
    gens = []
    if d >= 2:
        gens.append(tuple([1, 0] + list(range(2, d))))
        gens.append(tuple((i + 1) % d for i in range(d)))
    return closure(gens, carrier, name=f"S{d}")


def alternating_group(d: int) -> FiniteGroup:
    carrier = PermCarrier(d)
    gens = []
    for k in range(2, d):
        img = list(range(d))
        img[0], img[1], img[k] = 1, k, 0
        gens.append(tuple(img))
    return closure(gens, carrier, name=f"A{d}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of an n-gon, order 2n (n >= 3), or the Klein group for n = 2."""
    if n == 1:
        return cyclic_group(2)
    if n == 2:
        return perm_group(["(1 2)", "(3 4)"], 4, name="D2")
    carrier = PermCarrier(n)
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return closure([rot, ref], carrier, name=f"D{n}")


def table_group(table: Sequence[Sequence[int]], name: str | None = None) -> FiniteGroup:
    carrier = TableCarrier(table)
    m = len(table)
    return FiniteGroup(carrier, _small_generating_set(carrier, range(m)), elements=range(m), name=name)


def direct_product(groups: Sequence[FiniteGroup], name: str | None = None) -> FiniteGroup:
    carrier = ProductCarrier([g.carrier for g in groups])
    gens = []
    for i, g in enumerate(groups):
        for x in g.generators:
            elt = list(carrier.identity)
            elt[i] = x
            gens.append(tuple(elt))
    return FiniteGroup(carrier, gens, name=name)


def _small_generating_set(carrier: Carrier, elements: Iterable) -> list:
    elems = sorted(elements, key=lambda x: (-carrier.order_of(x), x))
    gens: list = []
    span = {carrier.identity}
    total = len(elems)
    for x in elems:
        if len(span) == total:
            break
        if x in span:
            continue
        gens.append(x)
        span = _bfs(carrier, gens, seed=span, new_gens=[x])
    return gens


def minimal_generators(G: FiniteGroup) -> list:
    """A small generating set, greedily chosen from high-order elements."""
    return _small_generating_set(G.carrier, G.elements)


# ---------------------------------------------------- normal closures and λ

def normal_closure(G: FiniteGroup, elements: Iterable, cap: int | None = None) -> FiniteGroup:
    """Smallest normal subgroup of G containing ``elements``."""
    cap = cap or G.cap
    car = G.carrier
    gens = [x for x in dict.fromkeys(elements) if x != car.identity]
    if not gens:
        return trivial_group(car)
    if isinstance(car, AffineCarrier) and all(x[0] == 0 for x in gens):
        return _translation_closure(G, gens)
    span = _bfs(car, gens, cap=cap)
    queue = list(gens)
    while queue:
        x = queue.pop()
        for g in G.generators:
            y = G.conj(x, g)
            if y not in span:
                gens.append(y)
                queue.append(y)
                span = _bfs(car, gens, seed=span, new_gens=[y], cap=cap)
    return FiniteGroup(car, gens, elements=span, cap=cap)


def _translation_closure(G: FiniteGroup, gens: list) -> FiniteGroup:
    """Normal closure of pure translations in an affine group.

    Such a closure is the F_q-span of the translation vectors closed under
    conjugation, so it is computed by row reduction instead of enumeration.
    """
    car: AffineCarrier = G.carrier
    q = car.q
    rows: list[list[int]] = []
    pivots: list[int] = []

    def reduce_vec(v):
        v = list(v)
        for r, piv in zip(rows, pivots):
            c = v[piv]
            if c:
                v = [(a - c * b) % q for a, b in zip(v, r)]
        return v

    queue = [x[1] for x in gens]
    basis = []
    while queue:
        w = queue.pop()
        v = reduce_vec(w)
        nz = next((i for i, a in enumerate(v) if a), None)
        if nz is None:
            continue
        inv = pow(v[nz], -1, q)
        v = [(a * inv) % q for a in v]
        for i, r in enumerate(rows):
            c = r[nz]
            if c:
                rows[i] = [(a - c * b) % q for a, b in zip(r, v)]
        rows.append(v)
        pivots.append(nz)
        basis.append(tuple(w))
        for g in G.generators:
            queue.append(G.conj((0, tuple(w)), g)[1])
    N = FiniteGroup(car, [(0, b) for b in basis], cap=G.cap)
    N.translation_rank = len(basis)
    return N


def commutator_subgroup(G: FiniteGroup) -> FiniteGroup:
    """[G, G], as the normal closure of commutators of generators."""
    gs = G.generators
    return normal_closure(G, [G.comm(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]])


def _check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")


def lambda_p(G: FiniteGroup, p: int) -> FiniteGroup:
    """[G, G] G^p: normal closure of generator commutators and p-th powers."""
    _check_prime(p)
    gs = G.generators
    words = [G.comm(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]]
    words += [G.pow(a, p) for a in gs]
    return normal_closure(G, words)


def commutator_of(G: FiniteGroup, N: FiniteGroup) -> FiniteGroup:
    """[G, N] for N normal in G."""
    return normal_closure(G, [G.comm(g, x) for g in G.generators for x in N.generators])


def lower_central_series(G: FiniteGroup, max_len: int = 64) -> list[FiniteGroup]:
    series = [G]
    while len(series) <= max_len:
        nxt = commutator_of(G, series[-1])
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    return series


NOT_NILPOTENT = "not nilpotent"


def nilpotency_class(G: FiniteGroup):
    """Class c >= 0 (0 for the trivial group), or ``NOT_NILPOTENT``."""
    series = lower_central_series(G)
    if series[-1].order != 1:
        return NOT_NILPOTENT
    return len(series) - 1


# ----------------------------------------------------------------- quotients

class Quotient(FiniteGroup):
    """G/N on an abstract table; keeps the projection of G onto it."""

    def __init__(self, G: FiniteGroup, N: FiniteGroup):
        if not N.is_normal_in(G):
            raise ValueError("quotient by a subgroup that is not normal")
        reps: list = []
        index: dict = {}
        nel = N.elements
        for x in G.elements:
            if x in index:
                continue
            k = len(reps)
            reps.append(x)
            for n in nel:
                index[G.mul(x, n)] = k
        m = len(reps)
        table = [[index[G.mul(a, b)] for b in reps] for a in reps]
        carrier = TableCarrier(table, index[G.identity])
        gens = [index[g] for g in G.generators]
        super().__init__(carrier, gens, elements=range(m), name=f"({G.name or 'G'})/N", cap=G.cap)
        self.parent = G
        self.kernel = N
        self.representatives = tuple(reps)
        self._index = index

    def project(self, x) -> int:
        return self._index[x]


def quotient(G: FiniteGroup, N: FiniteGroup) -> Quotient:
    return Quotient(G, N)


# ---------------------------------------------------------------- invariants

def exponent(G: FiniteGroup) -> int:
    return reduce(math.lcm, (G.element_order(x) for x in G.elements), 1)


def order_statistics(G: FiniteGroup) -> Counter:
    return Counter(G.element_order(x) for x in G.elements)


def _abelian_invariants_of(A: FiniteGroup) -> list[int]:
    """Invariant factors of an abelian group from p-power element counts."""
    n = A.order
    if n == 1:
        return []
    from .algebra import factorint
    orders = [A.element_order(x) for x in A.elements]
    primary: list[list[int]] = []
    for p in factorint(n):
        counts = []
        k = 0
        while True:
            c = sum(1 for o in orders if (p ** k) % o == 0)
            counts.append(round(math.log(c, p)))
            if c == p ** _vp(n, p):
                break
            k += 1
        # counts[k] = sum_i min(e_i, k); number of cyclic factors of order >= p^k
        ge = [counts[k] - counts[k - 1] for k in range(1, len(counts))]
        exps = []
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            exps += [k + 1] * (ge[k] - nxt)
        primary.append(sorted((p ** e for e in exps), reverse=True))
    width = max(len(x) for x in primary)
    factors = [1] * width
    for col in primary:
        for i, q in enumerate(col):
            factors[i] *= q
    return sorted(f for f in factors if f > 1)


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def abelianization(G: FiniteGroup) -> Quotient:
    return quotient(G, commutator_subgroup(G))


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Invariant factors d1 | d2 | ... of G/[G,G] (empty list when perfect)."""
    return _abelian_invariants_of(abelianization(G))


def conjugacy_classes(G: FiniteGroup) -> list[frozenset]:
    seen: set = set()
    classes = []
    for x in G.elements:
        if x in seen:
            continue
        orbit = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for g in G.generators:
                z = G.conj(y, g)
                if z not in orbit:
                    orbit.add(z)
                    stack.append(z)
        seen |= orbit
        classes.append(frozenset(orbit))
    return classes


def center(G: FiniteGroup) -> FiniteGroup:
    elems = [x for x in G.elements if all(G.mul(x, g) == G.mul(g, x) for g in G.generators)]
    return FiniteGroup(G.carrier, _small_generating_set(G.carrier, elems), elements=elems)


def is_subdirect_product(H: FiniteGroup, factors: Sequence[FiniteGroup]) -> bool:
    """True iff every coordinate projection of H is onto its factor."""
    car = H.carrier
    if not isinstance(car, ProductCarrier) or len(car.factors) != len(factors):
        raise CarrierMismatch("H must live in the direct product of the given factors")
    for i, F in enumerate(factors):
        if car.factors[i] != F.carrier:
            raise CarrierMismatch(f"factor {i} carrier does not match")
        image = _bfs(F.carrier, [h[i] for h in H.generators])
        if image != set(F.element_set):
            return False
    return True


# -------------------------------------------------------------- isomorphism

def _class_profile(G: FiniteGroup) -> dict:
    prof = {}
    for cls in conjugacy_classes(G):
        for x in cls:
            prof[x] = (G.element_order(x), len(cls))
    return prof


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, cap: int = 10 ** 4):
    """An isomorphism G -> H as a dict on elements, or None."""
    if G.order > cap or H.order > cap:
        raise GroupSizeError(f"isomorphism search is capped at order {cap}")
    if G.order != H.order:
        return None
    if order_statistics(G) != order_statistics(H):
        return None
    if G.order == 1:
        return {G.identity: H.identity}
    if G.is_abelian() != H.is_abelian():
        return None
    pg, ph = _class_profile(G), _class_profile(H)
    if Counter(pg.values()) != Counter(ph.values()):
        return None
    gens = minimal_generators(G)
    by_profile: dict = {}
    for y in H.elements:
        by_profile.setdefault(ph[y], []).append(y)
    candidates = [by_profile.get(pg[g], []) for g in gens]

    # BFS words of G over gens; phi is determined by generator images
    car = G.carrier
    order_words = []
    seen = {car.identity: None}
    queue = deque([car.identity])
    while queue:
        x = queue.popleft()
        for i, g in enumerate(gens):
            y = car.mul(x, g)
            if y not in seen:
                seen[y] = (x, i)
                order_words.append(y)
                queue.append(y)

    def attempt(images):
        phi = {car.identity: H.identity}
        for y in order_words:
            x, i = seen[y]
            phi[y] = H.mul(phi[x], images[i])
        if len(set(phi.values())) != G.order:
            return None
        for x in G.elements:
            for i, g in enumerate(gens):
                if phi[car.mul(x, g)] != H.mul(phi[x], images[i]):
                    return None
        return phi

    def search(i, images):
        if i == len(gens):
            return attempt(images)
        for y in candidates[i]:
            if y in images:
                continue
            # partial check: relations among chosen generators' orders of products
            ok = True
            for j in range(i):
                if G.element_order(car.mul(gens[j], gens[i])) != H.element_order(H.mul(images[j], y)):
                    ok = False
                    break
            if not ok:
                continue
            res = search(i + 1, images + [y])
            if res is not None:
                return res
        return None

    return search(0, [])


def isomorphic(G: FiniteGroup, H: FiniteGroup, cap: int = 10 ** 4) -> bool:
    return find_isomorphism(G, H, cap) is not None


# -------------------------------------------------------------- subgroups

def all_subgroups(G: FiniteGroup, cap: int = 10 ** 4) -> list[FiniteGroup]:
    """Every subgroup of G, by the cyclic-extension method (layer by layer)."""
    car = G.carrier
    found: dict[frozenset, FiniteGroup] = {}
    cyclic: dict[frozenset, object] = {}
    for x in G.elements:
        span = frozenset(_bfs(car, [x]))
        if span not in cyclic:
            cyclic[span] = x
    triv = frozenset([car.identity])
    found[triv] = trivial_group(car)
    layer = [triv]
    while layer:
        nxt = []
        for S in layer:
            gensS = found[S].generators
            for C, x in cyclic.items():
                if C <= S:
                    continue
                span = frozenset(_bfs(car, list(gensS) + [x], seed=S, new_gens=[x]))
                if span not in found:
                    if len(found) >= cap:
                        raise GroupSizeError(f"more than {cap} subgroups")
                    found[span] = FiniteGroup(car, list(gensS) + [x], elements=span)
                    nxt.append(span)
        layer = nxt
    return sorted(found.values(), key=lambda H: (H.order, H.elements))


def normal_subgroups(G: FiniteGroup) -> list[FiniteGroup]:
    """Normal subgroups, as joins of normal closures of single elements."""
    base: dict[frozenset, FiniteGroup] = {}
    for x in G.elements:
        N = normal_closure(G, [x])
        base.setdefault(N.element_set, N)
    found = dict(base)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for N in frontier:
            for M in base.values():
                if M.element_set <= N.element_set:
                    continue
                J = normal_closure(G, list(N.generators) + list(M.generators))
                if J.element_set not in found:
                    found[J.element_set] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (H.order, H.elements))


def conjugacy_classes_of_subgroups(G: FiniteGroup, subgroups: Sequence[FiniteGroup],
                                   ambient: FiniteGroup | None = None) -> list[list[FiniteGroup]]:
    """Partition subgroups into orbits under conjugation by ``ambient`` (default G)."""
    amb = ambient or G
    index = {H.element_set: H for H in subgroups}
    seen: set = set()
    classes = []
    for H in subgroups:
        if H.element_set in seen:
            continue
        orbit = {H.element_set}
        stack = [H.element_set]
        while stack:
            S = stack.pop()
            for g in amb.generators:
                T = frozenset(amb.conj(x, g) for x in S)
                if T not in orbit:
                    orbit.add(T)
                    stack.append(T)
        seen |= orbit
        classes.append([index.get(S) or FiniteGroup(G.carrier, _small_generating_set(G.carrier, S), elements=S)
                        for S in sorted(orbit, key=lambda s: sorted(s))])
    return classes


def homomorphism_images(G: FiniteGroup, k: int) -> Iterable[tuple]:
    """All k-tuples of elements of G (the images of free generators)."""
    return iproduct(G.elements, repeat=k)


def map_is_homomorphism(G: FiniteGroup, H: FiniteGroup, images: dict) -> bool:
    """Check a generator assignment extends to a homomorphism G -> H."""
    car = G.carrier
    gens = list(G.generators)
    phi = {car.identity: H.identity}
    queue = deque([car.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = car.mul(x, g)
            val = H.mul(phi[x], images[g])
            if y in phi:
                if phi[y] != val:
                    return False
            else:
                phi[y] = val
                queue.append(y)
    return True


class GroupHom:
    """Homomorphism given by generator images, verified on construction."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images: dict):
        missing = [g for g in domain.generators if g not in images]
        if missing:
            raise ValueError("every domain generator needs an image")
        if not map_is_homomorphism(domain, codomain, images):
            raise ValueError("generator images do not define a homomorphism")
        self.domain = domain
        self.codomain = codomain
        self.images = dict(images)

    @cached_property
    def table(self) -> dict:
        car = self.domain.carrier
        phi = {car.identity: self.codomain.identity}
        queue = deque([car.identity])
        while queue:
            x = queue.popleft()
            for g in self.domain.generators:
                y = car.mul(x, g)
                if y not in phi:
                    phi[y] = self.codomain.mul(phi[x], self.images[g])
                    queue.append(y)
        return phi

    def __call__(self, x):
        return self.table[x]

    def kernel(self) -> FiniteGroup:
        e = self.codomain.identity
        elems = [x for x, y in self.table.items() if y == e]
        return FiniteGroup(self.domain.carrier, _small_generating_set(self.domain.carrier, elems), elements=elems)


def elements_satisfying(G: FiniteGroup, pred: Callable) -> list:
    return [x for x in G.elements if pred(x)]
