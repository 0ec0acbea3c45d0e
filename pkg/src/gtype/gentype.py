"""Weak, strong and generalized G-type decisions.

Covers the D_{p,q} groups, relation words in free groups, universal groups
of weak G-type, and the cyclotomic criterion for generalized A4-type.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations_with_replacement, product as iproduct

from .algebra import factorint, is_probable_prime
from .groups import (
    AffineCarrier, FiniteGroup, GroupSizeError, PermCarrier, ProductCarrier, UnitCarrier,
    abelian_invariants, all_subgroups, closure, find_isomorphism, is_subdirect_product,
    lambda_p, normal_subgroups, quotient, _bfs,
)

UNDECIDED = "undecided"


def _require_prime(*ps: int) -> None:
    for p in ps:
        if not is_probable_prime(p):
            raise ValueError(f"{p} is not prime")


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


# ------------------------------------------------------- finite field helpers

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, g, q):
    a = list(a)
    dg = len(g) - 1
    inv = pow(g[-1], -1, q)
    for k in range(len(a) - 1 - dg, -1, -1):
        c = a[k + dg] * inv % q
        if c:
            for j in range(dg + 1):
                a[k + j] = (a[k + j] - c * g[j]) % q
    return _trim(a[:dg])


def _pmulmod(a, b, g, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return _pmod(out, g, q)


def _ppowmod(a, e, g, q):
    result = [1]
    base = _pmod(a, g, q)
    while e:
        if e & 1:
            result = _pmulmod(result, base, g, q)
        e >>= 1
        if e:
            base = _pmulmod(base, base, g, q)
    return result


def _pgcd(a, b, q):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, q)
    return a


def _is_irreducible(g, q) -> bool:
    """Rabin's test for a monic polynomial over F_q."""
    f = len(g) - 1
    x = [0, 1]
    if _ppowmod(x, q ** f, g, q) != _pmod(x, g, q):
        return False
    for r in factorint(f) if f > 1 else {}:
        h = _ppowmod(x, q ** (f // r), g, q)
        diff = _trim([(a - b) % q for a, b in _pad_pairs(h, [0, 1])])
        if len(_pgcd(g, diff, q)) != 1:
            return False
    return True


def _pad_pairs(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def _first_irreducible(q: int, f: int):
    if f == 1:
        return [0, 1]
    for tail in iproduct(range(q), repeat=f):
        g = list(reversed(tail)) + [1]
        if g[0] and _is_irreducible(g, q):
            return g
    raise ArithmeticError("no irreducible polynomial found")  # pragma: no cover


def _solve_mod(cols, rhs, q):
    """Solve sum_j x_j cols[j] = rhs over F_q (cols independent)."""
    n = len(rhs)
    m = len(cols)
    aug = [[cols[j][i] for j in range(m)] + [rhs[i]] for i in range(n)]
    row = 0
    where = [-1] * m
    for col in range(m):
        piv = next((r for r in range(row, n) if aug[r][col] % q), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], -1, q)
        aug[row] = [v * inv % q for v in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(a - c * b) % q for a, b in zip(aug[r], aug[row])]
        where[col] = row
        row += 1
    if -1 in where:
        raise ArithmeticError("dependent columns")
    return [aug[where[j]][m] for j in range(m)]


@dataclass(frozen=True)
class DpqSpec:
    """Data defining D_{p,q}: ``minpoly`` is a degree-f factor of the p-th
    cyclotomic polynomial mod q, lowest coefficient first, monic."""

    p: int
    q: int
    f: int
    minpoly: tuple[int, ...]

    def companion(self) -> tuple[tuple[int, ...], ...]:
        f, q = self.f, self.q
        c = [(-a) % q for a in self.minpoly[:-1]]
        return tuple(
            tuple((1 if i == j + 1 else 0) if j < f - 1 else c[i] for j in range(f)) for i in range(f)
        )


def dpq_spec(p: int, q: int) -> DpqSpec:
    _require_prime(p, q)
    if p == q:
        raise ValueError("p and q must differ")
    f = multiplicative_order(q, p)
    g = _first_irreducible(q, f)
    size = q ** f
    # an element of order p in F_{q^f}^*, then its minimal polynomial
    for cand in iproduct(range(q), repeat=f):
        x = _trim(list(cand))
        if not x:
            continue
        zeta = _ppowmod(x, (size - 1) // p, g, q)
        if zeta != [1]:
            break
    else:  # pragma: no cover
        raise ArithmeticError("no element of order p")
    powers = [[1]]
    for _ in range(f):
        powers.append(_pmulmod(powers[-1], zeta, g, q))
    vecs = [pw + [0] * (f - len(pw)) for pw in powers]
    coeffs = _solve_mod(vecs[:f], vecs[f], q)
    minpoly = tuple([(-c) % q for c in coeffs] + [1])
    return DpqSpec(p, q, f, minpoly)


def build_Dpq(p: int, q: int, size_cap: int = 10 ** 4) -> FiniteGroup:
    """(Z/q)^f semidirect Z/p, acting by the companion matrix of a factor of
    the p-th cyclotomic polynomial mod q.  Elements are affine maps of F_q^f."""
    spec = dpq_spec(p, q)
    if q ** spec.f > size_cap:
        raise GroupSizeError(f"q^f = {q ** spec.f} exceeds {size_cap}")
    car = AffineCarrier(q, spec.companion(), p)
    rot = (1, (0,) * spec.f)
    trans = (0, (1,) + (0,) * (spec.f - 1))
    G = FiniteGroup(car, [rot, trans], name=f"D({p},{q})")
    G.spec = spec
    G.expected_order = p * q ** spec.f
    return G


def as_permutation_group(G: FiniteGroup) -> FiniteGroup:
    """Faithful permutation form of an affine group on the points of F_q^f."""
    car = G.carrier
    if not isinstance(car, AffineCarrier):
        raise TypeError("only affine groups are converted")
    pcar = PermCarrier(car.q ** car.dim)
    return FiniteGroup(pcar, [car.to_permutation(g) for g in G.generators], name=G.name)


# ------------------------------------------------------------ type decisions

def weak_Dpq_witness(H: FiniteGroup, p: int, q: int):
    """A nontrivial element of lambda_q(lambda_p(H)), or None."""
    _require_prime(p, q)
    K = lambda_p(lambda_p(H, p), q)
    return K.generators[0] if K.generators else None


def is_weak_Dpq_type(H: FiniteGroup, p: int, q: int) -> bool:
    return weak_Dpq_witness(H, p, q) is None


def is_strong_Dpq_type(H: FiniteGroup, p: int, q: int) -> bool:
    """Weak D_{p,q}-type and no quotient isomorphic to Z/q."""
    if not is_weak_Dpq_type(H, p, q):
        return False
    return all(d % q for d in abelian_invariants(H))


def is_generalized_A4_type(H: FiniteGroup) -> bool:
    return is_weak_Dpq_type(H, 3, 2)


def genA4_witness(H: FiniteGroup):
    return weak_Dpq_witness(H, 3, 2)


# ------------------------------------------------------------------ free words

class WordSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


@dataclass(frozen=True)
class FreeWord:
    """Reduced word in F_k as (generator index >= 1, nonzero exponent) letters."""

    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        out: list[list[int]] = []
        for i, e in self.letters:
            if i < 1:
                raise ValueError("generator indices start at 1")
            if out and out[-1][0] == i:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            elif e:
                out.append([i, e])
        object.__setattr__(self, "letters", tuple((i, e) for i, e in out))

    @classmethod
    def gen(cls, i: int) -> "FreeWord":
        return cls(((i, 1),))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((i, -e) for i, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        return FreeWord(base.letters * abs(n))

    @staticmethod
    def commutator(a: "FreeWord", b: "FreeWord") -> "FreeWord":
        return a.inverse() * b.inverse() * a * b

    @property
    def arity(self) -> int:
        return max((i for i, _ in self.letters), default=0)

    def evaluate(self, G: FiniteGroup, values) -> object:
        acc = G.identity
        for i, e in self.letters:
            acc = G.mul(acc, G.pow(values[i - 1], e))
        return acc

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in self.letters)

    def to_json(self) -> list[list[int]]:
        return [[i, e] for i, e in self.letters]


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\^)|(-?\d+)|([\[\],*()]))")


def parse_word(text: str) -> FreeWord:
    """Parse ``x1^4``, ``x1*x2^-1``, ``[x1,x2]``, ``[x1,[x1,x2]]``."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        col = m.start() + len(m.group(0)) - len(m.group(0).lstrip()) + 1
        if m.group(1):
            tokens.append(("gen", int(m.group(2)), col))
        elif m.group(3):
            tokens.append(("^", None, col))
        elif m.group(4) is not None:
            tokens.append(("int", int(m.group(4)), col))
        else:
            tokens.append((m.group(5), None, col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    i = 0

    def peek():
        return tokens[i]

    def take(kind):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            raise WordSyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        i += 1
        return tok

    def word():
        w = factor()
        while peek()[0] == "*":
            take("*")
            w = w * factor()
        return w

    def factor():
        w = atom()
        if peek()[0] == "^":
            take("^")
            w = w ** take("int")[1]
        return w

    def atom():
        tok = peek()
        if tok[0] == "gen":
            take("gen")
            if tok[1] < 1:
                raise WordSyntaxError("generator index must be >= 1", tok[2])
            return FreeWord.gen(tok[1])
        if tok[0] == "[":
            take("[")
            a = word()
            take(",")
            b = word()
            take("]")
            return FreeWord.commutator(a, b)
        if tok[0] == "(":
            take("(")
            w = word()
            take(")")
            return w
        raise WordSyntaxError(f"unexpected token {tok[0]!r}", tok[2])

    w = word()
    take("end")
    return w


def satisfies_relation(H: FiniteGroup, w: FreeWord | str, arity: int | None = None,
                       tuple_cap: int = 10 ** 7) -> bool:
    """True iff w evaluates to the identity on every tuple of H."""
    if isinstance(w, str):
        w = parse_word(w)
    k = arity if arity is not None else w.arity
    if w.arity > k:
        raise ValueError("word uses generators beyond the stated arity")
    if H.order ** k > tuple_cap:
        raise GroupSizeError(f"|H|^k = {H.order ** k} exceeds the tuple cap {tuple_cap}")
    return relation_counterexample(H, w, k) is None


def relation_counterexample(H: FiniteGroup, w: FreeWord, k: int):
    for values in iproduct(H.elements, repeat=k):
        if w.evaluate(H, values) != H.identity:
            return values
    return None


# ------------------------------------------------------------ universal groups

def _extends(G: FiniteGroup, src: tuple, dst: tuple) -> bool:
    """Does src[i] -> dst[i] extend to a homomorphism <src> -> G?"""
    car = G.carrier
    phi = {car.identity: car.identity}
    queue = deque([car.identity])
    while queue:
        x = queue.popleft()
        for s, d in zip(src, dst):
            y = car.mul(x, s)
            val = car.mul(phi[x], d)
            if y in phi:
                if phi[y] != val:
                    return False
            else:
                phi[y] = val
                queue.append(y)
    return True


def retained_homomorphisms(G: FiniteGroup, k: int) -> list[tuple]:
    """Homomorphisms F_k -> G with minimal kernels, one per kernel.

    f is dropped when some retained f' has ker f' inside ker f, since the
    f-coordinate is then a function of the f'-coordinate.
    """
    homs = list(iproduct(G.elements, repeat=k))
    size = {f: len(_bfs(G.carrier, [x for x in f if x != G.identity])) for f in homs}
    homs.sort(key=lambda f: (-size[f], f))
    kept: list[tuple] = []
    for f in homs:
        if any(_extends(G, g, f) for g in kept):
            continue
        kept = [g for g in kept if not _extends(G, f, g)]
        kept.append(f)
    return kept


def universal_group(G: FiniteGroup, k: int, cap: int = 10 ** 6) -> FiniteGroup:
    """The image of F_k in the product of G over retained homomorphisms;
    ``distinguished`` holds the images of x_1..x_k."""
    homs = retained_homomorphisms(G, k)
    car = ProductCarrier([G.carrier] * len(homs))
    gens = [tuple(f[i] for f in homs) for i in range(k)]
    U = closure(gens, car, cap=cap, name=f"U({G.name or 'G'},{k})")
    U.distinguished = tuple(gens)
    U.homomorphisms = tuple(homs)
    return U


# ------------------------------------------------------------------ cyclotomy

def _primitive_root(p: int) -> int:
    phi = p - 1
    ps = list(factorint(phi)) if phi > 1 else []
    for g in range(1, p):
        if all(pow(g, phi // r, p) != 1 for r in ps):
            return g
    raise ArithmeticError("no primitive root")  # pragma: no cover


def _unit_generators(n: int) -> list[int]:
    gens = []
    parts = factorint(n) if n > 1 else {}
    for p, e in parts.items():
        pe = p ** e
        other = n // pe
        local = []
        if p == 2:
            if e >= 2:
                local.append(pe - 1)
            if e >= 3:
                local.append(5)
        else:
            g = _primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            local.append(g % pe)
        for g in local:
            # CRT: x = g mod p^e, x = 1 mod other
            if other == 1:
                gens.append(g % n)
            else:
                x = (g * other * pow(other, -1, pe) + pe * pow(pe, -1, other)) % n
                gens.append(x)
    return [g for g in gens if g % n != 1 % n]


def unit_group_mod_n(n: int) -> FiniteGroup:
    """(Z/n)^x, generated by CRT lifts of local generators."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return FiniteGroup(UnitCarrier(n), _unit_generators(n), name=f"(Z/{n})^x")


def cyclotomic_in_genA4(n: int) -> bool:
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 2:
        return True
    return is_generalized_A4_type(unit_group_mod_n(n))


# ------------------------------------------------- generalized G-type search

def transitive_subgroups(G: FiniteGroup) -> list[FiniteGroup]:
    car = G.carrier
    if not isinstance(car, PermCarrier):
        raise TypeError("transitivity needs a permutation group")
    out = []
    for S in all_subgroups(G):
        orbit = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for g in S.generators:
                j = g[i]
                if j not in orbit:
                    orbit.add(j)
                    stack.append(j)
        if len(orbit) == car.degree:
            out.append(S)
    return out


def generalized_type_search(H: FiniteGroup, G: FiniteGroup, max_arity: int = 3,
                            product_cap: int = 2000):
    """True if H is a quotient of a subdirect product of at most ``max_arity``
    transitive subgroups of G, otherwise ``UNDECIDED``."""
    trans = transitive_subgroups(G)
    for r in range(1, max_arity + 1):
        for combo in combinations_with_replacement(range(len(trans)), r):
            factors = [trans[i] for i in combo]
            total = math.prod(T.order for T in factors)
            if total % H.order and r == 1:
                continue
            if total > product_cap:
                continue
            car = ProductCarrier([T.carrier for T in factors])
            from .groups import direct_product
            P = direct_product(factors)
            try:
                subs = all_subgroups(P)
            except GroupSizeError:
                continue
            for K in subs:
                if K.order % H.order or not is_subdirect_product(FiniteGroup(car, K.generators), factors):
                    continue
                for N in normal_subgroups(K):
                    if N.order * H.order == K.order:
                        if find_isomorphism(quotient(K, N), H) is not None:
                            return True
    return UNDECIDED
