"""Exact arithmetic kernel: rationals, dense polynomials, rational functions.

Rationals are :class:`fractions.Fraction` (integral values are kept as plain
``int`` inside polynomials, which keeps integer work fast).  Polynomials are
generic over their coefficient ring, so a ``Poly`` whose coefficients are
themselves ``Poly`` objects is a bivariate polynomial; that is how identities
"in s" are checked symbolically.
"""
from __future__ import annotations

import ast
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]

__all__ = [
    "Poly", "RationalFunction", "Residue", "Factorization",
    "as_rational", "parse_rational", "format_rational",
    "is_square_rational", "is_kth_power_rational", "rational_kth_root",
    "rational_roots", "factor_quartic", "poly_square_root",
    "factorint", "is_probable_prime", "squarefree_part", "iroot",
    "resultant", "discriminant", "parse_expression", "primes",
]


# ---------------------------------------------------------------- rationals

def as_rational(x) -> Number:
    """Coerce ints, Fractions and exact strings like ``"-3/2"`` to a rational."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Number:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not an exact rational: {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return _norm(Fraction(num, den))


def format_rational(x: Number) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _int_kth_root(n: int, k: int):
    if n < 0:
        if k % 2 == 0:
            return None
        r = _int_kth_root(-n, k)
        return None if r is None else -r
    r = iroot(n, k)
    return r if r ** k == n else None


def rational_kth_root(q, k: int):
    """The rational r with r**k == q (positive root for even k), or None."""
    q = Fraction(q)
    if q == 0:
        return 0
    num = _int_kth_root(q.numerator, k)
    den = _int_kth_root(q.denominator, k)
    if num is None or den is None:
        return None
    return _norm(Fraction(num, den))


def is_kth_power_rational(q, k: int) -> bool:
    return rational_kth_root(q, k) is not None


def is_square_rational(q) -> bool:
    """True iff q is the square of a rational number (0 counts)."""
    q = Fraction(q)
    if q < 0:
        return False
    return rational_kth_root(q, 2) is not None


# ------------------------------------------------------------ integer tools

def primes(limit: int) -> list[int]:
    """Primes below ``limit`` by a plain sieve."""
    if limit < 3:
        return []
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit - 1) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, limit, p)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = primes(1000)
_TRIAL_LIMIT = 10 ** 6
_trial_primes: list[int] | None = None


def _trial_division_primes() -> list[int]:
    global _trial_primes
    if _trial_primes is None:
        _trial_primes = primes(_TRIAL_LIMIT)
    return _trial_primes


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24, overwhelming beyond."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
    if n >= 3317044064679887385961981:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(16)]
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n ^ 0x5DEECE66D)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorint(n: int) -> dict[int, int]:
    """Prime factorisation of |n| (trial division to 10**6, then Pollard rho)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1 and n < _TRIAL_LIMIT ** 2:
        for p in _trial_division_primes():
            if p * p > n:
                break
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = iroot(m, 2)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def squarefree_part(q) -> int:
    """The squarefree integer d with q = d * (rational square); q != 0."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no squarefree part")
    sign = -1 if q < 0 else 1
    d = 1
    for n in (q.numerator, q.denominator):
        for p, e in factorint(n).items():
            if e % 2:
                d *= p
    return sign * d


# -------------------------------------------------------------- polynomials

def _is_zero(c) -> bool:
    return not c


class Poly:
    """Dense univariate polynomial, coefficients lowest degree first.

    Coefficients may be ints, Fractions, or other ``Poly`` objects.  The zero
    polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "var", "_hash")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [_norm(c) if not isinstance(c, Poly) else c for c in coeffs]
        cs = [Fraction(c) if isinstance(c, float) else c for c in cs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var
        self._hash = None

    # construction helpers
    @classmethod
    def x(cls, var: str = "x") -> "Poly":
        return cls((0, 1), var)

    @classmethod
    def const(cls, c, var: str = "x") -> "Poly":
        return cls((c,), var)

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "x") -> "Poly":
        out = cls((1,), var)
        for r in roots:
            out = out * cls((-r, 1), var)
        return out

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    # equality / hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return self.coeffs == (_norm(Fraction(other)),)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,), self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly((), self.var)
            return Poly([c * other for c in self.coeffs], self.var)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly((), self.var)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        result = Poly((1,), self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lc = other.lc
        if isinstance(lc, Poly):
            raise TypeError("division needs a field-valued leading coefficient")
        inv = Fraction(1) / Fraction(lc)
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly((), self.var), self
        quo = [0] * (dq + 1)
        bc = other.coeffs
        nb = len(bc) - 1
        for k in range(dq, -1, -1):
            c = rem[k + nb]
            if _is_zero(c):
                continue
            c = _norm(c * inv) if not isinstance(c, Poly) else c * inv
            quo[k] = c
            for j in range(nb + 1):
                rem[k + j] = rem[k + j] - c * bc[j]
        return Poly(quo, self.var), Poly(rem[:nb], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            inv = Fraction(1) / Fraction(other)
            return Poly([c * inv for c in self.coeffs], self.var)
        if isinstance(other, Poly):
            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        return RationalFunction(Poly((other,), self.var), self)

    # evaluation and calculus
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return _norm(acc) if isinstance(acc, Fraction) else acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def compose(self, inner) -> Union["Poly", "RationalFunction"]:
        return self(inner)

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.coeffs], self.var)

    def with_var(self, var: str) -> "Poly":
        return Poly(self.coeffs, var)

    def monic(self) -> "Poly":
        return self / self.lc

    # integer normal forms
    def integer_form(self) -> tuple[Fraction, list[int]]:
        """(c, ints) with self == c * Poly(ints) and ints primitive, lc > 0."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        fr = [Fraction(c) for c in self.coeffs]
        den = reduce(math.lcm, (c.denominator for c in fr), 1)
        ints = [int(c * den) for c in fr]
        g = reduce(math.gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        ints = [c // g for c in ints]
        return Fraction(g, den), ints

    def content_free(self) -> "Poly":
        return Poly(self.integer_form()[1], self.var)

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd over Q (zero if both are zero)."""
        a, b = self, other
        if a.is_zero():
            return b.monic() if not b.is_zero() else b
        if b.is_zero():
            return a.monic()
        if a.degree == 0 or b.degree == 0:
            return Poly((1,), self.var)
        if _coprime_mod_p(a.integer_form()[1], b.integer_form()[1]):
            return Poly((1,), self.var)
        while not b.is_zero():
            a, b = b, (a % b)
            if not b.is_zero():
                b = b.content_free()
        return a.monic()

    # serialization
    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence, var: str = "x") -> "Poly":
        return cls([as_rational(c) for c in data], var)

    def to_text(self) -> str:
        """Sparse text form, highest degree first, e.g. ``t^3 + 6*t^2 - 13``.

        The output is accepted by ``from_text``.
        """
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if _is_zero(c):
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if isinstance(c, Poly):
                body = f"({c.to_text()})"
                terms.append(("+", body if not mono else f"{body}*{mono}"))
                continue
            sign = "-" if c < 0 else "+"
            mag = format_rational(abs(c))
            if "/" in mag:
                mag = f"({mag})"
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            terms.append((sign, body))
        if not terms:
            return "0"
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def from_text(cls, text: str, var: str = "x") -> "Poly":
        value = parse_expression(text, variables=(var,))
        if isinstance(value, RationalFunction):
            if not value.den.is_constant():
                raise ValueError(f"not a polynomial: {text!r}")
            value = value.num / value.den.lc
        if isinstance(value, Poly):
            return value.with_var(var)
        return cls((value,), var)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"


# ------------------------------------------------------- modular helpers

def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod_poly(ints: Sequence[int], p: int) -> list[int]:
    return _strip([c % p for c in ints])


def _divmod_p(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    inv = pow(b[-1], -1, p)
    nb = len(b) - 1
    q = [0] * max(len(a) - nb, 0)
    for k in range(len(a) - 1 - nb, -1, -1):
        c = a[k + nb] * inv % p
        q[k] = c
        if c:
            for j in range(nb + 1):
                a[k + j] = (a[k + j] - c * b[j]) % p
    return _strip(q), _strip(a[:nb])


def _gcd_p(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        a, b = b, _divmod_p(a, b, p)[1]
    return a


def _deriv_p(a: Sequence[int], p: int) -> list[int]:
    return _strip([(i * c) % p for i, c in enumerate(a)][1:])


def _coprime_mod_p(a: Sequence[int], b: Sequence[int], tries: int = 3) -> bool:
    """Sufficient test for coprimality over Q via a few good primes."""
    found = 0
    for p in _SMALL_PRIMES[5:]:
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        g = _gcd_p(_mod_poly(a, p), _mod_poly(b, p), p)
        if len(g) == 1:
            return True
        found += 1
        if found >= tries:
            return False
    return False


def _eval_p(a: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


# ---------------------------------------------------------- rational roots

def _squarefree_factors(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's squarefree decomposition over Q (constant factors dropped)."""
    out = []
    d = f.derivative()
    c = f.gcd(d)
    w = f // c
    y = d // c
    z = y - w.derivative()
    i = 1
    while w.degree > 0:
        g = w.gcd(z)
        if g.degree > 0:
            out.append((g, i))
        w = w // g
        y = z // g
        z = y - w.derivative()
        i += 1
    return out


def _reconstruct(r: int, m: int, num_bound: int, den_bound: int):
    r0, r1 = m, r % m
    s0, s1 = 0, 1
    while r1 > num_bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    u, v = r1, s1
    if v < 0:
        u, v = -u, -v
    if v == 0 or v > den_bound or math.gcd(u, v) != 1:
        return None
    return u, v


def _homog_eval(ints: Sequence[int], u: int, v: int) -> int:
    n = len(ints) - 1
    acc = 0
    vp = 1
    # sum a_i u^i v^(n-i) by Horner in u with powers of v
    for c in reversed(ints):
        acc = acc * u + c * vp
        vp *= v
    return acc


def _simple_roots_int(ints: list[int]) -> list[Fraction]:
    """Rational roots of a squarefree primitive integer polynomial with a0 != 0."""
    n = len(ints) - 1
    if n == 1:
        return [_norm(Fraction(-ints[0], ints[1]))]
    a0, an = abs(ints[0]), abs(ints[-1])
    deriv = [i * c for i, c in enumerate(ints)][1:]
    for p in _SMALL_PRIMES:
        if an % p == 0:
            continue
        fp = _mod_poly(ints, p)
        dp = _mod_poly(deriv, p)
        if len(fp) != n + 1 or len(_gcd_p(fp, dp, p)) != 1:
            continue
        break
    else:  # pragma: no cover - needs a pathological input
        raise ArithmeticError("no suitable prime for root lifting")
    residues = [x for x in range(p) if _eval_p(fp, x, p) == 0]
    if not residues:
        return []
    bound = 2 * a0 * an
    roots = []
    for r in residues:
        m = p
        while m <= bound:
            m2 = m * m
            fr = _eval_p(ints, r, m2)
            dr = _eval_p(deriv, r, m2)
            r = (r - fr * pow(dr, -1, m2)) % m2
            m = m2
        cand = _reconstruct(r, m, a0, an)
        if cand is None:
            continue
        u, v = cand
        if _homog_eval(ints, u, v) == 0:
            roots.append(_norm(Fraction(u, v)))
    return roots


def rational_roots(p: Poly) -> list[Number]:
    """All rational roots of ``p`` with multiplicity, sorted ascending.

    Roots are found p-adically (Hensel lifting plus rational reconstruction)
    and each one is confirmed by exact substitution.
    """
    if not isinstance(p, Poly):
        p = Poly(p)
    if p.is_zero():
        raise ValueError("the zero polynomial has every rational as a root")
    _, ints = p.integer_form()
    roots: list[Number] = []
    k = 0
    while ints[k] == 0:
        k += 1
    roots += [0] * k
    ints = ints[k:]
    if len(ints) > 1:
        deriv = [i * c for i, c in enumerate(ints)][1:]
        if _coprime_mod_p(ints, deriv):
            parts = [(ints, 1)]
        else:
            parts = [(g.integer_form()[1], m) for g, m in _squarefree_factors(Poly(ints))]
        for g, m in parts:
            for r in _simple_roots_int(g):
                roots += [r] * m
    return sorted(roots)


# ---------------------------------------------------------- factorisation

@dataclass(frozen=True)
class Factorization:
    """``unit * prod(f**m for f, m in factors)`` with monic irreducible f."""

    unit: Number
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        out = Poly((self.unit,))
        for f, m in self.factors:
            out = out * f ** m
        return out

    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1


def _quadratic_splits(q: Poly) -> list[tuple[Poly, Poly]]:
    """Monic quartic without rational roots -> its rational quadratic splits."""
    _, a, b, c, d = [Fraction(v) for v in reversed(q.coeffs)]
    # x^4 + a x^3 + b x^2 + c x + d = (x^2 + p1 x + q1)(x^2 + p2 x + q2); y = q1 + q2
    resolvent = Poly((-(a * a * d - 4 * b * d + c * c), a * c - 4 * d, -b, 1))
    splits = []
    for y in sorted(set(rational_roots(resolvent))):
        disc_q = y * y - 4 * d
        disc_p = a * a - 4 * (b - y)
        rq = rational_kth_root(disc_q, 2) if disc_q >= 0 else None
        rp = rational_kth_root(disc_p, 2) if disc_p >= 0 else None
        if rq is None or rp is None:
            continue
        q1, q2 = (y + rq) / 2, (y - rq) / 2
        for sgn in (1, -1):
            p1, p2 = (a + sgn * rp) / 2, (a - sgn * rp) / 2
            f1, f2 = Poly((q1, p1, 1)), Poly((q2, p2, 1))
            if f1 * f2 == q:
                splits.append((f1, f2))
    return splits


def factor_quartic(p: Poly) -> Factorization:
    """Factor a nonzero polynomial of degree <= 4 into irreducibles over Q."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.degree > 4:
        raise ValueError("factor_quartic handles degree at most 4")
    unit = p.lc
    rest = p.monic()
    counts: dict[Poly, int] = {}
    for r in rational_roots(rest) if rest.degree > 0 else []:
        lin = Poly((-r, 1))
        rest = rest // lin
        counts[lin] = counts.get(lin, 0) + 1
    if rest.degree == 4:
        splits = _quadratic_splits(rest)
        if splits:
            f1, f2 = splits[0]
            for f in (f1, f2):
                counts[f] = counts.get(f, 0) + 1
            rest = Poly((1,))
    if rest.degree > 0:
        counts[rest] = counts.get(rest, 0) + 1
    factors = tuple(sorted(counts.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs)))
    return Factorization(_norm(Fraction(unit)) if not isinstance(unit, Poly) else unit, factors)


def poly_square_root(p: Poly):
    """Return q with q*q == p (positive leading coefficient), else None."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    n = p.degree
    if n % 2:
        return None
    lc = p.lc
    if isinstance(lc, Poly):
        top = poly_square_root(lc)
    else:
        top = rational_kth_root(lc, 2) if Fraction(lc) > 0 else None
    if top is None:
        return None
    m = n // 2
    q = [0] * (m + 1)
    q[m] = top
    two_top = 2 * top
    for i in range(m - 1, -1, -1):
        acc = p[m + i]
        for j in range(i + 1, m):
            k = m + i - j
            if i < k < m:
                acc = acc - q[j] * q[k]
        if isinstance(two_top, Poly):
            try:
                q[i] = acc.exact_div(two_top) if isinstance(acc, Poly) else Poly((acc,)).exact_div(two_top)
            except ArithmeticError:
                return None
        else:
            q[i] = _norm(Fraction(acc) / two_top) if not isinstance(acc, Poly) else acc / two_top
    root = Poly(q, p.var)
    return root if root * root == p else None


# ------------------------------------------------------ resultants

def _exact_div(a, b):
    if isinstance(a, Poly):
        return a.exact_div(b if isinstance(b, Poly) else Poly((b,), a.var))
    if isinstance(b, Poly):
        return Poly((a,), b.var).exact_div(b)
    return _norm(Fraction(a) / Fraction(b))


def _bareiss_det(mat: list[list]):
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def resultant(f: Poly, g: Poly):
    """Sylvester resultant, fraction-free, over any exact coefficient ring."""
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        return 0
    size = m + n
    if size == 0:
        return 1
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return _bareiss_det(rows)


def discriminant(f: Poly):
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    res = resultant(f, f.derivative())
    if (n * (n - 1) // 2) % 2:
        res = -res
    return _exact_div(res, f.lc)


# ------------------------------------------------------ rational functions

class RationalFunction:
    """Normalised quotient of polynomials over Q: coprime, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _normalized: bool = False):
        var = num.var if isinstance(num, Poly) else (den.var if isinstance(den, Poly) else "t")
        if not isinstance(num, Poly):
            num = Poly((num,), var)
        if den is None:
            den = Poly((1,), var)
        elif not isinstance(den, Poly):
            den = Poly((den,), var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly((1,), var)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                lc = den.lc
                num, den = num / lc, den / lc
        self.num = num
        self.den = den

    @property
    def var(self) -> str:
        return self.num.var

    @classmethod
    def coerce(cls, x, var: str = "t") -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Poly):
            return cls(x, Poly((1,), x.var), _normalized=True)
        return cls(Poly((x,), var), Poly((1,), var), _normalized=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return self.den == 1 and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other):
        o = RationalFunction.coerce(other, self.var)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other, self.var))

    def __rsub__(self, other):
        return RationalFunction.coerce(other, self.var) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other, self.var)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.coerce(other, self.var)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other, self.var) / self

    def __pow__(self, e: int):
        if e >= 0:
            return RationalFunction(self.num ** e, self.den ** e, _normalized=e > 0)
        return RationalFunction(self.den ** (-e), self.num ** (-e))

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __call__(self, x):
        """Evaluate at a rational, or compose with a polynomial/rational function."""
        if isinstance(x, (Poly, RationalFunction)):
            return self.compose(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return _norm(Fraction(self.num(x)) / Fraction(d))

    def compose(self, inner) -> "RationalFunction":
        inner = RationalFunction.coerce(inner, self.var)
        u1, u2 = inner.num, inner.den
        k = self.degree

        def homog(p: Poly) -> Poly:
            out = Poly((), u1.var)
            pw1 = [Poly((1,), u1.var)]
            pw2 = [Poly((1,), u1.var)]
            for _ in range(k):
                pw1.append(pw1[-1] * u1)
                pw2.append(pw2[-1] * u2)
            for i, c in enumerate(p.coeffs):
                out = out + pw1[i] * pw2[k - i] * c
            return out

        return RationalFunction(homog(self.num), homog(self.den))

    def sqrt(self):
        """A rational function r with r*r == self, or None."""
        if self.num.is_zero():
            return RationalFunction.coerce(0, self.var)
        prod_root = poly_square_root(self.num * self.den)
        if prod_root is None:
            return None
        return RationalFunction(prod_root, self.den)

    def is_square(self) -> bool:
        return self.sqrt() is not None

    def to_json(self) -> dict:
        return {"numerator": self.num.to_json(), "denominator": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict, var: str = "t") -> "RationalFunction":
        return cls(Poly.from_json(data["numerator"], var), Poly.from_json(data["denominator"], var))

    def __str__(self) -> str:
        if self.den == 1:
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"


# ------------------------------------------------------ expression parsing

_ALLOWED_BIN = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_expression(text: str, variables: Sequence[str] = ("t",)):
    """Parse an arithmetic expression into an int, Fraction, Poly or RationalFunction.

    Accepts ``+ - * / ^ **``, parentheses, integer literals and the named
    variables.  Results are exact.
    """
    src = text.replace("^", "**").replace("−", "-")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression at column {exc.offset}: {text!r}") from None
    var = variables[0] if variables else "t"

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in variables:
                raise ValueError(f"unknown symbol {node.id!r} at column {node.col_offset}")
            return Poly((0, 1), node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BIN):
            left = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    exp = ev(node.right)
                    if not isinstance(exp, int):
                        raise ValueError("exponents must be integer literals")
                else:
                    exp = node.right.value
                if isinstance(left, (int, Fraction)):
                    return _norm(Fraction(left) ** exp)
                if exp < 0:
                    return RationalFunction.coerce(left, var) ** exp
                return left ** exp
            right = ev(node.right)
            if isinstance(node.op, ast.Add):
                return _lift(left, right, var, lambda a, b: a + b)
            if isinstance(node.op, ast.Sub):
                return _lift(left, right, var, lambda a, b: a - b)
            if isinstance(node.op, ast.Mult):
                return _lift(left, right, var, lambda a, b: a * b)
            if isinstance(right, (int, Fraction)) and not isinstance(left, RationalFunction):
                if right == 0:
                    raise ZeroDivisionError("division by zero in expression")
                if isinstance(left, (int, Fraction)):
                    return _norm(Fraction(left) / right)
                return left / right
            return RationalFunction.coerce(left, var) / RationalFunction.coerce(right, var)
        raise ValueError(f"unsupported syntax at column {getattr(node, 'col_offset', '?')}: {text!r}")

    return ev(tree)


def _lift(a, b, var, op):
    if isinstance(a, RationalFunction) or isinstance(b, RationalFunction):
        return op(RationalFunction.coerce(a, var), RationalFunction.coerce(b, var))
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return _norm(Fraction(op(a, b)))
    return op(a, b)


# ----------------------------------------------------------------- residues

@dataclass(frozen=True, order=True)
class Residue:
    """An element of Z/nZ."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("residues with different moduli")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue((self.value + self._other(other)) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue((self.value - self._other(other)) % self.modulus, self.modulus)

    def __neg__(self):
        return Residue(-self.value % self.modulus, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._other(other) % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return Residue(pow(self.value, e, self.modulus), self.modulus)

    def is_unit(self) -> bool:
        return math.gcd(self.value, self.modulus) == 1

    def inverse(self) -> "Residue":
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"
