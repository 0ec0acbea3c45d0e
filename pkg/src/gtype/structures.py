"""Rank <= 2 finite abelian groups Z/a + Z/b with a | b, and their partial order."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

from .algebra import factorint


@dataclass(frozen=True, order=True)
class TorsionStructure:
    a: int = 1
    b: int = 1

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.b % self.a:
            raise ValueError(f"need positive a | b, got ({self.a}, {self.b})")

    @classmethod
    def cyclic(cls, n: int) -> "TorsionStructure":
        return cls(1, n)

    @classmethod
    def from_invariants(cls, factors: Iterable[int]) -> "TorsionStructure":
        fs = sorted(f for f in factors if f > 1)
        if len(fs) > 2:
            raise ValueError(f"rank exceeds 2: {fs}")
        if len(fs) == 2:
            return cls(fs[0], fs[1])
        return cls(1, fs[0] if fs else 1)

    @classmethod
    def from_orders(cls, size: int, exponent: int) -> "TorsionStructure":
        """Structure of a rank <= 2 abelian group from its order and exponent."""
        if size % exponent:
            raise ValueError("exponent must divide the order")
        return cls(size // exponent, exponent)

    @classmethod
    def parse(cls, text: str) -> "TorsionStructure":
        nums = [int(v) for v in re.findall(r"\d+", text)]
        if len(nums) == 1:
            return cls(1, nums[0])
        if len(nums) == 2:
            return cls(*nums)
        raise ValueError(f"cannot read a torsion structure from {text!r}")

    @property
    def order(self) -> int:
        return self.a * self.b

    @property
    def exponent(self) -> int:
        return self.b

    def is_trivial(self) -> bool:
        return self.b == 1

    def is_cyclic(self) -> bool:
        return self.a == 1

    def leq(self, other: "TorsionStructure") -> bool:
        """True iff ``other`` has a subgroup isomorphic to ``self``."""
        return other.a % self.a == 0 and other.b % self.b == 0

    def p_part(self, p: int) -> "TorsionStructure":
        def pp(n):
            out = 1
            while n % p == 0:
                n //= p
                out *= p
            return out
        return TorsionStructure(pp(self.a), pp(self.b))

    def primes(self) -> list[int]:
        return sorted(factorint(self.b)) if self.b > 1 else []

    def join_coprime(self, other: "TorsionStructure") -> "TorsionStructure":
        """Direct sum of two structures of coprime order."""
        if math.gcd(self.order, other.order) != 1:
            raise ValueError("structures must have coprime orders")
        return TorsionStructure(self.a * other.a, self.b * other.b)

    def to_json(self) -> list[int]:
        return [self.a, self.b]

    def __str__(self) -> str:
        if self.b == 1:
            return "trivial"
        if self.a == 1:
            return f"Z/{self.b}"
        return f"Z/{self.a} + Z/{self.b}"


def poset_leq(t1: TorsionStructure, t2: TorsionStructure) -> bool:
    return t1.leq(t2)


def from_parts(parts: Iterable[TorsionStructure]) -> TorsionStructure:
    out = TorsionStructure()
    for p in parts:
        out = out.join_coprime(p)
    return out
