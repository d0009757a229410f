"""Prime field arithmetic.

All homology is computed over Z/pZ for a prime p, by default 1009.  A
FieldContext carries the modulus; matrices in :mod:`phmap.linalg` store it
alongside their entries so mixed-modulus arithmetic is rejected early.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldDivisionError, ModulusMismatchError, NotPrimeError

DEFAULT_PRIME = 1009


def is_prime(n: int) -> bool:
    """Trial division primality check, adequate for the moduli used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FieldContext:
    """The field Z/pZ.

    Provides scalar arithmetic on plain ints reduced mod p.  For small p an
    inverse table is precomputed since column reduction asks for inverses
    constantly.
    """

    __slots__ = ("p", "_inv_table")

    def __init__(self, p: int):
        if not is_prime(p):
            raise NotPrimeError(f"modulus {p} is not prime")
        self.p = p
        if p <= 1 << 16:
            table = [0] * p
            for a in range(1, p):
                table[a] = pow(a, p - 2, p)
            self._inv_table = table
        else:
            self._inv_table = None

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise FieldDivisionError(f"inverse of 0 mod {self.p}")
        if self._inv_table is not None:
            return self._inv_table[a]
        return pow(a, self.p - 2, self.p)

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.p == self.p

    def __hash__(self):
        return hash(("FieldContext", self.p))

    def __repr__(self):
        return f"FieldContext(p={self.p})"


def make_field(p: int = DEFAULT_PRIME) -> FieldContext:
    return FieldContext(p)


@dataclass(frozen=True)
class FieldElement:
    """An element of Z/pZ with operator overloads.

    Mostly used at API boundaries and in tests; inner loops work on raw ints
    through a FieldContext.
    """

    value: int
    p: int

    def _check(self, other: "FieldElement") -> None:
        if self.p != other.p:
            raise ModulusMismatchError(f"mixed moduli {self.p} and {other.p}")

    def __add__(self, other):
        self._check(other)
        return FieldElement((self.value + other.value) % self.p, self.p)

    def __sub__(self, other):
        self._check(other)
        return FieldElement((self.value - other.value) % self.p, self.p)

    def __mul__(self, other):
        self._check(other)
        return FieldElement((self.value * other.value) % self.p, self.p)

    def __neg__(self):
        return FieldElement((-self.value) % self.p, self.p)

    def inv(self) -> "FieldElement":
        if self.value % self.p == 0:
            raise FieldDivisionError(f"inverse of 0 mod {self.p}")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inv()

    def __bool__(self):
        return self.value % self.p != 0


def lift_symmetric(a: int, p: int) -> int:
    """Lift a residue to the integer of smallest absolute value."""
    a %= p
    return a - p if a > p // 2 else a


def rational_reconstruct(a: int, p: int) -> Fraction:
    """Recover n/d from its residue a = n * d^-1 mod p.

    Extended Euclid halted once the remainder drops below sqrt(p/2); unique
    for |n|, |d| below that bound.  Raises ArithmeticError when no small
    fraction exists.
    """
    a %= p
    if a == 0:
        return Fraction(0)
    bound = 1
    while (bound + 1) * (bound + 1) <= p // 2:
        bound += 1
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or (r1 * pow(s1 % p, p - 2, p) - a) % p != 0:
        raise ArithmeticError(f"no small rational congruent to {a} mod {p}")
    return Fraction(r1, s1)
