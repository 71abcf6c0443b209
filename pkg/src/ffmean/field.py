"""The prime field F_q and its quadratic character.

Elements are stored by their canonical representative in ``[0, p)``, so
equality and hashing are plain integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import FieldMismatch, NotPrime, OddCharacteristicRequired, Unsupported


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field F_q with q = p**e (only e = 1 is implemented)."""

    p: int
    e: int = 1

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def odd(self) -> bool:
        return self.p % 2 == 1

    @property
    def ensemble_ready(self) -> bool:
        """True when q is odd and q = 1 mod 4."""
        return self.odd and self.q % 4 == 1

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value % self.p)

    def elements(self):
        return [FieldElement(self, a) for a in range(self.p)]

    def parse(self, text: str) -> FieldElement:
        return self(int(text.strip()))

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})"


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldSpec:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise Unsupported(f"extension degree must be >= 1, got {e}")
    if e > 1:
        raise Unsupported("extension fields (e > 1) are not implemented")
    return FieldSpec(p, e)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatch(f"{other.spec} vs {self.spec}")
            return other.value
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(self.spec, v % self.spec.p)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.value + b)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.value - b)

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(b - self.value)

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.value * b)

    __rmul__ = __mul__

    def __neg__(self) -> FieldElement:
        return self._wrap(-self.value)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._wrap(pow(self.value, -1, self.spec.p))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return self * self._wrap(b).inverse()

    def __pow__(self, k: int) -> FieldElement:
        return field_pow(self, k)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return str(self.value)


def field_pow(a: FieldElement, k: int) -> FieldElement:
    """a**k by square-and-multiply; a**0 == 1 even for a == 0."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    p = a.spec.p
    result, base = 1, a.value
    while k:
        if k & 1:
            result = result * base % p
        base = base * base % p
        k >>= 1
    return FieldElement(a.spec, result % p)


def residue_symbol_fq(a: FieldElement) -> int:
    """Legendre symbol of ``a`` in F_q, computed by Euler's criterion."""
    if not a.spec.odd:
        raise OddCharacteristicRequired("quadratic character needs odd q")
    if a.value == 0:
        return 0
    r = field_pow(a, (a.spec.q - 1) // 2).value
    return 1 if r == 1 else -1


@lru_cache(maxsize=None)
def legendre_table(p: int) -> tuple[int, ...]:
    """``table[a]`` is the quadratic character of ``a`` in F_p."""
    table = [-1] * p
    table[0] = 0
    for x in range(1, p):
        table[x * x % p] = 1
    return tuple(table)
