"""The polynomial ring A = F_q[T].

Polynomials are immutable and store coefficients as a tuple of ints in
``[0, p)``, lowest degree first, with no trailing zeros; the zero polynomial
is the empty tuple.  The module-level helpers prefixed with ``_`` work on
those raw tuples and are shared with the character and batch code, where
the wrapper objects would cost too much.

Monic polynomials of degree n are enumerated in index order: the index of
``c_0 + c_1 T + ... + c_{n-1} T^{n-1} + T^n`` is ``sum(c_i * q**i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import (
    BadFieldForEnsemble,
    BothZero,
    ConstantInput,
    DivisionByZero,
    FieldMismatch,
    NonPositiveDegree,
    ParseError,
    ZeroPolynomial,
)
from .field import FieldElement, FieldSpec, make_field


class _NegInfDegree:
    """Degree of the zero polynomial.

    Compares below every integer and refuses arithmetic, so a stray
    ``deg(0) + 1`` fails loudly instead of producing a plausible number.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "-inf"


NEG_INF = _NegInfDegree()


# ---------------------------------------------------------------- raw tuples


def _trim(c: Sequence[int]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _trim(out)


def _sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return _trim(out)


def _scale(a, c, p):
    c %= p
    if c == 0:
        return ()
    return tuple(x * c % p for x in a)


def _mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([x % p for x in out])


def _divmod(a, b, p):
    if not b:
        raise DivisionByZero("division by the zero polynomial")
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), tuple(a)
    inv = pow(b[-1], -1, p)
    r = list(a)
    qt = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = r[i + db] * inv % p
        qt[i] = c
        if c:
            for j in range(db + 1):
                r[i + j] = (r[i + j] - c * b[j]) % p
    return _trim(qt), _trim(r[:db])


def _mod(a, b, p):
    db = len(b) - 1
    if len(a) - 1 < db:
        return tuple(a)
    if b[-1] == 1:
        r = list(a)
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i] % p
            if c:
                s = i - db
                for j in range(db):
                    r[s + j] -= c * b[j]
        return _trim([x % p for x in r[:db]])
    return _divmod(a, b, p)[1]


def _monic(a, p):
    inv = pow(a[-1], -1, p)
    return tuple(x * inv % p for x in a)


def _gcd(a, b, p):
    while b:
        a, b = b, _mod(a, b, p)
    return _monic(a, p) if a else ()


def _deriv(a, p):
    return _trim([i * a[i] % p for i in range(1, len(a))])


def _mulmod(a, b, m, p):
    return _mod(_mul(a, b, p), m, p)


def _powmod(base, e, m, p):
    result = (1,)
    base = _mod(base, m, p)
    while e:
        if e & 1:
            result = _mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _mulmod(base, base, m, p)
    return _mod(result, m, p)


def _eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _index(a, q):
    """Enumeration index of a monic polynomial (its non-leading digits)."""
    idx = 0
    for c in reversed(a[:-1]):
        idx = idx * q + c
    return idx


def _from_index(idx, n, q):
    digits = []
    for _ in range(n):
        idx, r = divmod(idx, q)
        digits.append(r)
    digits.append(1)
    return tuple(digits)


def _is_squarefree(a, p):
    if len(a) <= 2:
        return True
    d = _deriv(a, p)
    if not d:
        return False
    return len(_gcd(a, d, p)) == 1


@lru_cache(maxsize=None)
def _prime_factors_int(n: int) -> tuple[int, ...]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _is_irreducible(a, p):
    """Rabin's test over the prime field F_p."""
    n = len(a) - 1
    if n == 1:
        return True
    a = _monic(a, p)
    x = (0, 1)
    if _powmod_frob(x, n, a, p) != x:
        return False
    for r in _prime_factors_int(n):
        h = _sub(_powmod_frob(x, n // r, a, p), x, p)
        if len(_gcd(a, h, p)) != 1:
            return False
    return True


def _powmod_frob(x, k, m, p):
    """x**(p**k) mod m."""
    for _ in range(k):
        x = _powmod(x, p, m, p)
    return x


@lru_cache(maxsize=None)
def irreducible_table(p: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Monic irreducibles of degree ``k`` over F_p, in index order.

    Built by sieving out products of lower-degree irreducibles; the table
    is cached per ``(p, k)`` and shared read-only by later callers.
    """
    if k < 1:
        raise NonPositiveDegree("degree must be >= 1")
    total = p**k
    reducible = bytearray(total)
    for j in range(1, k // 2 + 1):
        cofactors = [_from_index(i, k - j, p) for i in range(p ** (k - j))]
        for P in irreducible_table(p, j):
            for m in cofactors:
                reducible[_index(_mul(P, m, p), p)] = 1
    return tuple(_from_index(i, k, p) for i in range(total) if not reducible[i])


# ------------------------------------------------------------------- objects


class Poly:
    """Element of F_q[T].  Immutable; supports + - * // % divmod and ==."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: Sequence[int | FieldElement] = ()):
        p = spec.p
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", _trim([int(c) % p for c in coeffs]))

    @classmethod
    def _raw(cls, spec: FieldSpec, coeffs: tuple[int, ...]) -> Poly:
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction helpers
    @classmethod
    def T(cls, spec: FieldSpec) -> Poly:
        return cls._raw(spec, (0, 1))

    @classmethod
    def constant(cls, spec: FieldSpec, c: int) -> Poly:
        return cls(spec, [c])

    @classmethod
    def from_index(cls, spec: FieldSpec, n: int, idx: int) -> Poly:
        return cls._raw(spec, _from_index(idx, n, spec.p))

    @classmethod
    def parse(cls, spec: FieldSpec, text: str) -> Poly:
        return parse_poly(spec, text)

    # basic properties
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self) -> FieldElement:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return FieldElement(self.spec, self.coeffs[-1])

    @property
    def coefficients(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.spec, c) for c in self.coeffs)

    def norm(self) -> int:
        """|f| = q**deg f (and |0| = 0)."""
        return self.spec.q ** (len(self.coeffs) - 1) if self.coeffs else 0

    def monic(self) -> Poly:
        if not self.coeffs:
            raise ZeroPolynomial("cannot normalise the zero polynomial")
        return Poly._raw(self.spec, _monic(self.coeffs, self.spec.p))

    def index(self) -> int:
        if not self.is_monic:
            raise ValueError("index is defined for monic polynomials only")
        return _index(self.coeffs, self.spec.p)

    def __call__(self, x) -> FieldElement:
        return FieldElement(self.spec, _eval(self.coeffs, int(x), self.spec.p))

    # arithmetic
    def _coerce(self, other) -> tuple[int, ...]:
        if isinstance(other, Poly):
            if other.spec != self.spec:
                raise FieldMismatch(f"{other.spec} vs {self.spec}")
            return other.coeffs
        if isinstance(other, (int, FieldElement)):
            return _trim([int(other) % self.spec.p])
        return NotImplemented

    def _binop(self, other, fn):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return Poly._raw(self.spec, fn(self.coeffs, b, self.spec.p))

    def __add__(self, other):
        return self._binop(other, _add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, _sub)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return Poly._raw(self.spec, _sub(b, self.coeffs, self.spec.p))

    def __mul__(self, other):
        return self._binop(other, _mul)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly._raw(self.spec, _sub((), self.coeffs, self.spec.p))

    def __pow__(self, k: int) -> Poly:
        out = Poly._raw(self.spec, (1,))
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        return poly_divrem(self, other)

    def __floordiv__(self, other):
        return poly_divrem(self, other)[0]

    def __mod__(self, other):
        return poly_divrem(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.spec.p])
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.p, self.coeffs))

    def __lt__(self, other: Poly) -> bool:
        # canonical order: by degree, then enumeration index digits
        return _sort_key(self) < _sort_key(other)

    # text forms
    def text(self) -> str:
        """Comma form ``c0,c1,...,cd``; the zero polynomial prints as ``0``."""
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"Poly({self}, q={self.spec.q})"


def _sort_key(f: Poly):
    return (len(f.coeffs), tuple(reversed(f.coeffs)))


_TERM = re.compile(r"^(?:(\d+)\*?)?(?:([TtXx])(?:\^(\d+))?)?$")


def parse_poly(spec: FieldSpec, text: str) -> Poly:
    """Parse either ``"c0,c1,...,cd"`` or a pretty form like ``"T^3+2*T+1"``."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial text")
    if "," in s or re.fullmatch(r"-?\d+", s):
        try:
            return Poly(spec, [int(c) for c in s.split(",")])
        except ValueError as exc:
            raise ParseError(f"bad coefficient list {text!r}") from exc
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
        m = _TERM.match(body)
        if not m or body == "":
            raise ParseError(f"bad term {body!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        if m.group(2):
            e = int(m.group(3)) if m.group(3) else 1
        else:
            if not m.group(1):
                raise ParseError(f"bad term {body!r} in {text!r}")
            e = 0
        if sign == "-":
            c = -c
        coeffs[e] = coeffs.get(e, 0) + c
    if "".join(sign + body for sign, body in re.findall(r"([+-]?)([^+-]+)", s)) != s:
        raise ParseError(f"cannot parse {text!r}")
    top = max(coeffs) if coeffs else 0
    return Poly(spec, [coeffs.get(i, 0) for i in range(top + 1)])


# ---------------------------------------------------------------- operations


def _check_pair(f: Poly, g: Poly):
    if f.spec != g.spec:
        raise FieldMismatch(f"{f.spec} vs {g.spec}")


def poly_divrem(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Return ``(quot, rem)`` with ``f == quot*g + rem`` and ``deg rem < deg g``."""
    if isinstance(g, int):
        g = Poly.constant(f.spec, g)
    _check_pair(f, g)
    if g.is_zero:
        raise DivisionByZero("division by the zero polynomial")
    qt, r = _divmod(f.coeffs, g.coeffs, f.spec.p)
    return Poly._raw(f.spec, qt), Poly._raw(f.spec, r)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by Euclid's algorithm."""
    _check_pair(f, g)
    if f.is_zero and g.is_zero:
        raise BothZero("gcd(0, 0) is undefined")
    return Poly._raw(f.spec, _gcd(f.coeffs, g.coeffs, f.spec.p))


def derivative(f: Poly) -> Poly:
    return Poly._raw(f.spec, _deriv(f.coeffs, f.spec.p))


def is_squarefree(f: Poly) -> bool:
    """No irreducible P with P**2 | f; tested as gcd(f, f') == 1."""
    if f.is_zero:
        raise ZeroPolynomial("square-freeness of 0 is undefined")
    return _is_squarefree(f.coeffs, f.spec.p)


def is_irreducible(f: Poly) -> bool:
    if f.is_zero or f.degree < 1:
        raise ConstantInput("irreducibility needs degree >= 1")
    return _is_irreducible(f.coeffs, f.spec.p)


@dataclass(frozen=True)
class Factorization:
    """``unit * prod(P**e for P, e in factors)`` with distinct monic irreducible P."""

    unit: FieldElement
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        out = Poly.constant(self.unit.spec, self.unit.value)
        for P, e in self.factors:
            out = out * P**e
        return out

    @property
    def primes(self) -> tuple[Poly, ...]:
        return tuple(P for P, _ in self.factors)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def _factor_raw(a, p):
    """Monic irreducible factorization of a monic tuple as ``[(P, e), ...]``."""
    out = []
    d = 1
    while len(a) - 1 >= 2 * d:
        for P in irreducible_table(p, d):
            e = 0
            while True:
                qt, r = _divmod(a, P, p)
                if r:
                    break
                a, e = qt, e + 1
            if e:
                out.append((P, e))
            if len(a) - 1 < 2 * d:
                break
        d += 1
    if len(a) > 1:
        # leftover cofactor has no factor of degree <= deg/2
        for i, (P, e) in enumerate(out):
            if P == a:
                out[i] = (P, e + 1)
                break
        else:
            out.append((a, 1))
    out.sort(key=lambda pe: (len(pe[0]), tuple(reversed(pe[0]))))
    return out


def factor(f: Poly) -> Factorization:
    """Deterministic factorization by trial division against cached tables."""
    if f.is_zero:
        raise ZeroPolynomial("cannot factor 0")
    p = f.spec.p
    unit = f.coeffs[-1]
    facs = _factor_raw(_monic(f.coeffs, p), p)
    return Factorization(
        FieldElement(f.spec, unit),
        tuple((Poly._raw(f.spec, P), e) for P, e in facs),
    )


def mobius(f: Poly) -> int:
    fac = factor(f)
    if not fac.squarefree:
        return 0
    return -1 if len(fac.factors) % 2 else 1


def euler_phi(f: Poly) -> int:
    """Number of nonzero polynomials of degree < deg f coprime to f."""
    if f.is_zero or f.degree < 1:
        raise ConstantInput("Phi needs deg f >= 1")
    out = 1
    for P, e in factor(f).factors:
        n = P.norm()
        out *= n**e - n ** (e - 1)
    return out


def _int_mobius(n: int) -> int:
    ps = _prime_factors_int(n)
    m = n
    for r in ps:
        m //= r
        if m % r == 0:
            return 0
    return -1 if len(ps) % 2 else 1


def count_irreducible(spec: FieldSpec | int, n: int) -> int:
    """Number of monic irreducibles of degree n, by the necklace formula."""
    q = spec.q if isinstance(spec, FieldSpec) else int(spec)
    if n < 1:
        raise NonPositiveDegree("degree must be >= 1")
    total = sum(_int_mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def irreducibles(spec: FieldSpec, n: int) -> list[Poly]:
    return [Poly._raw(spec, P) for P in irreducible_table(spec.p, n)]


def enumerate_monic(spec: FieldSpec, n: int, start: int = 0, stop: int | None = None) -> Iterator[Poly]:
    """Monic polynomials of degree ``n`` with index in ``[start, stop)``.

    Disjoint index ranges give disjoint slices of the same stream, which
    is how workers split the enumeration between them.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    q = spec.p
    total = q**n
    stop = total if stop is None else min(stop, total)
    for idx in range(start, stop):
        yield Poly._raw(spec, _from_index(idx, n, q))


def check_ensemble_field(spec: FieldSpec) -> None:
    if not spec.ensemble_ready:
        raise BadFieldForEnsemble(f"ensemble needs odd q = 1 mod 4, got q = {spec.q}")


def ensemble_size(q: int, g: int) -> int:
    """#H_{2g+1,q}: (q-1) q**(2g) for g >= 1; every linear polynomial for g = 0."""
    if g == 0:
        return q
    return (q - 1) * q ** (2 * g)


def enumerate_ensemble(spec: FieldSpec, g: int, start: int = 0, stop: int | None = None) -> Iterator[Poly]:
    """Monic square-free D of degree 2g+1, in index order.

    ``start``/``stop`` slice the underlying monic enumeration, not the
    filtered stream.
    """
    check_ensemble_field(spec)
    if g < 0:
        raise ValueError("genus must be >= 0")
    p = spec.p
    for f in enumerate_monic(spec, 2 * g + 1, start, stop):
        if _is_squarefree(f.coeffs, p):
            yield f


__all__ = [
    "NEG_INF",
    "Factorization",
    "Poly",
    "count_irreducible",
    "derivative",
    "ensemble_size",
    "enumerate_ensemble",
    "enumerate_monic",
    "euler_phi",
    "factor",
    "irreducibles",
    "is_irreducible",
    "is_squarefree",
    "make_field",
    "mobius",
    "parse_poly",
    "poly_divrem",
    "poly_gcd",
]
