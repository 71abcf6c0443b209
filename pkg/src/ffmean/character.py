"""Quadratic residue symbol (D/f) on F_q[T] and its character sums.

Two independent evaluations of the symbol are provided.  ``"factor"``
factors the denominator and applies Euler's criterion in each residue field
A/P.  ``"reciprocity"`` runs a Euclid-style descent using quadratic
reciprocity in F_q[T] and never factors anything.  They must agree; the
test-suite checks this on random pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import (
    DegreeTooLarge,
    EvenCharacteristic,
    FieldMismatch,
    NotIrreducible,
    ZeroDenominator,
)
from .field import legendre_table
from .poly import (
    Poly,
    _factor_raw,
    _from_index,
    _is_irreducible,
    _mod,
    _monic,
    _powmod,
)

METHODS = ("factor", "reciprocity")


def _symbol_prime(d, P, p):
    """(D/P) for P monic irreducible over F_p, by Euler's criterion in A/P."""
    r = _mod(d, P, p)
    if not r:
        return 0
    k = len(P) - 1
    s = _powmod(r, (p**k - 1) // 2, P, p)
    # s is the constant 1 or -1 in A/P
    return 1 if s == (1,) else -1


def _jacobi(a, b, p):
    """(a/b) for b monic, by reciprocity; a need not be monic or reduced."""
    leg = legendre_table(p)
    half = (p - 1) // 2
    result = 1
    while len(b) > 1:
        a = _mod(a, b, p)
        if not a:
            return 0
        c = a[-1]
        if c != 1:
            if (len(b) - 1) % 2 and leg[c] == -1:
                result = -result
            a = _monic(a, p)
        da, db = len(a) - 1, len(b) - 1
        if half % 2 and da % 2 and db % 2:
            result = -result
        a, b = b, a
    return result


def _symbol_factor(d, f, p):
    result = 1
    for P, e in _factor_raw(f, p):
        s = _symbol_prime(d, P, p)
        if s == 0:
            return 0
        if e % 2:
            result *= s
    return result


def _check_odd(D: Poly):
    if not D.spec.odd:
        raise EvenCharacteristic("the quadratic residue symbol needs odd q")


def symbol_irreducible(D: Poly, P: Poly) -> int:
    """(D/P) for a monic irreducible P: 0 if P | D, else +-1."""
    _check_odd(D)
    if D.spec != P.spec:
        raise FieldMismatch(f"{D.spec} vs {P.spec}")
    if not P.is_monic or P.degree < 1 or not _is_irreducible(P.coeffs, P.spec.p):
        raise NotIrreducible(f"{P} is not monic irreducible")
    return _symbol_prime(D.coeffs, P.coeffs, D.spec.p)


def symbol(D: Poly, f: Poly, method: str = "factor") -> int:
    """Jacobi-style symbol (D/f) for monic f; (D/1) = 1."""
    _check_odd(D)
    if D.spec != f.spec:
        raise FieldMismatch(f"{D.spec} vs {f.spec}")
    if f.is_zero:
        raise ZeroDenominator("(D/0) is undefined")
    if not f.is_monic:
        raise ValueError("the denominator must be monic")
    p = D.spec.p
    if method == "factor":
        return _symbol_factor(D.coeffs, f.coeffs, p)
    if method == "reciprocity":
        return _jacobi(D.coeffs, f.coeffs, p)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


@dataclass(frozen=True)
class QuadChar:
    """chi_D(f) = (D/f)."""

    D: Poly

    def __post_init__(self):
        _check_odd(self.D)

    @property
    def spec(self):
        return self.D.spec

    def __call__(self, f: Poly, method: str = "reciprocity") -> int:
        return symbol(self.D, f, method)


def char_sum(chi: QuadChar, n: int, method: str = "reciprocity") -> int:
    """Sum of chi(B) over monic B of degree n, streamed in index order."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    p = chi.spec.p
    d = chi.D.coeffs
    if method == "reciprocity":
        evaluate = _jacobi
    elif method == "factor":
        evaluate = _symbol_factor
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    total = 0
    for idx in range(p**n):
        total += evaluate(d, _from_index(idx, n, p), p)
    return total


@dataclass(frozen=True)
class WeilReport:
    lhs: int
    bound: float
    ok: bool


def check_weil_bound(chi: QuadChar, n: int) -> WeilReport:
    """|sum_{deg B = n} chi(B)| <= binom(deg D - 1, n) q**(n/2), checked exactly."""
    deg = chi.D.degree
    if n >= deg:
        raise DegreeTooLarge(f"n = {n} must be below deg D = {deg}")
    q = chi.spec.q
    lhs = char_sum(chi, n)
    c = comb(deg - 1, n)
    # square both sides to stay in integers
    ok = lhs * lhs <= c * c * q**n
    return WeilReport(lhs=lhs, bound=c * q ** (n / 2), ok=ok)


def weil_bound_holds(value: int, deg_d: int, n: int, q: int) -> bool:
    c = comb(deg_d - 1, n)
    return value * value <= c * c * q**n


__all__ = [
    "QuadChar",
    "WeilReport",
    "char_sum",
    "check_weil_bound",
    "symbol",
    "symbol_irreducible",
    "weil_bound_holds",
]
