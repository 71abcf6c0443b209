"""L-polynomials of quadratic characters, special value at s = 1, class numbers.

For D monic square-free of degree 2g+1,

    L(u, chi_D) = sum_{n=0}^{2g} a_n u^n,   a_n = sum_{deg f = n, f monic} chi_D(f),

and L(1, chi_D) is this polynomial at u = 1/q.  Values at s = 1 are exact
``Fraction`` objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .character import QuadChar, char_sum
from .errors import (
    EvenCharacteristic,
    EvenDegree,
    NonIntegralClassNumber,
    NonPositive,
    NotSquareFree,
    UnsupportedGenus,
)
from .field import FieldSpec, legendre_table
from .poly import Poly, _eval, _is_squarefree

ExactRational = Fraction


@dataclass(frozen=True)
class LPolynomial:
    spec: FieldSpec
    D: Poly
    g: int
    coeffs: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.spec.q

    def __call__(self, u):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * u + a
        return acc

    def __len__(self):
        return len(self.coeffs)


def _genus(D: Poly) -> int:
    if not D.spec.odd:
        raise EvenCharacteristic("quadratic L-functions need odd q")
    if D.is_zero or not D.is_monic:
        raise ValueError("D must be monic")
    if D.degree % 2 == 0:
        raise EvenDegree(f"deg D = {D.degree} is even")
    if not _is_squarefree(D.coeffs, D.spec.p):
        raise NotSquareFree(f"{D} is not square-free")
    return (D.degree - 1) // 2


def l_coefficients_direct(D: Poly, method: str = "reciprocity") -> LPolynomial:
    """a_n as plain character sums over monic f of degree n, n = 0..2g."""
    g = _genus(D)
    chi = QuadChar(D)
    coeffs = tuple(char_sum(chi, n, method) for n in range(2 * g + 1))
    return LPolynomial(D.spec, D, g, coeffs)


def affine_point_count(D: Poly) -> int:
    """Number of (x, y) in F_q^2 with y^2 = D(x)."""
    p = D.spec.p
    leg = legendre_table(p)
    return sum(1 + leg[_eval(D.coeffs, x, p)] for x in range(p))


def coefficients_from_point_counts(counts: Sequence[int], q: int, g: int) -> tuple[int, ...]:
    """Recover a_0..a_2g from N_1..N_g (projective point counts over F_{q^k}).

    Uses log L(u) = sum_k (N_k - 1 - q^k) u^k / k and Newton's identities,
    then the functional equation for the top half.
    """
    if len(counts) < g:
        raise ValueError(f"need {g} point counts, got {len(counts)}")
    s = [0] + [counts[k - 1] - 1 - q**k for k in range(1, g + 1)]
    a = [1]
    for n in range(1, g + 1):
        total = sum(s[k] * a[n - k] for k in range(1, n + 1))
        if total % n:
            raise ArithmeticError("point counts are inconsistent with an integral L-polynomial")
        a.append(total // n)
    for n in range(g + 1, 2 * g + 1):
        a.append(a[2 * g - n] * q ** (n - g))
    return tuple(a)


def l_coefficients_from_points(D: Poly) -> LPolynomial:
    """L-polynomial from point counts of y^2 = D(x); base field only, so g <= 1."""
    g = _genus(D)
    if g > 1:
        raise UnsupportedGenus("point counts over F_{q^k}, k >= 2, are not implemented")
    q = D.spec.q
    counts = [affine_point_count(D) + 1] if g == 1 else []
    return LPolynomial(D.spec, D, g, coefficients_from_point_counts(counts, q, g))


def verify_functional_equation(L: LPolynomial) -> bool:
    """a_{2g-n} == a_n q^(g-n) for all n, compared as a_{2g-n} q^n == a_n q^g."""
    g, q, a = L.g, L.q, L.coeffs
    if len(a) != 2 * g + 1:
        return False
    qg = q**g
    return all(a[2 * g - n] * q**n == a[n] * qg for n in range(2 * g + 1))


def value_at_one(coeffs: Sequence[int], q: int) -> Fraction:
    top = len(coeffs) - 1
    return Fraction(sum(int(a) * q ** (top - n) for n, a in enumerate(coeffs)), q**top)


def l_value_at_one(L: LPolynomial) -> Fraction:
    """L(1, chi_D) = sum a_n q^-n, exactly."""
    return value_at_one(L.coeffs, L.q)


def approx_fe_from_sums(sums: Sequence[int], q: int, g: int) -> Fraction:
    """The two truncated sums at s = 1, given a_0..a_g."""
    first = sum(Fraction(sums[n], q**n) for n in range(g + 1))
    second = Fraction(sum(sums[m] for m in range(g)), q**g)
    return first + second


def approx_fe_value(D: Poly, method: str = "reciprocity") -> Fraction:
    """L(1, chi_D) from character sums of length g and g-1 only."""
    g = _genus(D)
    chi = QuadChar(D)
    return approx_fe_from_sums([char_sum(chi, n, method) for n in range(g + 1)], D.spec.q, g)


def class_number_from_coeffs(coeffs: Sequence[int], q: int, g: int) -> int:
    """h = sum a_n q^(g-n); raises if the result is not a positive integer."""
    num = sum(int(a) * q ** (2 * g - n) for n, a in enumerate(coeffs))
    h, rem = divmod(num, q**g)
    if rem:
        raise NonIntegralClassNumber(f"q^g L(1) = {Fraction(num, q**g)} is not an integer")
    if h <= 0:
        raise NonPositive(f"class number {h} is not positive")
    return h


def class_number(D: Poly | LPolynomial) -> int:
    """h_D = q^g L(1, chi_D) (Artin)."""
    L = D if isinstance(D, LPolynomial) else l_coefficients_direct(D)
    return class_number_from_coeffs(L.coeffs, L.q, L.g)


__all__ = [
    "ExactRational",
    "LPolynomial",
    "affine_point_count",
    "approx_fe_from_sums",
    "approx_fe_value",
    "class_number",
    "class_number_from_coeffs",
    "coefficients_from_point_counts",
    "l_coefficients_direct",
    "l_coefficients_from_points",
    "l_value_at_one",
    "value_at_one",
    "verify_functional_equation",
]
