"""zeta_A, the Euler products P(s), Moebius-weighted sums and main terms.

Euler products over monic irreducibles are aggregated by degree: the factor
for every irreducible of degree n is the same, so

    P(s) = prod_n (1 - 1/((q^n + 1) q^(ns)))^(pi_q(n)),

and no irreducible is ever enumerated.  These products are evaluated with
mpmath at a working precision that grows with the cutoff; everything else
in this module is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import ConstantInput, DegreeTooSmall, PoleAtOne, ZeroModulus
from .field import FieldSpec
from .poly import Poly, count_irreducible, enumerate_monic, euler_phi, factor, mobius, poly_gcd

THEOREM_LITERAL = "theorem_literal"
PROOF_ASSEMBLED = "proof_assembled"
VARIANTS = (THEOREM_LITERAL, PROOF_ASSEMBLED)

DEFAULT_CUTOFF = 40


def _q(field) -> int:
    return field.q if isinstance(field, FieldSpec) else int(field)


def zeta_A(field, s: int) -> Fraction:
    """zeta_A(s) = 1/(1 - q^(1-s)) for integer s >= 2."""
    if s <= 1:
        raise PoleAtOne(f"zeta_A(s) needs s >= 2, got s = {s}")
    q = _q(field)
    return Fraction(q ** (s - 1), q ** (s - 1) - 1)


@dataclass(frozen=True)
class TruncatedEulerProduct:
    q: int
    s: int
    value: mpmath.mpf
    cutoff_degree: int
    tail_bound: mpmath.mpf  # bound on |log(omitted factors)| plus rounding

    def __float__(self):
        return float(self.value)


def _working_precision(q: int, s: int, cutoff: int) -> int:
    return max(128, int((cutoff + 1) * (s + 1) * math.log2(q)) + 64)


def euler_product_P(field, s: int, cutoff: int = DEFAULT_CUTOFF) -> TruncatedEulerProduct:
    """prod over irreducible P with deg P <= cutoff of (1 - 1/((|P|+1)|P|^s))."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if s < 1:
        raise ValueError("P(s) converges only for s >= 1")
    q = _q(field)
    prec = _working_precision(q, s, cutoff)
    with mpmath.workprec(prec):
        log_value = mpmath.mpf(0)
        for n in range(1, cutoff + 1):
            x = mpmath.mpf(1) / ((q**n + 1) * mpmath.mpf(q) ** (n * s))
            log_value += count_irreducible(q, n) * mpmath.log1p(-x)
        value = mpmath.exp(log_value)
        # pi_q(n) <= q^n / n and x_n < q^(-n(s+1)) give a geometric majorant
        n0 = cutoff + 1
        x0 = mpmath.mpf(1) / ((q**n0 + 1) * mpmath.mpf(q) ** (n0 * s))
        ratio = mpmath.mpf(q) ** (-s)
        tail = ratio**n0 / (n0 * (1 - ratio) * (1 - x0))
        rounding = (cutoff + 2) * mpmath.mpf(2) ** (8 - prec)
        tail_bound = tail + rounding
        return TruncatedEulerProduct(q, s, +value, cutoff, +tail_bound)


def _series_truncated_product(factors, max_deg: int) -> list[Fraction]:
    """Coefficients up to u^max_deg of prod (1 - w u^k)^m over (k, w, m)."""
    series = [Fraction(0)] * (max_deg + 1)
    series[0] = Fraction(1)
    for k, w, m in factors:
        if m == 0 or k > max_deg:
            continue
        terms = []
        b = 1
        for j in range(1, max_deg // k + 1):
            b = b * (m - j + 1) // j
            if b == 0:
                break
            terms.append((k * j, b * (-w) ** j))
        new = list(series)
        for shift, c in terms:
            for n in range(shift, max_deg + 1):
                if series[n - shift]:
                    new[n] += c * series[n - shift]
        series = new
    return series


def _prime_degree_counts(l: Poly | None) -> dict[int, int]:
    out: dict[int, int] = {}
    if l is None or l.degree < 1:
        return out
    for P, _ in factor(l).factors:
        out[P.degree] = out.get(P.degree, 0) + 1
    return out


def mobius_weighted_sum(
    field,
    a: int,
    max_deg: int,
    l: Poly | None = None,
    weighted: bool = True,
) -> Fraction:
    """Sum over monic d, deg d <= max_deg, gcd(d, l) = 1 of
    mu(d) / |d|^a * prod_{P | d} 1/(|P| + 1)   (the product only if ``weighted``).

    Evaluated degree by degree from the multiplicative structure, exactly.
    """
    if max_deg < 0:
        raise ValueError("max_deg must be >= 0")
    if l is not None and l.is_zero:
        raise ZeroModulus("l must be nonzero")
    q = _q(field)
    excluded = _prime_degree_counts(l)
    factors = []
    for k in range(1, max_deg + 1):
        w = Fraction(1, q ** (k * a))
        if weighted:
            w /= q**k + 1
        factors.append((k, w, count_irreducible(q, k) - excluded.get(k, 0)))
    return sum(_series_truncated_product(factors, max_deg), Fraction(0))


def mobius_weighted_sum_brute(field: FieldSpec, a: int, max_deg: int, l: Poly | None = None, weighted: bool = True) -> Fraction:
    """Same sum by enumerating every monic d; an oracle for small max_deg."""
    q = field.q
    total = Fraction(0)
    for n in range(max_deg + 1):
        for d in enumerate_monic(field, n):
            if l is not None and l.degree >= 1 and poly_gcd(d, l).degree > 0:
                continue
            mu = mobius(d) if n else 1
            if not mu:
                continue
            term = Fraction(mu, q ** (n * a))
            if weighted and n:
                for P, _ in factor(d).factors:
                    term /= P.norm() + 1
            total += term
    return total


def mobius_tail_bound(field, a: int, max_deg: int, weighted: bool = True) -> Fraction:
    """Upper bound on |sum over deg d > max_deg| of the terms above."""
    q = _q(field)
    if weighted:
        # prod_{P|d} 1/(|P|+1) < 1/|d|, at most q^h square-free d of degree h
        r = Fraction(1, q**a)
    else:
        if a < 2:
            raise ValueError("the unweighted tail converges only for a >= 2")
        r = Fraction(1, q ** (a - 1))
    return r ** (max_deg + 1) / (1 - r)


@dataclass(frozen=True)
class MainTermBreakdown:
    leading: mpmath.mpf
    secondary_1: mpmath.mpf
    secondary_2: mpmath.mpf
    total: mpmath.mpf
    formula_variant: str


@lru_cache(maxsize=64)
def _products(q: int, cutoff: int):
    return euler_product_P(q, 1, cutoff).value, euler_product_P(q, 2, cutoff).value


def theorem2_main_term(field, g: int, variant: str = PROOF_ASSEMBLED, cutoff: int = DEFAULT_CUTOFF) -> MainTermBreakdown:
    """Predicted size of sum_{D in H_{2g+1,q}} L(1, chi_D).

    ``proof_assembled`` adds the main terms that come out of the two halves
    of the approximate functional equation.  Its two secondary terms cancel
    exactly, because zeta_A(2)(q - 1) = q.  ``theorem_literal`` keeps the
    second secondary term as -|D| P(1) / (zeta_A(2)^2 q^(g floor((g-1)/2)))
    and so does not cancel.
    """
    if g < 0:
        raise ValueError("genus must be >= 0")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    q = _q(field)
    P1, P2 = _products(q, cutoff)
    prec = _working_precision(q, 2, cutoff)
    with mpmath.workprec(prec):
        D = mpmath.mpf(q) ** (2 * g + 1)
        z2 = zeta_A(q, 2)
        zeta2 = mpmath.mpf(z2.numerator) / z2.denominator
        leading = D * P2
        if variant == PROOF_ASSEMBLED:
            s1 = -D * mpmath.mpf(q) ** (-(g // 2) - 1) * P1
            s2 = -D * mpmath.mpf(q) ** (-g + (g - 1) // 2 + 1) / (zeta2 * (1 - q)) * P1
        else:
            s1 = -D * P1 / mpmath.mpf(q) ** (g // 2 + 1)
            s2 = -D * P1 / (zeta2**2 * mpmath.mpf(q) ** (g * ((g - 1) // 2)))
        total = leading + s1 + s2
        return MainTermBreakdown(+leading, +s1, +s2, +total, variant)


def corollary_average(field, cutoff: int = DEFAULT_CUTOFF) -> mpmath.mpf:
    """zeta_A(2) P(2): the limiting mean of L(1, chi_D)."""
    q = _q(field)
    _, P2 = _products(q, cutoff)
    z2 = zeta_A(q, 2)
    with mpmath.workprec(_working_precision(q, 2, cutoff)):
        return +(P2 * z2.numerator / z2.denominator)


def class_number_main_term(field, g: int, cutoff: int = DEFAULT_CUTOFF) -> mpmath.mpf:
    """q^g zeta_A(2) P(2): the predicted mean class number."""
    q = _q(field)
    with mpmath.workprec(_working_precision(q, 2, cutoff)):
        return +(mpmath.mpf(q) ** g * corollary_average(q, cutoff))


def _check_modulus(l: Poly):
    if l.is_zero:
        raise ZeroModulus("l must be nonzero")
    if not l.is_monic:
        raise ValueError("l must be monic")


def prop2_main_term(g: int, l: Poly) -> Fraction:
    """|D| / (zeta_A(2) prod_{P | l} (1 + 1/|P|)) with |D| = q^(2g+1)."""
    _check_modulus(l)
    q = l.spec.q
    denom = zeta_A(q, 2)
    if l.degree >= 1:
        for P, _ in factor(l).factors:
            denom *= 1 + Fraction(1, P.norm())
    return Fraction(q ** (2 * g + 1)) / denom


def coprime_mobius_limit(l: Poly) -> Fraction:
    """1/(zeta_A(2) prod_{P | l} (1 - 1/|P|^2)): the full sum of mu(Q)/|Q|^2 over Q coprime to l."""
    _check_modulus(l)
    out = 1 / zeta_A(l.spec.q, 2)
    if l.degree >= 1:
        for P, _ in factor(l).factors:
            out /= 1 - Fraction(1, P.norm() ** 2)
    return out


def count_coprime_exact(d: int, l: Poly) -> int:
    """#{D monic, deg D = d, gcd(D, l) = 1} = q^d Phi(l)/|l|, for d >= deg l."""
    _check_modulus(l)
    if l.degree < 1:
        raise ConstantInput("l must have degree >= 1")
    if d < l.degree:
        raise DegreeTooSmall(f"d = {d} is below deg l = {l.degree}")
    q = l.spec.q
    value, rem = divmod(q**d * euler_phi(l), l.norm())
    assert rem == 0
    return value


def count_coprime_brute(d: int, l: Poly) -> int:
    return sum(1 for D in enumerate_monic(l.spec, d) if poly_gcd(D, l).degree == 0)


__all__ = [
    "DEFAULT_CUTOFF",
    "MainTermBreakdown",
    "PROOF_ASSEMBLED",
    "THEOREM_LITERAL",
    "TruncatedEulerProduct",
    "class_number_main_term",
    "coprime_mobius_limit",
    "corollary_average",
    "count_coprime_brute",
    "count_coprime_exact",
    "euler_product_P",
    "mobius_tail_bound",
    "mobius_weighted_sum",
    "mobius_weighted_sum_brute",
    "prop2_main_term",
    "theorem2_main_term",
    "zeta_A",
]
