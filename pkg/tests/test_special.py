from fractions import Fraction

import mpmath
import pytest

from ffmean.errors import ConstantInput, DegreeTooSmall, PoleAtOne, ZeroModulus
from ffmean.field import make_field
from ffmean.poly import Poly, ensemble_size
from ffmean.special import (
    PROOF_ASSEMBLED,
    THEOREM_LITERAL,
    class_number_main_term,
    coprime_mobius_limit,
    corollary_average,
    count_coprime_brute,
    count_coprime_exact,
    euler_product_P,
    mobius_tail_bound,
    mobius_weighted_sum,
    mobius_weighted_sum_brute,
    prop2_main_term,
    theorem2_main_term,
    zeta_A,
)

F5 = make_field(5)
T = Poly.T(F5)
ONE = Poly(F5, [1])


@pytest.fixture(autouse=True)
def _high_precision():
    # comparisons below must not round the library's values to 53 bits
    with mpmath.workprec(256):
        yield


def test_zeta_examples():
    assert zeta_A(F5, 2) == Fraction(5, 4)
    assert zeta_A(5, 3) == Fraction(25, 24)
    with pytest.raises(PoleAtOne):
        zeta_A(5, 1)


def test_euler_product_cutoff_zero():
    e = euler_product_P(5, 2, 0)
    assert e.value == 1


def test_euler_product_convergence():
    a, b = euler_product_P(5, 2, 30), euler_product_P(5, 2, 40)
    assert abs(a.value - b.value) < 1e-12
    assert b.tail_bound < 1e-12
    # the difference must respect the bound reported at the smaller cutoff
    assert abs(mpmath.log(a.value) - mpmath.log(b.value)) <= a.tail_bound
    p1a, p1b = euler_product_P(5, 1, 30), euler_product_P(5, 1, 40)
    assert abs(p1a.value - p1b.value) < 1e-12
    assert 0 < p1b.value < b.value < 1


def test_euler_product_by_irreducibles():
    # independent oracle: multiply factor by factor over every irreducible up to degree 4
    from ffmean.poly import irreducibles

    with mpmath.workprec(200):
        prod = mpmath.mpf(1)
        for n in range(1, 5):
            for P in irreducibles(F5, n):
                N = P.norm()
                prod *= 1 - mpmath.mpf(1) / ((N + 1) * N**2)
        assert abs(prod - euler_product_P(5, 2, 4).value) < mpmath.mpf(10) ** -30


def test_mobius_sum_examples():
    assert mobius_weighted_sum(5, 2, 0) == 1
    for a in (1, 2):
        for weighted in (True, False):
            assert mobius_weighted_sum(5, a, 6, ONE, weighted) == mobius_weighted_sum(5, a, 6, None, weighted)


@pytest.mark.parametrize("l", [None, "T", "T^2+T", "T^2+2"])
def test_mobius_sum_matches_brute(l):
    lp = None if l is None else Poly.parse(F5, l)
    for a in (1, 2):
        for weighted in (True, False):
            assert mobius_weighted_sum(5, a, 4, lp, weighted) == mobius_weighted_sum_brute(F5, a, 4, lp, weighted)


def test_mobius_sum_converges_to_P2():
    s = mobius_weighted_sum(5, 2, 12)
    bound = mobius_tail_bound(5, 2, 12)
    P2 = euler_product_P(5, 2, 40)
    assert abs(mpmath.mpf(s.numerator) / s.denominator - P2.value) <= bound + P2.tail_bound


def test_coprime_limit_matches_sum():
    for l in (T, T * (T + 1), T**2 + 2):
        s = mobius_weighted_sum(5, 2, 14, l, weighted=False)
        assert abs(s - coprime_mobius_limit(l)) <= mobius_tail_bound(5, 2, 14, weighted=False)


@pytest.mark.parametrize("g", [0, 1, 2, 3, 5])
def test_main_term_structure(g):
    proof = theorem2_main_term(5, g, PROOF_ASSEMBLED)
    literal = theorem2_main_term(5, g, THEOREM_LITERAL)
    P2 = euler_product_P(5, 2).value
    assert abs(proof.leading - 5 ** (2 * g + 1) * P2) < 1e-20 * 5 ** (2 * g + 1)
    assert proof.secondary_1 < 0 and literal.secondary_1 < 0
    assert proof.leading == literal.leading
    # the two proof-assembled secondary terms cancel: zeta_A(2)(q-1) = q
    assert abs(proof.total - proof.leading) <= 1e-25 * proof.leading


def test_main_term_limit():
    P2 = euler_product_P(5, 2).value
    rel = [abs(theorem2_main_term(5, g, THEOREM_LITERAL).total / 5 ** (2 * g + 1) - P2) for g in (2, 6, 10)]
    assert rel[0] > rel[1] > rel[2]


def test_limiting_mean_constants():
    P2 = euler_product_P(5, 2).value
    assert abs(corollary_average(5) - mpmath.mpf(5) / 4 * P2) < 1e-25
    assert abs(class_number_main_term(5, 3) - 125 * corollary_average(5)) < 1e-20
    # leading / #H equals the limiting mean constant
    g = 4
    lead = theorem2_main_term(5, g).leading
    assert abs(lead / ensemble_size(5, g) - corollary_average(5)) < 1e-20


def test_prop2_main_term_examples():
    for g in (0, 1, 2, 3):
        assert prop2_main_term(g, ONE) == ensemble_size(5, g) if g else True
    assert prop2_main_term(1, ONE) == 100
    assert prop2_main_term(1, T) == Fraction(250, 3)
    assert prop2_main_term(1, T) == Fraction(125) / (Fraction(5, 4) * Fraction(6, 5))
    # multiplicative over coprime moduli
    a, b = T, T**2 + 2
    base = prop2_main_term(1, ONE)
    assert prop2_main_term(1, a * b) * base == prop2_main_term(1, a) * prop2_main_term(1, b)
    with pytest.raises(ZeroModulus):
        prop2_main_term(1, Poly(F5))


def test_count_coprime_examples():
    assert count_coprime_exact(1, T) == count_coprime_brute(1, T) == 4
    assert count_coprime_exact(3, T * (T + 1)) == count_coprime_brute(3, T * (T + 1)) == 80
    P = T**2 + 2
    assert count_coprime_exact(2, P) == 25 - 1
    with pytest.raises(ConstantInput):
        count_coprime_exact(2, ONE)
    with pytest.raises(DegreeTooSmall):
        count_coprime_exact(1, P)
