"""Acceptance criteria, one PASS/FAIL line each (see the terminal summary)."""

import math
from fractions import Fraction

import numpy as np
import pytest

from ffmean import batch
from ffmean.cli import main
from ffmean.experiments import ExperimentConfig, a1_from_points, run_mean_value, run_prop2_check
from ffmean.field import make_field
from ffmean.lfunction import (
    LPolynomial,
    approx_fe_from_sums,
    class_number_from_coeffs,
    value_at_one,
    verify_functional_equation,
)
from ffmean.poly import Poly, enumerate_monic, ensemble_size, poly_gcd
from ffmean.special import PROOF_ASSEMBLED, count_coprime_exact, euler_product_P, theorem2_main_term

Q = 5
F5 = make_field(Q)
T = Poly.T(F5)
GENERA = (1, 2, 3)


@pytest.fixture(scope="module")
def mean_report():
    return run_mean_value(ExperimentConfig(q=Q, g_min=1, g_max=3))


def _rows(block):
    return block.coeffs[:, : 2 * block.g + 1].astype(object).tolist()


def test_c01_functional_equation(blocks, criterion):
    checked = 0
    ok = True
    for g in GENERA:
        block = blocks(Q, g)
        assert len(block) == ensemble_size(Q, g)
        for drow, row in zip(block.dmat.tolist(), _rows(block)):
            L = LPolynomial(F5, Poly(F5, drow), g, tuple(row))
            ok &= verify_functional_equation(L) and row[0] == 1
            checked += 1
    criterion("C1 exact functional equation, q=5, g=1..3", ok, f"{checked} discriminants")


def test_c02_approximate_functional_equation(blocks, criterion):
    checked = 0
    ok = True
    for g in GENERA:
        for row in _rows(blocks(Q, g)):
            ok &= approx_fe_from_sums(row[: g + 1], Q, g) == value_at_one(row, Q)
            checked += 1
    criterion("C2 approx_fe == L(1) exactly, q=5, g=1..3", ok, f"{checked} discriminants")


def test_c03_class_number_integral_positive(blocks, criterion):
    checked = 0
    ok = True
    for q, gs in ((Q, GENERA), (13, (1,))):
        for g in gs:
            for row in _rows(blocks(q, g)):
                h = class_number_from_coeffs(row, q, g)  # raises on failure
                ok &= isinstance(h, int) and h > 0 and Fraction(h) == q**g * value_at_one(row, q)
                checked += 1
    ok &= checked == 100 + 2500 + 62500 + 2028
    criterion("C3 h_D in Z_>0, q=5 g=1..3 and q=13 g=1", ok, f"{checked} discriminants")


def test_c04_point_count(blocks, criterion):
    ok = True
    checked = 0
    for g in (1, 2):
        block = blocks(Q, g)
        ok &= np.array_equal(block.coeffs[:, 1], a1_from_points(block.dmat, Q))
        checked += len(block)
    criterion("C4 a_1 = sum_x (D(x)/q) on H_{3,5} and H_{5,5}", ok, f"{checked} discriminants")


def test_c05_weil_bound(blocks, criterion):
    ok = True
    worst = 0.0
    for g in (1, 2):
        for row in _rows(blocks(Q, g)):
            for n, a in enumerate(row):
                c = math.comb(2 * g, n)
                ok &= a * a <= c * c * Q**n
                worst = max(worst, abs(a) / (c * Q ** (n / 2)))
    criterion("C5 Weil bound |a_n| <= binom(2g,n) q^(n/2), g<=2", ok, f"max ratio {worst:.4f}")


def test_c06_mean_value_ratio(mean_report, criterion):
    dev = {r.g: abs(r.ratio_to_corollary - 1) for r in mean_report.records}
    ok = dev[2] <= 0.15 and dev[3] <= 0.10 and dev[3] < dev[1]
    detail = ", ".join(f"g={g}: |ratio-1|={d:.3g}" for g, d in dev.items())
    criterion("C6 sum_L/(size zeta_A(2) P(2)) near 1 and improving", ok, detail)


def test_c07_main_term_sharpness(mean_report, criterion):
    ratios = {}
    for r in mean_report.records:
        mt = theorem2_main_term(Q, r.g, PROOF_ASSEMBLED).total
        ratios[r.g] = abs(float(r.sum_L) - float(mt)) / (2 * Q) ** r.g
        assert math.isclose(ratios[r.g], abs(r.error_over_2q_pow_g), rel_tol=1e-6, abs_tol=1e-12)
    ok = all(v <= 10 for v in ratios.values())
    criterion("C7 |sum_L - main term| / (2q)^g <= 10", ok, ", ".join(f"g={g}: {v:.3g}" for g, v in ratios.items()))


def test_c08_prop2(criterion):
    moduli = {"T": T, "T+1": T + 1, "T(T+1)": T * (T + 1), "T^2+2": T**2 + 2}
    ok = True
    worst = 0.0
    for g in (1, 2):
        r = run_prop2_check(Q, g, Poly(F5, [1]))
        ok &= r.error == 0 and r.count == ensemble_size(Q, g)
        for l in moduli.values():
            r = run_prop2_check(Q, g, l)
            ok &= r.ratio <= 10
            worst = max(worst, r.ratio)
    criterion("C8 coprime count vs closed form, ratio <= 10; l=1 exact", ok, f"max ratio {worst:.3g}")


def _brute_coprime_count(d, l):
    """Enumerate every monic D of degree d; coprimality is decided per residue class of D mod l."""
    k = l.degree
    monics = batch.monic_matrix(Q, d)
    basis = batch._power_basis(np.array([l.coeffs]), d + 1, Q)
    codes = batch._encode(batch._reduce(monics, basis, Q)[:, 0, :], Q)
    unit = np.zeros(Q**k, dtype=bool)
    for idx in range(1, Q**k):
        r = Poly(F5, [(idx // Q**i) % Q for i in range(k)])
        unit[idx] = poly_gcd(r, l).degree == 0
    return int(unit[codes].sum())


def test_c09_coprime_count_closed_form(criterion):
    ok = True
    cases = 0
    for k in (1, 2, 3):
        for l in enumerate_monic(F5, k):
            for d in range(k, 7):
                ok &= _brute_coprime_count(d, l) == count_coprime_exact(d, l)
                cases += 1
    criterion("C9 #{D coprime to l} = q^d Phi(l)/|l|, d<=6, deg l<=3", ok, f"{cases} (d, l) pairs")


def test_c10_euler_product_stability(criterion):
    a, b = euler_product_P(Q, 2, 30), euler_product_P(Q, 2, 40)
    diff = abs(a.value - b.value)
    ok = diff < 1e-12 and b.tail_bound < 1e-12
    criterion("C10 P(2) cutoff 30 vs 40 < 1e-12, tail_bound(40) < 1e-12", ok, f"diff {float(diff):.2e}, tail {float(b.tail_bound):.2e}")


def _cli_bytes(tmp_path, name, argv):
    path = tmp_path / name
    assert main(argv + ["--out", str(path)]) == 0
    return path.read_bytes()


def test_c11_determinism(tmp_path, criterion):
    ok = True
    full = ["mean", "--q", "5", "--g-min", "1", "--g-max", "2"]
    sample = ["mean", "--q", "5", "--g-min", "1", "--g-max", "3", "--mode", "sample", "--sample-size", "500", "--seed", "2024"]
    for fmt in ("csv", "json"):
        a = _cli_bytes(tmp_path, f"full_a.{fmt}", full + ["--format", fmt])
        b = _cli_bytes(tmp_path, f"full_b.{fmt}", full + ["--format", fmt])
        c = _cli_bytes(tmp_path, f"full_c.{fmt}", full + ["--format", fmt, "--workers", "2"])
        ok &= a == b == c
        a = _cli_bytes(tmp_path, f"sample_a.{fmt}", sample + ["--format", fmt])
        b = _cli_bytes(tmp_path, f"sample_b.{fmt}", sample + ["--format", fmt])
        ok &= a == b
    criterion("C11 byte-identical reports (full, workers 1 vs 2, seeded sample)", ok)


def test_relative_error_trend(mean_report):
    # weak trend check: no step may grow the leading-term error more than twofold
    errs = [abs(r.relative_error_leading) for r in mean_report.records]
    assert all(b <= 2 * a for a, b in zip(errs, errs[1:]))
    for r in mean_report.records:
        assert r.sum_L * Q**r.g == r.sum_h
