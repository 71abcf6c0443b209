"""Ensemble drivers over H_{2g+1,q}: mean values and the checks that guard them.

Every sum here is exact (int or Fraction).  Floating point only enters
through the Euler-product main terms and the ratios derived from them.
Reports are plain dataclasses with deterministic JSON/CSV renderings; the
worker count never appears in them.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from . import batch
from .character import QuadChar, char_sum
from .errors import BadConfig, BudgetExceeded, NotPrime
from .field import is_prime, legendre_table, make_field
from .lfunction import approx_fe_from_sums, class_number_from_coeffs, l_coefficients_direct, value_at_one
from .poly import Poly, _gcd, check_ensemble_field, ensemble_size, factor
from .special import (
    DEFAULT_CUTOFF,
    PROOF_ASSEMBLED,
    THEOREM_LITERAL,
    corollary_average,
    prop2_main_term,
    theorem2_main_term,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7
GENERATOR = "numpy.random.PCG64"
MEAN_COLUMNS = (
    "q",
    "g",
    "ensemble_size",
    "sum_L_num",
    "sum_L_den",
    "sum_h",
    "main_proof",
    "main_literal",
    "corollary",
    "rel_err_leading",
    "err_over_2qg",
)


def _field(q: int):
    if not is_prime(q):
        raise NotPrime(f"q = {q} is not prime")
    spec = make_field(q)
    check_ensemble_field(spec)
    return spec


@dataclass
class ExperimentConfig:
    q: int
    g_min: int = 1
    g_max: int = 1
    mode: str = "full"
    sample_size: int | None = None
    seed: int | None = None
    cutoff: int = DEFAULT_CUTOFF
    workers: int = 1
    out_path: str | None = None
    budget: int = DEFAULT_BUDGET

    def validate(self) -> None:
        _field(self.q)
        if self.g_min < 0 or self.g_max < self.g_min:
            raise BadConfig(f"bad genus range [{self.g_min}, {self.g_max}]")
        if self.mode not in ("full", "sample"):
            raise BadConfig(f"mode must be 'full' or 'sample', got {self.mode!r}")
        if self.mode == "sample":
            if self.seed is None or self.sample_size is None:
                raise BadConfig("sample mode needs both seed and sample_size")
            if self.sample_size < 2:
                raise BadConfig("sample_size must be >= 2")
            if not 0 <= self.seed < 2**64:
                raise BadConfig("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise BadConfig("workers must be >= 1")
        if self.cutoff < 1:
            raise BadConfig("cutoff must be >= 1")


def _check_budget(q: int, g: int, budget: int) -> None:
    work = ensemble_size(q, g) * (2 * g + 1)
    if work > budget:
        raise BudgetExceeded(f"full enumeration of H_{2 * g + 1},{q} needs {work} work units, budget is {budget}")


# ----------------------------------------------------------------- helpers


def class_numbers(block: batch.EnsembleBlock) -> list[int]:
    """h_D for every row; raises on non-integral or non-positive values."""
    q, g = block.q, block.g
    return [class_number_from_coeffs(row, q, g) for row in block.coeffs[:, : 2 * g + 1].tolist()]


def sum_l_values(block: batch.EnsembleBlock) -> Fraction:
    """Sum of L(1, chi_D) over the block, summing each coefficient column first."""
    q, g = block.q, block.g
    cols = [int(x) for x in block.coeffs[:, : 2 * g + 1].astype(object).sum(axis=0)]
    return value_at_one(cols, q) if len(block) else Fraction(0)


def a1_from_points(dmat: np.ndarray, q: int) -> np.ndarray:
    """sum over x in F_q of (D(x)/q) for every row; equals N_1 - q - 1."""
    leg = np.array(legendre_table(q), dtype=np.int64)
    total = np.zeros(len(dmat), dtype=np.int64)
    for x in range(q):
        powers = np.array([pow(x, i, q) for i in range(dmat.shape[1])], dtype=np.int64)
        total += leg[(dmat @ powers) % q]
    return total


def _poly_text(row) -> str:
    return ",".join(str(int(c)) for c in row)


def _fmt(x) -> float:
    return float(x)


# --------------------------------------------------------------- mean value


@dataclass
class MeanRecord:
    g: int
    ensemble_size: int
    sum_L: Fraction
    sum_h: Fraction | int
    main_term_proof_assembled: float
    main_term_theorem_literal: float
    corollary_prediction: float
    relative_error_leading: float
    error_over_2q_pow_g: float
    sample_size: int | None = None
    std_err_sum_L: float | None = None

    @property
    def sum_L_num(self) -> int:
        return self.sum_L.numerator

    @property
    def sum_L_den(self) -> int:
        return self.sum_L.denominator

    @property
    def ratio_to_corollary(self) -> float:
        return 1.0 + self.relative_error_leading


@dataclass
class MomentReport:
    q: int
    mode: str
    cutoff: int
    records: list[MeanRecord] = field(default_factory=list)
    seed: int | None = None
    sample_size: int | None = None

    def rows(self) -> list[dict]:
        out = []
        for r in self.records:
            row = {
                "q": self.q,
                "g": r.g,
                "ensemble_size": str(r.ensemble_size),
                "sum_L_num": str(r.sum_L_num),
                "sum_L_den": str(r.sum_L_den),
                "sum_h": str(r.sum_h),
                "main_proof": r.main_term_proof_assembled,
                "main_literal": r.main_term_theorem_literal,
                "corollary": r.corollary_prediction,
                "rel_err_leading": r.relative_error_leading,
                "err_over_2qg": r.error_over_2q_pow_g,
            }
            if self.mode == "sample":
                row["std_err_sum_L"] = r.std_err_sum_L
            out.append(row)
        return out

    def to_json(self) -> str:
        meta = {"q": self.q, "mode": self.mode, "cutoff": self.cutoff}
        if self.mode == "sample":
            meta.update(seed=str(self.seed), sample_size=self.sample_size, generator=GENERATOR)
        meta["records"] = self.rows()
        return json.dumps(meta, indent=2) + "\n"

    def to_csv(self) -> str:
        cols = list(MEAN_COLUMNS) + (["std_err_sum_L"] if self.mode == "sample" else [])
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        return buf.getvalue()

    def render(self, fmt: str = "json") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise BadConfig(f"unknown format {fmt!r}")


def _sample_block(q: int, g: int, size: int, seed: int) -> batch.EnsembleBlock:
    """Uniform square-free D of degree 2g+1 by rejection from monic polynomials."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = 2 * g + 1
    kept: list[np.ndarray] = []
    have = 0
    while have < size:
        draw = np.empty((max(64, 2 * (size - have)), n + 1), dtype=np.int64)
        draw[:, :n] = rng.integers(0, q, size=(len(draw), n))
        draw[:, n] = 1
        draw = draw[batch.squarefree_mask(draw, q)]
        kept.append(draw)
        have += len(draw)
    dmat = np.concatenate(kept)[:size]
    return batch.l_block(q, g, dmat)


def _record(q: int, g: int, size: int, sum_L: Fraction, sum_h, cutoff: int, **extra) -> MeanRecord:
    with mpmath.workprec(192):
        proof = theorem2_main_term(q, g, PROOF_ASSEMBLED, cutoff).total
        literal = theorem2_main_term(q, g, THEOREM_LITERAL, cutoff).total
        predicted = corollary_average(q, cutoff) * size
        rel = mpmath.mpf(sum_L.numerator) / sum_L.denominator / predicted - 1
        err = (mpmath.mpf(sum_L.numerator) / sum_L.denominator - proof) / (2 * q) ** g
    return MeanRecord(
        g=g,
        ensemble_size=size,
        sum_L=sum_L,
        sum_h=sum_h,
        main_term_proof_assembled=_fmt(proof),
        main_term_theorem_literal=_fmt(literal),
        corollary_prediction=_fmt(predicted),
        relative_error_leading=_fmt(rel),
        error_over_2q_pow_g=_fmt(err),
        **extra,
    )


def run_mean_value(cfg: ExperimentConfig, progress: Callable[[str], None] | None = None) -> MomentReport:
    """Sum of L(1, chi_D) and of h_D over H_{2g+1,q} for each g in range,
    exactly (full mode) or as a seeded-sample estimate (sample mode)."""
    cfg.validate()
    q = cfg.q
    report = MomentReport(q=q, mode=cfg.mode, cutoff=cfg.cutoff)
    if cfg.mode == "sample":
        report.seed, report.sample_size = cfg.seed, cfg.sample_size
    for g in range(cfg.g_min, cfg.g_max + 1):
        size = ensemble_size(q, g)
        if progress:
            progress(f"g = {g}: {size} discriminants")
        if cfg.mode == "full":
            _check_budget(q, g, cfg.budget)
            block = batch.compute_ensemble(q, g, cfg.workers)
            assert len(block) == size
            hs = class_numbers(block)
            sum_h = sum(hs)
            sum_L = sum_l_values(block)
            if sum_L * q**g != sum_h:
                raise ArithmeticError("Artin's relation failed on the ensemble sum")
            report.records.append(_record(q, g, size, sum_L, sum_h, cfg.cutoff))
        else:
            # per-g seed offset keeps genera independent but reproducible
            block = _sample_block(q, g, cfg.sample_size, cfg.seed + g)
            hs = class_numbers(block)
            n = len(hs)
            mean_h = Fraction(sum(hs), n)
            sum_h = mean_h * size
            sum_L = sum_h / q**g
            var = sum((h - mean_h) ** 2 for h in hs) / (n - 1)
            std_err = size * math.sqrt(var / n) / q**g
            report.records.append(
                _record(q, g, size, sum_L, sum_h, cfg.cutoff, sample_size=n, std_err_sum_L=float(std_err))
            )
    return report


# ------------------------------------------------------- bound monitors


@dataclass
class NonsquareReport:
    q: int
    g: int
    ensemble_size: int
    nonsquare_first: Fraction  # sum_D sum_{n<=g} q^-n sum_{deg f=n, f != square} chi_D(f)
    nonsquare_second: Fraction  # q^-g sum_D sum_{m<=g-1} sum_{deg f=m, f != square} chi_D(f)
    square_first: Fraction
    square_second: Fraction
    ratio_first: float
    ratio_second: float

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "g": self.g,
            "ensemble_size": str(self.ensemble_size),
            "nonsquare_first": str(self.nonsquare_first),
            "nonsquare_second": str(self.nonsquare_second),
            "square_first": str(self.square_first),
            "square_second": str(self.square_second),
            "ratio_first": self.ratio_first,
            "ratio_second": self.ratio_second,
        }


def nonsquare_sums(block: batch.EnsembleBlock) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Split the two truncated sums over the block into square-f and non-square-f parts.

    The square part for degree 2m counts monic l of degree m coprime to D,
    since chi_D(l^2) is 1 or 0.
    """
    q, g = block.q, block.g
    squares = batch.coprime_square_counts(block.counts, q, g // 2)
    a = [int(x) for x in block.coeffs[:, : g + 1].astype(object).sum(axis=0)]
    s = [int(x) for x in squares.astype(object).sum(axis=0)]
    sq = [s[n // 2] if n % 2 == 0 else 0 for n in range(g + 1)]
    non = [a[n] - sq[n] for n in range(g + 1)]
    non1 = sum((Fraction(non[n], q**n) for n in range(g + 1)), Fraction(0))
    non2 = Fraction(sum(non[:g]), q**g)
    sq1 = sum((Fraction(sq[n], q**n) for n in range(g + 1)), Fraction(0))
    sq2 = Fraction(sum(sq[:g]), q**g)
    return non1, non2, sq1, sq2


def run_nonsquare_monitor(q: int, g: int, workers: int = 1, budget: int = DEFAULT_BUDGET) -> NonsquareReport:
    _field(q)
    _check_budget(q, g, budget)
    block = batch.compute_ensemble(q, g, workers, nmax=max(g, 1))
    non1, non2, sq1, sq2 = nonsquare_sums(block)
    scale = (2 * q) ** g
    return NonsquareReport(
        q, g, len(block), non1, non2, sq1, sq2, float(abs(non1) / scale), float(abs(non2) / scale)
    )


@dataclass
class Prop2Report:
    q: int
    g: int
    l: str
    count: int
    main_term: Fraction
    error: Fraction
    scale: float  # sqrt(|D|) Phi(l)/|l|
    ratio: float

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "g": self.g,
            "l": self.l,
            "count": str(self.count),
            "main_term": str(self.main_term),
            "error": str(self.error),
            "scale": self.scale,
            "ratio": self.ratio,
        }


def phi_ratio(l: Poly) -> Fraction:
    """Phi(l)/|l| = prod_{P | l} (1 - 1/|P|); equal to 1 for constant l."""
    out = Fraction(1)
    if l.degree >= 1:
        for P, _ in factor(l).factors:
            out *= 1 - Fraction(1, P.norm())
    return out


def run_prop2_check(q: int, g: int, l: Poly, budget: int = DEFAULT_BUDGET) -> Prop2Report:
    """Count D in H_{2g+1,q} coprime to l and compare with the closed form."""
    spec = _field(q)
    if l.spec != spec:
        raise BadConfig("l lives over a different field")
    _check_budget(q, g, budget)
    dmat = batch.monic_matrix(q, 2 * g + 1)
    dmat = dmat[batch.squarefree_mask(dmat, q)]
    if l.degree >= 1:
        lc = l.coeffs
        count = sum(1 for row in dmat.tolist() if len(_gcd(tuple(row), lc, q)) == 1)
    else:
        count = len(dmat)
    main = prop2_main_term(g, l)
    error = count - main
    scale = math.sqrt(q ** (2 * g + 1)) * float(phi_ratio(l))
    return Prop2Report(q, g, l.text(), count, main, error, scale, float(abs(error)) / scale)


# ------------------------------------------------------------ verification


@dataclass
class InvariantResult:
    name: str
    g: int
    passed: bool
    checked: int
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "g": self.g,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


@dataclass
class VerifyReport:
    q: int
    g_max: int
    discriminants: int
    results: list[InvariantResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> str:
        return (
            json.dumps(
                {
                    "q": self.q,
                    "g_max": self.g_max,
                    "discriminants": self.discriminants,
                    "passed": self.passed,
                    "results": [r.to_dict() for r in self.results],
                },
                indent=2,
            )
            + "\n"
        )


_SPOT_WORK = 2 * 10**5


def _first_failure(name, g, ok, dmat, coeffs, extra=None) -> InvariantResult:
    ok = np.asarray(ok, dtype=bool)
    if ok.all():
        return InvariantResult(name, g, True, len(ok))
    i = int(np.argmin(ok))
    ce = {"D": _poly_text(dmat[i]), "coeffs": [str(int(a)) for a in coeffs[i]]}
    if extra is not None:
        ce.update(extra(i))
    return InvariantResult(name, g, False, len(ok), ce)


def _verify_genus(q, g, block, fault) -> list[InvariantResult]:
    spec = make_field(q)
    dmat = block.dmat
    coeffs = block.coeffs[:, : 2 * g + 1].astype(object)
    if fault is not None:
        coeffs = fault(g, coeffs.copy())
    rows = coeffs.tolist()
    out = []

    fe = [
        all(r[2 * g - n] * q**n == r[n] * q**g for n in range(2 * g + 1)) and r[0] == 1 for r in rows
    ]
    out.append(_first_failure("functional_equation", g, fe, dmat, coeffs))

    approx = [approx_fe_from_sums(r[: g + 1], q, g) == value_at_one(r, q) for r in rows]
    out.append(_first_failure("approx_functional_equation", g, approx, dmat, coeffs))

    qg = q**g
    nums = [sum(a * q ** (2 * g - n) for n, a in enumerate(r)) for r in rows]
    h_ok = [num % qg == 0 and num > 0 for num in nums]
    out.append(
        _first_failure(
            "class_number_positive_integer", g, h_ok, dmat, coeffs, lambda i: {"q^g*L(1)": str(Fraction(nums[i], qg))}
        )
    )

    a1_pts = a1_from_points(dmat, q)
    a1_ok = [r[1] == int(x) for r, x in zip(rows, a1_pts)] if g >= 1 else [True] * len(rows)
    out.append(
        _first_failure("point_count_a1", g, a1_ok, dmat, coeffs, lambda i: {"sum_x_chi": str(int(a1_pts[i]))})
    )

    bounds = [math.comb(2 * g, n) ** 2 * q**n for n in range(2 * g + 1)]
    weil = [all(r[n] * r[n] <= bounds[n] for n in range(2 * g + 1)) for r in rows]
    out.append(_first_failure("weil_bound", g, weil, dmat, coeffs))

    # direct character sums are slow; spot-check a deterministic subsample
    n_direct = max(1, min(len(rows), _SPOT_WORK // sum(q**n for n in range(2 * g + 1))))
    picks = np.linspace(0, len(rows) - 1, n_direct).astype(int)
    agree = np.ones(len(rows), dtype=bool)
    for i in picks:
        D = Poly(spec, dmat[i].tolist())
        agree[i] = list(l_coefficients_direct(D).coeffs) == rows[i]
    res = _first_failure("direct_vs_euler_coefficients", g, agree, dmat, coeffs)
    res.checked = len(picks)
    out.append(res)

    n_vanish = max(1, min(len(rows), _SPOT_WORK // q ** (2 * g + 1)))
    picks = np.linspace(0, len(rows) - 1, n_vanish).astype(int)
    vanish = np.ones(len(rows), dtype=bool)
    for i in picks:
        chi = QuadChar(Poly(spec, dmat[i].tolist()))
        vanish[i] = char_sum(chi, 2 * g + 1) == 0
    res = _first_failure("char_sum_vanishes_above_2g", g, vanish, dmat, coeffs)
    res.checked = len(picks)
    out.append(res)
    return out


def run_verify_suite(
    q: int,
    g_max: int,
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
    fault: Callable[[int, np.ndarray], np.ndarray] | None = None,
    g_min: int = 1,
) -> VerifyReport:
    """Check every ensemble invariant for g_min <= g <= g_max; failures are data.

    ``fault`` lets a caller corrupt the coefficient array before checking,
    to confirm the checks can fail.
    """
    _field(q)
    results: list[InvariantResult] = []
    covered = 0
    for g in range(g_min, g_max + 1):
        _check_budget(q, g, budget)
        block = batch.compute_ensemble(q, g, workers)
        covered += len(block)
        results.extend(_verify_genus(q, g, block, fault))
    return VerifyReport(q, g_max, covered, results)


__all__ = [
    "ExperimentConfig",
    "InvariantResult",
    "MeanRecord",
    "MomentReport",
    "NonsquareReport",
    "Prop2Report",
    "VerifyReport",
    "a1_from_points",
    "class_numbers",
    "nonsquare_sums",
    "run_mean_value",
    "run_nonsquare_monitor",
    "run_prop2_check",
    "run_verify_suite",
    "sum_l_values",
]
