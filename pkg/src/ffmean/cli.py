"""Command line entry point: ``ffmean <subcommand> ...``.

Exit status is 0 on success, 1 when a checked invariant or monitored bound
fails, and 2 for bad configuration or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import mpmath

from .character import METHODS, QuadChar, char_sum, check_weil_bound, symbol
from .errors import FFMeanError
from .experiments import (
    DEFAULT_BUDGET,
    ExperimentConfig,
    _field,
    run_mean_value,
    run_nonsquare_monitor,
    run_prop2_check,
    run_verify_suite,
)
from .field import make_field
from .lfunction import class_number, l_coefficients_direct, l_value_at_one
from .poly import parse_poly
from .special import (
    DEFAULT_CUTOFF,
    VARIANTS,
    PROOF_ASSEMBLED,
    corollary_average,
    euler_product_P,
    theorem2_main_term,
    zeta_A,
)

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG = 0, 1, 2
MONITOR_THRESHOLD = 10.0

log = logging.getLogger("ffmean")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _num(x) -> str:
    return mpmath.nstr(x, 25)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _render_rows(rows: list[dict], fmt: str) -> str:
    return _rows_csv(rows) if fmt == "csv" else _dump(rows)


def _genus_range(args) -> tuple[int, int]:
    if args.g is not None:
        if args.g_min is not None or args.g_max is not None:
            raise FFMeanError("use either --g or --g-min/--g-max, not both")
        return args.g, args.g
    lo = 1 if args.g_min is None else args.g_min
    hi = lo if args.g_max is None else args.g_max
    return lo, hi


# ------------------------------------------------------------- subcommands


def cmd_mean(args) -> int:
    g_min, g_max = _genus_range(args)
    cfg = ExperimentConfig(
        q=args.q,
        g_min=g_min,
        g_max=g_max,
        mode=args.mode,
        sample_size=args.sample_size,
        seed=args.seed,
        cutoff=args.cutoff,
        workers=args.workers,
        out_path=args.out,
        budget=args.budget,
    )
    report = run_mean_value(cfg, progress=log.info)
    _emit(report.render(args.format), args.out)
    return EXIT_OK


def cmd_nonsquare(args) -> int:
    g_min, g_max = _genus_range(args)
    reports = [run_nonsquare_monitor(args.q, g, args.workers, args.budget) for g in range(g_min, g_max + 1)]
    _emit(_render_rows([r.to_dict() for r in reports], args.format), args.out)
    bad = [r.g for r in reports if max(r.ratio_first, r.ratio_second) > MONITOR_THRESHOLD]
    if bad:
        log.error("nonsquare ratio above %s at g = %s", MONITOR_THRESHOLD, bad)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_prop2(args) -> int:
    spec = _field(args.q)
    g_min, g_max = _genus_range(args)
    moduli = [parse_poly(spec, text) for text in args.l]
    reports = [run_prop2_check(args.q, g, l, args.budget) for g in range(g_min, g_max + 1) for l in moduli]
    _emit(_render_rows([r.to_dict() for r in reports], args.format), args.out)
    ok = all(r.ratio <= MONITOR_THRESHOLD and (r.l != "1" or r.error == 0) for r in reports)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_verify(args) -> int:
    g_min = 1 if args.g_min is None else args.g_min
    g_max = args.g_max if args.g_max is not None else (args.g if args.g is not None else g_min)
    report = run_verify_suite(args.q, g_max, args.workers, args.budget, g_min=g_min)
    if args.format == "csv":
        text = _rows_csv([{**r.to_dict(), "counterexample": json.dumps(r.counterexample)} for r in report.results])
    else:
        text = report.to_json()
    _emit(text, args.out)
    for r in report.results:
        if not r.passed:
            log.error("%s failed at g = %d: %s", r.name, r.g, r.counterexample)
    return EXIT_OK if report.passed else EXIT_INVARIANT


def cmd_lpoly(args) -> int:
    spec = make_field(args.q)
    D = parse_poly(spec, args.D)
    L = l_coefficients_direct(D, args.method)
    val = l_value_at_one(L)
    h = class_number(L)
    record = {
        "q": args.q,
        "D": D.text(),
        "g": L.g,
        "coeffs": [str(a) for a in L.coeffs],
        "l_at_one": {"num": str(val.numerator), "den": str(val.denominator)},
        "class_number": str(h),
    }
    if args.format == "json":
        text = _dump(record)
    elif args.format == "csv":
        text = _rows_csv(
            [
                {
                    "q": args.q,
                    "D": D.text(),
                    "g": L.g,
                    "coeffs": " ".join(record["coeffs"]),
                    "l_at_one_num": val.numerator,
                    "l_at_one_den": val.denominator,
                    "class_number": h,
                }
            ]
        )
    else:
        text = f"D = {D}\ng = {L.g}\ncoeffs = {list(L.coeffs)}\nL(1) = {val}\nh = {h}\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_symbol(args) -> int:
    spec = make_field(args.q)
    D, f = parse_poly(spec, args.D), parse_poly(spec, args.f)
    value = symbol(D, f, args.method)
    _emit(_dump({"q": args.q, "D": D.text(), "f": f.text(), "symbol": value}), args.out)
    return EXIT_OK


def cmd_charsum(args) -> int:
    spec = make_field(args.q)
    chi = QuadChar(parse_poly(spec, args.D))
    record = {"q": args.q, "D": chi.D.text(), "n": args.n}
    if args.n < chi.D.degree:
        rep = check_weil_bound(chi, args.n)
        record.update(sum=str(rep.lhs), weil_bound=rep.bound, within_bound=rep.ok)
        status = EXIT_OK if rep.ok else EXIT_INVARIANT
    else:
        s = char_sum(chi, args.n, args.method)
        # above deg D - 1 the sum must vanish for non-square D
        record.update(sum=str(s), vanishes=s == 0)
        status = EXIT_OK if s == 0 else EXIT_INVARIANT
    _emit(_dump(record), args.out)
    return status


def cmd_special(args) -> int:
    q = args.q
    what = args.what
    if what in ("P1", "P2"):
        prod = euler_product_P(q, int(what[1]), args.cutoff)
        record = {"value": _num(prod.value), "cutoff": args.cutoff, "tail_bound": _num(prod.tail_bound)}
    elif what == "zeta2":
        z = zeta_A(q, 2)
        record = {"value": str(z), "cutoff": None, "tail_bound": "0"}
    elif what == "corollary":
        tail = euler_product_P(q, 2, args.cutoff).tail_bound
        z = zeta_A(q, 2)
        record = {
            "value": _num(corollary_average(q, args.cutoff)),
            "cutoff": args.cutoff,
            "tail_bound": _num(tail * z.numerator / z.denominator),
        }
    else:  # main
        g = 1 if args.g is None else args.g
        mt = theorem2_main_term(q, g, args.variant, args.cutoff)
        record = {
            "value": _num(mt.total),
            "cutoff": args.cutoff,
            "g": g,
            "variant": mt.formula_variant,
            "leading": _num(mt.leading),
            "secondary_1": _num(mt.secondary_1),
            "secondary_2": _num(mt.secondary_2),
        }
    record = {"q": q, "what": what, **record}
    _emit(_dump(record), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ffmean", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt=("json", "csv"), default_fmt="json"):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=fmt, default=default_fmt)

    def genus(p):
        p.add_argument("--g", type=int)
        p.add_argument("--g-min", type=int)
        p.add_argument("--g-max", type=int)

    def ensemble(p):
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("mean", help="sum of L(1, chi_D) over the ensemble")
    common(p)
    genus(p)
    ensemble(p)
    p.add_argument("--mode", choices=("full", "sample"), default="full")
    p.add_argument("--sample-size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("nonsquare", help="non-square character sums against (2q)^g")
    common(p)
    genus(p)
    ensemble(p)
    p.set_defaults(func=cmd_nonsquare)

    p = sub.add_parser("prop2", help="count of D coprime to l against the closed form")
    common(p)
    genus(p)
    ensemble(p)
    p.add_argument("--l", action="append", required=True, help="monic modulus; repeatable")
    p.set_defaults(func=cmd_prop2)

    p = sub.add_parser("verify", help="run every ensemble invariant")
    common(p)
    genus(p)
    ensemble(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lpoly", help="L-polynomial, L(1) and class number of one D")
    common(p, ("text", "json", "csv"), "text")
    p.add_argument("--D", required=True)
    p.add_argument("--method", choices=METHODS, default="reciprocity")
    p.set_defaults(func=cmd_lpoly)

    p = sub.add_parser("symbol", help="quadratic residue symbol (D/f)")
    common(p, ("json",))
    p.add_argument("--D", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--method", choices=METHODS, default="factor")
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("charsum", help="sum of chi_D over monic f of degree n")
    common(p, ("json",))
    p.add_argument("--D", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="reciprocity")
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("special", help="zeta_A(2), P(1), P(2) and main terms")
    common(p, ("json",))
    p.add_argument("--what", choices=("P1", "P2", "zeta2", "corollary", "main"), default="P2")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.add_argument("--g", type=int)
    p.add_argument("--variant", choices=VARIANTS, default=PROOF_ASSEMBLED)
    p.set_defaults(func=cmd_special)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (FFMeanError, ValueError, OSError) as exc:
        print(f"ffmean: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"ffmean: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
