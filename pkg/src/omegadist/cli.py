"""Command-line front end.

Subcommands: density, hall, error-growth, dirichlet-check, race, selftest.
Output goes to stdout or --output as CSV (RFC 4180, LF line endings) or as a
single JSON document {"command", "config", "rows"}.  Reals are rendered with
15 significant digits.  Output is byte-identical for identical flags
regardless of --workers.

Exit codes: 0 success, 1 tolerance or self-check failure, 2 usage error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .dirichlet import (
    check_g_product,
    check_identity_product,
    check_lquo,
)
from .errorterms import (
    DEFAULT_RATIO,
    InsufficientDataError,
    character_growth_exponent,
    checkpoint,
    checkpoint_schedule,
    growth_exponent,
    record_many,
)
from .hall import hall_constants, hall_rhs, predicted_bound
from .race import CSV_COLUMNS as RACE_COLUMNS
from .race import all_pairs, csv_rows as race_csv_rows, race_scan
from .residues import (
    InconsistentTransformError,
    counts_from_sums,
    inverse_residuals,
    new_tally,
    sums_from_counts,
    tally_segment,
)
from .sieve import DEFAULT_SEGMENT_SIZE, OmegaSegment, omega_block, omega_single, primes_up_to


def _fmt_real(value: float) -> str:
    return format(value, ".15g")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt_real(value)
    return str(value)


def _jsonify(value):
    """Round reals to 15 significant digits and strip numpy scalar types."""
    if isinstance(value, dict):
        return {key: _jsonify(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(item) for item in value]
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(_fmt_real(float(value)))
    return value


def _write_output(args, text: str) -> None:
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _emit(args, command: str, config: dict, columns: list[str], rows: list[dict],
          json_rows: list | None = None) -> None:
    if args.format == "json":
        payload = {
            "command": command,
            "config": _jsonify(config),
            "rows": _jsonify(
                json_rows
                if json_rows is not None
                else [{column: row.get(column) for column in columns} for row in rows]
            ),
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(column)) for column in columns])
        text = buffer.getvalue()
    _write_output(args, text)


def _moduli(args) -> list[int]:
    moduli = list(dict.fromkeys(args.m))
    for m in moduli:
        if m < 1:
            raise ValueError(f"modulus must be >= 1, got {m}")
    return moduli


def _check_stream_flags(args) -> None:
    if args.segment_size < 1024:
        raise ValueError(f"segment-size must be >= 1024, got {args.segment_size}")
    if args.workers < 1:
        raise ValueError(f"workers must be >= 1, got {args.workers}")


# ---------------------------------------------------------------- commands


def cmd_density(args) -> int:
    """Class counts, densities, scaled residuals and the growth envelope at
    geometric checkpoints."""
    moduli = _moduli(args)
    _check_stream_flags(args)
    series = record_many(
        moduli,
        args.x_max,
        args.ratio,
        segment_size=args.segment_size,
        workers=args.workers,
    )
    rows = []
    for m in moduli:
        for cp in series[m].checkpoints:
            counts = cp.counts()
            bound = predicted_bound(m, cp.x) if m >= 2 else None
            for j in range(m):
                rows.append(
                    {
                        "m": m,
                        "x": cp.x,
                        "j": j,
                        "count": int(counts[j]),
                        "ratio": int(counts[j]) / cp.x,
                        "scaled_residual": int(cp.scaled_residuals[j]),
                        "predicted_bound": bound,
                    }
                )
    config = {
        "m": moduli,
        "x_max": args.x_max,
        "ratio": args.ratio,
        "segment_size": args.segment_size,
        "workers": args.workers,
    }
    columns = ["m", "x", "j", "count", "ratio", "scaled_residual", "predicted_bound"]
    _emit(args, "density", config, columns, rows)
    return 0


def cmd_hall(args) -> int:
    """Hull perimeter, the constant c and the exponent A per modulus, plus
    the per-character decay envelope when --x-max is given."""
    moduli = _moduli(args)
    rows = []
    for m in moduli:
        constants = hall_constants(m)
        rows.append(
            {
                "kind": "constants",
                "m": m,
                "perimeter": constants.perimeter,
                "c": constants.c,
                "a_exponent": constants.a_exponent,
            }
        )
    if args.x_max is not None:
        schedule = checkpoint_schedule(args.x_max, args.ratio)
        table = primes_up_to(args.x_max)
        for m in moduli:
            for k in range(1, m):
                for x in schedule:
                    rows.append(
                        {
                            "kind": "envelope",
                            "m": m,
                            "k": k,
                            "x": x,
                            "hall_rhs": hall_rhs(m, k, x, table),
                        }
                    )
    config = {"m": moduli, "x_max": args.x_max, "ratio": args.ratio}
    columns = ["kind", "m", "perimeter", "c", "a_exponent", "k", "x", "hall_rhs"]
    _emit(args, "hall", config, columns, rows)
    return 0


def cmd_error_growth(args) -> int:
    """Checkpoint residuals plus fitted growth exponents, per class and per
    character."""
    moduli = _moduli(args)
    _check_stream_flags(args)
    series = record_many(
        moduli,
        args.x_max,
        args.ratio,
        segment_size=args.segment_size,
        workers=args.workers,
    )
    rows = []
    for m in moduli:
        for cp in series[m].checkpoints:
            for j in range(m):
                rows.append(
                    {
                        "kind": "checkpoint",
                        "m": m,
                        "x": cp.x,
                        "j": j,
                        "scaled_residual": int(cp.scaled_residuals[j]),
                    }
                )
        for j in range(m):
            fit = growth_exponent(series[m], j)
            rows.append(
                {
                    "kind": "class-fit",
                    "m": m,
                    "index": fit.index,
                    "alpha_hat": fit.alpha_hat,
                    "points_used": fit.points_used,
                    "residual_rms": fit.residual_rms,
                }
            )
        for k in range(1, m):
            fit = character_growth_exponent(series[m], k)
            rows.append(
                {
                    "kind": "character-fit",
                    "m": m,
                    "index": fit.index,
                    "alpha_hat": fit.alpha_hat,
                    "points_used": fit.points_used,
                    "residual_rms": fit.residual_rms,
                }
            )
    config = {
        "m": moduli,
        "x_max": args.x_max,
        "ratio": args.ratio,
        "segment_size": args.segment_size,
        "workers": args.workers,
    }
    columns = [
        "kind",
        "m",
        "x",
        "j",
        "scaled_residual",
        "index",
        "alpha_hat",
        "points_used",
        "residual_rms",
    ]
    _emit(args, "error-growth", config, columns, rows)
    return 0


def cmd_dirichlet_check(args) -> int:
    """Numeric identity checks; exits 1 unless every deviation is within
    tolerance."""
    moduli = _moduli(args)
    if args.s <= 1.0:
        raise ValueError(f"s must be > 1, got {args.s}")
    if args.n_max < 1:
        raise ValueError(f"n-max must be >= 1, got {args.n_max}")
    if args.p_max < 2:
        raise ValueError(f"p-max must be >= 2, got {args.p_max}")
    if args.tolerance <= 0:
        raise ValueError(f"tolerance must be > 0, got {args.tolerance}")
    table = primes_up_to(args.p_max)
    reports = [(2, args.n_max, None, check_lquo(args.s, args.n_max))]
    for m in moduli:
        reports.append(
            (m, None, args.p_max, check_identity_product(m, args.s, args.p_max, table))
        )
        if m >= 2:
            reports.append(
                (m, None, args.p_max, check_g_product(m, args.s, args.p_max, table))
            )
    rows = []
    all_pass = True
    for m, n_max, p_max, report in reports:
        passed = report.deviation <= args.tolerance
        all_pass = all_pass and passed
        rows.append(
            {
                "check": report.check,
                "m": m,
                "s": args.s,
                "n_max": n_max,
                "p_max": p_max,
                "lhs_re": report.lhs.real,
                "lhs_im": report.lhs.imag,
                "rhs_re": report.rhs.real,
                "rhs_im": report.rhs.imag,
                "deviation": report.deviation,
                "pass": passed,
            }
        )
    config = {
        "m": moduli,
        "s": args.s,
        "n_max": args.n_max,
        "p_max": args.p_max,
        "tolerance": args.tolerance,
    }
    columns = [
        "check",
        "m",
        "s",
        "n_max",
        "p_max",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "deviation",
        "pass",
    ]
    _emit(args, "dirichlet-check", config, columns, rows)
    return 0 if all_pass else 1


def cmd_race(args) -> int:
    """Sign changes and lead statistics for one pair or all pairs."""
    _check_stream_flags(args)
    if (args.j is None) != (args.jprime is None):
        raise ValueError("--j and --jprime must be given together")
    if args.j is not None:
        summaries = [
            race_scan(
                args.m,
                args.j,
                args.jprime,
                args.x_max,
                segment_size=args.segment_size,
                workers=args.workers,
            )
        ]
    else:
        summaries = all_pairs(
            args.m,
            args.x_max,
            segment_size=args.segment_size,
            workers=args.workers,
        )
    rows = [
        dict(zip(RACE_COLUMNS, row))
        for summary in summaries
        for row in race_csv_rows(summary)
    ]
    config = {
        "m": args.m,
        "j": args.j,
        "jprime": args.jprime,
        "x_max": args.x_max,
        "segment_size": args.segment_size,
        "workers": args.workers,
    }
    _emit(
        args,
        "race",
        config,
        RACE_COLUMNS,
        rows,
        json_rows=[summary.to_json_obj() for summary in summaries],
    )
    return 0


# ---------------------------------------------------------------- selftest


def run_selftest(x_limit: int = 100_000, inject_fault: bool = False) -> list[dict]:
    """Reduced-scale end-to-end checks; each entry reports name/passed/detail.

    inject_fault corrupts one sieved Omega value before the checks run, as a
    negative test that the oracle comparison actually detects corruption.
    """
    if x_limit < 100:
        raise ValueError(f"x-limit must be >= 100, got {x_limit}")
    checks: list[dict] = []

    def run(name: str, body) -> None:
        try:
            passed, detail = body()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        checks.append({"name": name, "passed": passed, "detail": detail})

    n_small = x_limit
    table = primes_up_to(max(2, math.isqrt(n_small)))
    segment = omega_block(1, n_small + 1, table)
    values = segment.values.copy()
    if inject_fault:
        values[n_small // 2] ^= 1
    segment = OmegaSegment(lo=1, hi=n_small + 1, values=values)

    def oracle_small():
        for i in range(n_small):
            if omega_single(i + 1) != int(segment.values[i]):
                return False, f"mismatch at n = {i + 1}"
        return True, f"all n <= {n_small} match trial division"

    def oracle_large():
        lo = 10**9
        block = omega_block(lo, lo + 10_000, primes_up_to(math.isqrt(lo + 10_000)))
        rng = np.random.default_rng(1729)
        for i in rng.integers(0, 10_000, size=100):
            n = lo + int(i)
            if omega_single(n) != int(block.values[int(i)]):
                return False, f"mismatch at n = {n}"
        return True, "100 sampled values near 1e9 match trial division"

    def roundtrip():
        worst = 0.0
        for m in range(1, 13):
            tally = tally_segment(new_tally(m), segment)
            sums = sums_from_counts(tally)
            if abs(sums.sums[0] - tally.x) != 0.0:
                return False, f"sums[0] != x at m = {m}"
            recovered = counts_from_sums(sums)
            if not np.array_equal(recovered.counts, tally.counts):
                return False, f"roundtrip mismatch at m = {m}"
            residual = max(inverse_residuals(sums))
            worst = max(worst, residual)
        return True, f"m = 1..12 exact, worst pre-rounding residual {worst:.3e}"

    def remark_identity():
        for m in (2, 3, 5, 12):
            tally = tally_segment(new_tally(m), segment)
            if int(checkpoint(tally).scaled_residuals.sum()) != 0:
                return False, f"scaled residuals do not sum to zero at m = {m}"
        return True, "scaled residuals sum to zero for m in {2, 3, 5, 12}"

    def lquo_identity():
        report = check_lquo(2.0, min(n_small, 10_000))
        return report.deviation < 1e-3, f"deviation {report.deviation:.3e}"

    def euler_identities():
        full = check_identity_product(3, 2.0, 10_000)
        regular = check_g_product(3, 2.0, 10_000)
        worst = max(full.deviation, regular.deviation)
        return worst < 1e-5, f"worst deviation {worst:.3e}"

    run("sieve-oracle-small", oracle_small)
    run("sieve-oracle-large", oracle_large)
    run("transform-roundtrip", roundtrip)
    run("residual-sum-zero", remark_identity)
    run("lambda-quotient", lquo_identity)
    run("euler-products", euler_identities)
    return checks


def cmd_selftest(args) -> int:
    checks = run_selftest(x_limit=args.x_limit, inject_fault=args.inject_fault)
    config = {"x_limit": args.x_limit, "inject_fault": args.inject_fault}
    columns = ["name", "passed", "detail"]
    _emit(args, "selftest", config, columns, checks)
    return 0 if all(check["passed"] for check in checks) else 1


# ---------------------------------------------------------------- parser


def _add_output_flags(parser) -> None:
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )
    parser.add_argument(
        "--output", default="-", metavar="PATH", help="output file ('-' = stdout)"
    )


def _add_stream_flags(parser) -> None:
    parser.add_argument(
        "--segment-size",
        type=int,
        default=DEFAULT_SEGMENT_SIZE,
        metavar="N",
        help="sieve block length (default: 2^20)",
    )
    parser.add_argument(
        "--workers", type=int, default=1, metavar="N", help="sieve processes"
    )


def _add_moduli_flag(parser) -> None:
    parser.add_argument(
        "--m",
        action="append",
        type=int,
        required=True,
        metavar="M",
        help="modulus (repeatable)",
    )


def _add_ratio_flag(parser) -> None:
    parser.add_argument(
        "--ratio",
        type=float,
        default=DEFAULT_RATIO,
        metavar="R",
        help="checkpoint spacing (default: 10^(1/4))",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegadist",
        description="Distribution of Omega(n) over residue classes: exact "
        "tallies, character sums, decay envelopes, series identities and "
        "class races.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser(
        "density", help="class counts, densities and residuals at checkpoints"
    )
    _add_moduli_flag(p)
    p.add_argument("--x-max", type=int, required=True, metavar="X", help="scan limit (>= 10)")
    _add_ratio_flag(p)
    _add_stream_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_density)

    p = sub.add_parser("hall", help="mean-value bound constants and decay envelope")
    _add_moduli_flag(p)
    p.add_argument(
        "--x-max",
        type=int,
        default=None,
        metavar="X",
        help="also tabulate the decay envelope up to X",
    )
    _add_ratio_flag(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_hall)

    p = sub.add_parser(
        "error-growth", help="checkpoint residuals and growth-exponent fits"
    )
    _add_moduli_flag(p)
    p.add_argument("--x-max", type=int, required=True, metavar="X", help="scan limit (>= 10)")
    _add_ratio_flag(p)
    _add_stream_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_error_growth)

    p = sub.add_parser("dirichlet-check", help="numeric series-identity checks")
    _add_moduli_flag(p)
    p.add_argument("--s", type=float, default=2.0, help="evaluation point (real, > 1)")
    p.add_argument("--n-max", type=int, default=1_000_000, metavar="N", help="series cutoff")
    p.add_argument("--p-max", type=int, default=100_000, metavar="P", help="Euler-product cutoff")
    p.add_argument(
        "--tolerance", type=float, default=1e-3, metavar="T", help="pass/fail threshold"
    )
    _add_output_flags(p)
    p.set_defaults(handler=cmd_dirichlet_check)

    p = sub.add_parser("race", help="sign changes and leads between two classes")
    p.add_argument("--m", type=int, required=True, metavar="M", help="modulus")
    p.add_argument("--j", type=int, default=None, metavar="J", help="first class")
    p.add_argument("--jprime", type=int, default=None, metavar="J2", help="second class")
    p.add_argument("--x-max", type=int, required=True, metavar="X", help="scan limit")
    _add_stream_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_race)

    p = sub.add_parser("selftest", help="reduced-scale end-to-end checks")
    p.add_argument(
        "--x-limit", type=int, default=100_000, metavar="X", help="scan limit for the checks"
    )
    p.add_argument(
        "--inject-fault",
        action="store_true",
        help="corrupt one sieve value first (negative test of the selftest)",
    )
    _add_output_flags(p)
    p.set_defaults(handler=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "handler", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.handler(args)
    except InsufficientDataError as exc:
        print(f"omegadist: {exc}", file=sys.stderr)
        return 1
    except InconsistentTransformError as exc:
        print(f"omegadist: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OverflowError) as exc:
        print(f"omegadist: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"omegadist: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
