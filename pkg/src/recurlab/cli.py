"""Command-line interface.

Subcommands: construct, verify, measure, bounds, threshold.  Reports are
written as JSON plus a CSV mirror, with matplotlib figures rendered next to
them unless --no-figures is given.  Exit codes: 0 success, 1 property
violation or witness, 2 usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import mpmath

from . import combinatorics as comb
from . import verification
from .errors import (
    CertificationError,
    ConsistencyError,
    DomainError,
    RangeError,
    RecurlabError,
    SizeCapError,
    StructureError,
)
from .pipelines import run_theorem_pipeline
from .thresholds import exponent_threshold, lower_bound

ENV_CAP = "RECURLAB_ENUM_CAP"
ENV_PRECISION = "RECURLAB_PRECISION"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"environment variable {name}={raw!r} is not an integer")


def parse_n_range(text: str) -> list[int]:
    """Parse '1..5' (inclusive) or a single integer."""
    if ".." in text:
        lo_str, hi_str = text.split("..", 1)
        lo, hi = int(lo_str), int(hi_str)
        if hi < lo:
            raise DomainError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recurlab",
        description="Pattern-free set construction, certification, and exact "
        "multiple-recurrence measures on tori.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_construct = sub.add_parser(
        "construct", help="build a certified pattern-free set and write it to JSON"
    )
    p_construct.add_argument(
        "kind", choices=["corner-free", "three-point-free", "ap3"]
    )
    p_construct.add_argument("--d", type=int, help="digit block parameter")
    p_construct.add_argument("--m", type=int, help="digit pair multiplicity")
    p_construct.add_argument("--N", type=int, help="ambient side length")
    p_construct.add_argument("--cap", type=int, default=None,
                             help="enumeration cap (env RECURLAB_ENUM_CAP)")
    p_construct.add_argument("--epsilon", type=float, default=0.1,
                             help="epsilon for the size bound report")
    p_construct.add_argument("--output", type=Path, default=None)
    p_construct.add_argument("--format", choices=["table", "json"], default="table")
    p_construct.add_argument("--no-figures", action="store_true")
    p_construct.set_defaults(func=cmd_construct)

    p_verify = sub.add_parser(
        "verify", help="run the matching oracle on a point-set JSON file"
    )
    p_verify.add_argument("file", type=Path)
    p_verify.set_defaults(func=cmd_verify)

    p_measure = sub.add_parser(
        "measure", help="run a built-in measure pipeline and write a report"
    )
    p_measure.add_argument("theorem", choices=["t11", "t12", "t13"])
    p_measure.add_argument("--d", type=int)
    p_measure.add_argument("--m", type=int)
    p_measure.add_argument("--N", type=int)
    p_measure.add_argument("--n", type=str, default="1..5",
                           help="iterate range, e.g. 1..5 or -3..3 or 2")
    p_measure.add_argument("--mc-samples", type=int, default=0)
    p_measure.add_argument("--seed", type=int, default=1729)
    p_measure.add_argument("--jobs", type=int, default=1)
    p_measure.add_argument("--cap", type=int, default=None)
    p_measure.add_argument("--precision", type=int, default=None,
                           help="threshold digits (env RECURLAB_PRECISION)")
    p_measure.add_argument("--output", type=Path, default=None)
    p_measure.add_argument("--format", choices=["table", "json"], default="table")
    p_measure.add_argument("--no-figures", action="store_true")
    p_measure.set_defaults(func=cmd_measure)

    p_bounds = sub.add_parser(
        "bounds", help="evaluate the closed-form extremal size bounds"
    )
    p_bounds.add_argument("kind", choices=["nu", "w"])
    p_bounds.add_argument("--N", type=int, required=True)
    p_bounds.add_argument("--epsilon", type=float, default=0.1)
    p_bounds.add_argument("--precision", type=int, default=None)
    p_bounds.add_argument("--format", choices=["table", "json"], default="table")
    p_bounds.set_defaults(func=cmd_bounds)

    p_thresh = sub.add_parser(
        "threshold", help="evaluate a break-even exponent threshold"
    )
    p_thresh.add_argument("variant", choices=["commuting2", "nilpotent2"])
    p_thresh.add_argument("--N", type=int, required=True)
    p_thresh.add_argument("--set-size", type=int, required=True)
    p_thresh.add_argument("--precision", type=int, default=None)
    p_thresh.add_argument("--format", choices=["table", "json"], default="table")
    p_thresh.set_defaults(func=cmd_threshold)

    return parser


def _build_set(args):
    cap = args.cap if args.cap is not None else _env_int(ENV_CAP, comb.DEFAULT_ENUMERATION_CAP)
    selection = None
    if args.kind == "ap3":
        if args.N is None:
            raise DomainError("construct ap3 needs --N")
        built = comb.behrend_ap3_construct(args.N)
    else:
        if args.d is not None:
            profile = comb.DigitProfile(d=args.d, m=args.m if args.m else comb.omega(args.d))
        elif args.N is not None:
            profile = comb.choose_parameters(args.N)
        else:
            profile = comb.DigitProfile(d=2, m=1)
        corner_free = comb.corner_free_enumerate(profile, cap=cap)
        if args.kind == "corner-free":
            built = corner_free
        else:
            built, selection = comb.three_point_free_from_corner_free(corner_free)
    return built, selection


def cmd_construct(args) -> int:
    built, selection = _build_set(args)
    summary = {
        "kind": args.kind,
        "side": built.side,
        "size": len(built),
        "certificate": built.certificate,
    }
    if selection is not None:
        summary["slice_s"] = selection.s
        summary["pigeonhole_lower_bound"] = -(-selection.total // selection.slots)
    if built.side >= 16 and built.dim in (2, 3):
        bound = lower_bound("nu" if built.dim == 2 else "w", built.side, args.epsilon)
        summary["asymptotic_bound"] = mpmath.nstr(bound.value, 10)
        summary["asymptotic_bound_exponent"] = mpmath.nstr(bound.exponent, 10)
    if args.output is not None:
        out = Path(args.output)
        built.save(out)
        summary["file"] = str(out)
        if selection is not None:
            import csv as _csv

            csv_path = out.with_name(out.stem + "_slices.csv")
            with csv_path.open("w", newline="") as fh:
                writer = _csv.writer(fh)
                writer.writerow(("s", "count"))
                writer.writerows(selection.csv_rows())
            summary["slices_csv"] = str(csv_path)
        if not args.no_figures:
            from . import plotting

            fig_path = out.with_suffix(".png")
            plotting.save_set_figure(built, fig_path)
            summary["figure"] = str(fig_path)
            if selection is not None:
                slice_fig = out.with_name(out.stem + "_slices.png")
                plotting.save_slice_figure(selection, slice_fig)
                summary["slices_figure"] = str(slice_fig)
    if args.format == "json":
        print(json.dumps(summary, sort_keys=True, indent=2))
    else:
        for key, value in summary.items():
            print(f"{key}: {value}")
    return 0


def cmd_verify(args) -> int:
    point_set = comb.LatticePointSet.load(args.file)
    checked, witness = verification.run_matching_oracle(point_set)
    if witness is None:
        print(f"ok: {checked} holds for {len(point_set)} points")
        return 0
    print(json.dumps(witness.to_json_dict(), sort_keys=True))
    return 1


def cmd_measure(args) -> int:
    cap = args.cap if args.cap is not None else _env_int(ENV_CAP, comb.DEFAULT_ENUMERATION_CAP)
    precision = args.precision if args.precision is not None else _env_int(ENV_PRECISION, 50)
    report = run_theorem_pipeline(
        args.theorem,
        d=args.d,
        m=args.m,
        n_side=args.N,
        n_values=parse_n_range(args.n),
        mc_samples=args.mc_samples,
        seed=args.seed,
        jobs=args.jobs,
        enumeration_cap=cap,
        threshold_digits=precision,
        compare_digits=max(100, precision),
    )
    if args.output is not None:
        base = Path(args.output)
        if base.suffix:
            base = base.with_suffix("")
        json_path, csv_path = report.save(base)
        if not args.no_figures:
            from . import plotting

            plotting.save_measure_figure(report, base.with_suffix(".png"))
        print(f"report: {json_path}")
        print(f"csv: {csv_path}")
    if args.format == "json":
        print(report.to_json_str())
    else:
        ell = "-" if report.ell_star is None else mpmath.nstr(report.ell_star, 12)
        print(
            f"{report.system} ({report.system_name}), N={report.n_side}, "
            f"set size {report.set_size}, mu(A)={report.mu_A}, ell*={ell}"
        )
        print(f"{'n':>4}  {'exact':>24}  {'mc':>12}  required-checks")
        for row in report.rows:
            mc = "-" if row.mc_estimate is None else f"{row.mc_estimate:.3e}"
            verdicts = ",".join(
                f"{c.label}:{c.verdict}" for c in row.checks if c.required
            ) or "-"
            print(f"{row.n:>4}  {str(row.exact):>24}  {mc:>12}  {verdicts}")
        print(f"overall: {'pass' if report.overall_pass else 'FAIL'}")
    return 0 if report.overall_pass else 1


def cmd_bounds(args) -> int:
    precision = args.precision if args.precision is not None else _env_int(ENV_PRECISION, 50)
    bound = lower_bound(args.kind, args.N, args.epsilon, precision)
    data = {
        "kind": bound.kind,
        "N": bound.n_side,
        "epsilon": bound.epsilon,
        "exponent": mpmath.nstr(bound.exponent, 15),
        "value": mpmath.nstr(bound.value, 15),
    }
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        for key, value in data.items():
            print(f"{key}: {value}")
    return 0


def cmd_threshold(args) -> int:
    precision = args.precision if args.precision is not None else _env_int(ENV_PRECISION, 50)
    star = exponent_threshold(args.variant, args.N, args.set_size, precision)
    data = {
        "variant": star.variant,
        "N": star.n_side,
        "set_size": star.set_size,
        "ell_star": mpmath.nstr(star.ell_star, min(precision, 30)),
    }
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        for key, value in data.items():
            print(f"{key}: {value}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CertificationError, StructureError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RecurlabError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
