"""Command-line front end.

Commands: dimension, sweep, zeros, verify, partition.  Exit codes:
0 success, 1 usage error, 2 domain error (c >= -2 and friends),
3 numerical failure (no convergence, capacity, contour mismatch).

CSV cells use '.' decimals and 17 significant digits so binary64 values
round-trip exactly; byte-identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from dataclasses import dataclass

from .dynamics import MAX_ORDER, SystemParams, make_system
from .errors import (
    BracketError,
    CapacityError,
    ContourError,
    ConvergenceError,
    DomainError,
)
from .symbolic import build_partition, covers_all_words, is_prefix_free, orthogonality_stats
from .verify import build_report, estimate_distortion
from .zeros import (
    Rectangle,
    _count_zeros_argument_detail,
    dimension_sweep,
    find_zeros_rectangle,
    largest_real_zero,
    moran_bracket,
)
from .zeta import approximant, build_trace_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    """Validated knobs shared by the subcommands."""

    c: float
    order_N: int = 12
    re_min: float = 0.3
    re_max: float | None = None
    im_min: float = 0.0
    im_max: float = 15.0
    grid_step: float = 0.05
    tau: float = 0.01
    output: str | None = None
    format: str = "csv"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems via exit code 1, not its default 2."""

    def error(self, message):
        raise _UsageError(message)


def fmt(x: float) -> str:
    """17 significant digits; exact round-trip for binary64."""
    return format(float(x), ".17g")


def _require_domain(c: float) -> SystemParams:
    if not c < -2:
        raise DomainError(
            f"c = {c} is outside the hyperbolic range: this tool requires c < -2"
        )
    return make_system(c)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        return
    with open(path, "w", newline="") as handle:
        handle.write(text)


def cmd_dimension(args) -> int:
    if args.order < 1 or args.order > MAX_ORDER:
        raise _UsageError(f"--order must be in 1..{MAX_ORDER} (got {args.order})")
    system = _require_domain(args.c)
    zeta = approximant(build_trace_table(args.order, system))
    zero = largest_real_zero(zeta)
    lo, hi = moran_bracket(min(args.bracket_order, args.order), system)
    delta = zero.s.real
    contained = lo <= delta <= hi
    report = {
        "schema_version": SCHEMA_VERSION,
        "c": args.c,
        "N": args.order,
        "delta": delta,
        "residual": zero.residual,
        "newton_iterations": zero.newton_iterations,
        "bracket_order": min(args.bracket_order, args.order),
        "bracket_lo": lo,
        "bracket_hi": hi,
        "bracket_contains_delta": contained,
    }
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(f"delta_N = {delta:.10f}  (N = {args.order}, c = {fmt(args.c)})")
        print(f"residual |Delta_N(delta)| = {zero.residual:.3e}")
        print(
            f"Moran bracket (order {report['bracket_order']}): "
            f"[{lo:.10f}, {hi:.10f}]  contains delta: {'yes' if contained else 'NO'}"
        )
    _write_text(args.output, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.step <= 0:
        raise _UsageError(f"--step must be positive (got {args.step})")
    if not args.c_min < args.c_max:
        raise _UsageError(f"empty sweep range [{args.c_min}, {args.c_max}]")
    if not args.c_max < -2:
        raise DomainError(f"sweep needs c_max < -2 (got {args.c_max})")
    if args.order < 1 or args.order > MAX_ORDER:
        raise _UsageError(f"--order must be in 1..{MAX_ORDER} (got {args.order})")
    rows = dimension_sweep(
        args.c_min, args.c_max, args.step, args.order, bracket_order=args.bracket_order
    )
    lines = ["c,N,delta,residual,bracket_lo,bracket_hi"]
    failures = 0
    for row in rows:
        if row.error is not None:
            failures += 1
            print(f"row c = {fmt(row.c)} failed: {row.error}", file=_sys.stderr)
            continue
        lines.append(
            ",".join(
                [
                    fmt(row.c),
                    str(row.order_N),
                    fmt(row.delta),
                    fmt(row.residual),
                    fmt(row.bracket_lo),
                    fmt(row.bracket_hi),
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    path = args.output or "dimsweep.csv"
    _write_text(path, text)
    print(f"wrote {len(lines) - 1} rows to {path} ({failures} failures)")
    if failures > 0.1 * len(rows):
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_zeros(args) -> int:
    if args.order < 1 or args.order > MAX_ORDER:
        raise _UsageError(f"--order must be in 1..{MAX_ORDER} (got {args.order})")
    system = _require_domain(args.c)
    zeta = approximant(build_trace_table(args.order, system))
    re_max = args.re_max
    if re_max is None:
        re_max = largest_real_zero(zeta).s.real + 0.1
    try:
        rect = Rectangle(args.re_min, re_max, args.im_min, args.im_max)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if args.step <= 0:
        raise _UsageError(f"--step must be positive (got {args.step})")
    zeros = find_zeros_rectangle(zeta, rect, args.step)
    count, rect_used = _count_zeros_argument_detail(zeta, rect)
    newton_count = sum(1 for z in zeros if rect_used.contains(z.s))
    agreement = "AGREE" if count == newton_count else "MISMATCH"
    print(
        f"argument-principle count = {count}, newton count = {newton_count} "
        f"[{agreement}]",
        file=_sys.stderr,
    )
    lines = ["c,N,re_s,im_s,abs_delta,newton_iters"]
    for z in zeros:
        lines.append(
            ",".join(
                [
                    fmt(args.c),
                    str(args.order),
                    fmt(z.s.real),
                    fmt(z.s.imag),
                    fmt(z.residual),
                    str(z.newton_iterations),
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    path = args.output or "zeros.csv"
    _write_text(path, text)
    nonreal = [z.s.real for z in zeros if z.s.imag > 0]
    if nonreal:
        print(f"max Re of non-real zeros: {fmt(max(nonreal))}", file=_sys.stderr)
    print(f"wrote {len(zeros)} zeros to {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    system = _require_domain(args.c)
    report = build_report(system)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "c": report.c,
        "theta0": report.theta0,
        "eta0": report.eta0,
        "ratio_sqrt5": report.ratio_sqrt5,
        "lhs_152": report.lhs_152,
        "nn2_inf_minus": report.nn2_triple[0],
        "nn2_reference": report.nn2_triple[1],
        "nn2_sup_plus": report.nn2_triple[2],
        "verdicts": report.verdicts,
    }
    if args.distortion_order:
        payload["distortion_constant"] = estimate_distortion(
            args.distortion_order, system
        )
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"c = {fmt(report.c)}")
        boundary = " (boundary)" if report.theta0 == 1.0 else ""
        print(f"theta0 = {report.theta0:.10f}{boundary}")
        print(f"eta0 = {report.eta0:.10f}")
        print(f"theta0/(1-eta0) = {report.ratio_sqrt5:.10f}")
        print(f"lhs_152 = {report.lhs_152:.10f}")
        print(
            "interval ratios: inf over i_minus = "
            f"{report.nn2_triple[0]:.10f}, sup over i_plus = {report.nn2_triple[2]:.10f}"
        )
        for name, verdict in report.verdicts.items():
            print(f"  {name}: {'holds' if verdict else 'fails'}")
    _write_text(args.output, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_partition(args) -> int:
    if args.tau <= 0:
        raise _UsageError(f"--tau must be positive (got {args.tau})")
    system = _require_domain(args.c)
    partition = build_partition(args.tau, system)
    lengths = [len(w) for w in partition.words]
    histogram: dict[int, int] = {}
    for n in lengths:
        histogram[n] = histogram.get(n, 0) + 1
    ratios = [
        (s.deriv_min / partition.tau, s.deriv_max / partition.tau)
        for s in partition.stats
    ]
    band_lo = min(r[0] for r in ratios)
    band_hi = max(r[1] for r in ratios)
    print(f"partition Z({fmt(args.tau)}): {len(partition.words)} words")
    print(
        "length histogram: "
        + ", ".join(f"{n}:{histogram[n]}" for n in sorted(histogram))
    )
    print(f"derivative/tau band: [{band_lo:.6f}, {band_hi:.6f}]")
    if args.stats:
        ok_prefix = is_prefix_free(partition.words)
        ok_cover = covers_all_words(partition)
        max_related, max_mult = orthogonality_stats(partition)
        print(f"prefix-free check: {'PASS' if ok_prefix else 'FAIL'}")
        print(f"covering check: {'PASS' if ok_cover else 'FAIL'}")
        print(f"max related words (>= length): {max_related}")
        print(f"max point multiplicity: {max_mult}")
    if args.json or args.output:
        payload = dict(partition.to_json_dict(), schema_version=SCHEMA_VERSION)
        if args.json:
            print(json.dumps(payload, indent=2, sort_keys=True))
        _write_text(args.output, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="juliazeta",
        description=(
            "Zeta approximants, Julia-set dimension, zero atlases and "
            "threshold certification for z^2 + c with c < -2"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dim = sub.add_parser("dimension", help="largest real zero of Delta_N")
    dim.add_argument("--c", type=float, required=True)
    dim.add_argument("--order", type=int, default=12)
    dim.add_argument("--bracket-order", type=int, default=12)
    dim.add_argument("--json", action="store_true")
    dim.add_argument("--output")
    dim.set_defaults(func=cmd_dimension)

    sweep = sub.add_parser("sweep", help="dimension versus c table")
    sweep.add_argument("--c-min", type=float, required=True)
    sweep.add_argument("--c-max", type=float, required=True)
    sweep.add_argument("--step", type=float, default=0.05)
    sweep.add_argument("--order", type=int, default=12)
    sweep.add_argument("--bracket-order", type=int, default=10)
    sweep.add_argument("--output")
    sweep.set_defaults(func=cmd_sweep)

    zeros = sub.add_parser("zeros", help="complex zero atlas on a rectangle")
    zeros.add_argument("--c", type=float, required=True)
    zeros.add_argument("--order", type=int, default=12)
    zeros.add_argument("--re-min", type=float, default=0.3)
    zeros.add_argument("--re-max", type=float, default=None,
                       help="default: delta + 0.1")
    zeros.add_argument("--im-min", type=float, default=0.0)
    zeros.add_argument("--im-max", type=float, default=15.0)
    zeros.add_argument("--step", type=float, default=0.05)
    zeros.add_argument("--output")
    zeros.set_defaults(func=cmd_zeros)

    verify = sub.add_parser("verify", help="threshold inequality report")
    verify.add_argument("--c", type=float, required=True)
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--distortion-order", type=int, default=0,
                        help="include the distortion constant up to this order")
    verify.add_argument("--output")
    verify.set_defaults(func=cmd_verify)

    part = sub.add_parser("partition", help="build and inspect Z(tau)")
    part.add_argument("--c", type=float, required=True)
    part.add_argument("--tau", type=float, required=True)
    part.add_argument("--stats", action="store_true")
    part.add_argument("--json", action="store_true")
    part.add_argument("--output")
    part.set_defaults(func=cmd_partition)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=_sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, CapacityError, ContourError, BracketError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
