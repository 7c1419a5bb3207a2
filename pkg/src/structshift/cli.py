"""Command-line interface.

Subcommands:
    compare         run a pairwise or baseline-vs-all comparison over an
                    input table and print or write reports
    critical-value  resolve a critical value z_{alpha,k} with provenance

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .report import (
    TableFormatError,
    compare_pair,
    compare_series,
    emit_plot_data,
    parse_table,
    render_report,
    render_series,
)
from .sokolowski import (
    CriticalValuePolicy,
    MonteCarloConfig,
    NoTabulatedValueError,
    critical_value,
)

USAGE_ERROR = 1
DATA_ERROR = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="structshift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"structshift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    cmp = sub.add_parser("compare", help="compare population structures in a table")
    cmp.add_argument("--input", required=True, help="path to the input table")
    cmp.add_argument("--format", choices=["csv", "json"], default="csv")
    cmp.add_argument("--mode", choices=["counts", "shares"], default="counts")
    cmp.add_argument("--baseline", required=True, help="baseline population id")
    cmp.add_argument("--against", help="compare baseline against this population only")
    cmp.add_argument("--alpha", type=float, default=0.05)
    cmp.add_argument(
        "--cv-policy",
        choices=[p.value for p in CriticalValuePolicy],
        default=CriticalValuePolicy.EMBEDDED_ONLY.value,
    )
    cmp.add_argument("--mc-replicates", type=int, default=1_000_000)
    cmp.add_argument("--seed", type=int, default=0)
    cmp.add_argument("--out", choices=["json", "csv", "text"], default="json")
    cmp.add_argument("--plot-data", help="also write plot data JSON to this path")

    cv = sub.add_parser("critical-value", help="print a critical value with provenance")
    cv.add_argument("--alpha", type=float, required=True)
    cv.add_argument("--k", type=int, required=True)
    cv.add_argument(
        "--cv-policy",
        choices=[p.value for p in CriticalValuePolicy],
        default=CriticalValuePolicy.EMBEDDED_ONLY.value,
    )
    cv.add_argument("--mc-replicates", type=int, default=1_000_000)
    cv.add_argument("--seed", type=int, default=0)
    return parser


def _run_compare(args) -> int:
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return DATA_ERROR
    fmt = "csv_wide" if args.format == "csv" else "json"
    table = parse_table(data, format=fmt, mode=args.mode)
    policy = CriticalValuePolicy(args.cv_policy)
    mc = MonteCarloConfig(replicates=args.mc_replicates, seed=args.seed)
    if args.against is not None:
        report = compare_pair(table, args.baseline, args.against, args.alpha, policy, mc)
        sys.stdout.write(render_report(report, args.out))
        if args.plot_data:
            Path(args.plot_data).write_text(emit_plot_data(report), encoding="utf-8")
    else:
        series = compare_series(table, args.baseline, args.alpha, policy, mc)
        sys.stdout.write(render_series(series, args.out))
        if args.plot_data:
            # one plot file per comparison, suffixed with the comparison id
            base = Path(args.plot_data)
            for rep in series.reports:
                path = base.with_name(f"{base.stem}-{rep.pop_y}{base.suffix}")
                path.write_text(emit_plot_data(rep), encoding="utf-8")
    return 0


def _run_critical_value(args) -> int:
    policy = CriticalValuePolicy(args.cv_policy)
    mc = MonteCarloConfig(replicates=args.mc_replicates, seed=args.seed)
    source = critical_value(args.alpha, args.k, policy, mc)
    provenance = source.kind
    if source.mc_meta is not None:
        meta = source.mc_meta
        provenance += f" (replicates={meta.replicates}, seed={meta.seed}, null={meta.null_model})"
    print(f"z[alpha={source.alpha}, k={source.k}] = {source.value!r}  [{provenance}]")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        if args.command == "compare":
            return _run_compare(args)
        return _run_critical_value(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (TableFormatError, NoTabulatedValueError, KeyError, ValueError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
