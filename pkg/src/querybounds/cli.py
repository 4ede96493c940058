"""``querybounds analyze``: compute and cross-check query lower bounds for one function.

Exit status: 0 on success, 1 when a computation fails or the consistency
gate finds a breach, 2 for bad flags or an unreadable input file.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import adversary as adv
from .fileformat import FunctionFileError, load_function
from .functions import BUILTINS, FunctionError, make_builtin
from .report import GROUPS, build_report, emit_report
from .search import DEFAULT_BUDGET


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="querybounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="bound report for one function")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=sorted(BUILTINS), help="named function family")
    src.add_argument("--file", type=Path, help="function file (qfun format)")
    a.add_argument("--n", type=int, help="input length for --builtin")
    a.add_argument("--t", type=int, help="threshold parameter for --builtin threshold")
    a.add_argument("--bounds", default="all",
                   help=f"comma-separated groups from {', '.join(GROUPS)}, or 'all'")
    a.add_argument("--gamma", default="auto",
                   help="adversary matrix triplet file, or 'auto' for the built-in constructions")
    a.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="objective evaluations for the adversary matrix search")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--format", choices=("text", "structured", "tabular"), default="text")
    a.add_argument("--out", type=Path, help="write the report here instead of stdout")
    a.add_argument("--timings", action="store_true",
                   help="include wall-clock per stage (makes output non-reproducible)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    if args.budget < 0:
        parser.error("--budget must be nonnegative")
    try:
        if args.file is not None:
            F = load_function(args.file)
        else:
            F = make_builtin(args.builtin, args.n, args.t)
    except FunctionFileError as err:
        print(f"querybounds: {args.file}: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"querybounds: {err}", file=sys.stderr)
        return 2
    except FunctionError as err:
        parser.print_usage(sys.stderr)
        print(f"querybounds: {err}", file=sys.stderr)
        return 2

    gamma = None
    if args.gamma != "auto":
        try:
            gamma = adv.read_gamma(F, Path(args.gamma).read_text(), provenance=f"file:{Path(args.gamma).name}")
        except (OSError, adv.InvalidGammaError) as err:
            print(f"querybounds: --gamma: {err}", file=sys.stderr)
            return 2

    try:
        report = build_report(F, args.bounds, gamma, args.budget, args.seed, args.timings)
    except ValueError as err:
        if "bound groups" in str(err):
            parser.print_usage(sys.stderr)
            print(f"querybounds: {err}", file=sys.stderr)
            return 2
        print(f"querybounds: computation failed: {err}", file=sys.stderr)
        return 1
    except (RuntimeError, ArithmeticError) as err:
        print(f"querybounds: computation failed: {err}", file=sys.stderr)
        return 1

    text = emit_report(report, args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if report.breaches:
        for c in report.breaches:
            print(f"querybounds: consistency breach: {c['name']}: {c['detail']}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
