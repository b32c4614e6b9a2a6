"""Command-line interface.

Subcommands: gwlp, verify, cone, hilbert, union, classify, bound.
Every numeric quantity of a binary design is printed both as an exact
fraction and as a decimal.  Errors are one line on stderr with a distinct
exit code per class: 2 usage, 3 bad design string, 4 file problems,
5 failed verification, 6 budget exceeded, 7 domain errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import files
from .aberration import aggregated_lower_bound, gwlp
from .catalog import classify as classify_catalog
from .catalog import enumerate_size, gma_best
from .cone import constraint_matrix, is_member, write_matrix
from .counting import CountingVector, is_oa_by_marginals, strength
from .design import DesignSpace, parse_design
from .errors import (
    BudgetExceededError,
    DesignMismatchError,
    FileFormatError,
    OaconeError,
)
from .hilbert import hilbert_basis, read_basis, verify_minimality, write_basis
from .union import summarize, union_counts, union_gwlp
from ._search import DEFAULT_BUDGET

EXIT_USAGE = 2
EXIT_DESIGN = 3
EXIT_FILE = 4
EXIT_VERIFY = 5
EXIT_BUDGET = 6
EXIT_DOMAIN = 7


def _fmt_value(value) -> str:
    return f"{float(value):g}"


def _fmt_exact(value) -> str:
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    return f"{float(value):.12g}"


def _print_gwlp(pattern, out) -> None:
    out.write("A = " + ", ".join(_fmt_value(v) for v in pattern) + "\n")
    out.write("A exact = " + ", ".join(_fmt_exact(v) for v in pattern) + "\n")


def _design_from(args) -> DesignSpace:
    try:
        return parse_design(args.design)
    except ValueError as exc:
        raise _CliError(EXIT_DESIGN, str(exc)) from exc


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path, design, fmt):
    try:
        return files.load_fraction(path, design, fmt)
    except FileFormatError as exc:
        raise _CliError(EXIT_FILE, str(exc)) from exc
    except DesignMismatchError as exc:
        raise _CliError(EXIT_FILE, str(exc)) from exc


# ------------------------------------------------------------- subcommands

def _cmd_gwlp(args) -> int:
    design = _design_from(args)
    y = _load(args.input, design, args.format)
    if y.n == 0:
        raise _CliError(EXIT_DOMAIN, "input fraction is empty")
    pattern = gwlp(y)
    sys.stdout.write(f"design: {design}\n")
    sys.stdout.write(f"n = {y.n}\n")
    sys.stdout.write(f"strength = {strength(y)}\n")
    _print_gwlp(pattern, sys.stdout)
    return 0


def _cmd_verify(args) -> int:
    design = _design_from(args)
    y = _load(args.input, design, args.format)
    if y.n == 0:
        raise _CliError(EXIT_DOMAIN, "input fraction is empty")
    spectral = strength(y)
    combinatorial = max(
        (t for t in range(design.m + 1) if is_oa_by_marginals(y, t)), default=0
    )
    matrix = constraint_matrix(design, max(spectral, 1))
    member = is_member(y, matrix)
    sys.stdout.write(f"design: {design}\n")
    sys.stdout.write(f"n = {y.n}\n")
    sys.stdout.write(f"strength (coefficients) = {spectral}\n")
    sys.stdout.write(f"strength (marginals)    = {combinatorial}\n")
    agree = spectral == combinatorial and (spectral == 0 or member)
    sys.stdout.write(f"checks agree: {'yes' if agree else 'NO'}\n")
    if not agree:
        raise _CliError(EXIT_VERIFY, "spectral and combinatorial checks disagree")
    if args.strength is not None:
        ok = spectral >= args.strength
        sys.stdout.write(
            f"OA of strength {args.strength}: {'yes' if ok else 'no'}\n"
        )
        if not ok:
            raise _CliError(
                EXIT_VERIFY, f"fraction has strength {spectral} < {args.strength}"
            )
    return 0


def _cmd_cone(args) -> int:
    design = _design_from(args)
    try:
        matrix = constraint_matrix(design, args.strength)
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, str(exc)) from exc
    write_matrix(matrix, args.out)
    sys.stdout.write(
        f"wrote {matrix.row_count} x {design.card} constraint matrix to {args.out}\n"
    )
    return 0


def _cmd_hilbert(args) -> int:
    design = _design_from(args)
    try:
        matrix = constraint_matrix(design, args.strength)
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, str(exc)) from exc
    if getattr(args, "import_path", None):
        try:
            basis = read_basis(args.import_path, design, args.strength)
        except (FileFormatError, DesignMismatchError) as exc:
            raise _CliError(EXIT_FILE, str(exc)) from exc
    else:
        progress = None
        if args.progress:
            def progress(m, norm, frontier, found, queued):
                sys.stderr.write(
                    f"lift m={m} norm={norm} frontier={frontier} "
                    f"found={found} queued={queued}\n"
                )
        try:
            basis = hilbert_basis(matrix, budget=args.budget, progress=progress)
        except BudgetExceededError as exc:
            raise _CliError(
                EXIT_BUDGET,
                f"budget exceeded with frontier size {exc.frontier_size}",
            ) from exc
    if args.verify:
        sound = all(is_member(row, matrix) and row.sum() > 0 for row in basis.elements)
        minimal = verify_minimality(basis)
        sys.stdout.write(f"soundness: {'ok' if sound else 'FAILED'}\n")
        sys.stdout.write(f"minimality: {'ok' if minimal else 'FAILED'}\n")
        if not (sound and minimal):
            raise _CliError(EXIT_VERIFY, "basis verification failed")
    sys.stdout.write(f"elements = {len(basis)}\n")
    for size, count in sorted(basis.size_histogram().items()):
        sys.stdout.write(f"size {size}: {count}\n")
    if args.out:
        write_basis(basis, args.out)
        sys.stdout.write(f"wrote basis to {args.out}\n")
    return 0


def _cmd_union(args) -> int:
    design = _design_from(args)
    parts = [_load(path, design, args.format) for path in args.inputs]
    if any(p.n == 0 for p in parts):
        raise _CliError(EXIT_DOMAIN, "union parts must be nonempty")
    total = union_counts(parts)
    sys.stdout.write(f"design: {design}\n")
    sys.stdout.write(f"n = {total.n}\n")
    if args.path == "direct" or len(parts) < 2:
        pattern = gwlp(total)
    else:
        pattern = union_gwlp([summarize(p) for p in parts])
    _print_gwlp(pattern, sys.stdout)
    if args.out:
        files.write_counting_vector(total, args.out)
        sys.stdout.write(f"wrote union counting vector to {args.out}\n")
    return 0


def _cmd_classify(args) -> int:
    design = _design_from(args)
    try:
        basis = read_basis(args.basis, design, args.strength)
    except (FileFormatError, DesignMismatchError) as exc:
        raise _CliError(EXIT_FILE, str(exc)) from exc
    catalog = enumerate_size(
        basis, args.n,
        verify_fraction=0.01 if args.verify else 0.0,
        workers=args.workers,
    )
    if not len(catalog):
        sys.stdout.write(f"no OA of size {args.n} exists for this design\n")
        return 0
    report = classify_catalog(catalog)
    t1 = args.strength + 1
    if args.csv:
        header = ["type"] + [_fmt_value(v) for v in report.value_order] + ["total"]
        sys.stdout.write(",".join(header) + "\n")
        for label in report.labels():
            cells = [str(report.table.get((label, v), 0)) for v in report.value_order]
            sys.stdout.write(
                ",".join([label] + cells + [str(report.label_totals[label])]) + "\n"
            )
    else:
        sys.stdout.write(
            f"{len(catalog)} distinct OA(n={args.n}) of strength {args.strength}; "
            f"rows are provenance type, columns A_{t1}\n"
        )
        width = max(12, max((len(l) for l in report.labels()), default=12) + 2)
        head = "".join(f"{_fmt_value(v):>10}" for v in report.value_order)
        sys.stdout.write(f"{'type':<{width}}{head}{'total':>10}\n")
        for label in report.labels():
            cells = "".join(
                f"{report.table.get((label, v), 0):>10}" for v in report.value_order
            )
            sys.stdout.write(
                f"{label:<{width}}{cells}{report.label_totals[label]:>10}\n"
            )
    for pattern, count in report.optima:
        sys.stdout.write(f"GMA optimum: {count} designs with A = "
                         + ", ".join(_fmt_value(v) for v in pattern) + "\n")
        sys.stdout.write("GMA optimum exact: A = "
                         + ", ".join(_fmt_exact(v) for v in pattern) + "\n")
    if args.best:
        os.makedirs(args.best, exist_ok=True)
        winners = gma_best(catalog)
        digits = max(4, len(str(len(winners))))
        for rank, (key, _) in enumerate(sorted(winners)):
            vec = CountingVector(design, np.frombuffer(key, dtype=np.int64))
            path = os.path.join(args.best, f"best_{rank:0{digits}d}.runs")
            files.write_run_list(vec, path)
        sys.stdout.write(f"wrote {len(winners)} optimal run lists to {args.best}\n")
    return 0


def _cmd_bound(args) -> int:
    design = _design_from(args)
    try:
        bound = aggregated_lower_bound(design, args.strength, args.n)
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, str(exc)) from exc
    sys.stdout.write(
        f"A_{args.strength + 1} lower bound for OA({args.n}, {design}, "
        f"{args.strength}) = {_fmt_exact(bound)} ({_fmt_value(bound)})\n"
    )
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oacone",
        description="Counting functions, word-length patterns, and Hilbert "
        "bases of orthogonal-array cones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_help = (
        "input format: 'counts' (one multiplicity per line, #D lines, "
        "lexicographic point order), 'runs' (one point per line as space-"
        "separated level indices, repeats allowed), or 'auto'"
    )

    p = sub.add_parser("gwlp", help="word-length pattern of a fraction")
    p.add_argument("--design", required=True, help='factor levels, e.g. "2 2 2"')
    p.add_argument("--format", default="auto", choices=("auto", "counts", "runs"),
                   help=fmt_help)
    p.add_argument("input", help="counting-vector or run-list file")
    p.set_defaults(func=_cmd_gwlp)

    p = sub.add_parser("verify", help="check OA strength both ways")
    p.add_argument("--design", required=True)
    p.add_argument("--strength", type=int, default=None,
                   help="required strength; exit 5 if not met")
    p.add_argument("--format", default="auto", choices=("auto", "counts", "runs"),
                   help=fmt_help)
    p.add_argument("input")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser(
        "cone",
        help="export the marginal-equality constraint matrix",
        description="Writes the matrix whose kernel intersected with the "
        "nonnegative orthant is the set of strength-t counting vectors. "
        "Format: 'rows cols' header, then one row per line; every row is the "
        "difference of two marginal-cell indicators (equality form), so "
        "members satisfy M y = 0 exactly.",
    )
    p.add_argument("--design", required=True)
    p.add_argument("--strength", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cone)

    p = sub.add_parser("hilbert", help="compute or import a Hilbert basis")
    p.add_argument("--design", required=True)
    p.add_argument("--strength", type=int, required=True)
    p.add_argument("--out", default=None, help="write the basis here")
    p.add_argument("--import", dest="import_path", default=None,
                   help="read an externally computed basis instead of computing")
    p.add_argument("--verify", action="store_true",
                   help="check soundness and inclusion-minimality")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="abort (exit 6) if the search frontier exceeds this")
    p.add_argument("--progress", action="store_true", help="log search progress")
    p.set_defaults(func=_cmd_hilbert)

    p = sub.add_parser("union", help="multiset union of fractions and its GWLP")
    p.add_argument("--design", required=True)
    p.add_argument("--path", default="formula", choices=("formula", "direct"),
                   help="evaluate the union GWLP from part coefficients "
                   "(formula) or from the summed counting vector (direct)")
    p.add_argument("--format", default="auto", choices=("auto", "counts", "runs"),
                   help=fmt_help)
    p.add_argument("--out", default=None, help="write the union counting vector")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=_cmd_union)

    p = sub.add_parser("classify", help="enumerate and classify OAs of one size")
    p.add_argument("--design", required=True)
    p.add_argument("--strength", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis", required=True, help="basis file from 'hilbert --out'")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    p.add_argument("--best", default=None, metavar="DIR",
                   help="write GMA-optimal designs as run lists into DIR")
    p.add_argument("--verify", action="store_true",
                   help="recompute 1%% of union GWLPs from counting vectors")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("bound", help="aggregated lower bound for A_{t+1}")
    p.add_argument("--design", required=True)
    p.add_argument("--strength", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_bound)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except FileFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FILE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FILE
    except OaconeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
