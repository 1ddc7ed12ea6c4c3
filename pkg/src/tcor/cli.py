"""Command-line front end.

Result rows are ``i,j,value`` with 1-based column indices (indices refer
to the input file's columns even when constant columns were dropped).
Values use ``%.17g`` formatting.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from .driver import TcorConfig, tcor, tdist
from .errors import TcorError
from .io import DataMatrix, drop_constant_columns, load_binary, load_csv

USAGE_EXIT = 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tcor",
        description="All column pairs of a matrix with correlation >= t (or distance <= d).",
    )
    ap.add_argument("input", help="CSV or raw float64 (column-major) file")
    ap.add_argument("--format", choices=("csv", "bin"), help="input format (default: from extension)")
    ap.add_argument("--m", type=int, help="row count for binary input")
    ap.add_argument("--n", type=int, help="column count for binary input")
    ap.add_argument("--header", action="store_true", help="skip the first CSV line")
    ap.add_argument("--transpose", action="store_true", help="treat file rows as variables")
    ap.add_argument("--mode", choices=("cor", "dist"), default="cor")
    ap.add_argument("-t", "--threshold", type=float, help="correlation threshold in (0, 1)")
    ap.add_argument("-d", "--distance", type=float, help="distance threshold (> 0)")
    ap.add_argument("-p", "--p0", type=int, default=10, help="initial SVD rank (default 10)")
    ap.add_argument("--p-max", type=int, help="rank cap for adaptation")
    ap.add_argument("--threads", type=int, help="worker threads (default $TCOR_THREADS or 1)")
    ap.add_argument("--drop-constant", action="store_true", help="drop constant columns first")
    ap.add_argument("-o", "--output", help="result CSV path (default stdout)")
    ap.add_argument("--diagnostics", help="write run diagnostics JSON here")
    return ap


def _check_args(ap, args):
    if args.mode == "cor":
        if args.distance is not None:
            ap.error("--distance is only valid with --mode dist")
        if args.threshold is None:
            ap.error("--mode cor requires -t/--threshold")
        if not 0.0 < args.threshold < 1.0:
            ap.error(f"threshold must lie in (0, 1), got {args.threshold}")
    else:
        if args.threshold is not None:
            ap.error("-t/--threshold is only valid with --mode cor")
        if args.distance is None:
            ap.error("--mode dist requires -d/--distance")
        if not args.distance > 0:
            ap.error(f"distance must be positive, got {args.distance}")
    if args.threads is None:
        env = os.environ.get("TCOR_THREADS")
        try:
            args.threads = int(env) if env else 1
        except ValueError:
            ap.error(f"TCOR_THREADS must be an integer, got {env!r}")
    if args.threads < 1:
        ap.error("threads must be >= 1")
    if args.p0 < 1:
        ap.error("p0 must be >= 1")
    if args.format is None:
        args.format = "bin" if args.input.endswith(".bin") else "csv"
    if args.format == "csv" and (args.m is not None or args.n is not None):
        ap.error("--m/--n apply to binary input only")


def _load(args):
    if args.format == "csv":
        return load_csv(args.input, has_header=args.header, transpose=args.transpose)
    A = load_binary(args.input, args.m, args.n)
    if args.transpose:
        A = DataMatrix(A.values.T)
    return A


def write_result(result, fh, index_map=None):
    fh.write("i,j,value\n")
    for i, j, v in result:
        if index_map is not None:
            i, j = int(index_map[i]), int(index_map[j])
        fh.write(f"{i + 1},{j + 1},{v:.17g}\n")


def _json_number(x):
    return None if isinstance(x, float) and not math.isfinite(x) else x


def run(args) -> int:
    start = time.perf_counter()
    A = _load(args)
    dropped = 0
    index_map = None
    if args.drop_constant:
        n0 = A.n
        A, kept = drop_constant_columns(A)
        dropped = n0 - A.n
        if dropped:
            index_map = kept
    cfg = TcorConfig(t=args.threshold, p0=args.p0, p_max=args.p_max, threads=args.threads)
    if args.mode == "cor":
        result = tcor(A, cfg)
    else:
        result = tdist(A, args.distance, cfg)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            write_result(result, fh, index_map)
    else:
        write_result(result, sys.stdout, index_map)
    wall = time.perf_counter() - start
    if args.diagnostics:
        d = result.diagnostics
        payload = {
            "m": A.m,
            "n": A.n,
            "dropped_columns": dropped,
            "p_final": d.p_final,
            "ell": d.ell,
            "candidate_count": d.candidate_count,
            "result_count": len(result),
            "savings_estimate": _json_number(d.savings_estimate),
            "wall_seconds": wall,
            "p_initial": d.p_initial,
            "ranks": d.ranks,
            "adjacent_counts": d.adjacent_counts,
            "evaluated_fraction": d.evaluated_fraction,
            "rank_deficient": d.rank_deficient,
            "svd_method": d.svd_method,
        }
        with open(args.diagnostics, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _check_args(ap, args)
    try:
        return run(args)
    except TcorError as exc:
        print(f"tcor: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"tcor: error: {exc}", file=sys.stderr)
        return 9


if __name__ == "__main__":
    sys.exit(main())
