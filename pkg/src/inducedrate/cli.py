"""Command-line driver: ``inducedrate {hashing,eval,search,threshold}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .channel import ChannelSpec, PauliDist, hashing_bound, parse_channel
from .codes import canonical_key, parse_code, render_code
from .envelope import DEFAULT_GRID, CodeEval, RateCache, build_envelope, evaluate_grid, improvement_threshold
from .search import SearchConfig, sweep

log = logging.getLogger("inducedrate")

ENVELOPE_COLUMNS = ["p", "q_X", "q_Z", "R_hash", "R_ind_best", "n", "k", "code", "H_L_given_S", "improved"]
HASHING_COLUMNS = ["p", "q_X", "q_Z", "p_I", "p_X", "p_Y", "p_Z", "R_hash"]
EVAL_COLUMNS = ["code", "n", "k", "p", "q_X", "q_Z", "R_hash", "H_LS", "H_S", "H_L_given_S", "R_ind", "improved"]
THRESHOLD_COLUMNS = ["code", "n", "k", "eta", "p_star", "bracket"]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def parse_grid(text: str) -> list[float]:
    """``lo:hi:count`` with inclusive endpoints."""
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise ValueError(f"grid must look like lo:hi:count, got {text!r}") from None
    if count < 1:
        raise ValueError("grid count must be positive")
    if count == 1:
        return [lo]
    return [float(v) for v in np.linspace(lo, hi, count)]


def _channel_points(spec: ChannelSpec, args) -> list[tuple[float, PauliDist]]:
    """(p label, distribution) pairs for the requested channel and p values."""
    ps: list[float] = []
    if getattr(args, "p", None):
        ps.extend(args.p)
    if getattr(args, "p_grid", None):
        ps.extend(parse_grid(args.p_grid))
    if not spec.is_family:
        if ps:
            raise ValueError("--p/--p-grid only apply to skewed channels")
        return [(spec.dist.total_error, spec.dist)]
    if not ps:
        ps = [spec.p] if spec.p is not None else [float(v) for v in np.linspace(*DEFAULT_GRID)]
    return [(p, spec.at(p)) for p in ps]


def _qs(dist: PauliDist) -> tuple[float, float]:
    return dist.p_X + dist.p_Y, dist.p_Z + dist.p_Y


def _run_echo(args) -> dict:
    # thread count is an execution detail and stays out of the artifacts
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("threads", "func", "out", "codes_out")}


def _emit(rows: list[dict], columns: list[str], args, stream=None) -> None:
    if args.format == "json":
        doc = {"run": _run_echo(args), "rows": [{c: r.get(c) for c in columns} for r in rows]}
        text = json.dumps(doc, indent=2, default=float) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# inducedrate {args.command} seed={args.seed}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    _write(text, args.out, stream)


def _write(text: str, path, stream=None) -> None:
    if path in (None, "-"):
        (stream or sys.stdout).write(text)
    else:
        Path(path).write_text(text)


def cmd_hashing(args) -> int:
    spec = parse_channel(args.channel)
    rows = []
    for p, dist in _channel_points(spec, args):
        q_x, q_z = _qs(dist)
        rows.append(
            {
                "p": p, "q_X": q_x, "q_Z": q_z,
                "p_I": dist.p_I, "p_X": dist.p_X, "p_Y": dist.p_Y, "p_Z": dist.p_Z,
                "R_hash": hashing_bound(dist),
            }
        )
    _emit(rows, HASHING_COLUMNS, args)
    return 0


def cmd_eval(args) -> int:
    spec = parse_channel(args.channel)
    points = _channel_points(spec, args)
    codes = [CodeEval.from_rows(parse_code(text)) for text in args.code]
    table = evaluate_grid(codes, [d for _, d in points], method=args.method, threads=args.threads)
    rows = []
    for code, text, cells in zip(codes, args.code, table):
        for (p, dist), summary in zip(points, cells):
            if isinstance(summary, Exception):
                raise summary
            q_x, q_z = _qs(dist)
            r_hash = hashing_bound(dist)
            rows.append(
                {
                    "code": render_code(code.H), "n": code.n, "k": code.k,
                    "p": p, "q_X": q_x, "q_Z": q_z, "R_hash": r_hash,
                    "H_LS": summary.H_LS, "H_S": summary.H_S,
                    "H_L_given_S": summary.H_L_given_S, "R_ind": summary.R_ind,
                    "improved": summary.R_ind > r_hash,
                }
            )
    _emit(rows, EVAL_COLUMNS, args)
    return 0


def cmd_search(args) -> int:
    spec = parse_channel(args.channel)
    points = _channel_points(spec, args)
    config = SearchConfig(
        n_min=args.nmin, n_max=args.nmax, T=args.T, seed=args.seed, sample_count=args.sample_count
    )
    # One evaluation per row space; the first (shape, rows) seen represents it.
    distinct: dict = {}
    emitted = 0
    for shape, H in sweep(config):
        emitted += 1
        distinct.setdefault(canonical_key(H), (shape, H))
    log.info("search emitted %d candidates, %d distinct row spaces", emitted, len(distinct))
    reps = list(distinct.values())
    codes = [CodeEval.from_rows(H) for _, H in reps]
    shape_of = {c.canonical: s for c, (s, _) in zip(codes, reps)}
    env = build_envelope(
        codes, [d for _, d in points], [p for p, _ in points],
        method=args.method, threads=args.threads, cache=RateCache(),
    )
    rows = [
        {
            "p": pt.p, "q_X": pt.q_X, "q_Z": pt.q_Z, "R_hash": pt.R_hash,
            "R_ind_best": pt.R_ind_best, "n": pt.n, "k": pt.k, "code": pt.best_code,
            "H_L_given_S": pt.H_L_given_S, "improved": pt.improved,
        }
        for pt in env
    ]
    _emit(rows, ENVELOPE_COLUMNS, args)

    codes_out = args.codes_out
    if codes_out is None and args.out not in (None, "-"):
        codes_out = str(Path(args.out).with_suffix("")) + ".codes.json"
    if codes_out:
        best = [
            {
                "code": pt.best_code, "n": pt.n, "k": pt.k,
                "r_X": shape_of[pt.best_code].r_x, "rate": pt.R_ind_best,
                "p": pt.p, "R_hash": pt.R_hash, "improved": pt.improved,
            }
            for pt in env
            if pt.best_code is not None
        ]
        doc = {"run": _run_echo(args), "candidates": emitted, "distinct": len(codes), "best_codes": best}
        _write(json.dumps(doc, indent=2) + "\n", codes_out)
    return 0


def cmd_threshold(args) -> int:
    spec = parse_channel(args.channel)
    if not spec.is_family:
        raise ValueError("threshold needs a skewed channel family (skewed:eta=<float>)")
    rows = []
    for text in args.code:
        res = improvement_threshold(parse_code(text), spec.eta, args.p_lo, args.p_hi, args.tol, args.method)
        rows.append(
            {"code": text, "n": res.n, "k": res.k, "eta": spec.eta, "p_star": res.p_star, "bracket": res.bracket}
        )
    _emit(rows, THRESHOLD_COLUMNS, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inducedrate",
        description="Induced hashing rates of stabilizer transforms on Pauli channels.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--channel", required=True, help="'pI,pX,pY,pZ' or 'skewed:eta=<float>[,p=<float>]'")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("-v", "--verbose", action="store_true")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--p", type=float, action="append", help="total error probability (repeatable)")
    grid.add_argument(
        "--p-grid",
        help="lo:hi:count, endpoints inclusive (default {}:{}:{} for skewed channels)".format(*DEFAULT_GRID),
    )

    method = argparse.ArgumentParser(add_help=False)
    method.add_argument(
        "--method", default="auto",
        choices=("auto", "streaming", "binning", "coordinates", "convolution"),
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hashing", parents=[common, grid], help="baseline hashing bound")
    p.set_defaults(func=cmd_hashing)

    p = sub.add_parser("eval", parents=[common, grid, method], help="induced rate of given codes")
    p.add_argument("--code", action="append", required=True, help="'ZZI,IZZ', 'allz:n=5' or 'zrep:n=5'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("search", parents=[common, grid, method], help="search standard forms, emit envelope")
    p.add_argument("--nmin", type=int, default=2)
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--T", type=int, default=10**6, help="max fillings for exhaustive enumeration")
    p.add_argument("--sample-count", type=int, default=10**4)
    p.add_argument("--codes-out", default=None, help="best-codes JSON path")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("threshold", parents=[common, method], help="smallest p with improvement")
    p.add_argument("--code", action="append", required=True)
    p.add_argument("--p-lo", type=float, required=True)
    p.add_argument("--p-hi", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_threshold)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        if args.threads < 1:
            raise ValueError("--threads must be at least 1")
        from ._kernels import set_threads

        set_threads(args.threads)
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - reported as a single machine-readable line
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
