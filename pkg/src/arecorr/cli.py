"""Command-line front end: efficiency tables, bound coefficients,
invariant verification, Monte Carlo reports, and reduction diagnostics.

Output is CSV (default), JSON mirroring the CSV fields, or, for
`verify`, line-oriented text.  All output is locale-independent with
'.' decimals and LF line endings; identical flags and seed give
byte-identical output.  Exit codes: 0 success, 1 verification failure,
2 usage error.

The worker count for Monte Carlo fan-out comes from the environment
variable ARECORR_WORKERS (default 1); results do not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .are_bounds import are, crossover, endpoint_constants, pair, quad_bounds
from .errors import DomainError, Indeterminate
from .reduction import build_chain_rt, classify_monotone, classify_sign, rho_tilde
from .stats_mc import DEFAULT_SEED, mc_moments
from .verify import MIN_GRID, run_checks

__all__ = ["main", "run"]

_PAIR_CHOICES = ("rt", "ts", "rs", "all")
_ANCHOR_CHOICES = ("0", "1", "both")


class _UsageError(Exception):
    pass


def _parse_rho_list(text: str) -> list[float]:
    out = []
    for tokraw in text.split(","):
        tok = tokraw.strip()
        if not tok:
            raise _UsageError(f"empty entry in --rho list {text!r}")
        try:
            v = float(tok)
        except ValueError:
            raise _UsageError(f"--rho entry {tok!r} is not a number") from None
        if not abs(v) < 1.0:
            raise _UsageError(f"--rho entry {v!r} must satisfy |rho| < 1")
        out.append(v)
    return out


def _selected_pairs(flag: str) -> list[str]:
    return ["RT", "TS", "RS"] if flag == "all" else [flag.upper()]


def _selected_anchors(flag: str) -> list[int]:
    return [0, 1] if flag == "both" else [int(flag)]


def _workers_from_env() -> int:
    raw = os.environ.get("ARECORR_WORKERS", "1")
    try:
        w = int(raw)
    except ValueError:
        raise _UsageError(f"ARECORR_WORKERS={raw!r} is not an integer") from None
    if w < 1:
        raise _UsageError(f"ARECORR_WORKERS must be >= 1, got {w}")
    return w


def _render(rows: list[dict], fieldnames: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _cmd_table(args) -> int:
    if args.grid < 2:
        raise _UsageError(f"--grid must be >= 2, got {args.grid}")
    pairs = {tag: pair(tag) for tag in ("RT", "TS", "RS")}
    rows = []
    for j in range(1, args.grid + 1):
        x = j / (args.grid + 1)
        rows.append(
            {
                "x": x,
                "are_rt": are(pairs["RT"], x),
                "are_ts": are(pairs["TS"], x),
                "are_rs": are(pairs["RS"], x),
            }
        )
    _write_out(_render(rows, ["x", "are_rt", "are_ts", "are_rs"], args.format), args.out)
    return 0


def _cmd_bounds(args) -> int:
    rows = []
    for tag in _selected_pairs(args.pair):
        p = pair(tag)
        ep = endpoint_constants(p)
        cross_l = crossover(p, "L")
        cross_u = crossover(p, "U")
        for a in _selected_anchors(args.anchor):
            lower, upper = quad_bounds(p, a)
            rows.append(
                {
                    "pair": tag,
                    "anchor": a,
                    "b": ep.are_at_0 if a == 0 else ep.are_at_1,
                    "c": 0.0 if a == 0 else ep.dare_at_1,
                    "q_low": lower.q,
                    "q_high": upper.q,
                    "crossover_l": cross_l,
                    "crossover_u": cross_u,
                }
            )
    names = ["pair", "anchor", "b", "c", "q_low", "q_high", "crossover_l", "crossover_u"]
    _write_out(_render(rows, names, args.format), args.out)
    return 0


def _cmd_verify(args) -> int:
    if args.grid < MIN_GRID:
        raise _UsageError(
            f"--grid {args.grid} is too coarse for sign refinement; need >= {MIN_GRID}"
        )
    if not args.tol > 0.0:
        raise _UsageError(f"--tol must be > 0, got {args.tol}")
    results = run_checks(grid=args.grid, tol=args.tol)
    if args.format == "text":
        lines = [
            f"{r.name}: {'pass' if r.passed else 'FAIL'}  margin={r.margin!r}"
            for r in results
        ]
        ok = all(r.passed for r in results)
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
        _write_out("\n".join(lines) + "\n", args.out)
    else:
        rows = [
            {
                "name": r.name,
                "passed": r.passed,
                "margin": r.margin,
                "detail": r.detail,
            }
            for r in results
        ]
        ok = all(r.passed for r in results)
        _write_out(
            _render(rows, ["name", "passed", "margin", "detail"], args.format), args.out
        )
    return 0 if ok else 1


def _cmd_mc(args) -> int:
    if args.reps < 100:
        raise _UsageError(f"--reps must be >= 100, got {args.reps}")
    if args.n < 10:
        raise _UsageError(f"--n must be >= 10, got {args.n}")
    rhos = _parse_rho_list(args.rho)
    workers = _workers_from_env()
    rows = []
    for stat in ("R", "S", "T"):
        for rho in rhos:
            rep = mc_moments(
                stat, rho, n=args.n, reps=args.reps, seed=args.seed, workers=workers
            )
            rows.append(
                {
                    "stat": rep.stat,
                    "rho": rep.rho,
                    "n": rep.n,
                    "reps": rep.reps,
                    "mean_hat": rep.mean_hat,
                    "var_hat_scaled": rep.var_hat_scaled,
                    "se_mean": rep.se_mean,
                    "se_var": rep.se_var,
                    "cdf_sup_dist": rep.cdf_sup_dist,
                    "seed": rep.seed,
                }
            )
    names = [
        "stat",
        "rho",
        "n",
        "reps",
        "mean_hat",
        "var_hat_scaled",
        "se_mean",
        "se_var",
        "cdf_sup_dist",
        "seed",
    ]
    _write_out(_render(rows, names, args.format), args.out)
    return 0


def _fmt_breaks(points: tuple[float, ...]) -> str:
    return ";".join(repr(b) for b in points)


def _cmd_reduce(args) -> int:
    if args.pair != "rt":
        raise _UsageError(
            "only --pair rt is supported: published multiplier chains for the "
            "other pairs are not available"
        )
    if args.grid < MIN_GRID:
        raise _UsageError(
            f"--grid {args.grid} is too coarse for sign refinement; need >= {MIN_GRID}"
        )
    rows = []
    xs = [j / (args.grid + 1) for j in range(1, args.grid + 1)]
    for a in _selected_anchors(args.anchor):
        chain = build_chain_rt(a)
        for node in chain:
            f_sp = classify_sign(node.f, 0.0, 1.0, args.grid)
            g_sp = classify_sign(node.g, 0.0, 1.0, args.grid)
            try:
                r_mp = classify_monotone(node.r_jetfun(), 0.0, 1.0, args.grid)
                r_sym, r_brk = r_mp.symbols, _fmt_breaks(r_mp.breakpoints)
            except (Indeterminate, ZeroDivisionError, OverflowError):
                r_sym, r_brk = "", ""
            try:
                rt0 = repr(rho_tilde(node, 1e-6))
            except DomainError:
                rt0 = ""
            rows.append(
                {
                    "anchor": a,
                    "node": node.index,
                    "f_pattern": f_sp.symbols,
                    "f_breakpoints": _fmt_breaks(f_sp.breakpoints),
                    "g_pattern": g_sp.symbols,
                    "g_breakpoints": _fmt_breaks(g_sp.breakpoints),
                    "r_pattern": r_sym,
                    "r_breakpoints": r_brk,
                    "min_abs_f": min(abs(node.f(x)) for x in xs),
                    "min_abs_g": min(abs(node.g(x)) for x in xs),
                    "rho_tilde_0": rt0,
                }
            )
    names = [
        "anchor",
        "node",
        "f_pattern",
        "f_breakpoints",
        "g_pattern",
        "g_breakpoints",
        "r_pattern",
        "r_breakpoints",
        "min_abs_f",
        "min_abs_g",
        "rho_tilde_0",
    ]
    _write_out(_render(rows, names, args.format), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arecorr",
        description="Efficiency curves, quadratic bounds, and Monte Carlo "
        "checks for the three classical correlation statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(sp, formats=("csv", "json")) -> None:
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--format", choices=formats, default=formats[0])

    sp = sub.add_parser("table", help="efficiency curves on an interior grid")
    sp.add_argument("--grid", type=int, default=999)
    add_io(sp)
    sp.set_defaults(fn=_cmd_table)

    sp = sub.add_parser("bounds", help="quadratic bound coefficients + crossovers")
    sp.add_argument("--pair", choices=_PAIR_CHOICES, default="all")
    sp.add_argument("--anchor", choices=_ANCHOR_CHOICES, default="both")
    add_io(sp)
    sp.set_defaults(fn=_cmd_bounds)

    sp = sub.add_parser("verify", help="run the named invariant suites")
    sp.add_argument("--grid", type=int, default=999)
    sp.add_argument("--tol", type=float, default=1e-10)
    add_io(sp, formats=("text", "csv", "json"))
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("mc", help="Monte Carlo moment and normality report")
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--reps", type=int, default=4000)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--rho", default="0.0,0.5,0.9", help="comma-separated values")
    add_io(sp)
    sp.set_defaults(fn=_cmd_mc)

    sp = sub.add_parser("reduce", help="reduction-chain diagnostics (RT only)")
    sp.add_argument("--pair", choices=_PAIR_CHOICES, default="rt")
    sp.add_argument("--anchor", choices=_ANCHOR_CHOICES, default="both")
    sp.add_argument("--grid", type=int, default=999)
    add_io(sp)
    sp.set_defaults(fn=_cmd_reduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _UsageError as exc:
        print(f"arecorr: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"arecorr: i/o error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())
