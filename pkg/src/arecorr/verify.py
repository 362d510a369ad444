"""Named invariant suites over the whole package, for the CLI and tests.

Each check gets a stable dotted name, a pass flag, and a worst signed
margin (positive slack means pass; for tolerance-style checks the
margin is tolerance minus the worst observed deviation).  The grid is
the interior scheme x_j = j/(grid+1), j = 1..grid, on (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .are_bounds import (
    are,
    are_from_moments,
    endpoint_constants,
    pair,
    q,
    quad_bounds,
    quartic_bounds_rs,
)
from .reduction import build_chain_rt, classify_sign, rho_tilde

__all__ = ["CheckResult", "run_checks", "MIN_GRID", "ENDPOINT_TOL"]

# Coarser grids cannot resolve the sign patterns whose roots sit ~0.02
# apart, so the suite refuses them.
MIN_GRID = 99

# Fixed comparison tolerance for the closed-form endpoint constants.
ENDPOINT_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""


def _closed_forms() -> dict[tuple[str, int], float]:
    s5 = math.sqrt(5.0)
    return {
        ("RT", 0): math.pi**2 / 9.0,
        ("RT", 1): 2.0 * math.pi * math.sqrt(3.0) / 9.0,
        ("TS", 0): 1.0,
        ("TS", 1): 9.0 * math.sqrt(3.0) * (11.0 * s5 - 15.0) / (40.0 * math.pi),
        ("RS", 0): math.pi**2 / 9.0,
        ("RS", 1): 3.0 * (11.0 * s5 - 15.0) / 20.0,
    }


def _strict_increase_margin(vals: list[float]) -> float:
    return min(b - a for a, b in zip(vals, vals[1:]))


def run_checks(grid: int = 999, tol: float = 1e-10) -> list[CheckResult]:
    """Run every named invariant; returns one CheckResult per name."""
    if grid < MIN_GRID:
        raise ValueError(f"grid must be >= {MIN_GRID}, got {grid!r}")
    if not (tol > 0.0):
        raise ValueError(f"tol must be > 0, got {tol!r}")
    xs = [j / (grid + 1) for j in range(1, grid + 1)]
    results: list[CheckResult] = []

    # --- endpoint constants against closed forms --------------------------
    closed = _closed_forms()
    for tag in ("RT", "TS", "RS"):
        ep = endpoint_constants(pair(tag))
        for a, got in ((0, ep.are_at_0), (1, ep.are_at_1)):
            diff = abs(got - closed[(tag, a)])
            results.append(
                CheckResult(
                    name=f"endpoints.closed_form.{tag}.{a}",
                    passed=diff <= ENDPOINT_TOL,
                    margin=ENDPOINT_TOL - diff,
                    detail=f"|{got!r} - {closed[(tag, a)]!r}| = {diff:.3e}",
                )
            )

    # --- efficiency curves and their second differences -------------------
    are_vals: dict[str, list[float]] = {}
    for tag in ("RT", "TS", "RS"):
        p = pair(tag)
        vals = [are(p, x) for x in xs]
        are_vals[tag] = vals
        margin = _strict_increase_margin(vals)
        results.append(
            CheckResult(
                name=f"are.monotone.{tag}",
                passed=margin > 0.0,
                margin=margin,
                detail=f"min grid step {margin:.3e}",
            )
        )

    for tag in ("RT", "TS", "RS"):
        p = pair(tag)
        for a in (0, 1):
            qs = [q(p, a, x) for x in xs]
            margin = _strict_increase_margin(qs)
            results.append(
                CheckResult(
                    name=f"theorem1.q_monotone.{tag}.{a}",
                    passed=margin > 0.0,
                    margin=margin,
                    detail=f"min grid step {margin:.3e}",
                )
            )
            lower, upper = quad_bounds(p, a)
            lo_lim, hi_lim = lower.q, upper.q
            margin = min(min(v - lo_lim for v in qs), min(hi_lim - v for v in qs))
            results.append(
                CheckResult(
                    name=f"theorem1.q_range.{tag}.{a}",
                    passed=margin > 0.0,
                    margin=margin,
                    detail=f"q in ({lo_lim:.6f}, {hi_lim:.6f})",
                )
            )

    # --- quadratic sandwich and quartic refinement -------------------------
    for tag in ("RT", "TS", "RS"):
        p = pair(tag)
        for a in (0, 1):
            lower, upper = quad_bounds(p, a)
            margin = min(
                min(v - lower(x) for x, v in zip(xs, are_vals[tag])),
                min(upper(x) - v for x, v in zip(xs, are_vals[tag])),
            )
            results.append(
                CheckResult(
                    name=f"bounds.sandwich.{tag}.{a}",
                    passed=margin > 0.0,
                    margin=margin,
                    detail=f"min slack {margin:.3e}",
                )
            )

    for a in (0, 1):
        lo_rt, up_rt = quad_bounds(pair("RT"), a)
        lo_ts, up_ts = quad_bounds(pair("TS"), a)
        lo_rs, up_rs = quad_bounds(pair("RS"), a)
        margin = math.inf
        for x, v in zip(xs, are_vals["RS"]):
            ltilde = lo_rt(x) * lo_ts(x)
            utilde = up_rt(x) * up_ts(x)
            margin = min(
                margin,
                ltilde - lo_rs(x),
                v - ltilde,
                utilde - v,
                up_rs(x) - utilde,
            )
        results.append(
            CheckResult(
                name=f"bounds.quartic.RS.{a}",
                passed=margin > 0.0,
                margin=margin,
                detail=f"min slack in quartic chain {margin:.3e}",
            )
        )

    combined_margin = math.inf
    for x, v in zip(xs, are_vals["RS"]):
        lo, hi = quartic_bounds_rs(x)
        combined_margin = min(combined_margin, v - lo, hi - v)
    results.append(
        CheckResult(
            name="bounds.quartic_combined.RS",
            passed=combined_margin > 0.0,
            margin=combined_margin,
            detail=f"min slack {combined_margin:.3e}",
        )
    )

    # --- cross-pair and cross-module consistency ---------------------------
    worst = max(
        abs(rs - rt * ts)
        for rt, ts, rs in zip(are_vals["RT"], are_vals["TS"], are_vals["RS"])
    )
    results.append(
        CheckResult(
            name="factorization.identity",
            passed=worst <= tol,
            margin=tol - worst,
            detail=f"max |are_RS - are_RT*are_TS| = {worst:.3e}",
        )
    )

    for tag in ("RT", "TS", "RS"):
        p = pair(tag)
        worst = max(abs(p.f(x) / p.g(x) - are_from_moments(p, x)) for x in xs)
        results.append(
            CheckResult(
                name=f"consistency.moment_assembly.{tag}",
                passed=worst <= tol,
                margin=tol - worst,
                detail=f"max |f/g - moment assembly| = {worst:.3e}",
            )
        )

    # --- reduction chain ----------------------------------------------------
    for a in (0, 1):
        chain = build_chain_rt(a)
        node4 = chain[4]
        margin = math.inf
        for x in xs:
            margin = min(margin, -node4.f(x), -node4.g(x), node4.dr(x))
        results.append(
            CheckResult(
                name=f"reduction.endgame.RT.{a}",
                passed=margin > 0.0,
                margin=margin,
                detail="needs f4 < 0, g4 < 0, r4' > 0 on the grid",
            )
        )

    results.append(_trace_rt0(grid))
    results.append(_trace_rt1(grid))
    return results


def _pattern_checks(grid: int, cases: list[tuple[str, object, str]]) -> tuple[bool, str]:
    """Classify each named function and compare with the wanted pattern."""
    problems = []
    for name, fn, want in cases:
        got = classify_sign(fn, 0.0, 1.0, grid).symbols
        if got != want:
            problems.append(f"{name}: got {got!r}, want {want!r}")
    return (not problems, "; ".join(problems))


def _trace_rt0(grid: int) -> CheckResult:
    chain = build_chain_rt(0)
    ok, detail = _pattern_checks(
        grid,
        [
            ("g2", chain[2].g, "+-"),
            ("f2", chain[2].f, "+-"),
            ("g1", chain[1].g, "+-"),
            ("f1", chain[1].f, "+-"),
            ("g0", chain[0].g, "+"),
        ],
    )
    # Bracketing facts and the vanishing of the third stage at 0+.
    brackets = [
        -chain[2].g(0.41),
        chain[2].f(0.41),
        -chain[1].g(0.71),
        chain[1].f(0.71),
    ]
    margin = min(brackets)
    vanish = max(abs(chain[3].f(1e-6)), abs(chain[3].g(1e-6)))
    if vanish > 1e-4:
        ok = False
        detail = (detail + "; " if detail else "") + f"stage-3 at 0+ = {vanish:.3e}"
    return CheckResult(
        name="reduction.trace.RT.0",
        passed=ok and margin > 0.0,
        margin=margin if ok else -1.0,
        detail=detail or f"min bracket slack {margin:.3e}",
    )


def _trace_rt1(grid: int) -> CheckResult:
    chain = build_chain_rt(1)
    ok, detail = _pattern_checks(
        grid,
        [
            ("g3", chain[3].g, "+-"),
            ("f3", chain[3].f, "+-"),
            ("g2", chain[2].g, "+"),
            ("f2", chain[2].f, "-+"),
            ("g1", chain[1].g, "-"),
            ("g0", chain[0].g, "+"),
        ],
    )
    brackets = [
        -chain[3].g(0.6),
        chain[3].f(0.6),
        rho_tilde(chain[2], 1e-6),
    ]
    margin = min(brackets)
    return CheckResult(
        name="reduction.trace.RT.1",
        passed=ok and margin > 0.0,
        margin=margin if ok else -1.0,
        detail=detail or f"min bracket/rho_tilde slack {margin:.3e}",
    )
