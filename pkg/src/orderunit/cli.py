"""Command-line front end.

    orderunit check-nou --p inf --dim 4 --unit 1,-1,1,1
    orderunit sweep --p 1.25,1.5,2,3 --dim 4 --budget 10000
    orderunit adjoin --v r1 --x l2:3
    orderunit order-norm --p 1 --dim 4 --unit e1 --x 0.3,-0.2,0.1,0

Exit codes: 0 verified / all checks passed, 1 falsified / a check failed,
2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .adjoin import (
    AdjoinedOUS,
    adjoin_order_unit,
    canopy_periphery_membership,
    iterate_adjoin_l1,
    order_norm_equals_l1_check,
    periphery_equivalence_check,
    periphery_samples,
    single_shot_l1,
)
from .nou import Status, check_nou, default_workers, p_sweep, verify_exact
from .norms import DELTA, EPS, INF, Lp, basis, norm, parse_exponent, sphere_batch
from .order import cone_margins, from_norming_unit, l1_ice, linf_natural, order_unit_norm, reals
from .report import SCHEMA_VERSION, Report, fmt_real, to_jsonable
from .states import dual_cone_check, pure_states_product_check, state_space, vertices


class UsageError(Exception):
    """Bad command-line input (exit code 2)."""


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def parse_unit(text: str, dim: int) -> np.ndarray:
    """Comma-separated decimals, ``e<k>`` / ``-e<k>`` (1-based) or ``sign:+-+``."""
    t = text.strip()
    if t.startswith("sign:"):
        pattern = t[5:]
        if len(pattern) != dim or any(c not in "+-" for c in pattern):
            raise UsageError(f"sign pattern must have {dim} characters from '+-'")
        return np.array([1.0 if c == "+" else -1.0 for c in pattern])
    sign = 1.0
    if t.startswith("-e") or t.startswith("+e"):
        sign = -1.0 if t[0] == "-" else 1.0
        t = t[1:]
    if t.startswith("e") and t[1:].isdigit():
        k = int(t[1:])
        if not 1 <= k <= dim:
            raise UsageError(f"coordinate index out of range: {text}")
        return basis(dim, k - 1, sign)
    return parse_vector(text, dim)


def parse_vector(text: str, dim: int) -> np.ndarray:
    try:
        v = np.array([float(s) for s in text.split(",") if s.strip() != ""])
    except ValueError as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc
    if v.shape[0] != dim:
        raise UsageError(f"expected {dim} entries, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise UsageError("vector entries must be finite")
    return v


def _lp(p_text: str, dim: int) -> Lp:
    try:
        return Lp(dim, parse_exponent(p_text))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _normalized_unit(space: Lp, e: np.ndarray) -> np.ndarray:
    n = norm(space, e)
    if n == 0:
        raise UsageError("candidate unit must be nonzero")
    if abs(n - 1.0) > 1e-12:
        print(f"warning: candidate normalised (norm was {n:.17g})", file=sys.stderr)
        e = e / n
    return e


def _family(text: str, role: str):
    t = text.strip().lower()
    if role == "v":
        if t == "r1":
            return reals()
        kind, _, n = t.partition(":")
        if not n.isdigit() or int(n) < 1:
            raise UsageError(f"bad V family {text!r}")
        if kind == "linf":
            return linf_natural(int(n))
        if kind == "l1":
            return l1_ice(int(n))
        raise UsageError(f"unsupported V family {text!r}")
    if t == "r":
        return Lp(1, 1.0)
    kind, _, m = t.partition(":")
    if not m.isdigit():
        raise UsageError(f"bad X family {text!r}")
    p = {"l1": 1.0, "l2": 2.0, "linf": INF}.get(kind)
    if p is None:
        raise UsageError(f"unsupported X family {text!r}")
    return Lp(int(m), p)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_check_nou(args) -> tuple[dict, int]:
    space = _lp(args.p, args.dim)
    e = _normalized_unit(space, parse_unit(args.unit, args.dim))
    verdict = check_nou(space, e, seed=args.seed, budget=args.budget)
    code = 1 if verdict.status is Status.FALSIFIED else 0
    rows = [
        {
            "space": str(space),
            "status": verdict.status.value,
            "lambda_star": fmt_real(verdict.witness.lambda_star) if verdict.witness else "",
            "consequent_value": fmt_real(verdict.witness.consequent_value) if verdict.witness else "",
            "witness_x": " ".join(fmt_real(t) for t in verdict.witness.x) if verdict.witness else "",
        }
    ]
    anchor = {
        Status.VERIFIED_EXACT: "closed-form classification of norming order units",
        Status.FALSIFIED: "witness violating the norming-order-unit implication",
        Status.VERIFIED_STATISTICAL: "no witness within the sampling budget",
    }[verdict.status]
    return {"verdict": verdict, "anchor": anchor, "rows": rows}, code


def cmd_sweep(args) -> tuple[dict, int]:
    try:
        grid = [float(s) for s in args.p.split(",") if s.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad p grid {args.p!r}") from exc
    if any(not (1.0 < p < float("inf")) for p in grid):
        raise UsageError("every sweep exponent must lie in (1, inf)")
    workers = args.workers if args.workers is not None else default_workers()
    rep = p_sweep(grid, args.dim, args.candidates, args.budget, args.seed, workers=workers)
    rows = [
        {k: r[k] for k in ("p", "dim", "candidates", "witnesses", "survivors", "verdict")}
        for r in rep.data["per_p"]
    ]
    return {"report": rep, "rows": rows}, 0 if rep.passed else 1


def _lorentz_report(A: AdjoinedOUS, seed: int, count: int) -> Report:
    rng = np.random.default_rng(seed)
    rep = Report("lorentz_equivalence", "adjoining a Hilbert space to (R,1) gives a spin factor", sampled=True)
    Z = rng.standard_normal((count, A.dim))
    inside = cone_margins(A.composite, Z) >= -EPS
    lor = Z[:, 0] >= np.linalg.norm(Z[:, 1:], axis=1) - EPS
    bad = np.flatnonzero(inside != lor)
    for i in bad:
        rep.fail(z=Z[i])
    rep.data.update(count=count, disagreements=int(len(bad)), inside=int(inside.sum()))
    return rep


def _iterate_report(n: int, seed: int, count: int) -> Report:
    rng = np.random.default_rng(seed)
    it, one = iterate_adjoin_l1(n), single_shot_l1(n)
    ice = l1_ice(n + 1)
    rep = Report("iterate_vs_single_shot", "l_1^(n+1) from repeated adjoining of R to (R,1)", sampled=True)
    Z = rng.standard_normal((count, n + 1))
    a = cone_margins(it.composite, Z) >= -EPS
    b = cone_margins(one.composite, Z) >= -EPS
    c = cone_margins(ice, Z) >= -EPS
    bad = np.flatnonzero((a != b) | (a != c))
    for i in bad:
        rep.fail(z=Z[i])
    rep.data.update(n=n, count=count, disagreements=int(len(bad)))
    return rep


def _canopy_spot_checks(A: AdjoinedOUS, seed: int, count: int) -> Report:
    V = A.V
    if V.provenance.startswith("linf") or V.provenance == "(R, 1)":
        pts = np.vstack(
            [
                periphery_samples(A, seed, count),
                np.random.default_rng(seed + 1).standard_normal((count, A.dim)),
            ]
        )
        rep = periphery_equivalence_check(A, pts)
    else:
        pts = np.random.default_rng(seed).standard_normal((count, A.dim))
        rep = periphery_equivalence_check(A, pts)
    v = canopy_periphery_membership(A, V.unit, np.zeros(A.X.dim))
    rep.data["unit"] = {"in_canopy": v.in_canopy, "in_periphery": v.in_periphery}
    if not v.in_canopy or v.in_periphery:
        rep.fail(reason="unit should be in the canopy and not in the periphery")
    return rep


def cmd_adjoin(args) -> tuple[dict, int]:
    V = _family(args.v, "v")
    X = _family(args.x, "x")
    reports: list[Report] = []
    if args.iterate:
        if args.v.lower() != "r1" or X.p != 1.0:
            raise UsageError("--iterate needs --v r1 and an l1 family for --x")
        reports.append(_iterate_report(X.dim, args.seed, args.count * 10))
    if args.pure_states and not (X.p == 1.0 or X.p is INF or X.dim == 1):
        raise UsageError("--pure-states needs an l1 or linf family for --x")
    A = adjoin_order_unit(V, X)
    reports.append(order_norm_equals_l1_check(A, args.seed, args.count, tol=1e-6))
    reports.append(_canopy_spot_checks(A, args.seed, args.count))
    if V.provenance == "(R, 1)" and X.p == 2.0:
        reports.append(_lorentz_report(A, args.seed, args.count * 10))
    if vertices(state_space(V)) is not None:
        reports.append(dual_cone_check(A, args.seed, args.count))
    if args.pure_states:
        reports.append(pure_states_product_check(A))
    ok = all(r.passed for r in reports)
    rows = [
        {"check": r.name, "passed": r.passed, "sampled": r.sampled, "anchor": r.anchor}
        for r in reports
    ]
    return {"composite": A.composite.provenance, "reports": reports, "rows": rows}, 0 if ok else 1


def cmd_order_norm(args) -> tuple[dict, int]:
    space = _lp(args.p, args.dim)
    e = _normalized_unit(space, parse_unit(args.unit, args.dim))
    v = verify_exact(space, e)
    if v is None:
        raise UsageError("order-norm needs a verified unit (sign vector in l_inf, +-e_k in l_1)")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    ous = from_norming_unit(space, e)
    queries = [parse_vector(t, args.dim) for t in (args.x or [])]
    if args.file:
        for line in Path(args.file).read_text(encoding="utf-8").splitlines():
            if line.strip() and not line.lstrip().startswith("#"):
                queries.append(parse_vector(line, args.dim))
    if not queries:
        raise UsageError("no query vectors given (--x or --file)")
    rows, worst = [], 0.0
    for x in queries:
        o = order_unit_norm(ous, x, tol=min(args.tol, 1e-10))
        ref = norm(space, x)
        diff = abs(o - ref)
        worst = max(worst, diff)
        rows.append(
            {
                "x": " ".join(fmt_real(t) for t in x),
                "order_unit_norm": fmt_real(o),
                "norm": fmt_real(ref),
                "abs_difference": fmt_real(diff),
            }
        )
    result = {
        "anchor": "the norming order unit recovers the norm as the order-unit norm",
        "tol": args.tol,
        "max_abs_difference": worst,
        "queries": rows,
        "rows": rows,
    }
    return result, 1 if worst > args.tol else 0


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orderunit", description=__doc__.splitlines()[1].strip() or None)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument(
            "--verdict-only",
            action="store_true",
            help="omit the runtime block so output is byte-identical across runs",
        )

    p = sub.add_parser("check-nou", help="decide or falsify a norming order unit in l_p^n")
    p.add_argument("--p", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--unit", required=True)
    p.add_argument("--budget", type=int, default=10_000)
    common(p)
    p.set_defaults(func=cmd_check_nou)

    p = sub.add_parser("sweep", help="search for norming order units across l_p, 1 < p < inf")
    p.add_argument("--p", required=True, help="comma-separated exponents")
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--candidates", type=int, default=20)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=None, help="default: $OUL_THREADS or all cores")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("adjoin", help="adjoin a normed space to an order unit space")
    p.add_argument("--v", required=True, help="r1 | linf:n | l1:n")
    p.add_argument("--x", required=True, help="r | l1:m | l2:m | linf:m")
    p.add_argument("--iterate", action="store_true")
    p.add_argument("--pure-states", action="store_true")
    p.add_argument("--count", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_adjoin)

    p = sub.add_parser("order-norm", help="order-unit norm induced by a verified unit")
    p.add_argument("--p", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--unit", required=True)
    p.add_argument("--x", action="append", help="query vector (repeatable)")
    p.add_argument("--file", help="file with one comma-separated vector per line")
    p.add_argument("--tol", type=float, default=1e-6)
    common(p)
    p.set_defaults(func=cmd_order_norm)
    return ap


def _config(args) -> dict[str, Any]:
    skip = {"func", "out", "format", "verdict_only"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render(args, result: dict, code: int, elapsed: float) -> str:
    if args.format == "csv":
        rows = result.get("rows", [])
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\r\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: to_jsonable(v) for k, v in r.items()})
        return buf.getvalue()
    doc = {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "tolerances": {"eps": EPS, "delta": DELTA},
        "exit_code": code,
        "result": {k: v for k, v in result.items() if k != "rows"},
    }
    if not args.verdict_only:
        doc["runtime"] = {"wall_clock_s": round(elapsed, 6)}
    return json.dumps(to_jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    t0 = time.perf_counter()
    try:
        result, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(args, result, code, time.perf_counter() - t0)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
