"""Command-line front end.

Usage::

    nthneighbour exact --dim 2 --n 1 --points 2
    nthneighbour table --dim 3 --points 1000 --max-index 20 --format csv
    nthneighbour simulate --dim 2 --n 1 --points 50 --engines spatial,chain
    nthneighbour error-analysis --dim 50 --n 10 --points 1000

Floats are written in shortest round-trip form, so every value parses back
to the identical double.  ``simulate`` output depends only on its flags;
wall-clock times are added only with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import formulas, sim
from ._backend import BACKEND
from .errors import NthNeighbourError
from .params import ProblemParams
from .rng import ALGORITHM, SEED_MAX

BUNDLE_FIELDS = (
    "exact",
    "heuristic",
    "asymptotic_large_n_points",
    "asymptotic_full",
    "mean_volume_estimate",
    "mean_enclosed_volume",
    "error",
)
APPROXIMATIONS = ("heuristic", "asymptotic_large_n_points", "asymptotic_full", "mean_volume_estimate")
EXACT_COLUMNS = ("dim", "n", "points") + BUNDLE_FIELDS
TABLE_COLUMNS = EXACT_COLUMNS + tuple(f"rel_dev_{name}" for name in APPROXIMATIONS)
ERROR_COLUMNS = ("dim", "n", "points", "error", "rescaled_error", "harmonic_form", "log_form")
SIMULATE_COLUMNS = (
    "dim", "n", "points", "engine", "trials", "seed", "rng", "backend",
    "mean", "standard_error", "exact", "z_score",
)


class UsageError(Exception):
    """Invalid flag value; the message names the flag and the constraint."""


def _bundle_record(p: ProblemParams) -> dict:
    b = formulas.bundle(p)
    return {
        "dim": p.dim,
        "n": p.n,
        "points": p.N,
        "exact": b.exact,
        "heuristic": b.heuristic,
        "asymptotic_large_n_points": b.asymptotic_large_N,
        "asymptotic_full": b.asymptotic_full,
        "mean_volume_estimate": b.mean_volume_estimate,
        "mean_enclosed_volume": b.mean_enclosed_volume,
        "error": b.error,
    }


def cmd_exact(args) -> dict:
    return _bundle_record(_params(args))


def cmd_table(args) -> list[dict]:
    dim, points = _require(args, "dim"), _require(args, "points")
    max_index = args.max_index if args.max_index is not None else min(10, points - 1)
    _check(dim >= 1, f"--dim must be >= 1 (D >= 1), got {dim}")
    _check(points >= 2, f"--points must be >= 2 (N >= 2), got {points}")
    _check(max_index >= 1, f"--max-index must be >= 1, got {max_index}")
    _check(max_index < points, f"--max-index must be less than --points (n < N), got {max_index} >= {points}")
    rows = []
    for n in range(1, max_index + 1):
        row = _bundle_record(ProblemParams(dim, n, points))
        for name in APPROXIMATIONS:
            row[f"rel_dev_{name}"] = row[name] / row["exact"] - 1.0
        rows.append(row)
    return rows


def cmd_error_analysis(args) -> list[dict]:
    p = _params(args)
    rows = []
    for dim in range(1, p.dim + 1):
        q = ProblemParams(dim, p.n, p.N)
        harmonic_form, log_form = formulas.estimate_error_large_D_approx(q)
        rows.append({
            "dim": dim,
            "n": q.n,
            "points": q.N,
            "error": formulas.estimate_error_exact(q),
            "rescaled_error": formulas.rescaled_error_exact(q),
            "harmonic_form": harmonic_form,
            "log_form": log_form,
        })
    return rows


def cmd_simulate(args) -> dict:
    p = _params(args)
    _check(args.trials >= 2, f"--trials must be >= 2, got {args.trials}")
    _check(0 <= args.seed <= SEED_MAX, f"--seed must be an unsigned 64-bit integer, got {args.seed}")
    engines = _engines(args.engines)
    exact = formulas.exact_mean_distance(p)
    records = []
    for engine in engines:
        start = time.perf_counter()
        stats = sim.run_engine(p, args.trials, engine, seed=args.seed, workers=args.workers)
        elapsed = time.perf_counter() - start
        rec = {
            "engine": engine,
            "trials": stats.count,
            "seed": args.seed,
            "rng": ALGORITHM,
            "backend": BACKEND,
            "mean": stats.mean,
            "standard_error": stats.standard_error,
            "z_score": (stats.mean - exact) / stats.standard_error,
        }
        if args.timing:
            rec["wall_time_s"] = elapsed
        records.append(rec)
    return {"dim": p.dim, "n": p.n, "points": p.N, "exact": exact, "engines": records}


def _check(ok: bool, message: str) -> None:
    if not ok:
        raise UsageError(message)


def _require(args, name: str) -> int:
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for '{args.command}'")
    return value


def _params(args) -> ProblemParams:
    dim, n, points = _require(args, "dim"), _require(args, "n"), _require(args, "points")
    _check(dim >= 1, f"--dim must be >= 1 (D >= 1), got {dim}")
    _check(n >= 1, f"--n must be >= 1 (n >= 1), got {n}")
    _check(n < points, f"--n must be less than --points (n < N), got n={n}, N={points}")
    return ProblemParams(dim, n, points)


def _engines(spec: str) -> list[str]:
    names = [s.strip() for s in spec.split(",") if s.strip()]
    _check(bool(names), "--engines must name at least one engine")
    for name in names:
        _check(name in sim.ENGINES, f"--engines: unknown engine {name!r}; choose from {','.join(sim.ENGINES)}")
    return list(dict.fromkeys(names))


def _csv_text(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buf.getvalue()


def render(command: str, result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2) + "\n"
    if command == "exact":
        return _csv_text([result], EXACT_COLUMNS)
    if command == "table":
        return _csv_text(result, TABLE_COLUMNS)
    if command == "error-analysis":
        return _csv_text(result, ERROR_COLUMNS)
    rows = [{**{k: result[k] for k in ("dim", "n", "points", "exact")}, **rec} for rec in result["engines"]]
    columns = SIMULATE_COLUMNS + (("wall_time_s",) if rows and "wall_time_s" in rows[0] else ())
    return _csv_text(rows, columns)


COMMANDS = {
    "exact": cmd_exact,
    "table": cmd_table,
    "simulate": cmd_simulate,
    "error-analysis": cmd_error_analysis,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="Euclidean dimension D (for error-analysis: largest D swept)")
    common.add_argument("--n", type=int, help="neighbour index n")
    common.add_argument("--points", type=int, help="points per unit volume N, reference point included")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write to this file instead of standard output")

    parser = argparse.ArgumentParser(
        prog="nthneighbour",
        description="Mean distance to the n-th nearest neighbour among N uniform random points in D dimensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("exact", parents=[common], help="all closed-form estimates for one (D, n, N)")
    table = sub.add_parser("table", parents=[common], help="estimates for n = 1..max-index")
    table.add_argument("--max-index", type=int, help="largest neighbour index (default min(10, N-1))")
    simulate = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimates against the exact value")
    simulate.add_argument("--trials", type=int, default=100_000)
    simulate.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed (default 0)")
    simulate.add_argument("--engines", default=",".join(sim.ENGINES), help="comma list of spatial,absolute,chain")
    simulate.add_argument("--workers", type=int, default=None, help="worker threads; results do not depend on it")
    simulate.add_argument("--timing", action="store_true", help="include wall-clock time per engine")
    sub.add_parser("error-analysis", parents=[common], help="mean-volume estimate error for D = 1..dim")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except (UsageError, NthNeighbourError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    text = render(args.command, result, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
