"""Command-line front end: solve, verify and tabulate chain configurations.

Subcommands map one-to-one onto the library surface: ``solve`` (shooting
solver), ``critical`` (exact wall-departure force), ``density`` (histogram
plus asymptotic prediction), ``sweep`` and ``converge`` (analysis tables),
``oracle`` (descent minimizer) and ``nonunique`` (multi-start search on the
tent profile).  Output is JSON or CSV with full round-trip float precision;
model errors exit 1 with a machine-readable JSON error object, usage errors
exit 2.

Environment overrides (flags still win): COULOMB_CHAIN_TOL_REL and
COULOMB_CHAIN_MAX_ITER set the solver tolerance defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from .analysis import convergence_study, histogram, sweep
from .closed_form import Phase, asymptotic_density, critical_force
from .errors import CoulombChainError
from .minimizer import (
    MinimizeSettings,
    default_settings,
    minimize,
    multi_start_fixed_points,
    nonuniqueness_params,
)
from .model import (
    Configuration,
    Constant,
    FixedPointResult,
    ModelParams,
    PiecewiseLinear,
    Scaled,
    energy,
    uniform_configuration,
)
from .shooting import solve_fixed_point

__all__ = ["main"]


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def _env_float(name, fallback):
    raw = os.environ.get(name)
    return float(raw) if raw else fallback


def _env_int(name, fallback):
    raw = os.environ.get(name)
    return int(raw) if raw else fallback


def _parse_piecewise(text: str) -> PiecewiseLinear:
    points = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        x, _, v = chunk.partition(":")
        points.append((float(x), float(v)))
    return PiecewiseLinear(points)


def _parse_scaled(text: str) -> Scaled:
    c, _, gamma = text.partition(",")
    return Scaled(c=float(c), gamma=float(gamma))


def _parse_force(args):
    if args.force is not None:
        return Constant(args.force)
    if args.force_scaled is not None:
        return _parse_scaled(args.force_scaled)
    return _parse_piecewise(args.force_piecewise)


def _add_force_flags(p: argparse.ArgumentParser):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--force", type=float, metavar="F", help="constant force magnitude")
    group.add_argument(
        "--force-scaled", metavar="C,GAMMA", help="force c*N**gamma resolved against --n"
    )
    group.add_argument(
        "--force-piecewise",
        metavar="X:V,X:V,...",
        help="piecewise-linear breakpoints on [-L, 0]",
    )


def _add_output_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", metavar="PATH", help="write here (atomically) instead of stdout")


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument(
        "--tol-rel",
        type=float,
        default=_env_float("COULOMB_CHAIN_TOL_REL", 1e-12),
        help="relative bisection tolerance on the first gap",
    )
    p.add_argument(
        "--max-iter",
        type=int,
        default=_env_int("COULOMB_CHAIN_MAX_ITER", 200),
        help="shooting evaluation budget",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coulomb-chain",
        description="Equilibrium chains of like charges on a segment under an external force.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="shooting solver for a monotone force")
    p.add_argument("--n", type=int, required=True, help="number of gaps N")
    p.add_argument("--length", type=float, default=1.0, help="segment length L")
    _add_force_flags(p)
    _add_solver_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("critical", help="exact wall-departure force")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--length", type=float, default=1.0)
    _add_output_flags(p)

    p = sub.add_parser("density", help="empirical density vs asymptotic prediction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--bins", type=int, default=None, help="bin count (default round(sqrt(N)))")
    _add_force_flags(p)
    _add_solver_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="solve and classify a (N, L, c, gamma) grid")
    p.add_argument(
        "--grid",
        required=True,
        metavar="N,L,C,GAMMA;...",
        help="semicolon-separated grid points",
    )
    p.add_argument("--bins", type=int, default=None)
    _add_solver_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("converge", help="solver output across increasing N")
    p.add_argument("--c", type=float, required=True, help="force coefficient (0 means no force)")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--n-list", required=True, metavar="N1,N2,...")
    _add_solver_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("oracle", help="projected-gradient energy minimization")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--length", type=float, default=1.0)
    _add_force_flags(p)
    p.add_argument("--grad-tol", type=float, default=None)
    p.add_argument("--step-init", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=500_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--jitter",
        type=float,
        default=0.0,
        help="seeded relative jitter of the uniform start, in gap units",
    )
    _add_output_flags(p)

    p = sub.add_parser("nonunique", help="multi-start search on the tent profile")
    p.add_argument("--a", type=float, default=1.0, help="peak value of the base force")
    p.add_argument("--b", type=float, default=2.0, help="left slope parameter (b > a)")
    p.add_argument("--n", type=int, default=51)
    p.add_argument("--c-grid", default="2,4,8,16,32", metavar="C1,C2,...")
    p.add_argument("--n-starts", type=int, default=8)
    p.add_argument("--grad-tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)

    return parser


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _pyval(v):
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.ndarray):
        return [_pyval(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_pyval(x) for x in v]
    if isinstance(v, dict):
        return {k: _pyval(x) for k, x in v.items()}
    return v


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _render_json(payload) -> str:
    return json.dumps(_pyval(payload), indent=2, allow_nan=False) + "\n"


def _write_out(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".coulomb-chain-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _force_dict(force) -> dict:
    if isinstance(force, Constant):
        return {"kind": "constant", "value": force.value}
    if isinstance(force, Scaled):
        return {"kind": "scaled", "c": force.c, "gamma": force.gamma}
    return {"kind": "piecewise_linear", "breakpoints": [list(p) for p in force.points]}


def _params_dict(params: ModelParams) -> dict:
    return {
        "n_gaps": params.n_gaps,
        "length": params.L,
        "force": _force_dict(params.force),
    }


def _solution_payload(params: ModelParams, result: FixedPointResult) -> dict:
    return {
        "params": _params_dict(params),
        "positions": result.config.positions,
        "gaps": result.config.gaps,
        "pressures": result.config.pressures,
        "classification": result.classification.value,
        "delta1": result.delta1,
        "max_residual": result.max_residual,
        "terminal_slack": result.terminal_slack,
        "iterations": result.iterations,
    }


def _solution_table(payload: dict, extra: dict | None = None):
    extra = extra or {}
    header = (
        ["index", "position", "gap", "pressure", "classification", "delta1",
         "max_residual", "iterations", "n_gaps", "length"]
        + list(extra)
    )
    scalars = [
        payload["classification"],
        payload["delta1"],
        payload["max_residual"],
        payload["iterations"],
        payload["params"]["n_gaps"],
        payload["params"]["length"],
    ] + list(extra.values())
    rows = []
    positions = payload["positions"]
    gaps = payload["gaps"]
    pressures = payload["pressures"]
    for i, pos in enumerate(positions):
        gap = gaps[i - 1] if i > 0 else None
        pressure = pressures[i - 1] if i > 0 else None
        rows.append([i, float(pos), gap if gap is None else float(gap),
                     pressure if pressure is None else float(pressure)] + scalars)
    return header, rows


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------


def _cmd_solve(args):
    params = ModelParams(L=args.length, n_gaps=args.n, force=_parse_force(args))
    result = solve_fixed_point(params, tol_rel=args.tol_rel, max_iter=args.max_iter)
    payload = _solution_payload(params, result)
    return payload, _solution_table(payload)


def _cmd_critical(args):
    cf = critical_force(args.n, args.length)
    payload = {
        "n_gaps": args.n,
        "length": args.length,
        "exact": cf.exact,
        "asymptotic_coefficient": cf.asymptotic_coefficient,
    }
    header = list(payload)
    return payload, (header, [[payload[k] for k in header]])


def _cmd_density(args):
    force = _parse_force(args)
    params = ModelParams(L=args.length, n_gaps=args.n, force=force)
    result = solve_fixed_point(params, tol_rel=args.tol_rel, max_iter=args.max_iter)
    hist = histogram(result.config, params, args.bins)
    prediction = None
    if isinstance(force, Scaled):
        dens = asymptotic_density(force.c, force.gamma, args.length)
        if dens.phase is not Phase.DELTA_AT_ORIGIN:
            prediction = dens.density(hist.centers)
    payload = {
        "params": _params_dict(params),
        "bin_edges": hist.bin_edges,
        "mass": hist.mass,
        "prediction": prediction,
    }
    header = ["bin_left", "bin_right", "mass", "prediction"]
    rows = []
    for i in range(hist.n_bins):
        rows.append(
            [
                float(hist.bin_edges[i]),
                float(hist.bin_edges[i + 1]),
                float(hist.mass[i]),
                None if prediction is None else float(prediction[i]),
            ]
        )
    return payload, (header, rows)


_SWEEP_COLUMNS = [
    "n_gaps", "L", "c", "gamma", "detected", "ambiguous", "x_leftmost",
    "delta1_scaled", "n_max_gap_dev", "sup_deviation", "iterations",
    "max_residual", "seconds", "error",
]


def _cmd_sweep(args):
    grid = []
    for chunk in args.grid.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        n, L, c, gamma = (float(part) for part in chunk.split(","))
        grid.append((int(n), L, c, gamma))
    rows = sweep(grid, n_bins=args.bins, tol_rel=args.tol_rel, max_iter=args.max_iter)
    table = [[getattr(r, col) for col in _SWEEP_COLUMNS] for r in rows]
    payload = {"columns": _SWEEP_COLUMNS, "rows": table}
    return payload, (_SWEEP_COLUMNS, table)


def _cmd_converge(args):
    n_list = [int(part) for part in args.n_list.split(",") if part.strip()]
    rows = convergence_study(args.c, args.gamma, args.length, n_list, tol_rel=args.tol_rel)
    columns = ["n_gaps", "x_leftmost", "delta1_scaled", "n_max_gap_dev"]
    table = [[getattr(r, col) for col in columns] for r in rows]
    payload = {"columns": columns, "rows": table}
    return payload, (columns, table)


def _oracle_settings(args, params) -> MinimizeSettings:
    base = default_settings(params, seed=args.seed)
    return MinimizeSettings(
        step_init=args.step_init if args.step_init is not None else base.step_init,
        grad_tol=args.grad_tol if args.grad_tol is not None else base.grad_tol,
        max_iter=args.max_iter,
        seed=args.seed,
    )


def _cmd_oracle(args):
    params = ModelParams(L=args.length, n_gaps=args.n, force=_parse_force(args))
    start = uniform_configuration(params)
    if args.jitter > 0.0:
        rng = np.random.default_rng(args.seed)
        pos = start.positions.copy()
        room = args.jitter * params.L / params.n_gaps
        pos[1:-1] += rng.uniform(-room, room, size=params.n_gaps - 1)
        start = Configuration(np.sort(pos)[::-1])
    result = minimize(params, start, _oracle_settings(args, params))
    payload = _solution_payload(params, result)
    payload["energy"] = energy(result.config, params)
    return payload, _solution_table(payload, extra={"energy": payload["energy"]})


def _cmd_nonunique(args):
    c_grid = [float(part) for part in args.c_grid.split(",") if part.strip()]
    counts_by_c = []
    c_found = None
    minima: list[FixedPointResult] = []
    chosen_params = None
    for c in c_grid:
        params = nonuniqueness_params(args.a, args.b, c, args.n)
        settings = default_settings(params, seed=args.seed)
        if args.grad_tol is not None:
            settings = MinimizeSettings(
                step_init=settings.step_init,
                grad_tol=args.grad_tol,
                max_iter=settings.max_iter,
                seed=args.seed,
            )
        results = multi_start_fixed_points(params, args.n_starts, settings)
        counts_by_c.append([c, len(results)])
        if len(results) >= 2 and c_found is None:
            c_found = c
            minima = results
            chosen_params = params
            break
        if not minima:
            minima = results
            chosen_params = params
    payload = {
        "a": args.a,
        "b": args.b,
        "n_gaps": args.n,
        "length": 2.0,
        "c_grid": c_grid,
        "counts_by_c": counts_by_c,
        "c_found": c_found,
        "distinct_count": len(minima),
        "minima": [
            {
                "positions": r.config.positions,
                "energy": energy(r.config, chosen_params),
                "classification": r.classification.value,
                "delta1": r.delta1,
                "max_residual": r.max_residual,
            }
            for r in minima
        ],
    }
    header = ["c_found", "minimum", "energy", "particle", "position"]
    rows = []
    for j, m in enumerate(payload["minima"]):
        for i, pos in enumerate(m["positions"]):
            rows.append([c_found, j, float(m["energy"]), i, float(pos)])
    return payload, (header, rows)


_COMMANDS = {
    "solve": _cmd_solve,
    "critical": _cmd_critical,
    "density": _cmd_density,
    "sweep": _cmd_sweep,
    "converge": _cmd_converge,
    "oracle": _cmd_oracle,
    "nonunique": _cmd_nonunique,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload, (header, rows) = _COMMANDS[args.command](args)
        if args.format == "csv":
            text = _render_csv(header, rows)
        else:
            text = _render_json(payload)
    except (CoulombChainError, ValueError, TypeError) as exc:
        error = {"error": {"kind": type(exc).__name__, "message": str(exc)}}
        sys.stdout.write(json.dumps(error) + "\n")
        return 1
    _write_out(text, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
