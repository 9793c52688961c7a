"""
Command-line front end.

    sharpelife price          --config table1
    sharpelife converge       --config run.conf --set n=1,2,5,10
    sharpelife mc-check       --config run.conf --seed 7
    sharpelife export-surface --config run.conf --set surface=A --out A.csv

Exit codes: 0 success, 1 configuration error, 2 solver error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import pde
from .grid import evaluate_column, evaluation_hazard
from .config import ConfigError, RunConfig
from .mc import estimate_all
from .pricing import BENCHMARK_PARAMS, BENCHMARK_TABLE, build_table, integrate_surface

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VALIDATION = 0, 1, 2, 3

#: ``|pde - mc|`` accepted as agreement when the estimate has zero variance.
ZERO_VARIANCE_TOL = 1e-3
MC_Z_LIMIT = 4.0
GAP_SLACK = 5e-3


class ValidationFailure(Exception):
    """A run completed but one of its checks failed."""

    def __init__(self, message: str, text: str):
        super().__init__(message)
        self.text = text


def _g6(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return f"{v:.6g}"


def _render(columns, rows, fmt: str, meta: dict | None = None) -> str:
    if fmt == "json":
        doc = dict(meta or {})
        doc["columns"] = list(columns)
        doc["rows"] = [
            [None if isinstance(v, float) and math.isnan(v) else (float(_g6(v)) if isinstance(v, float) else v) for v in r]
            for r in rows
        ]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_g6(v) for v in r])
    return buf.getvalue()


# --- subcommands -------------------------------------------------------------


def cmd_price(cfg: RunConfig) -> str:
    if len(cfg.n) != 1:
        raise ConfigError("price takes a single n; use converge for several")
    params, grid, curve = cfg.hazard_params(), cfg.grid(), cfg.discount_curve()
    table = build_table(params, grid, cfg.lambda0, cfg.n[0], curve, cfg.evaluation, cfg.gradient)
    return table.to_json() if cfg.format == "json" else table.to_csv()


def cmd_converge(cfg: RunConfig) -> str:
    """
    Per-contract price, bound, limit and the gap ``B/n - P`` against its
    bound ``1/n + 2/sqrt(n)``, for each ``n`` in the config.
    """
    params, grid = cfg.hazard_params(), cfg.grid()
    lb = params.lambda_bar
    ns = sorted(set(cfg.n))
    prices = pde.solve_A_sequence(params, grid, ns[-1], cfg.gradient)
    P_col = integrate_surface(pde.solve_density_f(params, grid))
    columns = ("n", "lambda0", "A_per_contract", "B_per_contract", "P", "gap", "bound")
    rows, failures = [], []
    last_gap: dict[float, float] = {}
    for n in ns:
        bound_surface = pde.solve_Bn(params, grid, n, prices[n - 2] if n > 1 else None)
        A_col = prices[n - 1].full()[:, -1] / n
        B_col = bound_surface.full()[:, -1] / n
        for lam0 in cfg.lambda0:
            read = lambda col: float(evaluate_column(col, grid, lam0, lb, cfg.evaluation))
            A, B, P = read(A_col), read(B_col), read(P_col)
            gap = B - P
            bound = 1.0 / n + 2.0 / math.sqrt(n)
            rows.append((n, lam0, A, B, P, gap, bound))
            if gap > bound + GAP_SLACK:
                failures.append(f"gap {gap:.6g} exceeds bound {bound:.6g} at n={n}, lambda0={lam0}")
            if lam0 in last_gap and gap > last_gap[lam0] + 1e-12:
                failures.append(f"gap grew from {last_gap[lam0]:.6g} to {gap:.6g} at n={n}, lambda0={lam0}")
            last_gap[lam0] = gap
    text = _render(columns, rows, cfg.format)
    if failures:
        raise ValidationFailure("; ".join(failures), text)
    return text


def mc_z_score(pde_value: float, mean: float, stderr: float, zero_tol: float = ZERO_VARIANCE_TOL) -> float:
    """
    ``(pde - mc) / stderr``. A zero-variance estimate (deterministic hazard
    or a start on the floor) counts as ``z = 0`` when within ``zero_tol``.
    """
    diff = pde_value - mean
    if stderr > 0:
        return diff / stderr
    return 0.0 if abs(diff) <= zero_tol else math.copysign(math.inf, diff)


def cmd_mc_check(cfg: RunConfig) -> str:
    params, grid, curve = cfg.hazard_params(), cfg.grid(), cfg.discount_curve()
    mc_cfg = cfg.mc_config()
    mc_cfg.check_validation_size()
    table = build_table(params, grid, cfg.lambda0, 1, curve, cfg.evaluation, cfg.gradient)
    benchmark = params == BENCHMARK_PARAMS and curve.is_flat and cfg.T == 10.0
    columns = (
        "quantity", "lambda0", "lambda_eval", "pde_value", "mc_mean", "mc_stderr", "mc_paths", "z_score", "reference"
    )
    rows, failures = [], []
    for row in table.rows:
        # simulate at the hazard the grid value was read at
        lam_eval = evaluation_hazard(grid, row.lambda0, params.lambda_bar, cfg.evaluation)
        est = estimate_all(params, lam_eval, cfg.T, curve, mc_cfg)
        ref = BENCHMARK_TABLE.get(round(row.lambda0, 6)) if benchmark else None
        for name, value, ref_idx in (
            ("net_premium", row.net_premium, 0),
            ("P", row.P, 1),
            ("B", row.B_per_contract, 3),
        ):
            e = est[name]
            z = mc_z_score(value, e.mean, e.stderr)
            rows.append((name, row.lambda0, lam_eval, value, e.mean, e.stderr, e.paths, z, _g6(ref[ref_idx]) if ref else ""))
            if not abs(z) <= MC_Z_LIMIT:
                failures.append(f"{name} at lambda0={row.lambda0}: z={z:.3g}")
    text = _render(columns, rows, cfg.format, {"seed": mc_cfg.seed, "steps_per_year": mc_cfg.steps_per_year})
    if failures:
        raise ValidationFailure("; ".join(failures), text)
    return text


def _surface_for(cfg: RunConfig) -> pde.Surface:
    params, grid = cfg.hazard_params(), cfg.grid()
    which, n = cfg.surface, cfg.surface_n
    if which == "f":
        return pde.solve_density_f(params, grid)
    if which == "g":
        return pde.solve_density_g(params, grid)
    if which == "P":
        return pde.solve_P(params, grid)
    if which == "net":
        return pde.solve_net_premium(params, grid)
    if which == "charge":
        return pde.solve_mortality_charge(params, grid)
    if which == "A":
        return pde.solve_A_sequence(params, grid, n, cfg.gradient)[-1]
    prev = pde.solve_A_sequence(params, grid, n - 1, cfg.gradient)[-1] if n > 1 else None
    return pde.solve_Bn(params, grid, n, prev)


def cmd_export_surface(cfg: RunConfig) -> str:
    if cfg.format != "csv":
        raise ConfigError("export-surface writes CSV only")
    return _surface_for(cfg).to_csv()


COMMANDS = {
    "price": cmd_price,
    "converge": cmd_converge,
    "mc-check": cmd_mc_check,
    "export-surface": cmd_export_surface,
}


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpelife", description="Term life pricing under a stochastic hazard rate.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default="table1", help="config file or bundled name (default: table1)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--seed", type=int, help="Monte Carlo seed (unsigned 64-bit)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, str]:
    out = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    for key in ("out", "format", "seed"):
        value = getattr(args, key)
        if value is not None:
            out[key] = str(value)
    return out


def _check_hazards(cfg: RunConfig) -> None:
    grid, lb = cfg.grid(), cfg.lambda_bar
    for lam0 in cfg.lambda0:
        if lam0 != lb:
            evaluation_hazard(grid, lam0, lb, cfg.evaluation)


def _write(text: str, out: str) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = RunConfig.load(args.config, _overrides(args))
        # construct the owning-module objects up front so bad values are config errors
        cfg.hazard_params()
        cfg.grid()
        cfg.discount_curve()
        mc_cfg = cfg.mc_config()
        if args.command == "mc-check":
            mc_cfg.check_validation_size()
        _check_hazards(cfg)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        text = COMMANDS[args.command](cfg)
    except ValidationFailure as exc:
        _write(exc.text, cfg.out)
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, ValueError, FloatingPointError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _write(text, cfg.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
