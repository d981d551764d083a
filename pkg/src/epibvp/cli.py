"""Command-line front end: batch solving and deterministic CSV/JSON output.

Every command writes numbers in full round-trip decimal form, so identical
configurations produce byte-identical files.  Exit codes distinguish the
interesting outcomes::

    0   branches found / all checks passed
    1   usage error
    2   invalid critical-rate bracket
    3   no branches (non-existence; the expected signal past the fold)
    4   oracle cross-check deviation above tolerance
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import critical, oracle, recover, shooting
from .polyring import evaluate
from .shooting import BoundaryKind, BranchLabel

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BAD_BRACKET = 2
EXIT_NO_BRANCHES = 3
EXIT_DEVIATION = 4

_OUT_DIR_ENV = "EPIBVP_OUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # values like "-1,-50,-100" (rate lists) and "-120:20" (windows)
        # start with a dash; widen the negative-number heuristic so they
        # parse as values rather than unknown options
        self._negative_number_matcher = re.compile(r"^-\d[\d.,:eE+-]*$")

    # argparse exits with status 2 on bad flags; the contract wants 1
    def error(self, message):
        raise UsageError(message)


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_lambda_list(text: str):
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise UsageError(f"bad --lambdas list: {text!r}")
    if not values:
        raise UsageError("--lambdas list is empty")
    return values


def _parse_lambda_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"bad --lambda-range (want lo:hi:step): {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad --lambda-range (want lo:hi:step): {text!r}")
    if step <= 0 or hi < lo:
        raise UsageError("--lambda-range needs lo <= hi and step > 0")
    values = []
    k = 0
    while True:
        value = lo + k * step
        if value > hi + 1e-12 * max(1.0, abs(hi)):
            break
        values.append(value)
        k += 1
    return values


def _parse_window(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"bad --a-window (want lo:hi): {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"bad --a-window (want lo:hi): {text!r}")
    if not lo < hi:
        raise UsageError("--a-window needs lo < hi")
    return (lo, hi)


def _profile_grid(step: float) -> np.ndarray:
    if not 0.0 < step <= 0.5:
        raise UsageError("--grid-step must lie in (0, 0.5]")
    count = int(round(1.0 / step))
    if abs(count * step - 1.0) < 1e-9:
        return np.linspace(0.0, 1.0, count + 1)
    pts = list(np.arange(0.0, 1.0, step))
    pts.append(1.0)
    return np.asarray(pts)


def _resolve_out_dir(flag_value) -> Path:
    if flag_value:
        out = Path(flag_value)
    elif os.environ.get(_OUT_DIR_ENV):
        out = Path(os.environ[_OUT_DIR_ENV])
    else:
        out = Path("epibvp_out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_text(path: Path, text: str):
    with open(path, "w", newline="") as handle:
        handle.write(text)


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _write_json(path: Path, payload):
    _write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _echo_config(out_dir: Path, command: str, settings: dict):
    payload = {"command": command}
    payload.update(settings)
    _write_json(out_dir / "effective_config.json", payload)


def _lambda_tag(lam: float) -> str:
    return _fmt(lam).replace("-", "m").replace(".", "p")


def _apply_config_file(args: argparse.Namespace):
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


# ---------------------------------------------------------------------------
# workers (module level so they survive pickling into the pool)
# ---------------------------------------------------------------------------

def _census_worker(task):
    lam, bc_value, n_iter, window, grid_points = task
    bc = BoundaryKind(bc_value)
    window = tuple(window) if window else shooting.DEFAULT_WINDOW
    grid_points = grid_points or shooting.DEFAULT_GRID_POINTS
    roots = shooting.find_branches(lam, bc, window, grid_points, n_iter=n_iter)
    grid = np.linspace(0.0, 1.0, 101)
    branches = []
    for root in roots:
        profile = recover.solve_profile(root.a_star, lam, bc, n_iter)
        sup = float(np.max(np.abs(evaluate(profile.phi, grid))))
        branches.append((root.a_star, sup, root.label.value))
    fold = len(roots) == 2 and abs(roots[1].a_star - roots[0].a_star) < critical.FOLD_SEPARATION
    return lam, branches, fold


def _table_worker(task):
    lam, bc_value, label_value, n_iter, window, grid_points = task
    bc = BoundaryKind(bc_value)
    window = tuple(window) if window else shooting.DEFAULT_WINDOW
    grid_points = grid_points or shooting.DEFAULT_GRID_POINTS
    roots = shooting.find_branches(lam, bc, window, grid_points, n_iter=n_iter)
    wanted = [r for r in roots if r.label.value == label_value]
    if not wanted:
        return lam, None
    profile = recover.solve_profile(wanted[0].a_star, lam, bc, n_iter)
    table = recover.residual_table(profile.w, lam)
    return lam, list(table.values)


def _run_pool(worker, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_solve(args) -> int:
    bc = BoundaryKind.parse(args.bc)
    lam = float(args.lam)
    out_dir = _resolve_out_dir(args.out)
    window = _parse_window(args.a_window) if args.a_window else shooting.DEFAULT_WINDOW
    step = float(args.grid_step) if args.grid_step is not None else 0.01
    grid = _profile_grid(step)
    fmt = args.format or "csv"
    _echo_config(out_dir, "solve", {
        "bc": bc.value, "lambda": lam, "n_iter": args.n_iter,
        "a_window": list(window), "grid_step": step, "format": fmt,
    })
    roots = shooting.find_branches(lam, bc, window, n_iter=args.n_iter)
    summary_rows = []
    for root in roots:
        profile = recover.solve_profile(root.a_star, lam, bc, args.n_iter)
        w_vals = evaluate(profile.w, grid)
        phi_vals = evaluate(profile.phi, grid)
        res_vals = np.asarray(recover.residual_table(profile.w, lam, grid).values)
        sup = float(np.max(np.abs(phi_vals)))
        summary_rows.append((root.label.value, root.a_star, sup))
        stem = f"profile_{bc.value}_{_lambda_tag(lam)}_{root.label.value}"
        if fmt == "json":
            _write_json(out_dir / f"{stem}.json", {
                "r": [float(g) for g in grid],
                "w": [float(v) for v in w_vals],
                "phi": [float(v) for v in phi_vals],
                "residual": [float(v) for v in res_vals],
            })
        else:
            rows = [
                (_fmt(g), _fmt(wv), _fmt(pv), _fmt(rv))
                for g, wv, pv, rv in zip(grid, w_vals, phi_vals, res_vals)
            ]
            _write_csv(out_dir / f"{stem}.csv", ("r", "w", "phi", "residual"), rows)
    stem = f"summary_{bc.value}_{_lambda_tag(lam)}"
    if fmt == "json":
        _write_json(out_dir / f"{stem}.json", {
            "bc": bc.value, "lambda": lam, "branch_count": len(roots),
            "branches": [
                {"label": lab, "a_star": a, "sup_norm_phi": sup}
                for lab, a, sup in summary_rows
            ],
        })
    else:
        _write_csv(out_dir / f"{stem}.csv", ("label", "a_star", "sup_norm_phi"),
                   [(lab, _fmt(a), _fmt(sup)) for lab, a, sup in summary_rows])
    print(f"{len(roots)} branch(es) at lambda={_fmt(lam)} [{bc.value}] -> {out_dir}")
    return EXIT_OK if roots else EXIT_NO_BRANCHES


def _cmd_residual_table(args) -> int:
    bc = BoundaryKind.parse(args.bc)
    label = BranchLabel.parse(args.branch)
    if args.lambdas is None:
        raise UsageError("residual-table requires --lambdas")
    lambdas = _parse_lambda_list(args.lambdas)
    out_dir = _resolve_out_dir(args.out)
    window = _parse_window(args.a_window) if args.a_window else None
    jobs = args.jobs or os.cpu_count() or 1
    _echo_config(out_dir, "residual-table", {
        "bc": bc.value, "branch": label.value, "lambdas": lambdas,
        "n_iter": args.n_iter, "jobs": jobs,
    })
    tasks = [(lam, bc.value, label.value, args.n_iter, window, None)
             for lam in lambdas]
    results = _run_pool(_table_worker, tasks, jobs)
    columns = {lam: values for lam, values in results}
    found = [lam for lam in lambdas if columns[lam] is not None]
    missing = [lam for lam in lambdas if columns[lam] is None]
    for lam in missing:
        print(f"no {label.value} branch at lambda={_fmt(lam)}", file=sys.stderr)
    if not found:
        return EXIT_NO_BRANCHES
    header = ["r"] + [f"lambda={_fmt(lam)}" for lam in found]
    rows = []
    for i, r in enumerate(recover.TABLE_GRID):
        rows.append([_fmt(r)] + [_fmt(columns[lam][i]) for lam in found])
    path = out_dir / f"residual_table_{bc.value}_{label.value}.csv"
    _write_csv(path, header, rows)
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_critical(args) -> int:
    bc = BoundaryKind.parse(args.bc)
    tol = float(args.tol) if args.tol is not None else 0.01
    try:
        estimate = critical.find_critical_lambda(
            bc, float(args.lo), float(args.hi), tol, n_iter=args.n_iter)
        sensitivity = critical.depth_sensitivity(
            bc, float(args.lo), float(args.hi), tol)
    except critical.InvalidBracket as exc:
        print(f"invalid bracket: {exc}", file=sys.stderr)
        return EXIT_BAD_BRACKET
    payload = {
        "bc": bc.value,
        "lambda_crit": estimate.lambda_crit,
        "bracket": list(estimate.bracket),
        "n_iter": estimate.n_iter_used,
        "sensitivity": {str(k): v for k, v in sensitivity.items()},
    }
    text = json.dumps(payload, sort_keys=True)
    print(text)
    if args.out:
        out_dir = _resolve_out_dir(args.out)
        _echo_config(out_dir, "critical", {
            "bc": bc.value, "lo": float(args.lo), "hi": float(args.hi),
            "tol": tol, "n_iter": args.n_iter,
        })
        _write_text(out_dir / f"critical_{bc.value}.json", text + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    bc = BoundaryKind.parse(args.bc)
    if args.lambdas is not None and args.lambda_range is not None:
        raise UsageError("give exactly one of --lambdas / --lambda-range")
    if args.lambdas is not None:
        lambdas = _parse_lambda_list(args.lambdas)
    elif args.lambda_range is not None:
        lambdas = _parse_lambda_range(args.lambda_range)
    else:
        raise UsageError("sweep requires --lambdas or --lambda-range")
    out_dir = _resolve_out_dir(args.out)
    window = _parse_window(args.a_window) if args.a_window else None
    jobs = args.jobs or os.cpu_count() or 1
    fmt = args.format or "csv"
    _echo_config(out_dir, "sweep", {
        "bc": bc.value, "lambdas": lambdas, "n_iter": args.n_iter,
        "jobs": jobs, "format": fmt,
    })
    tasks = [(lam, bc.value, args.n_iter, window, None) for lam in lambdas]
    results = _run_pool(_census_worker, tasks, jobs)
    if fmt == "json":
        payload = [
            {
                "lambda": lam,
                "branch_count": len(branches),
                "fold": fold,
                "branches": [
                    {"a_star": a, "sup_norm_phi": sup, "label": lab}
                    for a, sup, lab in branches
                ],
            }
            for lam, branches, fold in results
        ]
        path = out_dir / f"sweep_{bc.value}.json"
        _write_json(path, payload)
    else:
        rows = []
        for lam, branches, fold in results:
            if not branches:
                rows.append((_fmt(lam), "0", "false", "", "", ""))
            for a, sup, lab in branches:
                rows.append((_fmt(lam), str(len(branches)),
                             "true" if fold else "false",
                             lab, _fmt(a), _fmt(sup)))
        path = out_dir / f"sweep_{bc.value}.csv"
        _write_csv(path, ("lambda", "branch_count", "fold", "label",
                          "a_star", "sup_norm_phi"), rows)
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_linear(args) -> int:
    bc = BoundaryKind.parse(args.bc)
    lam = float(args.lam)
    out_dir = _resolve_out_dir(args.out)
    step = float(args.grid_step) if args.grid_step is not None else 0.01
    grid = _profile_grid(step)
    _echo_config(out_dir, "linear", {
        "bc": bc.value, "lambda": lam, "grid_step": step,
    })
    profile = recover.linear_approximation(bc, lam)
    w_vals = evaluate(profile.w, grid)
    phi_vals = evaluate(profile.phi, grid)
    stem = f"linear_{bc.value}_{_lambda_tag(lam)}"
    rows = [
        (_fmt(g), _fmt(wv), _fmt(pv))
        for g, wv, pv in zip(grid, w_vals, phi_vals)
    ]
    _write_csv(out_dir / f"{stem}.csv", ("r", "w", "phi"), rows)
    _write_json(out_dir / f"{stem}_coefficients.json", {
        "w": [float(c) for c in profile.w.coeffs],
        "phi": [float(c) for c in profile.phi.coeffs],
    })
    print(f"wrote {out_dir / (stem + '.csv')}")
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    bc = BoundaryKind.parse(args.bc)
    lam = float(args.lam)
    tol = float(args.tol) if args.tol is not None else 5e-2
    window = _parse_window(args.a_window) if args.a_window else shooting.DEFAULT_WINDOW
    roots = shooting.find_branches(lam, bc, window, n_iter=args.n_iter)
    ivp_roots = oracle.oracle_branches(lam, bc, window)
    if not roots and not ivp_roots:
        print(f"no branches at lambda={_fmt(lam)} [{bc.value}]: both methods agree")
        return EXIT_OK
    if len(roots) != len(ivp_roots):
        print(
            f"branch count mismatch: {len(roots)} (iteration) vs "
            f"{len(ivp_roots)} (integrator)",
            file=sys.stderr,
        )
        return EXIT_DEVIATION
    worst = 0.0
    for root in roots:
        nearest = min(ivp_roots, key=lambda x: abs(x - root.a_star))
        da = abs(nearest - root.a_star)
        profile = recover.solve_profile(root.a_star, lam, bc, args.n_iter)
        rs, ws, _ = oracle.ivp_trajectory(nearest, lam)
        phi_ivp = oracle.profile_from_trajectory(rs, ws)
        sample = slice(0, rs.size, max(1, rs.size // 512))
        dphi = float(np.max(np.abs(
            evaluate(profile.phi, rs[sample]) - phi_ivp[sample])))
        worst = max(worst, da, dphi)
        print(
            f"{root.label.value}: a*={_fmt(root.a_star)} vs {_fmt(nearest)} "
            f"(|da|={da:.3e}), profile deviation {dphi:.3e}"
        )
    if worst > tol:
        print(f"deviation {worst:.3e} above tolerance {tol:g}", file=sys.stderr)
        return EXIT_DEVIATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--bc", required=True,
                     help="boundary condition: dirichlet | navier1 | navier2")
    sub.add_argument("--n-iter", type=int, default=None,
                     help="iteration depth (default: 7, or 6 for dirichlet)")
    sub.add_argument("--a-window", default=None,
                     help="shooting window lo:hi (default -120:20)")
    sub.add_argument("--out", default=None,
                     help=f"output directory (default ${_OUT_DIR_ENV} or ./epibvp_out)")
    sub.add_argument("--config", default=None,
                     help="JSON file with defaults; explicit flags win")


def _build_parser() -> _Parser:
    parser = _Parser(prog="epibvp",
                     description="Radial epitaxial-deposition boundary value solver")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve all branches at one rate")
    _add_common(solve)
    solve.add_argument("--lambda", dest="lam", type=float, required=True)
    solve.add_argument("--grid-step", type=float, default=None)
    solve.add_argument("--format", choices=("csv", "json"), default=None)

    table = commands.add_parser("residual-table",
                                help="defect table for one branch over several rates")
    _add_common(table)
    table.add_argument("--branch", required=True,
                       help="lower | upper | positive | negative")
    table.add_argument("--lambdas", default=None, help="comma-separated rates")
    table.add_argument("--jobs", type=int, default=None)

    crit = commands.add_parser("critical", help="bisect for the fold rate")
    _add_common(crit)
    crit.add_argument("--lo", type=float, required=True)
    crit.add_argument("--hi", type=float, required=True)
    crit.add_argument("--tol", type=float, default=None)

    swp = commands.add_parser("sweep", help="branch census over many rates")
    _add_common(swp)
    swp.add_argument("--lambdas", default=None, help="comma-separated rates")
    swp.add_argument("--lambda-range", default=None, help="lo:hi:step")
    swp.add_argument("--jobs", type=int, default=None)
    swp.add_argument("--format", choices=("csv", "json"), default=None)

    lin = commands.add_parser("linear", help="closed-form small-rate approximation")
    _add_common(lin)
    lin.add_argument("--lambda", dest="lam", type=float, required=True)
    lin.add_argument("--grid-step", type=float, default=None)

    check = commands.add_parser("oracle-check",
                                help="cross-validate against the RK4 integrator")
    _add_common(check)
    check.add_argument("--lambda", dest="lam", type=float, required=True)
    check.add_argument("--tol", type=float, default=None)

    return parser


_COMMANDS = {
    "solve": _cmd_solve,
    "residual-table": _cmd_residual_table,
    "critical": _cmd_critical,
    "sweep": _cmd_sweep,
    "linear": _cmd_linear,
    "oracle-check": _cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config_file(args)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
