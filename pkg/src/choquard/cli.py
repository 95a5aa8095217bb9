"""Command line front end: ``choquard solve|verify|sweep``.

Exit codes: 0 success, 2 config error, 3 convergence failure, 4 verification failure.
The JSON schemas for run configs and sweeps are documented in :mod:`choquard.config`.
"""
import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import chq1
from .config import load_run_config, load_sweep
from .errors import ChoquardError, ConfigError, DegeneratePair
from .solver import default_init, ground_state, random_init, symmetric_init
from .verify import format_table, reports_to_json, run_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3
EXIT_VERIFY = 4

log = logging.getLogger("choquard")


def _init_pair(cfg, grid, seed):
    if cfg.init == "symmetric":
        return symmetric_init(grid)
    if cfg.init == "random":
        return random_init(grid, seed)
    return default_init(grid)


def _apply_overrides(cfg, args):
    if args.seed is not None:
        cfg.seed = args.seed
    if args.output_dir is not None:
        cfg.output_dir = args.output_dir
    return cfg


def _history_csv(history):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iter", "action", "nehari", "residual"])
    for it, act, neh, res in history:
        w.writerow([it, repr(float(act)), repr(float(neh)), repr(float(res))])
    return buf.getvalue()


def solve_config(cfg):
    """All starts for one config; returns (best result, list of levels)."""
    prob = cfg.build_problem()
    results = []
    for i in range(cfg.starts):
        # start 0 honours the configured init, extra starts are seeded random
        init = _init_pair(cfg, prob.grid, cfg.seed) if i == 0 else random_init(prob.grid, cfg.seed + i)
        results.append(ground_state(prob, cfg.solver, init=init))
    levels = [r.c0 for r in results]
    conv = [r for r in results if r.converged] or results
    best = min(conv, key=lambda r: r.c0)
    return best, levels


def cmd_solve(path, args):
    try:
        cfg = _apply_overrides(load_run_config(path), args)
        best, levels = solve_config(cfg)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except DegeneratePair as exc:
        log.error("solver hit a degenerate pair: %s", exc)
        return EXIT_NO_CONVERGENCE
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    chq1.save(os.path.join(out, "fields.chq1"), {"u": best.pair.u, "v": best.pair.v})
    result = {
        "c0": best.c0,
        "iterations": best.iterations,
        "converged": best.converged,
        "residual": best.relative_residual,
        "nehari": best.report.nehari,
        "boundary_warning": best.boundary_warning,
        "boundary_ratio": best.boundary_ratio,
        "asym": best.asymmetry(),
        "levels": levels,
        "seed": cfg.seed,
    }
    chq1.atomic_write(os.path.join(out, "result.json"), json.dumps(result, indent=2) + "\n")
    chq1.atomic_write(os.path.join(out, "history.csv"), _history_csv(best.history))
    if best.boundary_warning:
        log.warning(
            "solution is not small on the box boundary (ratio %.2e > 1e-6); enlarge L", best.boundary_ratio
        )
    log.info("c0 = %.12g  iterations = %d  converged = %s", best.c0, best.iterations, best.converged)
    if len(levels) > 1:
        log.info("levels over %d starts: %s", len(levels), ", ".join(f"{c:.12g}" for c in levels))
    return EXIT_OK if best.converged else EXIT_NO_CONVERGENCE


def cmd_verify(path, args):
    try:
        cfg = _apply_overrides(load_run_config(path), args)
        prob = cfg.build_problem()
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    reports = run_suite(prob, cfg.solver, seed=cfg.seed)
    os.makedirs(cfg.output_dir, exist_ok=True)
    chq1.atomic_write(os.path.join(cfg.output_dir, "reports.json"), reports_to_json(reports) + "\n")
    if not args.quiet:
        print(format_table(reports))
    failed = [r.name for r in reports if not r.passed]
    if failed:
        log.error("failed checks: %s", ", ".join(failed))
        return EXIT_VERIFY
    return EXIT_OK


def _sweep_point(task):
    """Worker: solve one swept value. Never raises; errors become a failed row."""
    spec, value, seed = task
    try:
        cfg = spec.point_config(value)
        if seed is not None:
            cfg.seed = seed
        best, _ = solve_config(cfg)
        return {
            "value": value,
            "c0": best.c0,
            "converged": best.converged,
            "residual": best.relative_residual,
            "asym": best.asymmetry(),
            "error": None,
        }
    except (ChoquardError, ValueError) as exc:
        nan = float("nan")
        return {"value": value, "c0": nan, "converged": False, "residual": nan, "asym": nan, "error": str(exc)}


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["value", "c0", "converged", "residual", "asym"])
    for r in rows:
        w.writerow([repr(float(r["value"])), repr(float(r["c0"])), int(bool(r["converged"])), repr(float(r["residual"])), repr(float(r["asym"]))])
    return buf.getvalue()


def cmd_sweep(path, args):
    try:
        spec = load_sweep(path)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    tasks = [(spec, v, args.seed) for v in spec.values]
    if args.parallel and args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    out = args.output_dir or spec.base.get("output_dir", "out")
    os.makedirs(out, exist_ok=True)
    chq1.atomic_write(os.path.join(out, "sweep.csv"), sweep_csv(rows))
    errors = {repr(r["value"]): r["error"] for r in rows if r["error"]}
    if errors:
        chq1.atomic_write(os.path.join(out, "sweep_errors.json"), json.dumps(errors, indent=2) + "\n")
    for r in rows:
        if r["error"]:
            log.error("%s = %g failed: %s", spec.axis, r["value"], r["error"])
        else:
            log.info("%s = %g  c0 = %.10g  converged = %s  asym = %.3e", spec.axis, r["value"], r["c0"], r["converged"], r["asym"])
    bad = [r for r in rows if not r["converged"]]
    if not bad:
        return EXIT_OK
    return EXIT_CONFIG if all(r["error"] for r in bad) else EXIT_NO_CONVERGENCE


def _flags(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--output-dir", default=d(None), help="directory for outputs (overrides the config)")
    parser.add_argument("--seed", type=int, default=d(None), help="seed for random initial data and random checks")
    parser.add_argument("--parallel", type=int, default=d(0), metavar="K", help="solve sweep points on K processes")
    parser.add_argument("--quiet", action="store_true", default=d(False), help="only report warnings and errors")


def build_parser():
    ap = argparse.ArgumentParser(prog="choquard", description="Ground states of a coupled Choquard system on a periodic box.")
    _flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, target, helptext in (
        ("solve", "config", "solve one configuration"),
        ("verify", "config", "run the numerical check suite"),
        ("sweep", "sweep", "solve along one parameter axis"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument(target, help=f"{target} JSON file")
        # flags are accepted after the subcommand too
        _flags(sp, suppress=True)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
        force=True,
    )
    if args.command == "solve":
        return cmd_solve(args.config, args)
    if args.command == "verify":
        return cmd_verify(args.config, args)
    return cmd_sweep(args.sweep, args)


if __name__ == "__main__":
    sys.exit(main())
