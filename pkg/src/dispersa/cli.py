"""Command-line front end.

    dispersa <command> --config <path> [--out <dir>] [--format csv|json]
                       [--threads N]

Commands: verify-identities, solve, persistence, phi-scan, strichartz,
calibrate.  Exit codes: 0 success, 2 validation error, 3 non-convergence or
blow-up, 4 I/O failure.  ``DISPERSA_THREADS`` sets the default worker count
for scan points.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import experiments
from .config import COMMANDS, ExperimentConfig, parse_config
from .errors import BlowupDetected, NonConvergence, ValidationError
from .propagators import strichartz_ratio
from .reports import ExperimentReport
from .solver import conserved_quantities, solve_global
from .spectral import sample

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGED = 3
EXIT_IO = 4


def _pool_size(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("DISPERSA_THREADS", "")
    return max(1, int(env)) if env.isdigit() and env != "0" else 1


def _scan_map(fn, points, threads: int):
    """Order-preserving map over scan points with a bounded worker pool."""
    if threads <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, points))


# ---------------------------------------------------------------------------
# command handlers: each returns a fully populated ExperimentReport
# ---------------------------------------------------------------------------

def _run_verify_identities(cfg: ExperimentConfig, threads: int) -> ExperimentReport:
    grid = cfg.grid()
    report = ExperimentReport("verify-identities", cfg.to_dict())

    gamma_records = experiments.gamma_identity_records(grid, cfg.t_scan)
    report.add_table(
        "gamma_commutation",
        ["datum", "t", "residual_l2", "lhs_l2", "relative_residual", "n_warnings"],
        gamma_records, sort_keys=["datum", "t"])

    def point(pair):
        alpha, t = pair
        return experiments.weighted_identity_records(
            grid, [alpha], [t], cfg.beta_scan, cfg.datum)

    points = [(a, t) for a in cfg.alpha_scan for t in cfg.t_scan]
    weighted = [rec for chunk in _scan_map(point, points, threads) for rec in chunk]
    columns = ["alpha", "beta", "t", "residual_l2", "lhs_l2",
               "relative_residual", "bound_ratio"]
    report.add_table("weighted_identity", columns, weighted,
                     sort_keys=["alpha", "beta", "t"])
    return report


def _run_phi_scan(cfg: ExperimentConfig, threads: int) -> ExperimentReport:
    grid = cfg.grid()
    report = ExperimentReport("phi-scan", cfg.to_dict())

    def point(pair):
        alpha, t = pair
        return experiments.weighted_identity_records(
            grid, [alpha], [t], cfg.beta_scan, cfg.datum)

    points = [(a, t) for a in cfg.alpha_scan for t in cfg.t_scan]
    records = [rec for chunk in _scan_map(point, points, threads) for rec in chunk]
    report.add_table(
        "commutator_bounds",
        ["alpha", "beta", "t", "bound_ratio", "residual_l2", "relative_residual"],
        records, sort_keys=["alpha", "beta", "t"])
    return report


def _run_solve(cfg: ExperimentConfig, threads: int) -> ExperimentReport:
    grid = cfg.grid()
    u0 = sample(cfg.datum, grid)
    field, patch_reports = solve_global(u0, cfg.solver.T, cfg.solver)
    traj = conserved_quantities(field, cfg.solver.k)

    report = ExperimentReport("solve", cfg.to_dict())
    report.add_warnings(field.warnings)
    conserved = [{"time": t, "mass": m, "l2": l, "energy": e}
                 for t, m, l, e in zip(traj.times, traj.mass, traj.l2, traj.energy)]
    report.add_table("conserved", ["time", "mass", "l2", "energy"],
                     conserved, sort_keys=["time"])
    contraction = []
    for p, rep in enumerate(patch_reports):
        for j, d in enumerate(rep.successive_diffs):
            contraction.append({
                "patch": p, "iteration": j, "diff_mu1": d,
                "diff_sup_l2": rep.successive_diffs_sup_l2[j],
                "ratio": rep.contraction_ratios[j - 1] if j >= 1 else float("nan"),
                "ball_radius": rep.ball_radius,
                "iterate_mu1": rep.iterate_mu1[j + 1],
            })
        report.add_warnings(rep.warnings)
    report.add_table(
        "contraction",
        ["patch", "iteration", "diff_mu1", "diff_sup_l2", "ratio",
         "ball_radius", "iterate_mu1"],
        contraction, sort_keys=["patch", "iteration"])
    return report


def _run_persistence(cfg: ExperimentConfig, threads: int) -> ExperimentReport:
    grid = cfg.grid()
    u0 = sample(cfg.datum, grid)
    report = ExperimentReport("persistence", cfg.to_dict())
    report.add_warnings(u0.warnings)

    results = _scan_map(
        lambda sr: experiments.persistence_experiment(
            u0, sr[0], sr[1], cfg.experiment_T, cfg.solver),
        list(cfg.sr_pairs), threads)

    for p in results:
        report.add_warnings(p.warnings)
    summary = [p.row() for p in results]
    report.add_table(
        "persistence_summary",
        ["s", "r", "initial", "max", "min", "ratio_to_initial",
         "growth_index", "flagged_r_above_half_s", "n_patches"],
        summary, sort_keys=["s", "r"])

    trajectories = []
    for p in results:
        for t, v in zip(p.times, p.norms):
            trajectories.append({"s": p.s, "r": p.r, "time": t, "weighted_sobolev_norm": v})
    report.add_table("persistence_trajectories",
                     ["s", "r", "time", "weighted_sobolev_norm"],
                     trajectories, sort_keys=["s", "r", "time"])

    probe_rows = []
    for s in sorted({s for s, _ in cfg.sr_pairs}):
        rs = [r for ss, r in cfg.sr_pairs if ss == s]
        if len(rs) >= 2:
            probe = experiments.optimality_probe(u0, s, rs, cfg.experiment_T, cfg.solver)
            for row in probe["rows"]:
                row["nondecreasing_in_r"] = float(probe["nondecreasing"])
                probe_rows.append(row)
    if probe_rows:
        report.add_table(
            "optimality_probe",
            ["s", "r", "growth_index", "flagged_r_above_half_s",
             "nondecreasing_in_r", "ratio_to_initial"],
            probe_rows, sort_keys=["s", "r"])
    return report


def _run_strichartz(cfg: ExperimentConfig, threads: int) -> ExperimentReport:
    grid = cfg.grid()
    u0 = sample(cfg.datum, grid)
    report = ExperimentReport("strichartz", cfg.to_dict())
    report.add_warnings(u0.warnings)
    records = _scan_map(
        lambda w: {"t_window": w, "n_times": cfg.n_times,
                   "ratio": strichartz_ratio(u0, w, cfg.n_times)},
        list(cfg.t_windows), threads)
    report.add_table("strichartz", ["t_window", "n_times", "ratio"],
                     records, sort_keys=["t_window"])
    return report


def _run_calibrate(cfg: ExperimentConfig, threads: int) -> ExperimentReport:
    grid = cfg.grid()
    out = experiments.calibrate_constants(
        grid, T_scan=cfg.t_scan or (1.0, 2.0, 4.0),
        alphas=cfg.alpha_scan or (0.25, 0.5, 0.75),
        dt=cfg.solver.dt, strichartz_windows=cfg.t_windows)
    report = ExperimentReport("calibrate", cfg.to_dict())
    report.constants = out["constants"]
    report.add_table(
        "calibration",
        ["kind", "datum", "alpha", "T", "t_window", "ratio", "value"],
        [{**{"datum": "", "alpha": float("nan"), "T": float("nan"),
             "t_window": float("nan"), "ratio": float("nan"),
             "value": float("nan")}, **rec} for rec in out["records"]],
        sort_keys=["kind", "datum", "alpha", "T", "t_window"])
    return report


_HANDLERS = {
    "verify-identities": _run_verify_identities,
    "solve": _run_solve,
    "persistence": _run_persistence,
    "phi-scan": _run_phi_scan,
    "strichartz": _run_strichartz,
    "calibrate": _run_calibrate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dispersa",
        description="Identity-verification and solver experiments on periodic grids.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML config path")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="table format (default: config output.format)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker pool size for scan points")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            print(f"dispersa: cannot read config: {exc}", file=sys.stderr)
            return EXIT_IO
        cfg = parse_config(text)
        cfg.validate(args.command)
        threads = _pool_size(args.threads)
        report = _HANDLERS[args.command](cfg, threads)
        report.wall_clock_s = time.perf_counter() - started
        table_format = args.format or cfg.output_format
        try:
            written = report.write(Path(args.out), table_format)
            if args.command == "calibrate":
                constants_path = Path(args.out) / "constants.json"
                with open(constants_path, "w", newline="") as fh:
                    json.dump(report.constants, fh, indent=2, sort_keys=True)
                    fh.write("\n")
                written.append(constants_path)
        except OSError as exc:
            print(f"dispersa: cannot write outputs: {exc}", file=sys.stderr)
            return EXIT_IO
        for path in written:
            print(path)
        return EXIT_OK
    except ValidationError as exc:
        print(f"dispersa: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NonConvergence, BlowupDetected) as exc:
        print(f"dispersa: run aborted: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
