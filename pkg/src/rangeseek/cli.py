"""Command-line entry point.

    rangeseek generate-config [--out DIR]
    rangeseek oracle   --config PATH [--out DIR]
    rangeseek simulate --config PATH [--mode adaptive|standard] [--out DIR] [--seed N]
    rangeseek compare  --config PATH [--out DIR] [--seed N]
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import MODES, ExperimentConfig, load_config, render_config
from .errors import ParseError, ValidationError
from .oracle import OracleResult, export_surface, grid_search, refine
from .sim import ComparisonReport, SimTrace, compare_runs, run_simulation, settling_time

log = logging.getLogger("rangeseek")

TRACE_COLUMNS = (
    "t", "speed_ref", "sideslip_ref", "speed_actual", "sideslip_actual",
    "power_measured", "cost_measured", "q_lp_v", "q_lp_s", "g_v", "g_s",
)  # fmt: skip
_DEGREE_COLUMNS = {"sideslip_ref", "sideslip_actual"}
SURFACE_COLUMNS = ("speed", "sideslip", "cost")
CONFIG_NAME = "rangeseek.yaml"


def _g9(x: float) -> str:
    return f"{x:.9g}"


def write_trace_csv(trace: SimTrace, path: Path, decimation: int = 1) -> int:
    """Write the fixed-column trace CSV; sideslip columns in degrees.

    Returns the number of data rows written.
    """
    cols = [
        np.degrees(getattr(trace, c)) if c in _DEGREE_COLUMNS else getattr(trace, c)
        for c in TRACE_COLUMNS
    ]
    rows = np.column_stack(cols)[::decimation]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        w.writerows([_g9(x) for x in row] for row in rows.tolist())
    return len(rows)


def write_surface_csv(result: OracleResult, path: Path) -> int:
    rows = export_surface(result)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SURFACE_COLUMNS)
        for v, b, c in rows:
            w.writerow((_g9(v), _g9(math.degrees(b)), _g9(c)))
    return len(rows)


def run_oracle(cfg: ExperimentConfig) -> tuple[OracleResult, OracleResult]:
    """Coarse grid and refined optimum over the configured domain."""
    d = cfg.domain
    coarse = grid_search(cfg.vehicle, d.speed_range, cfg.sideslip_range_rad, d.steps)
    return coarse, refine(cfg.vehicle, coarse, d.refine_levels)


def tolerances(cfg: ExperimentConfig) -> tuple[float, float]:
    """Settling tolerance = dither amplitude of each channel (m/s, rad)."""
    speed, side = cfg.channels()
    return speed.amplitude, side.amplitude


def _optimum_line(best: OracleResult) -> str:
    return (
        f"optimum speed={_g9(best.optimal_speed)} m/s "
        f"sideslip={_g9(math.degrees(best.optimal_sideslip))} deg "
        f"cost={_g9(best.optimal_cost)} W*s/m"
    )


def _settle_text(t: float) -> str:
    return f"{t:.2f} s" if math.isfinite(t) else "did not settle"


def _final_refs(trace: SimTrace) -> tuple[float, float]:
    wv = round(trace.speed_period / trace.dt)
    ws = round(trace.sideslip_period / trace.dt)
    return float(np.mean(trace.speed_ref[-wv:])), float(np.mean(trace.sideslip_ref[-ws:]))


@dataclass
class SimulateResult:
    trace: SimTrace
    settling: float
    optimum: OracleResult
    csv_path: Path
    summary_path: Path
    summary: str


def cmd_simulate(cfg: ExperimentConfig, mode: str | None = None, out_dir: Path | None = None) -> SimulateResult:
    mode = mode or cfg.speed_channel.mode
    out = Path(out_dir or cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    _, best = run_oracle(cfg)
    trace = run_simulation(cfg.sim_config(mode))
    tol_v, tol_s = tolerances(cfg)
    t_settle = settling_time(trace, best.optimal_speed, best.optimal_sideslip, tol_v, tol_s)
    csv_path = out / f"trace_{mode}.csv"
    n_rows = write_trace_csv(trace, csv_path, cfg.output.decimation)
    v_fin, b_fin = _final_refs(trace)
    summary = "\n".join(
        [
            f"mode: {mode}",
            f"seed: {cfg.sim.seed}",
            f"duration: {cfg.sim.duration} s at dt={cfg.sim.dt} s ({n_rows} rows written)",
            _optimum_line(best),
            f"tolerance: speed {_g9(tol_v)} m/s, sideslip {_g9(math.degrees(tol_s))} deg",
            f"settling time: {_settle_text(t_settle)}",
            f"final period-averaged reference: speed={_g9(v_fin)} m/s "
            f"sideslip={_g9(math.degrees(b_fin))} deg",
        ]
    )
    summary_path = out / f"summary_{mode}.txt"
    summary_path.write_text(summary + "\n", encoding="utf-8")
    return SimulateResult(trace, t_settle, best, csv_path, summary_path, summary)


@dataclass
class CompareResult:
    report: ComparisonReport
    optimum: OracleResult
    report_path: Path
    text: str


def cmd_compare(cfg: ExperimentConfig, out_dir: Path | None = None) -> CompareResult:
    """Run adaptive and standard with the same seed, plant and start point."""
    out = Path(out_dir or cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    _, best = run_oracle(cfg)
    traces = {}
    for mode in MODES:
        traces[mode] = run_simulation(cfg.sim_config(mode))
        write_trace_csv(traces[mode], out / f"trace_{mode}.csv", cfg.output.decimation)
    tol_v, tol_s = tolerances(cfg)
    report = compare_runs(
        traces["adaptive"], traces["standard"],
        best.optimal_speed, best.optimal_sideslip, tol_v, tol_s,
    )  # fmt: skip
    if report.ratio is None:
        ratio = "n/a (" + ", ".join(
            m for m, ok in zip(MODES, (report.a_settled, report.b_settled)) if not ok
        ) + " did not settle)"
    else:
        ratio = f"{report.ratio:.4f}"
    text = "\n".join(
        [
            f"seed: {cfg.sim.seed}",
            _optimum_line(best),
            f"settling time adaptive: {_settle_text(report.settling_a)}",
            f"settling time standard: {_settle_text(report.settling_b)}",
            f"ratio adaptive/standard: {ratio}",
            f"final period-averaged cost adaptive: {_g9(report.final_cost_a)} W*s/m",
            f"final period-averaged cost standard: {_g9(report.final_cost_b)} W*s/m",
            f"final speed error adaptive/standard: {_g9(report.final_speed_error_a)} / "
            f"{_g9(report.final_speed_error_b)} m/s",
            f"final sideslip error adaptive/standard: "
            f"{_g9(math.degrees(report.final_sideslip_error_a))} / "
            f"{_g9(math.degrees(report.final_sideslip_error_b))} deg",
        ]
    )
    path = out / "comparison.txt"
    path.write_text(text + "\n", encoding="utf-8")
    return CompareResult(report, best, path, text)


def cmd_oracle(cfg: ExperimentConfig, out_dir: Path | None = None) -> tuple[OracleResult, OracleResult, str]:
    out = Path(out_dir or cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    coarse, best = run_oracle(cfg)
    write_surface_csv(coarse, out / "surface.csv")
    line = _optimum_line(best)
    if not coarse.interior:
        line += " (on domain edge)"
    (out / "optimum.txt").write_text(line + "\n", encoding="utf-8")
    return coarse, best, line


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rangeseek", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate-config", help="write the default, commented config")
    g.add_argument("--out", type=Path, help=f"directory for {CONFIG_NAME} (stdout if omitted)")

    for name, help_ in (
        ("simulate", "run one closed-loop simulation"),
        ("compare", "run adaptive and standard side by side"),
        ("oracle", "brute-force the cost surface"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--config", type=Path, required=True)
        s.add_argument("--out", type=Path)
        if name != "oracle":
            s.add_argument("--seed", type=int)
        if name == "simulate":
            s.add_argument("--mode", choices=MODES)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = _parser().parse_args(argv)
    try:
        if args.command == "generate-config":
            text = render_config()
            if args.out:
                args.out.mkdir(parents=True, exist_ok=True)
                (args.out / CONFIG_NAME).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
            return 0
        cfg = load_config(args.config)
        if getattr(args, "seed", None) is not None:
            cfg = cfg.with_seed(args.seed)
        if args.command == "simulate":
            res = cmd_simulate(cfg, args.mode, args.out)
            print(res.summary)
        elif args.command == "compare":
            print(cmd_compare(cfg, args.out).text)
        else:
            print(cmd_oracle(cfg, args.out)[2])
    except (ParseError, ValidationError) as exc:
        log.error("config error: %s", exc)
        return 2
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        log.error("error: %s: %s", type(exc).__name__, exc)
        return 1
    return 0
