"""Settling times for both controllers from two start points.

    python scripts/initial_conditions.py [--config PATH] [--seeds 0 1 2]
"""

import argparse
import math
from dataclasses import replace

from rangeseek.cli import run_oracle, tolerances
from rangeseek.config import MODES, ExperimentConfig, load_config
from rangeseek.sim import run_simulation, settling_time

STARTS = ((2.2, 50.0), (0.5, 20.0))


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--config", help="YAML config (defaults if omitted)")
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    args = p.parse_args()
    base = load_config(args.config) if args.config else ExperimentConfig()
    _, best = run_oracle(base)
    tol_v, tol_s = tolerances(base)
    print(f"optimum: {best.optimal_speed:.4f} m/s, {math.degrees(best.optimal_sideslip):.2f} deg")
    print(f"{'start':>16} {'seed':>4} " + " ".join(f"{m:>10}" for m in MODES) + "   ratio")
    for v0, b0 in STARTS:
        cfg = replace(
            base,
            speed_channel=replace(base.speed_channel, r0=v0),
            sideslip_channel=replace(base.sideslip_channel, r0=b0),
        )
        for seed in args.seeds:
            cfg_s = cfg.with_seed(seed)
            times = [
                settling_time(
                    run_simulation(cfg_s.sim_config(m)),
                    best.optimal_speed, best.optimal_sideslip, tol_v, tol_s,
                )  # fmt: skip
                for m in MODES
            ]
            ratio = times[0] / times[1] if all(map(math.isfinite, times)) else float("nan")
            cells = " ".join(f"{t:>10.2f}" for t in times)
            print(f"{f'({v0}, {b0:g} deg)':>16} {seed:>4} {cells}   {ratio:.3f}")


if __name__ == "__main__":
    main()
