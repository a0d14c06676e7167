"""Adaptive/standard settling ratio across many noise seeds.

    python scripts/seed_sweep.py --seeds 20 [--noise 2.0] [--config PATH]
"""

import argparse
import tempfile
from dataclasses import replace

import numpy as np

from rangeseek.cli import cmd_compare
from rangeseek.config import ExperimentConfig, load_config


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--config")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--noise", type=float, help="override power noise std (W)")
    args = p.parse_args()
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.noise is not None:
        cfg = replace(cfg, sim=replace(cfg.sim, noise_std=args.noise))
    ratios = []
    with tempfile.TemporaryDirectory() as tmp:
        for seed in range(args.seeds):
            rep = cmd_compare(cfg.with_seed(seed), f"{tmp}/{seed}").report
            r = rep.ratio if rep.ratio is not None else np.nan
            ratios.append(r)
            print(f"seed {seed:3d}: adaptive {rep.settling_a:7.2f} s  standard {rep.settling_b:7.2f} s  ratio {r:.3f}")
    ratios = np.array(ratios)
    ok = np.isfinite(ratios)
    print(f"settled in both: {ok.sum()}/{len(ratios)}")
    if ok.any():
        print(f"ratio median {np.median(ratios[ok]):.3f}, max {ratios[ok].max():.3f}, "
              f"share <= 0.8: {np.mean(ratios[ok] <= 0.8):.2f}")  # fmt: skip


if __name__ == "__main__":
    main()
