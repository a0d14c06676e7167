"""Plot reference trajectories from trace CSVs over the cost-surface contour.

    rangeseek oracle --config cfg.yaml --out out
    rangeseek compare --config cfg.yaml --out out
    python scripts/plot_traces.py out            # writes out/traces.png

Needs matplotlib (``pip install -e .[plot]``).
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def load(path: Path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: data[name] for name in data.dtype.names}


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("directory", type=Path)
    args = p.parse_args()
    d = args.directory
    fig, (ax_xy, ax_v, ax_b) = plt.subplots(1, 3, figsize=(15, 4.5))

    surface = d / "surface.csv"
    if surface.exists():
        s = load(surface)
        v, b = np.unique(s["speed"]), np.unique(s["sideslip"])
        cost = s["cost"].reshape(len(b), len(v))
        levels = np.quantile(cost, np.linspace(0, 0.6, 25))
        ax_xy.contour(v, b, cost, levels=np.unique(levels), linewidths=0.6, cmap="viridis")

    for mode, color in (("adaptive", "C3"), ("standard", "C0")):
        path = d / f"trace_{mode}.csv"
        if not path.exists():
            continue
        tr = load(path)
        ax_xy.plot(tr["speed_ref"], tr["sideslip_ref"], color=color, lw=0.5, label=mode)
        ax_v.plot(tr["t"], tr["speed_ref"], color=color, lw=0.6, label=mode)
        ax_b.plot(tr["t"], tr["sideslip_ref"], color=color, lw=0.6, label=mode)

    ax_xy.set(xlabel="speed (m/s)", ylabel="sideslip (deg)", title="reference path")
    ax_v.set(xlabel="t (s)", ylabel="speed ref (m/s)")
    ax_b.set(xlabel="t (s)", ylabel="sideslip ref (deg)")
    for ax in (ax_xy, ax_v, ax_b):
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = d / "traces.png"
    fig.savefig(out, dpi=130)
    print(out)


if __name__ == "__main__":
    main()
