"""Brute-force ground truth for the range-cost optimum."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .plant import FlightCondition, VehicleParams, evaluate_cost

__all__ = [
    "OracleResult",
    "grid_search",
    "refine",
    "export_surface",
    "import_surface",
    "DEFAULT_SPEED_RANGE",
    "DEFAULT_SIDESLIP_RANGE",
    "DEFAULT_STEPS",
]

DEFAULT_SPEED_RANGE = (0.2, 8.0)
DEFAULT_SIDESLIP_RANGE = (0.0, math.pi)
# 0.05 m/s and 1 degree spacing over the default domain.
DEFAULT_STEPS = (157, 181)
MIN_STEPS = 16


@dataclass(frozen=True)
class OracleResult:
    optimal_speed: float
    optimal_sideslip: float
    optimal_cost: float
    grid_resolution: tuple[float, float]
    speeds: np.ndarray
    sideslips: np.ndarray
    surface: np.ndarray  # shape (len(sideslips), len(speeds))

    @property
    def argmin(self) -> tuple[int, int]:
        """(sideslip index, speed index) of the optimum on ``surface``."""
        j = int(np.flatnonzero(self.sideslips == self.optimal_sideslip)[0])
        i = int(np.flatnonzero(self.speeds == self.optimal_speed)[0])
        return j, i

    @property
    def interior(self) -> bool:
        """False when the optimum lies on the grid edge, i.e. the search
        domain may be clipping the true minimum."""
        j, i = self.argmin
        return 0 < i < len(self.speeds) - 1 and 0 < j < len(self.sideslips) - 1


def _column(args: tuple[VehicleParams, float, np.ndarray]) -> np.ndarray:
    params, speed, sideslips = args
    return np.array([evaluate_cost(params, FlightCondition(speed, float(b))) for b in sideslips])


def _argmin(speeds: np.ndarray, sideslips: np.ndarray, surface: np.ndarray):
    # Flatten speed-major so the first minimum in C order is the lowest
    # speed, then the lowest sideslip.
    k = int(np.argmin(surface.T))
    i, j = divmod(k, len(sideslips))
    return float(speeds[i]), float(sideslips[j]), float(surface[j, i])


def _evaluate(params, speeds, sideslips, workers: int) -> np.ndarray:
    jobs = [(params, float(v), sideslips) for v in speeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cols = list(pool.map(_column, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        cols = [_column(job) for job in jobs]
    return np.column_stack(cols)


def _result(params, speeds, sideslips, workers=1) -> OracleResult:
    surface = _evaluate(params, speeds, sideslips, workers)
    v, b, c = _argmin(speeds, sideslips, surface)
    res = (
        float(speeds[1] - speeds[0]) if len(speeds) > 1 else 0.0,
        float(sideslips[1] - sideslips[0]) if len(sideslips) > 1 else 0.0,
    )
    return OracleResult(v, b, c, res, speeds, sideslips, surface)


def grid_search(
    params: VehicleParams,
    speed_range: tuple[float, float] = DEFAULT_SPEED_RANGE,
    sideslip_range: tuple[float, float] = DEFAULT_SIDESLIP_RANGE,
    steps: tuple[int, int] = DEFAULT_STEPS,
    workers: int = 1,
) -> OracleResult:
    """Evaluate the cost on a regular grid and return its minimiser.

    Ties go to the lower speed, then the lower sideslip, independent of
    evaluation order or ``workers``.
    """
    (v0, v1), (b0, b1) = speed_range, sideslip_range
    nv, nb = steps
    if not (v0 < v1 and b0 < b1):
        raise InvalidInput("ranges must be non-degenerate (min < max)")
    if not v0 > 0:
        raise InvalidInput("speed range must start above 0")
    if nv < MIN_STEPS or nb < MIN_STEPS:
        raise InvalidInput(f"need at least {MIN_STEPS} steps per axis, got {steps}")
    return _result(params, np.linspace(v0, v1, nv), np.linspace(b0, b1, nb), workers)


def refine(params: VehicleParams, coarse: OracleResult, levels: int = 2) -> OracleResult:
    """Repeated local search in a +-1 cell window at half the previous spacing.

    The window always contains the current optimum, so the cost can only go
    down. Windows are clipped to the coarse grid's extent.
    """
    if levels < 0:
        raise InvalidInput("levels must be >= 0")
    v_lo, v_hi = float(coarse.speeds[0]), float(coarse.speeds[-1])
    b_lo, b_hi = float(coarse.sideslips[0]), float(coarse.sideslips[-1])
    result = coarse
    dv, db = coarse.grid_resolution
    for _ in range(levels):
        v, b = result.optimal_speed, result.optimal_sideslip
        speeds = _window(v, dv, v_lo, v_hi)
        sideslips = _window(b, db, b_lo, b_hi)
        dv, db = dv / 2, db / 2
        nxt = _result(params, speeds, sideslips)
        result = OracleResult(
            nxt.optimal_speed, nxt.optimal_sideslip, nxt.optimal_cost,
            (dv, db), speeds, sideslips, nxt.surface,
        )  # fmt: skip
    return result


def _window(center: float, step: float, lo: float, hi: float) -> np.ndarray:
    pts = center + (step / 2) * np.arange(-2, 3)
    pts[2] = center
    return pts[(pts >= lo - 1e-12) & (pts <= hi + 1e-12)].clip(lo, hi)


def export_surface(result: OracleResult) -> list[tuple[float, float, float]]:
    """Long-format (speed, sideslip, cost) rows, sideslip-major."""
    return [
        (float(v), float(b), float(result.surface[j, i]))
        for j, b in enumerate(result.sideslips)
        for i, v in enumerate(result.speeds)
    ]


def import_surface(rows) -> OracleResult:
    """Rebuild an ``OracleResult`` from rows written by ``export_surface``."""
    arr = np.asarray(rows, dtype=float)
    speeds = np.unique(arr[:, 0])
    sideslips = np.unique(arr[:, 1])
    surface = np.full((len(sideslips), len(speeds)), np.nan)
    surface[np.searchsorted(sideslips, arr[:, 1]), np.searchsorted(speeds, arr[:, 0])] = arr[:, 2]
    if np.isnan(surface).any():
        raise InvalidInput("rows do not cover a full rectangular grid")
    v, b, c = _argmin(speeds, sideslips, surface)
    res = (
        float(speeds[1] - speeds[0]) if len(speeds) > 1 else 0.0,
        float(sideslips[1] - sideslips[0]) if len(sideslips) > 1 else 0.0,
    )
    return OracleResult(v, b, c, res, speeds, sideslips, surface)
