"""Closed-loop simulation of the ESC around the steady-flight plant."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidConfig, MismatchedConfig, ValidationError
from .esc import EscChannelConfig, EscController, sideslip_channel_config, speed_channel_config
from .plant import DEFAULT_VEHICLE, FlightCondition, VehicleParams, trim

__all__ = [
    "SimConfig",
    "SimTrace",
    "ComparisonReport",
    "run_simulation",
    "settling_time",
    "period_mean",
    "compare_runs",
    "track",
    "DID_NOT_SETTLE",
    "SPEED_FLOOR",
]

DID_NOT_SETTLE = math.inf
# Lowest airspeed ever handed to the plant; the cost diverges at zero.
SPEED_FLOOR = 1e-3

PowerFn = Callable[[float, float], float]


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01
    duration: float = 300.0
    seed: int = 0
    power_noise_std: float = 2.0
    tracking_time_constant: float = 0.3
    vehicle: VehicleParams = DEFAULT_VEHICLE
    speed_channel: EscChannelConfig = field(default_factory=speed_channel_config)
    sideslip_channel: EscChannelConfig = field(default_factory=sideslip_channel_config)

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidConfig("dt", "must be > 0")
        longest = max(self.speed_channel.period, self.sideslip_channel.period)
        if not self.duration >= 10 * longest:
            raise InvalidConfig(
                "duration", f"must cover >= 10 dither periods ({10 * longest:.3f} s)"
            )
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise InvalidConfig("seed", "must be a non-negative integer")
        if not self.power_noise_std >= 0:
            raise InvalidConfig("power_noise_std", "must be >= 0")
        if not self.tracking_time_constant >= 0:
            raise InvalidConfig("tracking_time_constant", "must be >= 0")

    @property
    def steps(self) -> int:
        return int(math.floor(self.duration / self.dt + 1e-9))


@dataclass
class SimTrace:
    """Per-step record of one closed-loop run; angles in radians."""

    dt: float
    duration: float
    speed_period: float
    sideslip_period: float
    t: np.ndarray
    speed_ref: np.ndarray
    sideslip_ref: np.ndarray
    speed_actual: np.ndarray
    sideslip_actual: np.ndarray
    power_true: np.ndarray
    power_measured: np.ndarray
    cost_measured: np.ndarray
    q_lp_v: np.ndarray
    q_lp_s: np.ndarray
    g_v: np.ndarray
    g_s: np.ndarray
    integrator_v: np.ndarray
    integrator_s: np.ndarray

    SERIES = (
        "t", "speed_ref", "sideslip_ref", "speed_actual", "sideslip_actual",
        "power_true", "power_measured", "cost_measured", "q_lp_v", "q_lp_s",
        "g_v", "g_s", "integrator_v", "integrator_s",
    )  # fmt: skip

    def __len__(self) -> int:
        return len(self.t)


def track(actual: float, reference: float, dt: float, tau: float) -> float:
    """One step of the first-order reference-following lag (tau = 0: exact)."""
    if tau == 0:
        return reference
    return actual + min(dt / tau, 1.0) * (reference - actual)


def _plant_power(vehicle: VehicleParams) -> PowerFn:
    def power(speed: float, sideslip: float) -> float:
        return trim(vehicle, FlightCondition(speed, sideslip)).total_power

    return power


def run_simulation(config: SimConfig, plant: PowerFn | None = None) -> SimTrace:
    """Run the closed loop for ``config.duration`` seconds.

    ``plant`` maps (speed, sideslip) to true power in W and defaults to the
    trimmed vehicle model. Measurement noise is drawn from
    ``numpy.random.default_rng(config.seed)`` (PCG64).
    """
    if not isinstance(config, SimConfig):
        raise InvalidConfig("", f"expected SimConfig, got {type(config).__name__}")
    power_fn = plant or _plant_power(config.vehicle)
    controller = EscController(config.speed_channel, config.sideslip_channel)
    sv, ss = controller.speed, controller.sideslip
    rng = np.random.default_rng(config.seed)
    n = config.steps
    dt = config.dt
    tau = config.tracking_time_constant
    sigma = config.power_noise_std
    noise = rng.standard_normal(n) * sigma if sigma > 0 else np.zeros(n)

    out = np.empty((len(SimTrace.SERIES), n))
    speed = max(config.speed_channel.initial_setpoint, SPEED_FLOOR)
    sideslip = config.sideslip_channel.initial_setpoint
    p_true = power_fn(speed, sideslip)
    cost = p_true / speed
    for i in range(n):
        t = i * dt
        speed_ref, sideslip_ref = controller.step(cost, t, dt)
        speed = max(track(speed, speed_ref, dt, tau), SPEED_FLOOR)
        sideslip = track(sideslip, sideslip_ref, dt, tau)
        p_true = power_fn(speed, sideslip)
        p_meas = p_true + noise[i]
        cost = p_meas / speed
        out[:, i] = (
            t, speed_ref, sideslip_ref, speed, sideslip, p_true, p_meas, cost,
            sv.q_lp, ss.q_lp, sv.g, ss.g, sv.integrator, ss.integrator,
        )  # fmt: skip

    return SimTrace(
        dt=dt,
        duration=config.duration,
        speed_period=config.speed_channel.period,
        sideslip_period=config.sideslip_channel.period,
        **dict(zip(SimTrace.SERIES, out)),
    )


def period_mean(x: np.ndarray, window: int) -> np.ndarray:
    """Trailing moving average; the first ``window - 1`` entries average
    whatever samples exist so far."""
    window = max(int(window), 1)
    c = np.cumsum(np.concatenate(([0.0], x)))
    idx = np.arange(1, len(x) + 1)
    lo = np.maximum(idx - window, 0)
    return (c[idx] - c[lo]) / (idx - lo)


def settling_time(
    trace: SimTrace,
    target_speed: float,
    target_sideslip: float,
    tol_speed: float,
    tol_sideslip: float,
) -> float:
    """Earliest time after which both period-averaged references stay within
    tolerance of their targets; ``DID_NOT_SETTLE`` (inf) otherwise."""
    if not (tol_speed > 0 and tol_sideslip > 0):
        raise ValidationError("tol", "tolerances must be > 0")
    if len(trace) == 0:
        return DID_NOT_SETTLE
    wv = round(trace.speed_period / trace.dt)
    ws = round(trace.sideslip_period / trace.dt)
    ok = (np.abs(period_mean(trace.speed_ref, wv) - target_speed) <= tol_speed) & (
        np.abs(period_mean(trace.sideslip_ref, ws) - target_sideslip) <= tol_sideslip
    )
    if not ok[-1]:
        return DID_NOT_SETTLE
    bad = np.flatnonzero(~ok)
    return float(trace.t[0]) if bad.size == 0 else float(trace.t[bad[-1] + 1])


@dataclass(frozen=True)
class ComparisonReport:
    settling_a: float
    settling_b: float
    ratio: float | None  # settling_a / settling_b; None if either did not settle
    final_cost_a: float
    final_cost_b: float
    final_speed_error_a: float
    final_speed_error_b: float
    final_sideslip_error_a: float
    final_sideslip_error_b: float

    @property
    def a_settled(self) -> bool:
        return math.isfinite(self.settling_a)

    @property
    def b_settled(self) -> bool:
        return math.isfinite(self.settling_b)


def _final_window(trace: SimTrace) -> int:
    return round(max(trace.speed_period, trace.sideslip_period) / trace.dt)


def compare_runs(
    trace_a: SimTrace,
    trace_b: SimTrace,
    target_speed: float,
    target_sideslip: float,
    tol_speed: float,
    tol_sideslip: float,
) -> ComparisonReport:
    if trace_a.dt != trace_b.dt or trace_a.duration != trace_b.duration:
        raise MismatchedConfig(
            f"dt/duration differ: ({trace_a.dt}, {trace_a.duration}) vs "
            f"({trace_b.dt}, {trace_b.duration})"
        )
    targets = (target_speed, target_sideslip, tol_speed, tol_sideslip)
    sa = settling_time(trace_a, *targets)
    sb = settling_time(trace_b, *targets)
    if math.isfinite(sa) and math.isfinite(sb):
        ratio = 1.0 if sa == sb else (sa / sb if sb > 0 else math.inf)
    else:
        ratio = None

    def finals(tr: SimTrace) -> tuple[float, float, float]:
        w = min(_final_window(tr), len(tr))
        return (
            float(np.mean(tr.cost_measured[-w:])),
            float(np.mean(tr.speed_ref[-round(tr.speed_period / tr.dt):]) - target_speed),
            float(np.mean(tr.sideslip_ref[-round(tr.sideslip_period / tr.dt):]) - target_sideslip),
        )

    ca, va, ba = finals(trace_a)
    cb, vb, bb = finals(trace_b)
    return ComparisonReport(sa, sb, ratio, ca, cb, va, vb, ba, bb)

