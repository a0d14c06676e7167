"""Multivariable extremum seeking controller with optional adaptive step size.

Each optimisation variable gets its own channel: the measured cost is
high-pass filtered, demodulated by the channel's dither, low-pass filtered
into a gradient estimate, optionally normalised by a moment-based step-size
adapter, and integrated. The reference handed to the vehicle is the
integrated setpoint plus the dither.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ConfigError, InvalidTimestep, ValidationError

__all__ = [
    "FilterKind",
    "FirstOrderFilter",
    "AdapterConfig",
    "StepSizeAdapter",
    "EscChannelConfig",
    "EscChannel",
    "EscController",
    "speed_channel_config",
    "sideslip_channel_config",
    "SPEED_BOUNDS",
    "SIDESLIP_BOUNDS",
]

SPEED_BOUNDS = (0.2, 8.0)
SIDESLIP_BOUNDS = (0.0, math.pi)

# Two dither frequencies closer than this (relative) are treated as equal.
FREQUENCY_SEPARATION = 0.01


class FilterKind(enum.Enum):
    HIGH_PASS = "high_pass"
    LOW_PASS = "low_pass"


@dataclass
class FirstOrderFilter:
    """Backward-Euler first-order filter.

    The first sample initialises the state: a low-pass starts at the input
    value, a high-pass at zero output.
    """

    kind: FilterKind
    cutoff: float
    prev_input: float = 0.0
    prev_output: float = 0.0
    initialized: bool = False

    def __post_init__(self):
        if not self.cutoff > 0:
            raise ValidationError("cutoff", "must be > 0")

    def step(self, u: float, dt: float) -> float:
        if not dt > 0:
            raise InvalidTimestep(f"dt must be > 0, got {dt}")
        if not self.initialized:
            self.initialized = True
            self.prev_input = u
            self.prev_output = u if self.kind is FilterKind.LOW_PASS else 0.0
            return self.prev_output
        wdt = dt * self.cutoff
        if self.kind is FilterKind.LOW_PASS:
            y = self.prev_output + (wdt / (1.0 + wdt)) * (u - self.prev_output)
        else:
            y = (self.prev_output + u - self.prev_input) / (1.0 + wdt)
        self.prev_input = u
        self.prev_output = y
        return y

    def reset(self):
        self.prev_input = self.prev_output = 0.0
        self.initialized = False


@dataclass(frozen=True)
class AdapterConfig:
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    threshold: float = 1.0

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            if not 0 <= getattr(self, name) < 1:
                raise ValidationError(name, "must lie in [0, 1)")
        if not self.epsilon >= 0:
            raise ValidationError("epsilon", "must be >= 0")
        if not self.threshold > 0:
            raise ValidationError("threshold", "must be > 0")


@dataclass
class StepSizeAdapter:
    """Exponential first/second-moment normaliser for the gradient estimate.

    Above ``threshold`` the output is ``m / (sqrt(v) + eps)``, so its size is
    roughly independent of the raw gradient scale. Below it the output is
    ``m (sqrt(v) + eps) / threshold**2``, which shrinks quadratically as the
    estimate approaches zero near the optimum.

    The very first sample seeds both moments and is then also processed as
    a regular update.
    """

    config: AdapterConfig = field(default_factory=AdapterConfig)
    first_moment: float = 0.0
    second_moment: float = 0.0
    step_index: int = 0
    initialized: bool = False

    def step(self, q_lp: float) -> float:
        c = self.config
        if not self.initialized:
            self.first_moment = q_lp
            self.second_moment = q_lp * q_lp
            self.initialized = True
        self.step_index += 1
        self.first_moment = c.beta1 * self.first_moment + (1.0 - c.beta1) * q_lp
        self.second_moment = c.beta2 * self.second_moment + (1.0 - c.beta2) * q_lp * q_lp
        root = math.sqrt(self.second_moment)
        if root > c.threshold:
            return self.first_moment / (root + c.epsilon)
        return self.first_moment * (root + c.epsilon) / (c.threshold * c.threshold)


@dataclass(frozen=True)
class EscChannelConfig:
    """Configuration of one ESC channel, in the controlled variable's units.

    ``adapter=None`` gives the standard constant-step controller.
    """

    amplitude: float
    frequency: float
    hp_cutoff: float
    lp_cutoff: float
    gain: float
    initial_setpoint: float
    bounds: tuple[float, float]
    adapter: AdapterConfig | None = None

    def __post_init__(self):
        for name, label in (
            ("amplitude", "a"),
            ("frequency", "omega"),
            ("hp_cutoff", "hp_cutoff"),
            ("lp_cutoff", "lp_cutoff"),
        ):
            if not getattr(self, name) > 0:
                raise ValidationError(label, "must be > 0")
        if not self.gain >= 0:
            # k = 0 freezes the integrator; used for open-loop gradient checks.
            raise ValidationError("k", "must be >= 0")
        lo, hi = self.bounds
        if not lo < hi:
            raise ValidationError("bounds", f"min {lo} must be < max {hi}")
        if not lo <= self.initial_setpoint <= hi:
            raise ValidationError("r0", f"{self.initial_setpoint} outside bounds [{lo}, {hi}]")

    @property
    def adaptive(self) -> bool:
        return self.adapter is not None

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.frequency


class EscChannel:
    """Mutable state of one channel plus its last internal signals."""

    def __init__(self, config: EscChannelConfig):
        self.config = config
        self.hp = FirstOrderFilter(FilterKind.HIGH_PASS, config.hp_cutoff)
        self.lp = FirstOrderFilter(FilterKind.LOW_PASS, config.lp_cutoff)
        self.adapter = StepSizeAdapter(config.adapter) if config.adapter else None
        self.integrator = 0.0
        self.q_hp = 0.0
        self.xi = 0.0
        self.q_lp = 0.0
        self.g = 0.0

    @property
    def setpoint(self) -> float:
        return self.config.initial_setpoint + self.integrator

    def step(self, cost: float, t: float, dt: float) -> float:
        c = self.config
        demod = math.sin(c.frequency * t)
        self.q_hp = self.hp.step(cost, dt)
        self.xi = self.q_hp * demod
        self.q_lp = self.lp.step(self.xi, dt)
        self.g = self.adapter.step(self.q_lp) if self.adapter else self.q_lp
        lo, hi = c.bounds
        r0 = c.initial_setpoint
        self.integrator = min(max(self.integrator - c.gain * self.g * dt, lo - r0), hi - r0)
        return r0 + self.integrator + c.amplitude * demod


class EscController:
    """Speed and sideslip channels driven by one scalar cost."""

    def __init__(self, speed: EscChannelConfig, sideslip: EscChannelConfig):
        wv, ws = speed.frequency, sideslip.frequency
        if abs(wv - ws) <= FREQUENCY_SEPARATION * max(wv, ws):
            raise ConfigError(
                "omega",
                f"dither frequencies must be distinct frequencies (speed {wv}, sideslip {ws})",
            )
        self.speed = EscChannel(speed)
        self.sideslip = EscChannel(sideslip)

    def step(self, cost: float, t: float, dt: float) -> tuple[float, float]:
        return self.speed.step(cost, t, dt), self.sideslip.step(cost, t, dt)


def speed_channel_config(
    adaptive: bool = True,
    initial: float = 2.2,
    *,
    gain: float | None = None,
    bounds: tuple[float, float] = SPEED_BOUNDS,
    adapter: AdapterConfig | None = None,
) -> EscChannelConfig:
    """Speed channel with the published dither/filter/gain settings."""
    return EscChannelConfig(
        amplitude=0.15,
        frequency=1.0,
        hp_cutoff=1.0,
        lp_cutoff=1.0,
        gain=gain if gain is not None else (0.1 if adaptive else 0.025),
        initial_setpoint=initial,
        bounds=bounds,
        adapter=(adapter or AdapterConfig()) if adaptive else None,
    )


def sideslip_channel_config(
    adaptive: bool = True,
    initial: float = math.radians(50.0),
    *,
    gain: float | None = None,
    bounds: tuple[float, float] = SIDESLIP_BOUNDS,
    adapter: AdapterConfig | None = None,
) -> EscChannelConfig:
    """Sideslip channel (radians) with the published settings."""
    return EscChannelConfig(
        amplitude=math.radians(7.5),
        frequency=0.5,
        hp_cutoff=0.5,
        lp_cutoff=0.5,
        gain=gain if gain is not None else (0.1 if adaptive else 0.02),
        initial_setpoint=initial,
        bounds=bounds,
        adapter=(adapter or AdapterConfig()) if adaptive else None,
    )
