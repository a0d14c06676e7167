"""Experiment configuration: YAML file <-> validated dataclasses.

Angles are degrees in the file and radians everywhere else. The sections
hold values in file units so that a generated file reloads to an identical
``ExperimentConfig``; conversion happens when controller and simulation
configs are built.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import yaml

from .errors import ParseError, ValidationError
from .esc import AdapterConfig, EscChannelConfig, EscController
from .plant import VehicleParams
from .sim import SimConfig

__all__ = [
    "MODES",
    "DomainSection",
    "ChannelSection",
    "SimSection",
    "OutputSection",
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "render_config",
]

MODES = ("adaptive", "standard")


@dataclass(frozen=True)
class DomainSection:
    speed_range: tuple[float, float] = (0.2, 8.0)
    sideslip_range: tuple[float, float] = (0.0, 180.0)  # deg
    steps: tuple[int, int] = (157, 181)
    refine_levels: int = 2

    def __post_init__(self):
        lo, hi = self.speed_range
        if not 0 < lo < hi:
            raise ValidationError("speed_range", "need 0 < min < max")
        lo, hi = self.sideslip_range
        if not lo < hi:
            raise ValidationError("sideslip_range", "need min < max")
        if min(self.steps) < 16:
            raise ValidationError("steps", "need at least 16 points per axis")
        if self.refine_levels < 0:
            raise ValidationError("refine_levels", "must be >= 0")


@dataclass(frozen=True)
class ChannelSection:
    """One ESC channel in file units (m/s, or degrees for sideslip)."""

    mode: str
    a: float
    omega: float
    hp_cutoff: float
    lp_cutoff: float
    k: dict
    r0: float
    bounds: tuple[float, float]

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError("mode", f"must be one of {MODES}, got {self.mode!r}")
        if set(self.k) != set(MODES):
            raise ValidationError("k", f"needs exactly the keys {MODES}")
        for m, value in self.k.items():
            if not value > 0:
                raise ValidationError(f"k.{m}", "must be > 0")

    def build(self, mode: str | None, adapter: AdapterConfig, angular: bool) -> EscChannelConfig:
        mode = mode or self.mode
        conv = math.radians if angular else float
        return EscChannelConfig(
            amplitude=conv(self.a),
            frequency=self.omega,
            hp_cutoff=self.hp_cutoff,
            lp_cutoff=self.lp_cutoff,
            gain=self.k[mode],
            initial_setpoint=conv(self.r0),
            bounds=(conv(self.bounds[0]), conv(self.bounds[1])),
            adapter=adapter if mode == "adaptive" else None,
        )


def _speed_section() -> ChannelSection:
    return ChannelSection(
        mode="adaptive", a=0.15, omega=1.0, hp_cutoff=1.0, lp_cutoff=1.0,
        k={"adaptive": 0.1, "standard": 0.025}, r0=2.2, bounds=(0.2, 8.0),
    )  # fmt: skip


def _sideslip_section() -> ChannelSection:
    return ChannelSection(
        mode="adaptive", a=7.5, omega=0.5, hp_cutoff=0.5, lp_cutoff=0.5,
        k={"adaptive": 0.1, "standard": 0.02}, r0=50.0, bounds=(0.0, 180.0),
    )  # fmt: skip


@dataclass(frozen=True)
class SimSection:
    dt: float = 0.01
    duration: float = 300.0
    seed: int = 0
    noise_std: float = 2.0
    tracking_tau: float = 0.3

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError("dt", "must be > 0")
        if self.seed < 0:
            raise ValidationError("seed", "must be >= 0")
        for name in ("noise_std", "tracking_tau"):
            if not getattr(self, name) >= 0:
                raise ValidationError(name, "must be >= 0")


@dataclass(frozen=True)
class OutputSection:
    directory: str = "out"
    decimation: int = 1

    def __post_init__(self):
        if not (isinstance(self.decimation, int) and self.decimation >= 1):
            raise ValidationError("decimation", "must be an integer >= 1")


@dataclass(frozen=True)
class ExperimentConfig:
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    domain: DomainSection = field(default_factory=DomainSection)
    speed_channel: ChannelSection = field(default_factory=_speed_section)
    sideslip_channel: ChannelSection = field(default_factory=_sideslip_section)
    adapter: AdapterConfig = field(default_factory=AdapterConfig)
    sim: SimSection = field(default_factory=SimSection)
    output: OutputSection = field(default_factory=OutputSection)

    def __post_init__(self):
        # Cross-section checks: every mode must yield a buildable controller
        # and simulation.
        for mode in MODES:
            speed = _under("esc.speed_channel", self.speed_channel.build, mode, self.adapter, False)
            side = _under("esc.sideslip_channel", self.sideslip_channel.build, mode, self.adapter, True)
            _under("esc", EscController, speed, side)
            _under("sim", self._sim, speed, side)

    def channels(self, mode: str | None = None) -> tuple[EscChannelConfig, EscChannelConfig]:
        return (
            self.speed_channel.build(mode, self.adapter, angular=False),
            self.sideslip_channel.build(mode, self.adapter, angular=True),
        )

    def _sim(self, speed: EscChannelConfig, sideslip: EscChannelConfig) -> SimConfig:
        s = self.sim
        return SimConfig(
            dt=s.dt,
            duration=s.duration,
            seed=s.seed,
            power_noise_std=s.noise_std,
            tracking_time_constant=s.tracking_tau,
            vehicle=self.vehicle,
            speed_channel=speed,
            sideslip_channel=sideslip,
        )

    def sim_config(self, mode: str | None = None, seed: int | None = None) -> SimConfig:
        cfg = self._sim(*self.channels(mode))
        return cfg if seed is None else replace(cfg, seed=seed)

    @property
    def sideslip_range_rad(self) -> tuple[float, float]:
        lo, hi = self.domain.sideslip_range
        return math.radians(lo), math.radians(hi)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, sim=replace(self.sim, seed=seed))


def _under(prefix: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValidationError as exc:
        raise exc.under(prefix) from None


# --- file format ----------------------------------------------------------

# Key -> inline comment per section; dict order is file order.
_VEHICLE_DOC = {
    "mass": "kg",
    "rotor_radius": "m, 203 mm propellers",
    "air_density": "kg/m^3",
    "gravity": "m/s^2",
    "eta": "lumped motor/propeller/avionics efficiency (stand-in value)",
    "kappa": "induced-power correction factor (stand-in value)",
    "mu1_long": "N s/m, linear drag along body x (stand-in value)",
    "mu1_lat": "N s/m, linear drag along body y (stand-in value)",
    "mu2_long": "N s^2/m^2, quadratic drag along body x (stand-in value)",
    "mu2_lat": "N s^2/m^2, quadratic drag along body y (stand-in value)",
}
_DOMAIN_DOC = {
    "speed_range": "m/s, oracle search range",
    "sideslip_range": "deg",
    "steps": "grid points (speed, sideslip)",
    "refine_levels": "local refinement passes, each halving the spacing",
}
_CHANNEL_DOC = {
    "mode": "adaptive | standard",
    "a": "dither amplitude",
    "omega": "rad/s, dither frequency",
    "hp_cutoff": "rad/s",
    "lp_cutoff": "rad/s",
    "k": "integrator gain per mode",
    "r0": "initial setpoint",
    "bounds": "setpoint clamp [min, max]",
}
_ADAPTER_DOC = {
    "beta1": "first-moment decay",
    "beta2": "second-moment decay",
    "epsilon": "",
    "threshold": "gradient-estimate level below which steps shrink",
}
_SIM_DOC = {
    "dt": "s",
    "duration": "s",
    "seed": "noise generator seed (numpy PCG64)",
    "noise_std": "W, additive Gaussian noise on measured power",
    "tracking_tau": "s, first-order lag from reference to actual (0 = perfect)",
}
_OUTPUT_DOC = {
    "directory": "output directory for CSV and reports",
    "decimation": "keep every n-th trace row",
}

_INT_FIELDS = {"steps", "refine_levels", "seed", "decimation"}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        s = repr(value)
        # PyYAML only resolves exponent floats that contain a dot.
        if "e" in s and "." not in s.split("e")[0]:
            mant, exp = s.split("e")
            s = f"{mant}.0e{exp}"
        return s
    if isinstance(value, str):
        return yaml.safe_dump(value, default_style='"').strip()
    if isinstance(value, (tuple, list)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in value.items()) + "}"
    raise TypeError(type(value))


def _emit(lines: list[str], indent: str, values: dict, doc: dict):
    for key, comment in doc.items():
        line = f"{indent}{key}: {_fmt(values[key])}"
        lines.append(f"{line}  # {comment}" if comment else line)


def render_config(cfg: ExperimentConfig | None = None) -> str:
    """Commented YAML for ``cfg`` (defaults if omitted)."""
    cfg = cfg or ExperimentConfig()
    lines = [
        "# rangeseek experiment configuration.",
        "# Angles are in degrees. ESC dither, filter and gain values are the",
        "# published experiment settings; vehicle values marked 'stand-in' are",
        "# not measured quantities.",
        "",
        "vehicle:",
    ]
    _emit(lines, "  ", asdict(cfg.vehicle), _VEHICLE_DOC)
    lines.append("domain:")
    _emit(lines, "  ", asdict(cfg.domain), _DOMAIN_DOC)
    lines.append("esc:")
    for name, unit in (("speed_channel", "m/s"), ("sideslip_channel", "deg")):
        lines.append(f"  {name}:  # {unit}")
        _emit(lines, "    ", asdict(getattr(cfg, name)), _CHANNEL_DOC)
    lines.append("  adapter:")
    _emit(lines, "    ", asdict(cfg.adapter), _ADAPTER_DOC)
    lines.append("sim:")
    _emit(lines, "  ", asdict(cfg.sim), _SIM_DOC)
    lines.append("output:")
    _emit(lines, "  ", asdict(cfg.output), _OUTPUT_DOC)
    return "\n".join(lines) + "\n"


def _check_keys(data, allowed, path: str):
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError(path, "expected a mapping")
    for key in data:
        if key not in allowed:
            raise ValidationError(f"{path}.{key}" if path else str(key), "unknown key")
    return data


def _coerce(key: str, value, default, path: str):
    where = f"{path}.{key}"
    if isinstance(default, (tuple, list)):
        if not isinstance(value, (list, tuple)) or len(value) != len(default):
            raise ValidationError(where, f"expected a list of {len(default)} numbers")
        return tuple(_coerce(key, v, d, path) for v, d in zip(value, default))
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ValidationError(where, "expected a string")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(where, f"expected a number, got {value!r}")
    if key in _INT_FIELDS:
        if isinstance(value, float) and not value.is_integer():
            raise ValidationError(where, "expected an integer")
        return int(value)
    return float(value)


def _section(cls, data, path: str, default=None):
    default = default if default is not None else cls()
    data = _check_keys(data, {f.name for f in fields(cls)}, path)
    kwargs = {}
    for f in fields(cls):
        base = getattr(default, f.name)
        if f.name not in data:
            kwargs[f.name] = base
        elif isinstance(base, dict):
            sub = _check_keys(data[f.name], set(base), f"{path}.{f.name}")
            kwargs[f.name] = {
                k: _coerce(k, sub.get(k, base[k]), base[k], f"{path}.{f.name}") for k in base
            }
        else:
            kwargs[f.name] = _coerce(f.name, data[f.name], base, path)
    return _under(path, cls, **kwargs)


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise ParseError(f"malformed config: {exc.problem or exc}", mark.line + 1 if mark else None) from None
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed config: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ParseError("top level must be a mapping of sections")
    data = _check_keys(data, {"vehicle", "domain", "esc", "sim", "output"}, "")
    esc = _check_keys(data.get("esc"), {"speed_channel", "sideslip_channel", "adapter"}, "esc")
    base = ExperimentConfig()
    return ExperimentConfig(
        vehicle=_section(VehicleParams, data.get("vehicle"), "vehicle"),
        domain=_section(DomainSection, data.get("domain"), "domain"),
        speed_channel=_section(ChannelSection, esc.get("speed_channel"), "esc.speed_channel", base.speed_channel),
        sideslip_channel=_section(ChannelSection, esc.get("sideslip_channel"), "esc.sideslip_channel", base.sideslip_channel),
        adapter=_section(AdapterConfig, esc.get("adapter"), "esc.adapter"),
        sim=_section(SimSection, data.get("sim"), "sim"),
        output=_section(OutputSection, data.get("output"), "output"),
    )  # fmt: skip


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
