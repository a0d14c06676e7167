"""Extremum seeking range optimisation for a simulated quadcopter."""

from .esc import (
    AdapterConfig,
    EscChannel,
    EscChannelConfig,
    EscController,
    FilterKind,
    FirstOrderFilter,
    StepSizeAdapter,
    sideslip_channel_config,
    speed_channel_config,
)
from .oracle import OracleResult, export_surface, grid_search, import_surface, refine
from .plant import (
    DEFAULT_VEHICLE,
    FlightCondition,
    TrimState,
    VehicleParams,
    evaluate_cost,
    flight_range,
    trim,
)
from .sim import SimConfig, SimTrace, compare_runs, run_simulation, settling_time

__version__ = "0.1.0"
