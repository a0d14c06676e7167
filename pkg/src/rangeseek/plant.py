"""Steady-flight quadcopter power and range-cost model.

The vehicle is evaluated in straight, level, constant-speed flight: thrust
balances weight plus aerodynamic drag, and power follows from momentum
theory with a lumped efficiency. Rotational dynamics are not modelled.

Sign convention: the rotor plane tilts forward into the free stream by
``tilt = atan(D / mg)`` and the angle of attack is ``+tilt``, so the
``nu_inf * sin(alpha)`` term in the induced power carries the work done
against drag (``T sin(alpha) = D``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput, InvalidSpeed, NonConvergence, ValidationError

__all__ = [
    "VehicleParams",
    "FlightCondition",
    "TrimState",
    "DEFAULT_VEHICLE",
    "drag_coefficients",
    "drag_magnitude",
    "trim",
    "hover_induced_velocity",
    "induced_velocity",
    "induced_power",
    "total_power",
    "evaluate_cost",
    "flight_range",
]

# Residual target on  nu * sqrt((v cos a)^2 + (v sin a + nu)^2) - nu_h^2,
# relative to nu_h^2.
RESIDUAL_TOL = 1e-10
NEWTON_MAX_ITER = 50
_BISECT_MAX_ITER = 400


@dataclass(frozen=True)
class VehicleParams:
    """Physical constants of the simulated quadcopter.

    Mass and rotor radius describe a 660 g quadcopter with 203 mm
    propellers. Everything else is a plausible stand-in: the lumped efficiency
    also absorbs profile and avionics power, and the drag coefficients
    (lateral axis lower than longitudinal, as for a box payload carried
    broadside) were chosen so the range optimum sits inside the default
    search domain.
    """

    mass: float = 0.66
    rotor_radius: float = 0.1015
    air_density: float = 1.225
    gravity: float = 9.81
    eta: float = 0.25
    kappa: float = 1.15
    mu1_long: float = 0.6
    mu1_lat: float = 0.3
    mu2_long: float = 1.0
    mu2_lat: float = 0.6

    def __post_init__(self):
        for name in ("mass", "rotor_radius", "air_density", "gravity"):
            if not getattr(self, name) > 0:
                raise ValidationError(name, "must be > 0")
        if not 0 < self.eta <= 1:
            raise ValidationError("eta", "must lie in (0, 1]")
        if not self.kappa >= 1:
            raise ValidationError("kappa", "must be >= 1")
        for name in ("mu1_long", "mu1_lat", "mu2_long", "mu2_lat"):
            if not getattr(self, name) >= 0:
                raise ValidationError(name, "must be >= 0")
        if not self.mu2_long + self.mu2_lat > 0:
            raise ValidationError("mu2_long", "mu2_long + mu2_lat must be > 0")

    @property
    def weight(self) -> float:
        return self.mass * self.gravity


DEFAULT_VEHICLE = VehicleParams()


@dataclass(frozen=True)
class FlightCondition:
    speed: float  # m/s, horizontal airspeed
    sideslip: float  # rad


@dataclass(frozen=True)
class TrimState:
    drag: float
    thrust_total: float
    tilt: float
    angle_of_attack: float
    induced_velocity: float
    hover_induced_velocity: float
    induced_power: float
    total_power: float


def drag_coefficients(params: VehicleParams, sideslip: float) -> tuple[float, float]:
    """Interpolate linear/quadratic drag between body axes.

    ``mu(beta) = mu_long cos^2(beta) + mu_lat sin^2(beta)``, written as
    ``mu_long + (mu_lat - mu_long) sin^2`` so equal axes give an exactly
    sideslip-independent result. The angle is reduced into [0, pi) first, which
    makes ``beta`` and ``beta + pi`` bit-identical whenever the shifted
    angle is itself exactly representable.
    """
    s2 = math.sin(sideslip % math.pi) ** 2
    mu1 = params.mu1_long + (params.mu1_lat - params.mu1_long) * s2
    mu2 = params.mu2_long + (params.mu2_lat - params.mu2_long) * s2
    return mu1, mu2


def drag_magnitude(mu1: float, mu2: float, speed: float) -> float:
    return mu1 * speed + mu2 * speed * speed


def hover_induced_velocity(params: VehicleParams) -> float:
    return math.sqrt(
        params.weight / (8.0 * params.air_density * math.pi * params.rotor_radius**2)
    )


def _residual(nu: float, nu_h2: float, axial: float, normal: float) -> float:
    return nu * math.sqrt(normal * normal + (axial + nu) ** 2) - nu_h2


def induced_velocity(nu_h: float, nu_inf: float, alpha: float) -> float:
    """Solve the implicit momentum-theory relation for the induced velocity.

    Newton-Raphson from ``nu_h``; falls back to bisection if an iterate
    leaves (0, inf) or the iteration budget runs out.
    """
    if not nu_h > 0:
        raise InvalidInput(f"nu_h must be > 0, got {nu_h}")
    if not nu_inf >= 0:
        raise InvalidInput(f"nu_inf must be >= 0, got {nu_inf}")
    nu_h2 = nu_h * nu_h
    tol = RESIDUAL_TOL * nu_h2
    normal = nu_inf * math.cos(alpha)
    axial = nu_inf * math.sin(alpha)

    nu = nu_h
    for _ in range(NEWTON_MAX_ITER):
        root = math.sqrt(normal * normal + (axial + nu) ** 2)
        f = nu * root - nu_h2
        if abs(f) <= 1e-3 * tol:
            return nu
        df = root + nu * (axial + nu) / root
        if not df > 0:
            break
        step = f / df
        nu_next = nu - step
        if not (0 < nu_next < math.inf):
            break
        if abs(step) <= 4 * math.ulp(nu):
            nu = nu_next
            break
        nu = nu_next
    if 0 < nu < math.inf and abs(_residual(nu, nu_h2, axial, normal)) < tol:
        return nu
    return _bisect(nu_h, nu_h2, axial, normal, tol)


def _bisect(nu_h: float, nu_h2: float, axial: float, normal: float, tol: float) -> float:
    lo, hi = 1e-6 * nu_h, nu_h
    # For alpha >= 0 the root is always below nu_h; negative alpha can push
    # it above, so grow the bracket until it straddles the root.
    while _residual(lo, nu_h2, axial, normal) > 0 and lo > 1e-300:
        lo *= 1e-3
    while _residual(hi, nu_h2, axial, normal) < 0 and hi < 1e300:
        hi *= 2.0
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        f = _residual(mid, nu_h2, axial, normal)
        if abs(f) < tol:
            return mid
        if f < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 2 * math.ulp(mid):
            break
    raise NonConvergence(
        f"induced velocity did not converge (nu_h={nu_h}, axial={axial}, normal={normal})"
    )


def induced_power(
    kappa: float, nu: float, nu_inf: float, alpha: float, thrust_total: float
) -> float:
    return kappa * (nu + nu_inf * math.sin(alpha)) * thrust_total


def total_power(params: VehicleParams, induced_power: float) -> float:
    return induced_power / params.eta


def trim(params: VehicleParams, condition: FlightCondition) -> TrimState:
    speed = condition.speed
    if not speed >= 0:
        raise InvalidSpeed(f"speed must be >= 0, got {speed}")
    mu1, mu2 = drag_coefficients(params, condition.sideslip)
    drag = drag_magnitude(mu1, mu2, speed)
    weight = params.weight
    tilt = math.atan(drag / weight)
    thrust = math.hypot(weight, drag)
    alpha = tilt
    nu_h = hover_induced_velocity(params)
    nu = induced_velocity(nu_h, speed, alpha)
    p_ind = induced_power(params.kappa, nu, speed, alpha, thrust)
    return TrimState(
        drag=drag,
        thrust_total=thrust,
        tilt=tilt,
        angle_of_attack=alpha,
        induced_velocity=nu,
        hover_induced_velocity=nu_h,
        induced_power=p_ind,
        total_power=total_power(params, p_ind),
    )


def evaluate_cost(params: VehicleParams, condition: FlightCondition) -> float:
    """Power per unit speed (W s/m); minimising it maximises range."""
    if not condition.speed > 0:
        raise InvalidSpeed(f"cost undefined at speed {condition.speed} <= 0")
    return trim(params, condition).total_power / condition.speed


def flight_range(speed: float, power: float, delta_energy: float) -> float:
    if not power > 0:
        raise InvalidInput(f"power must be > 0, got {power}")
    if not speed > 0:
        raise InvalidInput(f"speed must be > 0, got {speed}")
    if not delta_energy >= 0:
        raise InvalidInput(f"delta_energy must be >= 0, got {delta_energy}")
    return speed * delta_energy / power
