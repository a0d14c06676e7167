import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.optimize import brentq

from rangeseek.errors import InvalidInput, InvalidSpeed, ValidationError
from rangeseek.plant import (
    DEFAULT_VEHICLE,
    FlightCondition,
    VehicleParams,
    drag_coefficients,
    drag_magnitude,
    evaluate_cost,
    flight_range,
    hover_induced_velocity,
    induced_power,
    induced_velocity,
    total_power,
    trim,
)


def residual(nu, nu_h, nu_inf, alpha):
    return nu * math.hypot(nu_inf * math.cos(alpha), nu_inf * math.sin(alpha) + nu) - nu_h**2


def fixed_point_root(nu_h, nu_inf, alpha):
    """Independent solve of nu = nu_h^2 / sqrt(...) with Brent's method."""
    g = lambda nu: nu - nu_h**2 / math.hypot(nu_inf * math.cos(alpha), nu_inf * math.sin(alpha) + nu)
    return brentq(g, 1e-12, 10 * nu_h + 10, xtol=1e-15, rtol=1e-15)


PARAMS_ASYM = VehicleParams(mu1_long=0.2, mu1_lat=0.4)


class TestVehicleParams:
    @pytest.mark.parametrize(
        "kwargs, key",
        [
            ({"mass": -1.0}, "mass"),
            ({"rotor_radius": 0.0}, "rotor_radius"),
            ({"eta": 1.5}, "eta"),
            ({"eta": 0.0}, "eta"),
            ({"kappa": 0.9}, "kappa"),
            ({"mu1_lat": -0.1}, "mu1_lat"),
            ({"mu2_long": 0.0, "mu2_lat": 0.0}, "mu2_long"),
        ],
    )
    def test_rejects_invalid(self, kwargs, key):
        with pytest.raises(ValidationError) as exc:
            VehicleParams(**kwargs)
        assert exc.value.key == key

    def test_defaults_use_test_vehicle_mass_and_rotor(self):
        assert DEFAULT_VEHICLE.mass == 0.66
        assert DEFAULT_VEHICLE.rotor_radius == pytest.approx(0.203 / 2)


class TestDrag:
    def test_axes(self):
        assert drag_coefficients(PARAMS_ASYM, 0.0)[0] == 0.2
        assert drag_coefficients(PARAMS_ASYM, math.pi / 2)[0] == pytest.approx(0.4, abs=1e-15)
        assert drag_coefficients(PARAMS_ASYM, math.pi / 4)[0] == pytest.approx(0.3, abs=1e-15)

    @pytest.mark.parametrize(
        "mu1, mu2, v, expected", [(0.2, 0.05, 0.0, 0.0), (0.2, 0.05, 2.0, 0.6), (0.0, 0.05, 4.0, 0.8)]
    )
    def test_magnitude(self, mu1, mu2, v, expected):
        assert drag_magnitude(mu1, mu2, v) == pytest.approx(expected, abs=1e-15)

    @given(st.floats(-10, 10))
    def test_pi_periodic(self, beta):
        a = drag_coefficients(DEFAULT_VEHICLE, beta)
        b = drag_coefficients(DEFAULT_VEHICLE, beta + math.pi)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-15)


class TestTrim:
    def test_hover(self):
        s = trim(DEFAULT_VEHICLE, FlightCondition(0.0, 0.3))
        assert (s.drag, s.tilt, s.angle_of_attack) == (0.0, 0.0, 0.0)
        assert s.thrust_total == DEFAULT_VEHICLE.weight
        assert s.induced_velocity == pytest.approx(s.hover_induced_velocity, abs=1e-9)

    def test_force_balance_hand_values(self):
        # mu1 = 0.2, mu2 = 0.05 on both axes -> D = 0.6 N at 2 m/s.
        p = VehicleParams(mu1_long=0.2, mu1_lat=0.2, mu2_long=0.05, mu2_lat=0.05)
        s = trim(p, FlightCondition(2.0, 1.0))
        assert s.drag == pytest.approx(0.6)
        assert s.thrust_total == pytest.approx(6.5023, abs=1e-4)
        assert s.tilt == pytest.approx(0.0924, abs=1e-4)
        assert s.angle_of_attack == s.tilt
        assert s.total_power == s.induced_power / p.eta

    @given(st.floats(0.0, 15.0), st.floats(-4.0, 4.0))
    def test_thrust_bound(self, v, beta):
        s = trim(DEFAULT_VEHICLE, FlightCondition(v, beta))
        w = DEFAULT_VEHICLE.weight
        assert s.thrust_total >= w
        if v == 0.0:
            assert s.thrust_total == w
        elif v > 1e-6:
            assert s.thrust_total > w
        assert s.thrust_total == pytest.approx(math.sqrt(w * w + s.drag * s.drag), rel=1e-15)
        assert abs(residual(s.induced_velocity, s.hover_induced_velocity, v, s.angle_of_attack)) < 1e-8

    @given(st.floats(0.2, 10.0), st.floats(0.0, math.pi))
    def test_induced_power_positive_over_sweep(self, v, beta):
        assert trim(DEFAULT_VEHICLE, FlightCondition(v, beta)).induced_power > 0


class TestInducedVelocity:
    def test_hover_closed_form(self):
        # sqrt(0.66*9.81 / (8*1.225*pi*0.1015^2)), evaluated at 50 digits.
        mpmath.mp.dps = 50
        exact = mpmath.sqrt(mpmath.mpf("0.66") * mpmath.mpf("9.81") / (8 * mpmath.mpf("1.225") * mpmath.pi * mpmath.mpf("0.1015") ** 2))
        assert float(exact) == pytest.approx(4.518064795, abs=1e-9)
        assert hover_induced_velocity(DEFAULT_VEHICLE) == pytest.approx(float(exact), rel=1e-14)

    def test_hover_scaling(self):
        base = hover_induced_velocity(DEFAULT_VEHICLE)
        heavy = VehicleParams(mass=2 * DEFAULT_VEHICLE.mass)
        big = VehicleParams(rotor_radius=2 * DEFAULT_VEHICLE.rotor_radius)
        assert hover_induced_velocity(heavy) == pytest.approx(math.sqrt(2) * base, rel=1e-14)
        assert hover_induced_velocity(big) == pytest.approx(base / 2, rel=1e-14)

    def test_hover_returns_nu_h(self):
        assert induced_velocity(4.518, 0.0, 0.0) == pytest.approx(4.518, abs=1e-12)

    def test_high_speed_limit(self):
        nu = induced_velocity(4.518, 10.0, 0.0)
        assert abs(residual(nu, 4.518, 10.0, 0.0)) < 1e-10 * 4.518**2
        assert nu == pytest.approx(4.518**2 / 10, rel=0.15)
        assert nu == pytest.approx(fixed_point_root(4.518, 10.0, 0.0), rel=1e-12)

    @given(st.floats(1, 10), st.floats(0, 20), st.floats(-math.pi / 3, math.pi / 3))
    def test_matches_independent_root_finder(self, nu_h, nu_inf, alpha):
        nu = induced_velocity(nu_h, nu_inf, alpha)
        assert abs(residual(nu, nu_h, nu_inf, alpha)) < 1e-10 * nu_h**2
        assert nu == pytest.approx(fixed_point_root(nu_h, nu_inf, alpha), rel=1e-9)

    @given(st.floats(1, 10), st.floats(1e-3, 20), st.floats(0, math.pi / 3))
    def test_forward_flight_reduces_induced_velocity(self, nu_h, nu_inf, alpha):
        assert induced_velocity(nu_h, nu_inf, alpha) <= nu_h

    @pytest.mark.parametrize("nu_h, nu_inf", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
    def test_rejects_invalid(self, nu_h, nu_inf):
        with pytest.raises(InvalidInput):
            induced_velocity(nu_h, nu_inf, 0.0)


class TestPower:
    def test_hover_induced_power(self):
        nu_h = hover_induced_velocity(DEFAULT_VEHICLE)
        p = induced_power(1.15, nu_h, 0.0, 0.0, DEFAULT_VEHICLE.weight)
        assert p == pytest.approx(1.15 * 4.518064795 * 6.4746, rel=1e-9)
        assert p == pytest.approx(33.64, abs=0.01)

    def test_identity(self):
        assert induced_power(1.0, 1.0, 0.0, 0.0, 1.0) == 1.0

    def test_negative_alpha_reduces(self):
        assert induced_power(1.15, 2.0, 3.0, -0.2, 7.0) < 1.15 * 2.0 * 7.0

    @pytest.mark.parametrize("eta, p_ind, expected", [(1.0, 33.65, 33.65), (0.5, 33.65, 67.3), (0.7, 0.0, 0.0)])
    def test_total_power(self, eta, p_ind, expected):
        assert total_power(VehicleParams(eta=eta), p_ind) == pytest.approx(expected, rel=1e-15)


class TestCost:
    def test_rejects_nonpositive_speed(self):
        for v in (0.0, -1.0):
            with pytest.raises(InvalidSpeed):
                evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, 0.0))

    def test_blows_up_near_zero(self):
        vs = np.geomspace(1e-4, 0.1, 40)
        cs = [evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, 0.5)) for v in vs]
        assert all(a > b for a, b in zip(cs, cs[1:]))
        assert cs[0] > 1e5

    def test_deterministic(self):
        c = FlightCondition(2.7, 1.1)
        assert evaluate_cost(DEFAULT_VEHICLE, c) == evaluate_cost(DEFAULT_VEHICLE, c)

    @given(st.floats(0.2, 10.0), st.floats(-2 * math.pi, 2 * math.pi))
    def test_finite_positive(self, v, beta):
        c = evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, beta))
        assert math.isfinite(c) and c > 0

    @given(st.floats(0.2, 10.0), st.floats(-3.0, 3.0))
    def test_pi_periodic_exact(self, v, beta):
        shifted = beta + math.pi
        assume(shifted - math.pi == beta)
        a = evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, beta))
        b = evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, shifted))
        assert a == b

    @given(st.floats(0.2, 10.0), st.floats(-3.0, 3.0))
    def test_pi_periodic_general(self, v, beta):
        a = evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, beta))
        b = evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, beta + math.pi))
        assert a == pytest.approx(b, rel=1e-13)

    @given(st.floats(0.2, 10.0), st.floats(0.0, math.pi))
    def test_symmetric_drag_ignores_sideslip(self, v, beta):
        p = VehicleParams(mu1_long=0.4, mu1_lat=0.4, mu2_long=0.8, mu2_lat=0.8)
        assert evaluate_cost(p, FlightCondition(v, beta)) == evaluate_cost(p, FlightCondition(v, 0.0))

    @pytest.mark.parametrize("beta_deg", range(0, 181, 10))
    def test_unimodal_in_speed(self, beta_deg):
        vs = np.arange(0.2, 10.0 + 1e-9, 0.05)
        c = np.array([evaluate_cost(DEFAULT_VEHICLE, FlightCondition(v, math.radians(beta_deg))) for v in vs])
        interior = (c[1:-1] < c[:-2]) & (c[1:-1] < c[2:])
        assert interior.sum() == 1
        assert c[0] > c[1] and c[-1] > c[-2]


class TestRange:
    def test_hand_value(self):
        assert flight_range(3.0, 150.0, 180_000.0) == 3600.0

    def test_empty_and_linear(self):
        assert flight_range(2.0, 100.0, 0.0) == 0.0
        assert flight_range(2.0, 100.0, 2e5) == 2 * flight_range(2.0, 100.0, 1e5)

    @pytest.mark.parametrize("v, p", [(0.0, 100.0), (2.0, 0.0), (-1.0, 10.0)])
    def test_invalid(self, v, p):
        with pytest.raises(InvalidInput):
            flight_range(v, p, 1.0)
