import numpy as np
import pytest
from hypothesis import given, strategies as st

from uavcov.core import DomainError, RotorParams
from uavcov.energy import (
    V_BRACKET, energy_per_meter, optimal_velocity, propulsion_power, travel_energy)

ROTOR = RotorParams()


def test_power_terms_at_10_m_s():
    # hand evaluation: 79.86(1 + 300/14400), 88.63 * 4.03 / 10, 0.5*0.6*1.225*0.05*0.503 * 1000
    pw = propulsion_power(10.0, ROTOR)
    assert pw.blade_profile == pytest.approx(81.52375, abs=1e-5)
    assert pw.induced == pytest.approx(35.71789, abs=1e-5)
    assert pw.parasite == pytest.approx(9.2426, abs=1e-4)
    assert pw.total == pytest.approx(126.484, abs=1e-3)
    assert pw.total == pw.blade_profile + pw.induced + pw.parasite


def test_power_at_table_speed_near_table_value():
    total = propulsion_power(18.46, ROTOR).total
    assert total == pytest.approx(163.02, abs=0.01)
    assert abs(total - 161.8) / 161.8 <= 0.03


def test_parasite_dominates_at_high_speed():
    v = 1e4
    assert propulsion_power(v, ROTOR).total / v ** 3 == pytest.approx(
        ROTOR.parasite_coefficient, rel=1e-3)


@pytest.mark.parametrize("v", [0.0, -3.0])
def test_power_domain(v):
    with pytest.raises(DomainError):
        propulsion_power(v, ROTOR)


def test_travel_energy():
    assert travel_energy(0.0, 10.0, ROTOR) == 0.0
    assert travel_energy(1000.0, 10.0, ROTOR) == pytest.approx(12648.4, abs=0.1)
    assert travel_energy(2000.0, 10.0, ROTOR) == pytest.approx(2 * travel_energy(1000.0, 10.0, ROTOR),
                                                               rel=1e-15)
    with pytest.raises(DomainError):
        travel_energy(-1.0, 10.0, ROTOR)


@given(d=st.floats(0, 1e5), v=st.floats(0.5, 80))
def test_travel_energy_is_distance_times_energy_per_meter(d, v):
    assert travel_energy(d, v, ROTOR) == d * (propulsion_power(v, ROTOR).total / v)


@given(v=st.floats(1e-3, 1e3))
def test_power_above_blade_profile_floor(v):
    assert propulsion_power(v, ROTOR).total > ROTOR.blade_profile_power_P0


def test_optimal_velocity_default_rotor():
    v = optimal_velocity(ROTOR)
    assert 18.0 <= v <= 18.7
    assert V_BRACKET[0] < v < V_BRACKET[1]


def test_heavier_drag_lowers_optimal_speed():
    heavy = RotorParams(fuselage_drag_ratio_d0=ROTOR.fuselage_drag_ratio_d0 * 8)
    assert optimal_velocity(heavy) < optimal_velocity(ROTOR)


def test_optimal_velocity_is_stationary_point():
    v = optimal_velocity(ROTOR)
    h = 1e-3
    fd = (energy_per_meter(v + h, ROTOR) - energy_per_meter(v - h, ROTOR)) / (2 * h)
    assert abs(fd) < 1e-6
    # derivative changes sign across the optimum
    left = energy_per_meter(v - 0.5, ROTOR) - energy_per_meter(v - 0.5 - h, ROTOR)
    right = energy_per_meter(v + 0.5 + h, ROTOR) - energy_per_meter(v + 0.5, ROTOR)
    assert left < 0 < right


def test_energy_per_meter_is_unimodal_on_bracket():
    vs = np.linspace(*V_BRACKET, 100)
    e = np.array([energy_per_meter(v, ROTOR) for v in vs])
    k = int(np.argmin(e))
    assert np.all(np.diff(e[:k + 1]) < 0)
    assert np.all(np.diff(e[k:]) > 0)
