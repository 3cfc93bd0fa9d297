import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate
from scipy.optimize import brentq

from uavcov.availability import (
    availability, availability_cdf, availability_direct, availability_given_rs,
    conditional_availability, critical_radius)
from uavcov.core import DomainError

B, PS, TCH, V, PM = 319680.0, 177.5, 300.0, 18.46, 161.8


def test_table1_energy_values(table1):
    e = table1.energy
    assert (e.battery_capacity_Bmax, e.hover_service_power_Ps, e.charging_time_Tch,
            e.cruise_velocity_V, e.travel_power_Pm) == pytest.approx((B, PS, TCH, V, PM))


def test_availability_at_zero_distance(table1):
    bud = availability_given_rs(0.0, table1)
    assert bud.availability == pytest.approx(319680 / (319680 + 177.5 * 300), abs=1e-15)
    assert bud.availability == pytest.approx(0.85721, abs=1e-5)
    assert bud.travel_time_Ttra == 0.0


def test_availability_at_5km(table1):
    bud = availability_given_rs(5000.0, table1)
    # hand evaluation of the time budget
    t_tra = 2 * 5000 / V
    t_se = (B - 2 * PM * 5000 / V) / PS
    assert bud.travel_time_Ttra == pytest.approx(541.7118, abs=1e-4)
    assert bud.service_time_Tse == pytest.approx(1307.217, abs=1e-3)
    assert bud.availability == pytest.approx(t_se / (t_se + TCH + t_tra), rel=1e-13)
    assert bud.availability == pytest.approx(0.6083, abs=1e-4)


def test_budget_invariant(table1):
    for rs in (0.0, 100.0, 5000.0, 18000.0):
        b = availability_given_rs(rs, table1)
        assert b.availability == pytest.approx(
            b.service_time_Tse / (b.service_time_Tse + b.charging_time_Tch + b.travel_time_Ttra),
            rel=1e-12)


def test_availability_zero_at_and_beyond_range(table1):
    R = table1.max_range
    assert availability_given_rs(R, table1).availability == 0.0
    beyond = availability_given_rs(2 * R, table1)
    assert beyond.availability == 0.0 and beyond.service_time_Tse == 0.0
    with pytest.raises(DomainError):
        availability_given_rs(-1.0, table1)


def test_vectorized_matches_scalar(table1):
    rs = np.linspace(0, 2e4, 101)
    vec = conditional_availability(rs, table1)
    assert vec == pytest.approx([availability_given_rs(r, table1).availability for r in rs])


def test_monotonicity_grid(table1):
    rs_grid = np.linspace(0, 2e4, 10)
    b_grid = np.linspace(20, 200, 10) * 3600
    t_grid = np.linspace(0, 3600, 10)
    vals = np.empty((10, 10, 10))
    for (i, rs), (j, b), (k, t) in itertools.product(
            enumerate(rs_grid), enumerate(b_grid), enumerate(t_grid)):
        p = table1.replace(energy={"battery_capacity_Bmax": b, "charging_time_Tch": t})
        vals[i, j, k] = availability_given_rs(rs, p).availability
    assert np.all(np.diff(vals, axis=0) <= 0)
    assert np.all(np.diff(vals, axis=1) >= 0)
    assert np.all(np.diff(vals, axis=2) <= 0)


def test_critical_radius_endpoints(table1):
    assert critical_radius(0.0, table1) == pytest.approx(table1.max_range, rel=1e-14)
    assert critical_radius(table1.max_availability, table1) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(DomainError):
        critical_radius(0.9, table1)
    with pytest.raises(DomainError):
        critical_radius(-0.01, table1)


@pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.8])
def test_critical_radius_matches_numeric_inversion(table1, x):
    # oracle: solve availability(rs) = x with a bracketing root finder
    root = brentq(lambda r: conditional_availability(r, table1) - x, 0.0, table1.max_range * (1 - 1e-12),
                  xtol=1e-9, rtol=1e-15)
    assert critical_radius(x, table1) == pytest.approx(root, abs=1e-6)
    assert availability_given_rs(critical_radius(x, table1), table1).availability == pytest.approx(
        x, abs=1e-12)


def test_critical_radius_decreasing(table1):
    xs = np.linspace(0, table1.max_availability, 50)
    c = [critical_radius(x, table1) for x in xs]
    assert np.all(np.diff(c) < 0)


def test_cdf_limits(table1):
    lam = table1.network.station_density_lambda_c
    assert availability_cdf(-0.1, table1) == 0.0
    assert availability_cdf(0.0, table1) == pytest.approx(
        math.exp(-lam * math.pi * table1.max_range ** 2), rel=1e-12)
    assert availability_cdf(table1.max_availability, table1) == 1.0
    assert availability_cdf(0.99, table1) == 1.0
    # approaches 1 continuously from below
    assert availability_cdf(table1.max_availability * (1 - 1e-9), table1) == pytest.approx(1.0, abs=1e-6)


def test_cdf_matches_empirical(table1):
    rng = np.random.default_rng(20240501)
    lam = table1.network.station_density_lambda_c
    rs = np.sqrt(-np.log(1 - rng.random(1_000_000)) / (math.pi * lam))
    pa = conditional_availability(rs, table1)
    assert availability_cdf(0.5, table1) == pytest.approx(np.mean(pa <= 0.5), abs=1e-3)


@settings(max_examples=30, deadline=None)
@given(x1=st.floats(-0.2, 1.0), x2=st.floats(-0.2, 1.0), l1=st.floats(-10, -5), l2=st.floats(-10, -5))
def test_cdf_monotone_in_x_and_density(table1, x1, x2, l1, l2):
    lo, hi = sorted((x1, x2))
    assert availability_cdf(lo, table1) <= availability_cdf(hi, table1)
    la, lb = sorted((10 ** l1, 10 ** l2))
    pa = table1.replace(network={"station_density_lambda_c": la})
    pb = table1.replace(network={"station_density_lambda_c": lb})
    assert availability_cdf(lo, pa) >= availability_cdf(lo, pb) - 1e-15


def test_mean_availability_limits(table1):
    dense = table1.replace(network={"station_density_lambda_c": 1e3})
    assert availability(dense) == pytest.approx(table1.max_availability, abs=1e-4)
    sparse = table1.replace(network={"station_density_lambda_c": 1e-16})
    assert availability(sparse) < 1e-6


def test_mean_availability_against_scipy(table1):
    lam = table1.network.station_density_lambda_c
    R = table1.max_range
    ref, _ = sp_integrate.quad(
        lambda r: conditional_availability(r, table1) * 2 * math.pi * lam * r * math.exp(-lam * math.pi * r * r),
        0, R, epsabs=1e-13, epsrel=1e-12, limit=200)
    assert availability(table1) == pytest.approx(ref, abs=1e-9)
    assert availability(table1) == pytest.approx(0.609784, abs=1e-6)


@pytest.mark.parametrize("lam", np.geomspace(1e-12, 1e-2, 11))
def test_integral_form_matches_direct_expectation(table1, lam):
    p = table1.replace(network={"station_density_lambda_c": lam})
    assert availability(p) == pytest.approx(availability_direct(p), abs=1e-8)


@settings(max_examples=25, deadline=None)
@given(lam=st.floats(-12, -3), tch=st.floats(0, 3600), bwh=st.floats(10, 300))
def test_mean_availability_within_bounds(table1, lam, tch, bwh):
    p = table1.replace(network={"station_density_lambda_c": 10 ** lam},
                       energy={"charging_time_Tch": tch, "battery_capacity_Bmax": bwh * 3600})
    pa = availability(p)
    assert 0.0 <= pa <= p.max_availability + 1e-12
