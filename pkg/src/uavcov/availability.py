"""UAV availability: conditional on the nearest-station distance, its
distribution over the station PPP, and the unconditional mean."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, SystemParams
from .numerics import ATOL, RTOL, integrate


@dataclass(frozen=True)
class AvailabilityBudget:
    """One service cycle: serve, fly to the station and back, recharge."""
    service_time_Tse: float
    travel_time_Ttra: float
    charging_time_Tch: float
    availability: float


def conditional_availability(rs, params: SystemParams):
    """Vectorized availability given station distance ``rs`` (0 beyond max range)."""
    e = params.energy
    B, V, Pm, Ps, Tch = (e.battery_capacity_Bmax, e.cruise_velocity_V, e.travel_power_Pm,
                         e.hover_service_power_Ps, e.charging_time_Tch)
    rs = np.asarray(rs, dtype=float)
    num = B * V - 2.0 * Pm * rs
    out = np.zeros_like(rs)
    ok = rs < params.max_range
    out[ok] = num[ok] / (num[ok] + Tch * Ps * V + 2.0 * rs[ok] * Ps)
    return out if out.ndim else float(out)


def availability_given_rs(rs: float, params: SystemParams) -> AvailabilityBudget:
    """Time budget and availability for a hotspot whose nearest station is ``rs`` away.

    Beyond the maximum travel radius the battery cannot cover the round trip,
    so the service time and the availability are both zero.
    """
    if rs < 0:
        raise DomainError(f"rs must be >= 0, got {rs}")
    e = params.energy
    travel = 2.0 * rs / e.cruise_velocity_V
    if rs >= params.max_range:
        return AvailabilityBudget(0.0, travel, e.charging_time_Tch, 0.0)
    service = (e.battery_capacity_Bmax - e.travel_power_Pm * travel) / e.hover_service_power_Ps
    return AvailabilityBudget(service, travel, e.charging_time_Tch,
                              conditional_availability(rs, params))


def _critical_radius(x, params: SystemParams):
    e = params.energy
    B, V, Pm, Ps, Tch = (e.battery_capacity_Bmax, e.cruise_velocity_V, e.travel_power_Pm,
                         e.hover_service_power_Ps, e.charging_time_Tch)
    return V * (B * (x - 1.0) + Ps * Tch * x) / (2.0 * (Pm * (x - 1.0) - Ps * x))


def critical_radius(x: float, params: SystemParams) -> float:
    """Station distance at which the conditional availability equals ``x``.

    Decreasing in ``x``: the full travel radius at ``x = 0`` and zero at the
    maximum availability ``B_max / (B_max + P_s * T_ch)``.
    """
    upper = params.max_availability
    if not 0.0 <= x <= upper:
        raise DomainError(f"x must lie in [0, {upper}], got {x}")
    return max(float(_critical_radius(x, params)), 0.0)


def availability_cdf(x, params: SystemParams):
    """P(conditional availability <= x); accepts scalars or arrays.

    The nearest-station distance is Rayleigh, so on the support this is the
    void probability exp(-lambda_c * pi * C(x)**2) of the disk of radius C(x).
    Below 0 the CDF is 0 and from the maximum availability on it is 1.
    """
    x = np.asarray(x, dtype=float)
    lam = params.network.station_density_lambda_c
    upper = params.max_availability
    inside = (x >= 0.0) & (x < upper)
    c = np.maximum(_critical_radius(np.where(inside, x, 0.0), params), 0.0)
    out = np.where(inside, np.exp(-lam * math.pi * c * c), np.where(x < 0.0, 0.0, 1.0))
    return out if out.ndim else float(out)


def availability(params: SystemParams, rel_tol: float = RTOL, abs_tol: float = ATOL) -> float:
    """Mean availability: integral of 1 - F(x) over [0, max availability]."""
    lam = params.network.station_density_lambda_c

    def ccdf(x):
        c = _critical_radius(x, params)
        return -np.expm1(-lam * math.pi * c * c)

    # The integrand steps from 0 to 1 where C(x) crosses the Rayleigh scale.
    scale = 1.0 / math.sqrt(math.pi * lam)
    knots = conditional_availability(np.array([0.1, 0.5, 1.0, 2.0, 4.0]) * scale, params)
    return integrate(ccdf, 0.0, params.max_availability, rel_tol, abs_tol,
                     vectorized=True, points=knots).value


def rayleigh_pdf(r, lam: float):
    """Density of the distance to the nearest point of a PPP of intensity ``lam``."""
    return 2.0 * math.pi * lam * r * np.exp(-lam * math.pi * r * r)


def availability_direct(params: SystemParams, rel_tol: float = RTOL,
                        abs_tol: float = ATOL) -> float:
    """Cross-check of :func:`availability`: E[P(a | R_s)] under the Rayleigh law of R_s.

    Internal use; no term beyond the travel radius since availability is 0 there.
    """
    lam = params.network.station_density_lambda_c
    R = params.max_range
    scale = 1.0 / math.sqrt(math.pi * lam)
    return integrate(lambda r: conditional_availability(r, params) * rayleigh_pdf(r, lam),
                     0.0, R, rel_tol, abs_tol, vectorized=True,
                     points=[0.5 * scale, 2.0 * scale, 6.0 * scale]).value
