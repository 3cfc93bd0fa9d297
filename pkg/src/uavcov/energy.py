"""Rotary-wing propulsion power, travel energy and the energy-optimal speed."""
from __future__ import annotations

from dataclasses import dataclass

from .core import DomainError, RotorParams
from .numerics import minimize_scalar

# Bracket for the cruise-speed search, m/s.
V_BRACKET = (1.0, 60.0)


@dataclass(frozen=True)
class PowerBreakdown:
    blade_profile: float
    induced: float
    parasite: float

    @property
    def total(self) -> float:
        return self.blade_profile + self.induced + self.parasite


def propulsion_power(v: float, rotor: RotorParams) -> PowerBreakdown:
    """Forward-flight propulsion power at speed ``v`` (m/s).

    Uses the simplified induced term ``P_i * v0 / V``, which diverges in
    hover; hovering is covered by the separate constant service power.
    """
    if not v > 0:
        raise DomainError(f"propulsion power needs v > 0, got {v}")
    blade = rotor.blade_profile_power_P0 * (1.0 + 3.0 * v * v / rotor.tip_speed_Utip ** 2)
    induced = rotor.induced_power_Pi * rotor.mean_induced_velocity_v0 / v
    parasite = rotor.parasite_coefficient * v ** 3
    return PowerBreakdown(blade, induced, parasite)


def energy_per_meter(v: float, rotor: RotorParams) -> float:
    return propulsion_power(v, rotor).total / v


def travel_energy(distance: float, v: float, rotor: RotorParams) -> float:
    """Energy in joules to fly ``distance`` meters one way at speed ``v``."""
    if distance < 0:
        raise DomainError(f"distance must be >= 0, got {distance}")
    return distance * energy_per_meter(v, rotor)


def optimal_velocity(rotor: RotorParams, x_tol: float = 1e-9) -> float:
    """Cruise speed minimizing energy per meter, P_m(V) / V, over ``V_BRACKET``."""
    v, _ = minimize_scalar(lambda v: energy_per_meter(v, rotor), *V_BRACKET, x_tol=x_tol)
    return v
