"""Parameter types, unit normalization and the built-in parameter profile.

Every quantity is stored in SI internally: joules, watts, meters, seconds,
points per square meter and linear power ratios. User-facing units (W*h,
minutes, km^-2, dB) are converted exactly once, in :func:`normalize_params`.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Mapping

import yaml


class ConfigError(KeyError):
    """A configuration key is missing, unknown or cannot be resolved."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ValidationError(ValueError):
    """A parameter violates a physical invariant."""


class DomainError(ValueError):
    """A function was called outside its mathematical domain."""


def _require_positive(obj: Any, names: tuple[str, ...]) -> None:
    bad = [n for n in names if not getattr(obj, n) > 0 or not math.isfinite(getattr(obj, n))]
    if bad:
        raise ValidationError(
            f"{type(obj).__name__}: fields must be finite and > 0: {', '.join(bad)}")


@dataclass(frozen=True)
class RotorParams:
    """Rotary-wing aerodynamic constants of the propulsion power curve.

    Defaults are the usual values for a small quadrotor in the rotary-wing
    energy literature.
    """
    blade_profile_power_P0: float = 79.86
    induced_power_Pi: float = 88.63
    tip_speed_Utip: float = 120.0
    mean_induced_velocity_v0: float = 4.03
    fuselage_drag_ratio_d0: float = 0.6
    air_density_rho: float = 1.225
    rotor_solidity_s: float = 0.05
    rotor_disc_area_A: float = 0.503

    def __post_init__(self):
        _require_positive(self, tuple(f.name for f in dataclasses.fields(self)))
        if not self.tip_speed_Utip > self.mean_induced_velocity_v0:
            raise ValidationError(
                "RotorParams: tip_speed_Utip must exceed mean_induced_velocity_v0")

    @property
    def parasite_coefficient(self) -> float:
        """0.5 * d0 * rho * s * A, the factor in front of V**3."""
        return 0.5 * self.fuselage_drag_ratio_d0 * self.air_density_rho \
            * self.rotor_solidity_s * self.rotor_disc_area_A


OPTIMAL = "optimal"


@dataclass(frozen=True)
class EnergyParams:
    """Battery, hover power, charging time and cruise settings.

    ``cruise_velocity_V`` may be the string ``"optimal"``; ``travel_power_Pm``
    may be ``None``, meaning "evaluate the rotor power curve at V". Use
    :meth:`resolved` to obtain a copy where both are plain floats.
    """
    battery_capacity_Bmax: float
    hover_service_power_Ps: float
    charging_time_Tch: float
    cruise_velocity_V: float | str = OPTIMAL
    travel_power_Pm: float | None = None
    rotor: RotorParams = field(default_factory=RotorParams)

    def __post_init__(self):
        _require_positive(self, ("battery_capacity_Bmax", "hover_service_power_Ps"))
        if not (self.charging_time_Tch >= 0 and math.isfinite(self.charging_time_Tch)):
            raise ValidationError("EnergyParams: charging_time_Tch must be finite and >= 0")
        if isinstance(self.cruise_velocity_V, str):
            if self.cruise_velocity_V != OPTIMAL:
                raise ValidationError(
                    f"EnergyParams: cruise_velocity_V must be a number or {OPTIMAL!r}")
        else:
            _require_positive(self, ("cruise_velocity_V",))
        if self.travel_power_Pm is not None:
            _require_positive(self, ("travel_power_Pm",))

    @property
    def is_resolved(self) -> bool:
        return not isinstance(self.cruise_velocity_V, str) and self.travel_power_Pm is not None

    def resolved(self) -> EnergyParams:
        if self.is_resolved:
            return self
        from .energy import optimal_velocity, propulsion_power

        v = self.cruise_velocity_V
        if isinstance(v, str):
            v = optimal_velocity(self.rotor)
        pm = self.travel_power_Pm
        if pm is None:
            pm = propulsion_power(v, self.rotor).total
        return dataclasses.replace(self, cruise_velocity_V=float(v), travel_power_Pm=float(pm))


@dataclass(frozen=True)
class NetworkParams:
    station_density_lambda_c: float
    tbs_density_lambda_T: float
    uav_altitude_h: float
    cluster_radius_rc: float

    def __post_init__(self):
        _require_positive(self, tuple(f.name for f in dataclasses.fields(self)))


@dataclass(frozen=True)
class ChannelParams:
    """Link-budget constants for both tiers.

    ``eta_los`` and ``eta_nlos`` are the mean excess path losses as linear
    ratios (20 dB -> 100). They attenuate the UAV link: the mean received
    power is ``rho_u * G * r**-alpha / eta``.
    """
    uav_tx_power_rho_u: float
    tbs_tx_power_rho_t: float
    alpha_los: float
    alpha_nlos: float
    alpha_tbs: float
    eta_los: float
    eta_nlos: float
    nakagami_m_los: int
    nakagami_m_nlos: int
    env_a: float
    env_b: float
    noise_power_sigma2: float
    snr_threshold_beta: float

    def __post_init__(self):
        for name in ("nakagami_m_los", "nakagami_m_nlos"):
            m = getattr(self, name)
            if isinstance(m, bool) or not float(m).is_integer() or m < 1:
                raise ValidationError(f"ChannelParams: {name} must be an integer >= 1, got {m!r}")
            object.__setattr__(self, name, int(m))
        _require_positive(self, (
            "uav_tx_power_rho_u", "tbs_tx_power_rho_t", "eta_los", "eta_nlos",
            "env_a", "env_b", "noise_power_sigma2", "snr_threshold_beta"))
        low = [n for n in ("alpha_los", "alpha_nlos", "alpha_tbs") if not getattr(self, n) >= 2]
        if low:
            raise ValidationError(f"ChannelParams: path-loss exponents must be >= 2: {', '.join(low)}")


@dataclass(frozen=True)
class SystemParams:
    """Complete, validated parameter set. The energy part is always resolved."""
    energy: EnergyParams
    network: NetworkParams
    channel: ChannelParams

    def __post_init__(self):
        object.__setattr__(self, "energy", self.energy.resolved())
        r = self.max_range
        if not (math.isfinite(r) and r > 0):
            raise ValidationError(f"SystemParams: max travel radius must be finite and > 0, got {r}")

    @property
    def velocity(self) -> float:
        return self.energy.cruise_velocity_V

    @property
    def travel_power(self) -> float:
        return self.energy.travel_power_Pm

    @cached_property
    def max_range(self) -> float:
        e = self.energy
        return e.cruise_velocity_V * e.battery_capacity_Bmax / (2.0 * e.travel_power_Pm)

    @property
    def max_availability(self) -> float:
        """Availability with a charging station at the hotspot center."""
        e = self.energy
        return e.battery_capacity_Bmax / (
            e.battery_capacity_Bmax + e.hover_service_power_Ps * e.charging_time_Tch)

    def replace(self, **changes: Mapping[str, Any]) -> SystemParams:
        """Copy with fields of the sub-records replaced, e.g. ``replace(network={...})``."""
        parts = {"energy": self.energy, "network": self.network, "channel": self.channel}
        for section, values in changes.items():
            if section not in parts:
                raise ConfigError(f"unknown section {section!r}")
            parts[section] = dataclasses.replace(parts[section], **values)
        return SystemParams(**parts)


def max_travel_radius(params: SystemParams) -> float:
    """Farthest station distance the battery can serve: V * B_max / (2 * P_m)."""
    return params.max_range


# -- config schema ----------------------------------------------------------

def _ident(x: float) -> float:
    return x


def _from_db(x: float) -> float:
    return 10.0 ** (x / 10.0)


def _to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class Key:
    unit: str
    default: Any
    to_si: Callable[[float], float] = _ident
    from_si: Callable[[float], float] = _ident
    kind: str = "float"  # float | int | velocity | power


_ROTOR = RotorParams()

SCHEMA: dict[str, Key] = {
    "energy.battery_capacity_Bmax": Key("W*h", 88.8, lambda x: x * 3600.0, lambda x: x / 3600.0),
    "energy.hover_service_power_Ps": Key("W", 177.5),
    "energy.charging_time_Tch": Key("min", 5.0, lambda x: x * 60.0, lambda x: x / 60.0),
    "energy.cruise_velocity_V": Key("m/s | optimal", 18.46, kind="velocity"),
    "energy.travel_power_Pm": Key("W | model", 161.8, kind="power"),
    "energy.rotor.blade_profile_power_P0": Key("W", _ROTOR.blade_profile_power_P0),
    "energy.rotor.induced_power_Pi": Key("W", _ROTOR.induced_power_Pi),
    "energy.rotor.tip_speed_Utip": Key("m/s", _ROTOR.tip_speed_Utip),
    "energy.rotor.mean_induced_velocity_v0": Key("m/s", _ROTOR.mean_induced_velocity_v0),
    "energy.rotor.fuselage_drag_ratio_d0": Key("1", _ROTOR.fuselage_drag_ratio_d0),
    "energy.rotor.air_density_rho": Key("kg/m^3", _ROTOR.air_density_rho),
    "energy.rotor.rotor_solidity_s": Key("1", _ROTOR.rotor_solidity_s),
    "energy.rotor.rotor_disc_area_A": Key("m^2", _ROTOR.rotor_disc_area_A),
    "network.station_density_lambda_c": Key("km^-2", 1e-2, lambda x: x * 1e-6, lambda x: x * 1e6),
    "network.tbs_density_lambda_T": Key("km^-2", 10.0, lambda x: x * 1e-6, lambda x: x * 1e6),
    "network.uav_altitude_h": Key("m", 60.0),
    "network.cluster_radius_rc": Key("m", 100.0),
    "channel.uav_tx_power_rho_u": Key("W", 0.1),
    "channel.tbs_tx_power_rho_t": Key("W", 10.0),
    "channel.alpha_los": Key("1", 2.1),
    "channel.alpha_nlos": Key("1", 4.0),
    "channel.alpha_tbs": Key("1", 4.0),
    "channel.eta_los": Key("dB", 0.0, _from_db, _to_db),
    "channel.eta_nlos": Key("dB", 20.0, _from_db, _to_db),
    "channel.nakagami_m_los": Key("1", 3, kind="int"),
    "channel.nakagami_m_nlos": Key("1", 1, kind="int"),
    "channel.env_a": Key("1", 25.27),
    "channel.env_b": Key("1", 0.5),
    "channel.noise_power_sigma2": Key("W", 1e-9),
    "channel.snr_threshold_beta": Key("dB", 20.0, _from_db, _to_db),
}

PROFILES: dict[str, dict[str, Any]] = {
    "paper-table-1": {k: v.default for k, v in SCHEMA.items()},
    # Same network and channel, but V and P_m come from the rotor model.
    "rotor-model": {**{k: v.default for k, v in SCHEMA.items()},
                    "energy.cruise_velocity_V": OPTIMAL,
                    "energy.travel_power_Pm": "model"},
}
DEFAULT_PROFILE = "paper-table-1"


def flatten(doc: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in doc.items():
        name = f"{prefix}{k}"
        if isinstance(v, Mapping):
            out.update(flatten(v, name + "."))
        else:
            out[name] = v
    return out


def _coerce(name: str, key: Key, value: Any, si: bool) -> Any:
    if key.kind == "velocity" and isinstance(value, str):
        if value.strip().lower() != OPTIMAL:
            raise ValidationError(f"{name}: expected a number or {OPTIMAL!r}, got {value!r}")
        return OPTIMAL
    if key.kind == "power" and (value is None or isinstance(value, str)):
        if value is not None and value.strip().lower() != "model":
            raise ValidationError(f"{name}: expected a number or 'model', got {value!r}")
        return None
    if key.kind == "int":
        try:
            x = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{name}: expected an integer, got {value!r}") from None
        if not x.is_integer():
            raise ValidationError(f"{name}: must be an integer, got {value!r}")
        return int(x)
    if isinstance(value, bool):
        raise ValidationError(f"{name}: expected a number, got {value!r}")
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name}: expected a number, got {value!r}") from None
    return x if si else key.to_si(x)


def resolve_key(name: str) -> Key:
    try:
        return SCHEMA[name]
    except KeyError:
        raise ConfigError(f"unknown configuration key {name!r}") from None


def to_si(name: str, value: Any) -> Any:
    """Convert one external-unit value of ``name`` to SI."""
    return _coerce(name, resolve_key(name), value, si=False)


def normalize_params(raw: Mapping[str, Any] | SystemParams | None = None, *,
                     base: str | None = DEFAULT_PROFILE, units: str | None = None) -> SystemParams:
    """Build validated :class:`SystemParams` from a key-value document.

    Keys are dotted names from :data:`SCHEMA` (nested mappings are flattened).
    Missing keys are filled from the ``base`` profile; with ``base=None`` every
    key is required. Values are in external units unless ``units="si"`` is
    passed or the document carries ``units: si``, in which case no conversion
    is applied (documents written by :func:`to_config` carry that marker).
    """
    if isinstance(raw, SystemParams):
        return raw
    doc = flatten(raw or {})
    doc_units = doc.pop("units", None)
    units = units or doc_units
    if units not in (None, "external", "si"):
        raise ConfigError(f"units must be 'external' or 'si', got {units!r}")
    si = units == "si"

    unknown = sorted(set(doc) - set(SCHEMA))
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")

    values: dict[str, Any] = {}
    defaults = PROFILES[base] if base is not None else {}
    for name, key in SCHEMA.items():
        if name in doc:
            values[name] = _coerce(name, key, doc[name], si)
        elif name in defaults:
            values[name] = _coerce(name, key, defaults[name], si=False)
        else:
            raise ConfigError(f"missing configuration key {name!r}")

    def section(prefix: str) -> dict[str, Any]:
        return {n[len(prefix):]: v for n, v in values.items()
                if n.startswith(prefix) and "." not in n[len(prefix):]}

    rotor = RotorParams(**section("energy.rotor."))
    energy = EnergyParams(rotor=rotor, **section("energy."))
    return SystemParams(energy=energy, network=NetworkParams(**section("network.")),
                        channel=ChannelParams(**section("channel.")))


def to_config(params: SystemParams) -> dict[str, Any]:
    """Serialize to a flat SI document that :func:`normalize_params` reads back exactly."""
    doc: dict[str, Any] = {"units": "si"}
    for name in SCHEMA:
        obj: Any = params
        for part in name.split("."):
            obj = getattr(obj, part)
        doc[name] = obj
    return doc


def to_external(params: SystemParams) -> dict[str, Any]:
    """Flat document in external units (W*h, minutes, km^-2, dB)."""
    doc = to_config(params)
    doc.pop("units")
    return {name: SCHEMA[name].from_si(v) if SCHEMA[name].kind == "float" else v
            for name, v in doc.items()}


def load_config(source: str | Path | None = None) -> SystemParams:
    """Load a profile by name, or a YAML key-value file, on top of the default profile."""
    if source is None or str(source) in PROFILES:
        return normalize_params({}, base=str(source or DEFAULT_PROFILE))
    path = Path(source)
    if not path.exists():
        raise ConfigError(f"no such config file or profile: {source}")
    doc = yaml.safe_load(path.read_text()) or {}
    if not isinstance(doc, Mapping):
        raise ConfigError(f"{path}: expected a key-value mapping at top level")
    profile = doc.pop("profile", DEFAULT_PROFILE)
    if profile not in PROFILES:
        raise ConfigError(f"{path}: unknown profile {profile!r}")
    return normalize_params(doc, base=profile)


def dump_config(params: SystemParams) -> str:
    return yaml.safe_dump(to_config(params), sort_keys=False)


def schema_table() -> str:
    """Human-readable listing of every config key, its unit and default."""
    width = max(map(len, SCHEMA))
    lines = [f"{'key':<{width}}  {'unit':<14} default"]
    for name, key in SCHEMA.items():
        lines.append(f"{name:<{width}}  {key.unit:<14} {key.default}")
    return "\n".join(lines)
