"""Simulation oracle for availability and coverage.

Nothing here calls the closed forms: distances are drawn from their exact
contact-distance laws, fading and LoS states are sampled per trial, and the
availability of a hotspot is rebuilt from the raw time budget. Trials are cut
into fixed-size chunks, each with its own Philox substream spawned from the
seed, so results do not depend on how many workers run them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, NamedTuple

import numpy as np

from .core import DomainError, SystemParams

CHUNK = 1 << 16


@dataclass(frozen=True)
class McConfig:
    trials: int = 1_000_000
    seed: int = 0
    confidence_level: float = 0.99
    horizon_cycles: int = 10
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.confidence_level < 1.0:
            raise ValueError("confidence_level must lie in (0, 1)")
        if self.horizon_cycles < 1:
            raise ValueError("horizon_cycles must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    ci_half_width: float
    trials: int
    seed: int

    @property
    def interval(self) -> tuple[float, float]:
        return self.mean - self.ci_half_width, self.mean + self.ci_half_width

    def contains(self, value: float) -> bool:
        lo, hi = self.interval
        return lo <= value <= hi


class CoverageEstimates(NamedTuple):
    total: McEstimate
    uav_tier: McEstimate
    tbs_tier: McEstimate


def chunk_generators(mc: McConfig):
    """(generator, size) per chunk; fixed by (seed, trials) alone."""
    n_chunks = -(-mc.trials // CHUNK)
    children = np.random.SeedSequence(mc.seed).spawn(n_chunks)
    sizes = [CHUNK] * (n_chunks - 1) + [mc.trials - CHUNK * (n_chunks - 1)]
    return [(np.random.Generator(np.random.Philox(c)), s) for c, s in zip(children, sizes)]


def _moments(x: np.ndarray) -> tuple[int, float, float]:
    n = x.shape[0]
    mean = float(x.mean())
    return n, mean, float(np.sum((x - mean) ** 2))


def _combine(parts) -> tuple[int, float, float]:
    # Chan et al. pairwise update, applied in chunk order.
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _estimate(n: int, mean: float, m2: float, mc: McConfig) -> McEstimate:
    z = NormalDist().inv_cdf(0.5 + mc.confidence_level / 2.0)
    sd = math.sqrt(m2 / (n - 1)) if n > 1 else 0.0
    return McEstimate(mean, z * sd / math.sqrt(n), n, mc.seed)


def _run(kernel: Callable, mc: McConfig, n_out: int) -> list[McEstimate]:
    jobs = chunk_generators(mc)

    def one(job):
        rng, size = job
        samples = kernel(rng, size)
        return [_moments(np.asarray(s, dtype=float)) for s in samples]

    if mc.workers > 1:
        with ThreadPoolExecutor(mc.workers) as pool:
            per_chunk = list(pool.map(one, jobs))
    else:
        per_chunk = [one(j) for j in jobs]
    return [_estimate(*_combine(p[i] for p in per_chunk), mc) for i in range(n_out)]


def sample_nearest_station_distance(rng: np.random.Generator, lambda_c: float, size=None):
    """Distance to the nearest point of a PPP of intensity ``lambda_c`` (Rayleigh)."""
    if not lambda_c > 0:
        raise DomainError("lambda_c must be > 0")
    u = 1.0 - rng.random(size)  # uniform on (0, 1]
    return np.sqrt(-np.log(u) / (math.pi * lambda_c))


def _time_fraction(rs, params: SystemParams):
    e = params.energy
    travel = 2.0 * rs / e.cruise_velocity_V
    service = (e.battery_capacity_Bmax - e.travel_power_Pm * travel) / e.hover_service_power_Ps
    service = np.maximum(service, 0.0)
    cycle = service + travel + e.charging_time_Tch
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(service > 0.0, service / cycle, 0.0)


def timeline_availability(rs: float, params: SystemParams, horizon_cycles: int = 10) -> float:
    """Fly the battery timeline for ``horizon_cycles`` cycles and return served time / total.

    Each cycle leaves the station with a full battery, flies out, serves until
    only the return-leg energy remains, flies back and recharges.
    """
    if rs < 0:
        raise DomainError("rs must be >= 0")
    if horizon_cycles < 1:
        raise ValueError("horizon_cycles must be >= 1")
    e = params.energy
    leg_time = rs / e.cruise_velocity_V
    leg_energy = e.travel_power_Pm * leg_time
    if 2.0 * leg_energy >= e.battery_capacity_Bmax:
        return 0.0
    served = elapsed = 0.0
    for _ in range(horizon_cycles):
        battery = e.battery_capacity_Bmax
        battery -= leg_energy                      # outbound
        dwell = (battery - leg_energy) / e.hover_service_power_Ps
        battery -= dwell * e.hover_service_power_Ps
        battery -= leg_energy                      # return
        assert battery > -1e-6 * e.battery_capacity_Bmax
        served += dwell
        elapsed += 2.0 * leg_time + dwell + e.charging_time_Tch
    return served / elapsed


def estimate_availability(params: SystemParams, mc: McConfig) -> McEstimate:
    """Mean availability over independent nearest-station distances."""
    lam = params.network.station_density_lambda_c

    def kernel(rng, size):
        return [_time_fraction(sample_nearest_station_distance(rng, lam, size), params)]

    return _run(kernel, mc, 1)[0]


def _uav_covered(rng, size, params: SystemParams):
    net, ch = params.network, params.channel
    h = net.uav_altitude_h
    ground = net.cluster_radius_rc * np.sqrt(rng.random(size))
    dist = np.hypot(ground, h)
    elev = np.degrees(np.arcsin(h / dist))
    p_los = 1.0 / (1.0 + ch.env_a * np.exp(-ch.env_b * (elev - ch.env_a)))
    los = rng.random(size) < p_los
    gain = np.where(los,
                    rng.gamma(ch.nakagami_m_los, 1.0 / ch.nakagami_m_los, size),
                    rng.gamma(ch.nakagami_m_nlos, 1.0 / ch.nakagami_m_nlos, size))
    alpha = np.where(los, ch.alpha_los, ch.alpha_nlos)
    eta = np.where(los, ch.eta_los, ch.eta_nlos)
    snr = ch.uav_tx_power_rho_u * gain * dist ** -alpha / (eta * ch.noise_power_sigma2)
    return snr >= ch.snr_threshold_beta


def _tbs_covered(rng, size, params: SystemParams):
    ch = params.channel
    r = sample_nearest_station_distance(rng, params.network.tbs_density_lambda_T, size)
    fade = rng.exponential(1.0, size)
    snr = ch.tbs_tx_power_rho_t * fade * r ** -ch.alpha_tbs / ch.noise_power_sigma2
    return snr >= ch.snr_threshold_beta


def estimate_coverage(params: SystemParams, mc: McConfig) -> CoverageEstimates:
    """Total, UAV-tier and TBS-tier coverage by direct sampling of the model.

    Per trial: station distance, user position, LoS state, fading on both
    links and the nearest TBS distance; the UAV is up with probability equal
    to its time fraction for that station distance.
    """
    lam = params.network.station_density_lambda_c

    def kernel(rng, size):
        rs = sample_nearest_station_distance(rng, lam, size)
        up = rng.random(size) < _time_fraction(rs, params)
        cov_u = _uav_covered(rng, size, params)
        cov_t = _tbs_covered(rng, size, params)
        return [np.where(up, cov_u, cov_t), cov_u, cov_t]

    return CoverageEstimates(*_run(kernel, mc, 3))


def estimate_ccdf(thetas, params: SystemParams, mc: McConfig,
                  tiers: tuple[float, float]) -> list[McEstimate]:
    """Empirical P(conditional coverage > theta) for each theta.

    ``tiers`` supplies the two tier coverages, which are constants of the
    model; only the station distance is random here.
    """
    pu, pt = tiers
    thetas = np.asarray(thetas, dtype=float)
    lam = params.network.station_density_lambda_c

    def kernel(rng, size):
        pa = _time_fraction(sample_nearest_station_distance(rng, lam, size), params)
        cov = pa * pu + (1.0 - pa) * pt
        return [cov > t for t in thetas]

    return _run(kernel, mc, len(thetas))
