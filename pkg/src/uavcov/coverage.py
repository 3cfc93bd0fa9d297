"""SNR coverage of the UAV tier and the terrestrial tier, their
availability-weighted mix, and the distribution of conditional coverage.

The reference user is uniform in the hotspot disk, so the 3-D distance R_U to
the UAV has density 2r/r_c^2 on [h, sqrt(h^2 + r_c^2)].
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .availability import availability, availability_cdf, conditional_availability
from .core import ChannelParams, DomainError, NetworkParams, SystemParams
from .numerics import ATOL, RTOL, integrate, integrate_semi_infinite


class DegenerateDistributionWarning(UserWarning):
    """Both tiers have the same coverage, so conditional coverage is a point mass."""


@dataclass(frozen=True)
class CoverageBreakdown:
    p_cov_uav: float
    p_cov_uav_los_part: float
    p_cov_uav_nlos_part: float
    p_cov_tbs: float
    availability: float
    p_cov_total: float


class UavCoverage(NamedTuple):
    total: float
    los_part: float
    nlos_part: float


def los_probability(r3d, network: NetworkParams, channel: ChannelParams):
    """Probability of a line-of-sight link at 3-D distance ``r3d`` from the UAV.

    Sigmoid in the elevation angle (degrees) with environment constants a, b.
    """
    r3d = np.asarray(r3d, dtype=float)
    h = network.uav_altitude_h
    if np.any(r3d < h):
        raise DomainError(f"3-D distance must be >= altitude {h}")
    ground = np.sqrt(np.maximum(r3d * r3d - h * h, 0.0))
    theta = np.degrees(np.arctan2(h, ground))
    a, b = channel.env_a, channel.env_b
    out = 1.0 / (1.0 + a * np.exp(-b * (theta - a)))
    return out if out.ndim else float(out)


def gamma_ccdf(m: int, g):
    """P(G >= g) for G ~ Gamma(shape m, scale 1/m), integer m.

    Finite series exp(-mg) * sum_{k<m} (mg)^k / k!.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"shape must be a positive integer, got {m}")
    x = m * np.asarray(g, dtype=float)
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, int(m)):
        term = term * x / k
        acc = acc + term
    out = np.exp(-x) * acc
    return out if out.ndim else float(out)


def _snr_gap(r, path_loss_exp, eta, tx_power, channel: ChannelParams):
    # Fading gain needed to reach beta at distance r.
    return channel.snr_threshold_beta * channel.noise_power_sigma2 * eta * r ** path_loss_exp / tx_power


def coverage_uav(params: SystemParams, rel_tol: float = RTOL, abs_tol: float = ATOL) -> UavCoverage:
    """Coverage when served by the hotspot UAV, split into LoS and NLoS parts."""
    net, ch = params.network, params.channel
    h, rc = net.uav_altitude_h, net.cluster_radius_rc
    top = math.hypot(h, rc)

    def los(r):
        g = _snr_gap(r, ch.alpha_los, ch.eta_los, ch.uav_tx_power_rho_u, ch)
        return los_probability(r, net, ch) * gamma_ccdf(ch.nakagami_m_los, g) * 2.0 * r / rc ** 2

    def nlos(r):
        g = _snr_gap(r, ch.alpha_nlos, ch.eta_nlos, ch.uav_tx_power_rho_u, ch)
        return (1.0 - los_probability(r, net, ch)) * gamma_ccdf(ch.nakagami_m_nlos, g) \
            * 2.0 * r / rc ** 2

    lp = integrate(los, h, top, rel_tol, abs_tol, vectorized=True).value
    np_ = integrate(nlos, h, top, rel_tol, abs_tol, vectorized=True).value
    return UavCoverage(lp + np_, lp, np_)


def coverage_tbs(params: SystemParams, rel_tol: float = RTOL, abs_tol: float = ATOL) -> float:
    """Coverage from the nearest terrestrial BS under Rayleigh fading."""
    ch = params.channel
    lam = params.network.tbs_density_lambda_T
    c = ch.snr_threshold_beta * ch.noise_power_sigma2 / ch.tbs_tx_power_rho_t

    def f(r):
        with np.errstate(over="ignore"):
            return 2.0 * math.pi * lam * r * np.exp(-math.pi * lam * r * r - c * r ** ch.alpha_tbs)

    return integrate_semi_infinite(f, 0.0, rel_tol, abs_tol,
                                   scale=1.0 / math.sqrt(math.pi * lam), vectorized=True).value


def total_coverage(params: SystemParams) -> CoverageBreakdown:
    uav = coverage_uav(params)
    tbs = coverage_tbs(params)
    pa = availability(params)
    return CoverageBreakdown(
        p_cov_uav=uav.total, p_cov_uav_los_part=uav.los_part, p_cov_uav_nlos_part=uav.nlos_part,
        p_cov_tbs=tbs, availability=pa, p_cov_total=pa * uav.total + (1.0 - pa) * tbs)


def _tiers(params, tiers):
    if tiers is None:
        return coverage_uav(params).total, coverage_tbs(params)
    return tiers


def conditional_coverage(rs, params: SystemParams, tiers: tuple[float, float] | None = None):
    """Coverage of a hotspot whose nearest station is ``rs`` meters away.

    ``tiers`` optionally passes precomputed ``(p_cov_uav, p_cov_tbs)``.
    """
    if np.any(np.asarray(rs) < 0):
        raise DomainError("rs must be >= 0")
    pu, pt = _tiers(params, tiers)
    pa = conditional_availability(rs, params)
    return pa * pu + (1.0 - pa) * pt


def coverage_support(params: SystemParams, tiers: tuple[float, float] | None = None):
    """(min, max) achievable conditional coverage: station out of reach vs. at the center."""
    pu, pt = _tiers(params, tiers)
    top = params.max_availability * (pu - pt) + pt
    return min(pt, top), max(pt, top)


def conditional_coverage_ccdf(theta, params: SystemParams,
                              tiers: tuple[float, float] | None = None):
    """P(conditional coverage > theta) over the random nearest-station distance.

    Maps theta to the availability level x = (theta - P_T) / (P_U - P_T) and
    reads the availability CDF there. If the tiers coincide the distribution
    is a point mass; a :class:`DegenerateDistributionWarning` is issued and
    the CCDF is the step 1{theta < P_T}.
    """
    pu, pt = _tiers(params, tiers)
    theta = np.asarray(theta, dtype=float)
    d = pu - pt
    if d == 0.0:
        warnings.warn(f"both tiers cover with probability {pt}; conditional coverage is "
                      "a point mass", DegenerateDistributionWarning, stacklevel=2)
        out = (theta < pt).astype(float)
    else:
        x = (theta - pt) / d
        if d > 0:
            out = 1.0 - availability_cdf(x, params)
        else:
            # Coverage falls as availability rises; the only atom is at x = 0.
            out = np.where(x > 0.0, availability_cdf(x, params), 0.0)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def conditional_coverage_cdf(theta, params: SystemParams,
                             tiers: tuple[float, float] | None = None):
    """P(conditional coverage <= theta)."""
    return 1.0 - conditional_coverage_ccdf(theta, params, tiers)
