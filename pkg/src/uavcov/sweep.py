"""Parameter sweeps over one config key, with optional Monte Carlo columns."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .availability import availability
from .core import ConfigError, SystemParams, normalize_params, resolve_key, to_config, to_si
from .coverage import conditional_coverage_ccdf, coverage_tbs, coverage_uav
from .montecarlo import McConfig, estimate_availability, estimate_ccdf, estimate_coverage

DEFAULT_THETAS = tuple(np.linspace(0.0, 1.0, 11))
OUTPUTS = ("availability", "coverage_total", "coverage_uav", "coverage_tbs", "ccdf")


@dataclass(frozen=True)
class SweepSpec:
    parameter_path: str
    values: Sequence[float]
    outputs: Sequence[str] = ("coverage_total",)
    mc_check: bool = False
    thetas: Sequence[float] = DEFAULT_THETAS


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[list[float]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()


def fmt(v: Any) -> str:
    return f"{v:.10g}" if isinstance(v, float) else str(v)


def parse_values(text: str) -> list[float]:
    """``lo:hi:log:N``, ``lo:hi:lin:N`` or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4 or parts[2] not in ("log", "lin"):
            raise ConfigError(f"bad range {text!r}; expected lo:hi:log:N or lo:hi:lin:N")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[3])
        if n < 1:
            raise ConfigError("range needs N >= 1")
        if parts[2] == "log":
            if lo <= 0 or hi <= 0:
                raise ConfigError("log range needs positive bounds")
            return list(np.geomspace(lo, hi, n))
        return list(np.linspace(lo, hi, n))
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad value list {text!r}") from None
    if not values:
        raise ConfigError("empty value list")
    return values


def _validate(spec: SweepSpec) -> None:
    key = resolve_key(spec.parameter_path)
    if key.kind not in ("float", "int", "velocity", "power"):
        raise ConfigError(f"{spec.parameter_path} is not numeric")
    if not spec.values:
        raise ConfigError("sweep needs at least one value")
    if not spec.outputs:
        raise ConfigError("sweep needs at least one output")
    bad = [o for o in spec.outputs if o not in OUTPUTS]
    if bad:
        raise ConfigError(f"unknown output(s) {bad}; choose from {', '.join(OUTPUTS)}")


def with_override(base: SystemParams | Mapping[str, Any], path: str, value: float) -> SystemParams:
    """Rebuild parameters with ``path`` set to ``value`` given in external units."""
    if isinstance(base, SystemParams):
        doc = to_config(base)
        doc[path] = to_si(path, value)
        return normalize_params(doc)
    doc = dict(base)
    doc[path] = value
    return normalize_params(doc)


def _columns(spec: SweepSpec) -> list[str]:
    cols = [spec.parameter_path]
    names = []
    for out in spec.outputs:
        if out == "ccdf":
            names += [f"ccdf@{t:.4g}" for t in spec.thetas]
        else:
            names.append(out)
    cols += names
    if spec.mc_check:
        for n in names:
            cols += [f"{n}_mc", f"{n}_ci"]
    return cols


def _row(spec: SweepSpec, value: float, params: SystemParams, mc: McConfig) -> list[float]:
    pa = availability(params) if {"availability", "coverage_total"} & set(spec.outputs) else None
    need_tiers = set(spec.outputs) - {"availability"}
    pu = coverage_uav(params).total if need_tiers else None
    pt = coverage_tbs(params) if need_tiers else None

    analytic: list[float] = []
    for out in spec.outputs:
        if out == "availability":
            analytic.append(pa)
        elif out == "coverage_total":
            analytic.append(pa * pu + (1.0 - pa) * pt)
        elif out == "coverage_uav":
            analytic.append(pu)
        elif out == "coverage_tbs":
            analytic.append(pt)
        else:
            analytic += list(np.atleast_1d(
                conditional_coverage_ccdf(spec.thetas, params, tiers=(pu, pt))))
    row = [value, *analytic]
    if not spec.mc_check:
        return row

    cov = None
    if {"coverage_total", "coverage_uav", "coverage_tbs"} & set(spec.outputs):
        cov = estimate_coverage(params, mc)
    for out in spec.outputs:
        if out == "availability":
            ests = [estimate_availability(params, mc)]
        elif out == "coverage_total":
            ests = [cov.total]
        elif out == "coverage_uav":
            ests = [cov.uav_tier]
        elif out == "coverage_tbs":
            ests = [cov.tbs_tier]
        else:
            ests = estimate_ccdf(spec.thetas, params, mc, tiers=(pu, pt))
        for e in ests:
            row += [e.mean, e.ci_half_width]
    return row


def run_sweep(spec: SweepSpec, base: SystemParams | Mapping[str, Any],
              mc: McConfig | None = None) -> SweepResult:
    """Evaluate the requested outputs at each swept value, rows in input order.

    ``base`` is either validated parameters or a raw external-unit document;
    with a raw document, derived settings such as an ``optimal`` cruise speed
    are re-resolved at every point.
    """
    _validate(spec)
    mc = mc or McConfig()
    points = [(v, with_override(base, spec.parameter_path, v)) for v in spec.values]
    work = lambda item: _row(spec, item[0], item[1], mc)  # noqa: E731
    if mc.workers > 1:
        with ThreadPoolExecutor(mc.workers) as pool:
            rows = list(pool.map(work, points))
    else:
        rows = [work(p) for p in points]
    return SweepResult(_columns(spec), rows)
