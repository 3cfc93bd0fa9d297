"""Command-line front end.

    uavcov vopt
    uavcov avail --quantiles 0.1,0.5,0.8
    uavcov coverage --mc-check --trials 100000
    uavcov ccdf --out fig3.csv
    uavcov montecarlo --trials 1000000 --seed 42
    uavcov sweep --param network.station_density_lambda_c --values 1e-3:1e1:log:20 --out fig2a.csv
    uavcov reproduce-fig2 --out-dir results/
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import core
from .availability import availability, availability_cdf
from .core import ConfigError, ValidationError
from .coverage import conditional_coverage_ccdf, coverage_support, total_coverage
from .energy import optimal_velocity, propulsion_power
from .montecarlo import McConfig, estimate_availability, estimate_ccdf, estimate_coverage
from .numerics import QuadratureError
from .sweep import DEFAULT_THETAS, SweepResult, SweepSpec, fmt, parse_values, run_sweep

log = logging.getLogger("uavcov")

FIG2_LAMBDA = "1e-3:1e1:log:25"          # km^-2
FIG_TCH = (5.0, 10.0, 20.0, 40.0)        # minutes
FIG_BMAX = (44.4, 88.8, 133.2, 177.6)    # W*h


def raw_config(args) -> dict[str, Any]:
    """Profile defaults, then the config file, then ``--set`` overrides (external units)."""
    source = args.config
    if source in core.PROFILES:
        doc = dict(core.PROFILES[source])
    else:
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"no such config file or profile: {source}")
        loaded = yaml.safe_load(path.read_text()) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: expected a key-value mapping")
        profile = loaded.pop("profile", core.DEFAULT_PROFILE)
        if profile not in core.PROFILES:
            raise ConfigError(f"{path}: unknown profile {profile!r}")
        if loaded.get("units") == "si":
            doc = core.to_external(core.normalize_params(loaded))
        else:
            doc = dict(core.PROFILES[profile])
            doc.update(core.flatten(loaded))
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        core.resolve_key(key.strip())
        doc[key.strip()] = yaml.safe_load(value)
    return doc


def mc_config(args) -> McConfig:
    return McConfig(trials=args.trials, seed=args.seed, confidence_level=args.confidence,
                    workers=args.workers)


def write_rows(path, header, rows) -> None:
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    finally:
        if path:
            out.close()


def print_table(pairs) -> None:
    width = max(len(k) for k, _ in pairs)
    for k, v in pairs:
        print(f"{k:<{width}}  {fmt(v)}")


# -- subcommands -------------------------------------------------------------

def cmd_vopt(args) -> None:
    params = core.normalize_params(raw_config(args))
    rotor = params.energy.rotor
    v = optimal_velocity(rotor)
    pw = propulsion_power(v, rotor)
    rows = [("V_opt_m_s", v), ("P_m_W", pw.total), ("blade_profile_W", pw.blade_profile),
            ("induced_W", pw.induced), ("parasite_W", pw.parasite),
            ("energy_per_m_J", pw.total / v)]
    print_table(rows)
    if args.out:
        write_rows(args.out, ["quantity", "value"], rows)


def cmd_avail(args) -> None:
    params = core.normalize_params(raw_config(args))
    pa = availability(params)
    print_table([("availability", pa), ("max_availability", params.max_availability),
                 ("max_travel_radius_m", params.max_range)])
    if args.quantiles or args.out:
        xs = parse_values(args.quantiles) if args.quantiles else \
            list(np.linspace(0.0, params.max_availability, 21))
        F = np.atleast_1d(availability_cdf(xs, params))
        rows = list(zip(xs, F))
        if args.out:
            write_rows(args.out, ["x", "cdf"], rows)
        else:
            print()
            write_rows(None, ["x", "cdf"], rows)


def cmd_coverage(args) -> None:
    params = core.normalize_params(raw_config(args))
    cb = total_coverage(params)
    rows = [(k, getattr(cb, k)) for k in cb.__dataclass_fields__]
    if args.mc_check:
        est = estimate_coverage(params, mc_config(args))
        for name, e in zip(("p_cov_total", "p_cov_uav", "p_cov_tbs"), est):
            rows += [(f"{name}_mc", e.mean), (f"{name}_ci", e.ci_half_width)]
    print_table(rows)
    if args.out:
        write_rows(args.out, ["quantity", "value"], rows)


def _ccdf_rows(params, thetas, mc: McConfig | None):
    cb = total_coverage(params)
    tiers = (cb.p_cov_uav, cb.p_cov_tbs)
    values = np.atleast_1d(conditional_coverage_ccdf(thetas, params, tiers=tiers))
    rows = [[t, v] for t, v in zip(thetas, values)]
    if mc is not None:
        for row, e in zip(rows, estimate_ccdf(thetas, params, mc, tiers)):
            row += [e.mean, e.ci_half_width]
    return rows


def cmd_ccdf(args) -> None:
    params = core.normalize_params(raw_config(args))
    if args.thetas:
        thetas = parse_values(args.thetas)
    else:
        lo, hi = coverage_support(params)
        thetas = list(np.linspace(lo, hi, 51))
    header = ["theta", "ccdf"] + (["ccdf_mc", "ccdf_ci"] if args.mc_check else [])
    write_rows(args.out, header, _ccdf_rows(params, thetas, mc_config(args) if args.mc_check else None))


def cmd_montecarlo(args) -> None:
    params = core.normalize_params(raw_config(args))
    mc = mc_config(args)
    pa = estimate_availability(params, mc)
    cov = estimate_coverage(params, mc)
    rows = [("availability", pa.mean, pa.ci_half_width),
            ("coverage_total", cov.total.mean, cov.total.ci_half_width),
            ("coverage_uav", cov.uav_tier.mean, cov.uav_tier.ci_half_width),
            ("coverage_tbs", cov.tbs_tier.mean, cov.tbs_tier.ci_half_width)]
    print(f"trials={mc.trials} seed={mc.seed} confidence={mc.confidence_level}")
    for name, m, ci in rows:
        print(f"{name:<15} {m:.6f} +/- {ci:.6f}")
    if args.out:
        write_rows(args.out, ["quantity", "mean", "ci_half_width"], rows)


def cmd_sweep(args) -> None:
    spec = SweepSpec(args.param, parse_values(args.values),
                     tuple(o.strip() for o in args.outputs.split(",") if o.strip()),
                     args.mc_check,
                     parse_values(args.thetas) if args.thetas else DEFAULT_THETAS)
    result = run_sweep(spec, raw_config(args), mc_config(args))
    if args.out:
        Path(args.out).write_text(result.to_csv())
        log.info("wrote %d rows to %s", len(result.rows), args.out)
    else:
        sys.stdout.write(result.to_csv())


def _curves(base, curve_key, curve_values, spec, mc) -> SweepResult:
    columns, rows = None, []
    for cv in curve_values:
        doc = dict(base)
        doc[curve_key] = cv
        res = run_sweep(spec, doc, mc)
        columns = res.columns[:1] + [curve_key] + res.columns[1:]
        rows += [r[:1] + [cv] + r[1:] for r in res.rows]
    return SweepResult(columns, rows)


def cmd_fig2(args) -> None:
    base = raw_config(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = SweepSpec("network.station_density_lambda_c", parse_values(args.values),
                     ("coverage_total", "availability"), args.mc_check)
    mc = mc_config(args)
    for name, key, vals in (("fig2a.csv", "energy.charging_time_Tch", FIG_TCH),
                            ("fig2b.csv", "energy.battery_capacity_Bmax", FIG_BMAX)):
        (out / name).write_text(_curves(base, key, vals, spec, mc).to_csv())
        print(f"wrote {out / name}")


def cmd_fig3(args) -> None:
    base = raw_config(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    thetas = parse_values(args.thetas)
    mc = mc_config(args) if args.mc_check else None
    for name, key, vals in (("fig3a.csv", "energy.charging_time_Tch", FIG_TCH),
                            ("fig3b.csv", "energy.battery_capacity_Bmax", FIG_BMAX)):
        header = ["theta", key, "ccdf"] + (["ccdf_mc", "ccdf_ci"] if mc else [])
        rows = []
        for cv in vals:
            doc = dict(base)
            doc[key] = cv
            params = core.normalize_params(doc)
            rows += [r[:1] + [cv] + r[1:] for r in _ccdf_rows(params, thetas, mc)]
        write_rows(out / name, header, rows)
        print(f"wrote {out / name}")


def cmd_schema(args) -> None:
    print(core.schema_table())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=core.DEFAULT_PROFILE,
                        help="profile name (%s) or YAML file" % ", ".join(core.PROFILES))
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one key, external units; repeatable")
    common.add_argument("--out", help="write CSV here")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100_000)
    common.add_argument("--confidence", type=float, default=0.99)
    common.add_argument("--mc-check", action="store_true",
                        help="add Monte Carlo estimates and CI half-widths")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="uavcov", description=__doc__.split("\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     epilog=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("vopt", parents=[common], help="energy-optimal cruise speed").set_defaults(
        func=cmd_vopt)
    p = sub.add_parser("avail", parents=[common], help="availability and its CDF")
    p.add_argument("--quantiles", help="x values for the CDF table (list or range)")
    p.set_defaults(func=cmd_avail)
    sub.add_parser("coverage", parents=[common], help="coverage breakdown").set_defaults(
        func=cmd_coverage)
    p = sub.add_parser("ccdf", parents=[common], help="CCDF of conditional coverage")
    p.add_argument("--thetas", help="theta values (default: 51 points over the support)")
    p.set_defaults(func=cmd_ccdf)
    sub.add_parser("montecarlo", parents=[common], help="simulation estimates").set_defaults(
        func=cmd_montecarlo)
    p = sub.add_parser("sweep", parents=[common], help="sweep one config key")
    p.add_argument("--param", required=True, help="dotted config key")
    p.add_argument("--values", required=True, help="lo:hi:log:N, lo:hi:lin:N or a,b,c")
    p.add_argument("--outputs", default="coverage_total",
                   help="comma list of availability, coverage_total, coverage_uav, "
                        "coverage_tbs, ccdf")
    p.add_argument("--thetas", help="theta grid for the ccdf output")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("reproduce-fig2", parents=[common],
                       help="coverage vs station density for several T_ch and B_max")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--values", default=FIG2_LAMBDA, help="station densities, km^-2")
    p.set_defaults(func=cmd_fig2)
    p = sub.add_parser("reproduce-fig3", parents=[common],
                       help="CCDF of conditional coverage for several T_ch and B_max")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--thetas", default="0:1:lin:101")
    p.set_defaults(func=cmd_fig3)
    sub.add_parser("schema", help="list config keys, units and defaults").set_defaults(
        func=cmd_schema)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (ConfigError, ValidationError, ValueError) as exc:
        print(f"uavcov: error: {exc}", file=sys.stderr)
        return 1
    except QuadratureError as exc:
        print(f"uavcov: numerical error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
