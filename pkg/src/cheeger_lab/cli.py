"""Command line interface: ``python -m cheeger_lab <command> ...``.

Exit codes: 0 success, 1 a run produced a failure row, 2 configuration
error, 3 exact-enumeration budget exceeded, 4 a ``--check`` threshold failed.
"""

from __future__ import annotations

import argparse
import math
import sys

from cheeger_lab.estimators import (
    EstimatorContext,
    PenalizedConfig,
    candidate_family,
    inverse_log_rho,
    minimize_h_n_ddag,
    power_radius,
)
from cheeger_lab.geometry.cheeger import known_cheeger, orbit_l1
from cheeger_lab.geometry.constants import MAX_DIM, gamma_constant, unit_ball_volume
from cheeger_lab.geometry.cuts import relative_cut_quantities
from cheeger_lab.geometry.serialize import candidate_from_mapping, domain_from_mapping
from cheeger_lab.graph import BudgetError, NeighborhoodGraph, build_graph, conductance_exact, evaluate_cut, spectral_sweep
from cheeger_lab.harness.checks import check_report
from cheeger_lab.harness.config import ConfigError, load_config, parse_config
from cheeger_lab.harness.defaults import DEFAULTS
from cheeger_lab.harness.experiments import run_experiment
from cheeger_lab.harness.report import format_float
from cheeger_lab.sampling import derive_seed, points_csv_text, read_points_csv, sample_uniform, write_points_csv

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_BUDGET, EXIT_CHECK = 0, 1, 2, 3, 4

_DOMAIN_FLAGS = ("center", "radius", "sides", "rounding", "inner", "outer", "margin")


def _add_domain_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("domain")
    g.add_argument("--domain", default="disk", choices=("disk", "rectangle", "annulus"))
    g.add_argument("--center", default="0,0", help="comma-separated coordinates")
    g.add_argument("--radius", default="1")
    g.add_argument("--sides", default="0.8,0.5")
    g.add_argument("--rounding", default="0.02")
    g.add_argument("--inner", default="0.5")
    g.add_argument("--outer", default="1")
    g.add_argument("--margin", default=None)


def _domain(args):
    m = {"kind": args.domain}
    m.update({k: getattr(args, k) for k in _DOMAIN_FLAGS if getattr(args, k) is not None})
    try:
        return domain_from_mapping(m)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad domain: {exc}", source="<flags>") from exc


def _read_graph(path) -> NeighborhoodGraph:
    with open(path) as fh:
        return NeighborhoodGraph.from_edgelist(fh.read())


def _emit(pairs) -> None:
    for key, value in pairs:
        if isinstance(value, float):
            value = format_float(value)
        print(f"{key} = {value}")


def cmd_constants(args) -> int:
    dims = [int(d) for d in args.dims.split(",")] if args.dims else list(range(1, 4))
    for d in dims:
        if not 1 <= d <= MAX_DIM:
            raise ConfigError(f"dimension {d} outside [1, {MAX_DIM}]", source="<flags>")
        print(f"d={d} omega_d={format_float(unit_ball_volume(d))} gamma_d={format_float(gamma_constant(d))}")
    return EXIT_OK


def cmd_sample(args) -> int:
    M = _domain(args)
    seed = args.seed if args.replicate is None else derive_seed(args.seed, args.replicate)
    sample = sample_uniform(M, args.n, seed)
    if args.out:
        write_points_csv(args.out, sample.points)
    else:
        sys.stdout.write(points_csv_text(sample.points))
    return EXIT_OK


def cmd_graph(args) -> int:
    if args.points:
        points = read_points_csv(args.points)
    else:
        points = sample_uniform(_domain(args), args.n, args.seed).points
    text = build_graph(points, args.r).to_edgelist()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cut(args) -> int:
    if args.edges:
        G = _read_graph(args.edges)
        subset = [int(v) for v in args.subset.split(",") if v.strip()] if args.subset else []
        ev = evaluate_cut(G, subset)
        _emit([("delta_S", ev.delta_S), ("delta_Sc", ev.delta_Sc), ("sigma_S", ev.sigma_S), ("h", ev.h), ("degenerate", ev.degenerate)])
        return EXIT_OK
    M = _domain(args)
    m = {"kind": args.candidate, "offset": args.offset, "complement": str(args.complement)}
    if args.angle is not None or args.normal is None:
        m["angle"] = args.angle or "0"
    if args.normal is not None:
        m["normal"] = args.normal
    if args.ball_center is not None:
        m["center"] = args.ball_center
    if args.ball_radius is not None:
        m["radius"] = args.ball_radius
    try:
        A = candidate_from_mapping(m)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad candidate: {exc}", source="<flags>") from exc
    cq = relative_cut_quantities(A, M)
    _emit([("perimeter", cq.perimeter), ("vol_in", cq.vol_in), ("vol_out", cq.vol_out), ("h", cq.h)])
    return EXIT_OK


def cmd_exact(args) -> int:
    res = conductance_exact(_read_graph(args.edges))
    _emit([("H", res.H), ("members", " ".join(map(str, res.members)))])
    return EXIT_OK


def cmd_sweep(args) -> int:
    res = spectral_sweep(_read_graph(args.edges))
    _emit([("h_upper", res.h_upper), ("lambda2", res.lambda2), ("converged", res.converged), ("members", " ".join(map(str, res.members)))])
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        M, n, r, rho = cfg.domain, cfg.schedule[-1], cfg.r_n(cfg.schedule[-1]), cfg.rho_n(cfg.schedule[-1])
        k_angle, k_offset, seed = cfg.k_angle, cfg.k_offset, derive_seed(cfg.master_seed, 0)
    else:
        M, n = _domain(args), args.n
        r = args.r if args.r is not None else power_radius(n, M.dim)
        rho = args.rho if args.rho is not None else inverse_log_rho(n)
        k_angle, k_offset, seed = args.k_angle, args.k_offset, args.seed
    ctx = EstimatorContext.from_sample(sample_uniform(M, n, seed), M, r)
    res = minimize_h_n_ddag(ctx, PenalizedConfig(rho, candidate_family(M, rho, k_angle, k_offset), r, n))
    target = known_cheeger(M).value
    if res.failed:
        _emit([("value", math.inf), ("target", target), ("argmin", "none")])
        return EXIT_FAILED
    l1, closest = orbit_l1(res.argmin, M)
    _emit([("value", res.value), ("target", target), ("argmin", res.argmin.describe()), ("l1", l1), ("closest", closest.describe())])
    return EXIT_OK


def cmd_experiment(args) -> int:
    text = open(args.config).read() if args.config else DEFAULTS[args.kind]
    source = args.config or f"<default {args.kind}>"
    cfg = parse_config(text, source=source)
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}", source="<flags>")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    for flag, key in (("replicates", "replicates"), ("schedule", "schedule"), ("seed", "master_seed"), ("output", "output")):
        if getattr(args, flag) is not None:
            overrides[key] = str(getattr(args, flag))
    overrides["experiment"] = args.kind
    cfg = cfg.with_overrides(overrides)
    report = run_experiment(cfg)
    status = EXIT_FAILED if report.failed else EXIT_OK
    if args.check:
        results = check_report(report, cfg)
        for res in results:
            print(res.line())
        if not all(res.passed for res in results):
            status = EXIT_CHECK
    if cfg.output:
        csv_path, json_path = report.write(cfg.output)
        print(f"wrote {csv_path} and {json_path}")
    elif not args.check:
        sys.stdout.write(report.to_csv())
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cheeger-lab", description="Normalized cuts of neighborhood graphs and their continuum limits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="omega_d and gamma_d")
    p.add_argument("--dims", default=None, help="comma-separated dimensions (default 1,2,3)")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("sample", help="uniform sample of a domain as CSV")
    _add_domain_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicate", type=int, default=None, help="derive the seed from --seed and this replicate index")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("graph", help="neighborhood graph edge list")
    _add_domain_flags(p)
    p.add_argument("--points", default=None, help="point CSV; otherwise sample the domain")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("cut", help="graph cut of a vertex subset, or continuum cut of a candidate set")
    _add_domain_flags(p)
    p.add_argument("--edges", default=None, help="edge-list file; evaluates --subset on the graph")
    p.add_argument("--subset", default=None, help="comma-separated vertex indices")
    p.add_argument("--candidate", default="halfspace", choices=("halfspace", "ball"))
    p.add_argument("--angle", default=None)
    p.add_argument("--normal", default=None)
    p.add_argument("--offset", default="0")
    p.add_argument("--ball-center", default=None)
    p.add_argument("--ball-radius", default=None)
    p.add_argument("--complement", action="store_true")
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("exact-cheeger", help="exact conductance of a small graph")
    p.add_argument("--edges", required=True)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("sweep", help="spectral sweep-cut upper bound on the conductance")
    p.add_argument("--edges", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("estimate", help="penalized minimum over the candidate family for one sample")
    _add_domain_flags(p)
    p.add_argument("--config", default=None, help="use domain, rates and family sizes from a config (largest n, replicate 0)")
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--k-angle", type=int, default=36)
    p.add_argument("--k-offset", type=int, default=41)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("experiment", help="run a configured experiment")
    p.add_argument("kind", choices=sorted(DEFAULTS))
    p.add_argument("--config", default=None, help="config file (default: the built-in config for the kind)")
    p.add_argument("--check", action="store_true", help="apply pass/fail thresholds; exit 4 on failure")
    p.add_argument("--output", default=None, help="report path prefix; writes PREFIX.csv and PREFIX.json")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--schedule", default=None, help="comma-separated n values")
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
