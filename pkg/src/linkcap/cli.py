"""Command-line front end.

Subcommands:
  sweep      distance/node-count grid of optimized spectral efficiencies
  locations  cumulative amplifier positions for a single node count
  single     evaluate one link configuration document (JSON)
  threshold  crossover length where amplification first beats bare fiber

Exit codes: 0 success, 1 usage or configuration error, 2 power-constraint
violation, 3 non-convergence with --strict.
"""

import argparse
import json
import sys

from linkcap.chain import attenuation_db
from linkcap.optimizer import (
    DEFAULT_SEED,
    OptimizerSettings,
    distributed_threshold,
    loss_only_threshold,
)
from linkcap.sweep import (
    SWEEP_COLUMNS,
    UsageError,
    build_spec,
    format_float,
    locations_columns,
    parse_criteria,
    parse_scenario,
    run_locations,
    run_single,
    run_sweep,
    write_csv,
    write_json,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONSTRAINT = 2
EXIT_NONCONVERGED = 3


def _add_common(sub):
    sub.add_argument("--scenario", help="scenario file with defaults for this run")
    sub.add_argument("--alpha", type=float, help="attenuation coefficient, 1/km")
    sub.add_argument("--nbar", type=float, help="input PSD, photons/(s*Hz)")
    sub.add_argument("--seed", type=int, help="seed for the optimizer multi-start")
    sub.add_argument("--lmin", type=float, help="smallest total length, km")
    sub.add_argument("--lmax", type=float, help="largest total length, km")
    sub.add_argument("--lstep", type=float, help="length grid step, km")
    sub.add_argument("--out", help="output path (default: stdout)")
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.add_argument("--strict", action="store_true",
                     help="exit 3 if any grid cell fails to converge")
    sub.add_argument("--jobs", type=int, default=1,
                     help="evaluate grid cells in this many processes")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="linkcap",
        description="Capacity limits and optimal amplifier placement for "
        "multi-span optical links under a total-power cap.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="optimize over a (length, nodes) grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--nodes", help="comma list of node counts, e.g. 2,4,8")
    p_sweep.add_argument("--criterion", choices=["shannon", "holevo", "both"])
    p_sweep.add_argument("--loss-only", action="store_true", default=None,
                         help="append the bare-fiber curve")
    p_sweep.add_argument("--distributed", action="store_true", default=None,
                         help="append the distributed-amplification curve")

    p_loc = sub.add_parser("locations", help="amplifier positions for one node count")
    _add_common(p_loc)
    p_loc.add_argument("--nodes", help="single node count, e.g. 16")
    p_loc.add_argument("--criterion", choices=["shannon", "holevo"])

    p_single = sub.add_parser("single", help="evaluate a link config document")
    p_single.add_argument("config", help="path to a LinkConfig JSON document")
    p_single.add_argument("--format", choices=["text", "json"], default="text")

    p_thr = sub.add_parser("threshold", help="loss-only crossover length")
    p_thr.add_argument("--alpha", type=float, default=0.05)
    p_thr.add_argument("--nbar", type=float, default=100.0)
    p_thr.add_argument("--nodes", type=int, default=1)
    p_thr.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_thr.add_argument("--distributed", action="store_true",
                       help="continuum model instead of discrete nodes")
    p_thr.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def _spec_from_args(args, nodes=None, criteria=None):
    scenario = parse_scenario(args.scenario) if args.scenario else {}
    return build_spec(
        scenario,
        alpha_per_km=args.alpha,
        n_bar=args.nbar,
        seed=args.seed,
        l_min_km=args.lmin,
        l_max_km=args.lmax,
        l_step_km=args.lstep,
        node_counts=nodes,
        criteria=criteria,
        include_loss_only=getattr(args, "loss_only", None),
        include_distributed=getattr(args, "distributed", None),
    )


def _parse_nodes(raw):
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError as exc:
        raise UsageError(f"bad --nodes value {raw!r}: {exc}") from exc


def _emit(rows, columns, args):
    writer = write_csv if args.format == "csv" else write_json
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer(rows, columns, fh)
    else:
        writer(rows, columns, sys.stdout)


def _cmd_sweep(args):
    nodes = _parse_nodes(args.nodes) if args.nodes else None
    criteria = parse_criteria(args.criterion) if args.criterion else None
    spec = _spec_from_args(args, nodes=nodes, criteria=criteria)
    rows = run_sweep(spec, jobs=args.jobs)
    _emit(rows, SWEEP_COLUMNS, args)
    if args.strict and any(not r["converged"] for r in rows):
        return EXIT_NONCONVERGED
    return EXIT_OK


def _cmd_locations(args):
    nodes = _parse_nodes(args.nodes) if args.nodes else (16,)
    criteria = (args.criterion,) if args.criterion else ("holevo",)
    spec = _spec_from_args(args, nodes=nodes, criteria=criteria)
    rows = run_locations(spec, jobs=args.jobs)
    columns = locations_columns(spec.node_counts[0])
    _emit(rows, columns, args)
    if args.strict and any(not r["converged"] for r in rows):
        return EXIT_NONCONVERGED
    return EXIT_OK


def _cmd_single(args):
    report = run_single(args.config)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(f"tau:             {format_float(report['tau'])}")
        print(f"nu:              {format_float(report['nu'])}")
        print(f"shannon_se_bits: {format_float(report['shannon_se_bits'])}")
        print(f"holevo_se_bits:  {format_float(report['holevo_se_bits'])}")
        print(f"total_length_km: {format_float(report['total_length_km'])}")
        print(f"attenuation_db:  {format_float(report['attenuation_db'])}")
        if report["node_margins"]:
            flagged = [
                f"{format_float(m)}{' (VIOLATION)' if m < -1e-9 else ''}"
                for m in report["node_margins"]
            ]
            print("node_margins:    " + ", ".join(flagged))
        else:
            print("node_margins:    (no amplifiers)")
        print(f"feasible:        {'yes' if report['feasible'] else 'no'}")
    return EXIT_OK if report["feasible"] else EXIT_CONSTRAINT


def _cmd_threshold(args):
    if args.distributed:
        length, db = distributed_threshold(args.alpha, args.nbar)
        label = "distributed"
    else:
        settings = OptimizerSettings(seed=args.seed)
        length, db = loss_only_threshold(args.alpha, args.nbar, args.nodes, settings)
        label = f"nodes={args.nodes}"
    if args.format == "json":
        print(json.dumps({
            "model": label,
            "crossover_km": length,
            "crossover_db": db,
        }, indent=2))
    else:
        print(f"loss-only crossover ({label}): "
              f"{format_float(length)} km = {format_float(db)} dB")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "locations": _cmd_locations,
        "single": _cmd_single,
        "threshold": _cmd_threshold,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
