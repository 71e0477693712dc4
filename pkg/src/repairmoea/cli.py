"""Command-line entry point: ``repairmoea <subcommand> [options]``.

Subcommands
    run               execute a (problem x algorithm x repair x run) matrix
    tables            summary and t-test tables from a finished matrix
    plots             best-HV fronts and constraint boundaries for plotting
    reference-fronts  write reference-front files
    manifest          write the machine-readable problem manifest

A ``--config`` file is a JSON object whose keys are :class:`RunConfig` fields.
``problem``, ``algorithm`` and ``repair`` may also be lists, or ``"all"``.
Command-line flags override the file.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ALGORITHMS, ConfigError, RunConfig
from .harness import (REPAIR_ORDER, IncompleteMatrixError, export_plot_data, load_results,
                      make_tables, matrix_configs, run_matrix, write_tables)
from .metrics import DEFAULT_RESOLUTION, generate_reference_fronts
from .problems import PROBLEM_NAMES, write_manifest
from .repair import RepairKind

_FLAG_FIELDS = {"pop_size": "pop_size", "budget": "budget", "runs": "runs", "seed": "seed"}


def _as_list(value, universe):
    if value is None:
        return None
    if isinstance(value, str):
        value = [v for v in value.split(",") if v]
    if len(value) == 1 and str(value[0]).lower() == "all":
        return list(universe)
    return list(value)


def build_configs(args) -> list[RunConfig]:
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    problems = _as_list(args.problem or data.pop("problem", None), PROBLEM_NAMES) or ["MCOP1"]
    algorithms = _as_list(args.algorithm or data.pop("algorithm", None), ALGORITHMS) or ["moead"]
    repairs = _as_list(args.repair or data.pop("repair", None), [r.value for r in REPAIR_ORDER])
    repairs = [RepairKind.parse(r) for r in (repairs or [r.value for r in REPAIR_ORDER])]
    data.pop("problem", None), data.pop("algorithm", None), data.pop("repair", None)
    for flag, key in _FLAG_FIELDS.items():
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    RunConfig.from_dict(data)  # rejects unknown keys early
    configs = matrix_configs(problems=[p.upper() for p in problems], algorithms=algorithms,
                             repairs=repairs, **data)
    for cfg in configs:
        cfg.validate()
    return configs


def _cmd_run(args) -> int:
    configs = build_configs(args)
    total = sum(c.runs for c in configs)
    done = [0]

    def progress(rec):
        done[0] += 1
        igd = "failed" if rec.igd is None else f"{rec.igd:.3e}"
        print(f"[{done[0]}/{total}] {rec.algorithm} {rec.repair} {rec.problem} run {rec.run_index}: "
              f"IGD {igd} HV {rec.hv:.3e}", file=sys.stderr)

    run_matrix(configs, args.out_dir, threads=args.threads, fronts_dir=args.fronts_dir, progress=progress)
    print(f"{args.out_dir}/results.csv")
    return 0


def _cmd_tables(args) -> int:
    try:
        tables = make_tables(load_results(args.out_dir), alpha=args.alpha)
    except IncompleteMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in write_tables(tables, args.tables_dir or f"{args.out_dir}/tables"):
        print(path)
    return 0


def _cmd_plots(args) -> int:
    for path in export_plot_data(load_results(args.out_dir), args.plots_dir or f"{args.out_dir}/plots"):
        print(path)
    return 0


def _cmd_fronts(args) -> int:
    names = [p.upper() for p in _as_list(args.problem, PROBLEM_NAMES)] if args.problem else PROBLEM_NAMES
    for path in generate_reference_fronts(args.out_dir, names, args.resolution):
        print(path)
    return 0


def _cmd_manifest(args) -> int:
    write_manifest(args.out)
    print(args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repairmoea", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment matrix")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--problem", help="name, comma list or 'all'")
    run.add_argument("--algorithm", help="moead, nsga2, comma list or 'all'")
    run.add_argument("--repair", help="clip|reflect|reverse (or A|B|C), comma list or 'all'")
    run.add_argument("--pop-size", dest="pop_size", type=int)
    run.add_argument("--budget", type=int)
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--out-dir", default="results")
    run.add_argument("--threads", type=int, default=1)
    run.add_argument("--fronts-dir", help="reference-front directory (default: packaged fronts)")
    run.set_defaults(func=_cmd_run)

    tables = sub.add_parser("tables", help="mean/std and t-test tables")
    tables.add_argument("--out-dir", default="results")
    tables.add_argument("--tables-dir")
    tables.add_argument("--alpha", type=float, default=0.05)
    tables.set_defaults(func=_cmd_tables)

    plots = sub.add_parser("plots", help="plot data: best-HV fronts and boundaries")
    plots.add_argument("--out-dir", default="results")
    plots.add_argument("--plots-dir")
    plots.set_defaults(func=_cmd_plots)

    fronts = sub.add_parser("reference-fronts", help="write reference-front files")
    fronts.add_argument("--out-dir", default="fronts")
    fronts.add_argument("--problem", help="name, comma list or 'all' (default all)")
    fronts.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    fronts.set_defaults(func=_cmd_fronts)

    man = sub.add_parser("manifest", help="write the problem manifest (JSON)")
    man.add_argument("--out", default="manifest.json")
    man.set_defaults(func=_cmd_manifest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
