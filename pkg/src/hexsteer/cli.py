"""Command-line interface.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.  Flags take
precedence over the JSON config file given by ``--config`` or the
``HEXSTEER_CONFIG`` environment variable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io
from .analysis import (
    MONOGAMY_TYPES,
    TABLE2,
    Axis,
    CollectiveSpec,
    MonogamyInstance,
    SweepSpec,
    collective_check,
    collective_region_scan,
    monogamy_eval,
    monogamy_region_scan,
    pass_intervals,
    sweep,
)
from .config import RunConfig
from .errors import HexsteerError, InvalidParameterError
from .figures import write_figures
from .model import CouplingStrengths, covariance
from .oracle import IntegratorConfig, integrate_covariance
from .steering import Bipartition, group_partitions, parse_modes, steering_matrix, steering_report

ORACLE_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameters and output")
    for name in ("g1", "g2", "g3", "t"):
        g.add_argument(f"--{name}", type=float, default=None)
    g.add_argument("--config", default=None, help="flat JSON config file")
    g.add_argument("--out", default=None, help="output file (directory for figures/sweep)")
    g.add_argument("--format", choices=("csv", "json"), default=None)
    g.add_argument("--eps-zero", dest="eps_zero", type=float, default=None)
    g.add_argument("--eps-region", dest="eps_region", type=float, default=None)
    g.add_argument("--resolution", type=int, default=None, help="steps per axis of 2-D region scans")
    g.add_argument("--sweep-steps", dest="sweep_steps", type=int, default=None)
    g.add_argument("--oracle", action="store_true",
                   help="cross-check the covariance against the ODE integrator and report the deviation")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hexsteer", description="Steering analysis of six-mode four-wave mixing.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("steer", help="steerability in both directions for one partition")
    _common(p)
    p.add_argument("--a", required=True, help="steering party, e.g. 1 or 2,3,4")
    p.add_argument("--b", required=True, help="steered party")

    p = sub.add_parser("sweep", help="steerings along one parameter")
    _common(p)
    p.add_argument("--a", action="append", required=True)
    p.add_argument("--b", action="append", required=True)
    p.add_argument("--scan", required=True, help="axis:from:to:steps")

    p = sub.add_parser("matrix", help="steering matrix (6x6 for single modes)")
    _common(p)
    p.add_argument("--group-size", dest="group_size", type=int, default=1,
                   help="1 for the (1+1) matrix, k for (k+1)/(1+k) tables")

    p = sub.add_parser("collective", help="collective steering check or scan")
    _common(p)
    p.add_argument("--steered", required=True, type=int)
    p.add_argument("--steering", required=True)
    p.add_argument("--scan", action="append", default=[], help="axis:from:to:steps; give twice for a plane")

    p = sub.add_parser("monogamy", help="monogamy relations")
    _common(p)
    p.add_argument("--type", dest="type_tag", choices=MONOGAMY_TYPES, default=None,
                   help="relation type; all types when omitted")
    p.add_argument("--anchor", default=None, help="custom instance: anchor modes")
    p.add_argument("--parts", default=None, help="custom instance: parts separated by '/', e.g. 1/5/6")
    p.add_argument("--scan", action="append", default=[], help="region scan axes (type IV only)")

    p = sub.add_parser("figures", help="write the data behind every figure and table")
    _common(p)

    p = sub.add_parser("selftest", help="quick internal consistency checks")
    _common(p)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    keys = set(RunConfig.field_names())
    overrides = {k: v for k, v in vars(args).items() if k in keys}
    return RunConfig.from_sources(args.config, **overrides)


def _strengths(cfg: RunConfig) -> CouplingStrengths:
    return CouplingStrengths(cfg.g1, cfg.g2, cfg.g3, cfg.t)


def _emit(cfg: RunConfig, header, rows, record, default_name: str | None = None) -> None:
    text = io.json_text(record) if cfg.format == "json" else io.csv_text(header, rows)
    if cfg.out is None:
        sys.stdout.write(text)
        return
    target = Path(cfg.out)
    if default_name is not None and (target.is_dir() or cfg.out.endswith(("/", "\\"))):
        target = target / default_name
    io.write_text(target, text)


def _oracle_check(c: CouplingStrengths) -> float:
    diff = float(np.max(np.abs(covariance(c).sigma - integrate_covariance(c, IntegratorConfig()).sigma)))
    print(f"oracle max abs deviation: {io.fmt(diff)}", file=sys.stderr)
    if diff > ORACLE_TOL:
        raise RuntimeError(f"oracle deviation {diff:.3e} exceeds {ORACLE_TOL:g}")
    return diff


def cmd_steer(args, cfg: RunConfig) -> None:
    c = _strengths(cfg)
    p = Bipartition(parse_modes(args.a), parse_modes(args.b))
    if args.oracle:
        _oracle_check(c)
    report = steering_report(covariance(c), p, cfg.eps_zero)
    header, rows = io.report_table([report])
    _emit(cfg, header, rows, {"params": c.as_dict(), **io.report_record(report)})


def cmd_sweep(args, cfg: RunConfig) -> None:
    if len(args.a) != len(args.b):
        raise UsageError("--a and --b must be given the same number of times")
    partitions = tuple(Bipartition(parse_modes(a), parse_modes(b)) for a, b in zip(args.a, args.b))
    axis = Axis.parse(args.scan)
    spec = SweepSpec(axis, _strengths(cfg), partitions)
    rows = sweep(spec, cfg.tolerances)
    header, body = io.sweep_table(axis.name, rows)
    record = io.sweep_record(axis.name, rows, {"fixed": spec.fixed.as_dict(), "axis": io.axis_record(axis)})
    _emit(cfg, header, body, record, f"sweep.{cfg.format}")


def cmd_matrix(args, cfg: RunConfig) -> None:
    c = _strengths(cfg)
    if args.oracle:
        _oracle_check(c)
    partitions = None if args.group_size == 1 else group_partitions(args.group_size)
    table = steering_matrix(covariance(c), partitions)
    header, rows = io.matrix_table(table)
    _emit(cfg, header, rows, io.matrix_record(table, {"params": c.as_dict()}), f"matrix.{cfg.format}")


def cmd_collective(args, cfg: RunConfig) -> None:
    spec = CollectiveSpec(args.steered, parse_modes(args.steering))
    c = _strengths(cfg)
    if len(args.scan) > 2:
        raise UsageError("at most two --scan axes")
    if not args.scan:
        r = collective_check(covariance(c), spec, cfg.tolerances)
        labels = list(r.witnesses)
        header = ["steered", "steering", "passed", "value", *labels]
        rows = [[spec.steered, "".join(map(str, spec.steering)), r.passed, r.value,
                 *[r.witnesses[k] for k in labels]]]
        record = {"params": c.as_dict(), "spec": spec.label, "passed": r.passed, "value": r.value,
                  "witnesses": r.witnesses}
        _emit(cfg, header, rows, record, f"collective.{cfg.format}")
        return
    axes = [Axis.parse(s) for s in args.scan]
    grid = collective_region_scan(spec, c, axes[0], axes[1] if len(axes) > 1 else None, cfg.tolerances)
    if grid.axis_y is None:
        runs = pass_intervals(grid.axis_x.values(), grid.passed)
        text = ", ".join(f"[{io.fmt(lo)}, {io.fmt(hi)}]" for lo, hi in runs) or "none"
        print(f"pass intervals in {grid.axis_x.name}: {text}", file=sys.stderr)
    header, rows = io.region_table(grid)
    _emit(cfg, header, rows, io.region_record(grid), f"collective.{cfg.format}")


def _instances(args) -> list[tuple[str, MonogamyInstance]]:
    if args.anchor is not None or args.parts is not None:
        if args.type_tag is None or args.anchor is None or args.parts is None:
            raise UsageError("a custom instance needs --type, --anchor and --parts")
        return [(args.type_tag, MonogamyInstance(parse_modes(args.anchor),
                                                 tuple(parse_modes(p) for p in args.parts.split("/"))))]
    types = [args.type_tag] if args.type_tag else list(MONOGAMY_TYPES)
    return [(t, inst) for t in types for inst in TABLE2[t]]


def cmd_monogamy(args, cfg: RunConfig) -> None:
    c = _strengths(cfg)
    instances = _instances(args)
    if args.scan:
        if len(args.scan) > 2:
            raise UsageError("at most two --scan axes")
        if args.type_tag not in ("IVa", "IVb"):
            raise UsageError("region scans need --type IVa or IVb")
        axes = [Axis.parse(s) for s in args.scan]
        type_tag, instance = instances[0]
        grid = monogamy_region_scan(type_tag, instance, c, axes[0], axes[1] if len(axes) > 1 else None,
                                    cfg.tolerances)
        header, rows = io.region_table(grid)
        _emit(cfg, header, rows, io.region_record(grid), f"monogamy.{cfg.format}")
        return
    sigma = covariance(c)
    results = [monogamy_eval(sigma, t, inst, cfg.tolerances) for t, inst in instances]
    rows = [io.monogamy_row(r) for r in results]
    _emit(cfg, io.MONOGAMY_HEADER, rows, {"params": c.as_dict(), "results": [io.monogamy_record(r) for r in results]},
          f"monogamy.{cfg.format}")


def cmd_figures(args, cfg: RunConfig) -> None:
    if cfg.out is None:
        raise UsageError("figures needs --out DIR")
    paths = write_figures(cfg.out, cfg)
    print(f"wrote {len(paths)} files to {cfg.out}", file=sys.stderr)


def cmd_selftest(args, cfg: RunConfig) -> int:
    from .selftest import run_selftest

    return run_selftest(cfg, sys.stdout)


COMMANDS = {
    "steer": cmd_steer,
    "sweep": cmd_sweep,
    "matrix": cmd_matrix,
    "collective": cmd_collective,
    "monogamy": cmd_monogamy,
    "figures": cmd_figures,
    "selftest": cmd_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        status = COMMANDS[args.command](args, cfg)
    except (UsageError, InvalidParameterError) as exc:
        parser.print_usage(sys.stderr)
        print(f"hexsteer {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (HexsteerError, OSError, RuntimeError, ValueError) as exc:
        print(f"hexsteer {args.command}: {exc}", file=sys.stderr)
        return 1
    return int(status or 0)


if __name__ == "__main__":
    sys.exit(main())
