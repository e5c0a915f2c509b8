"""Data behind every figure panel and table, written as CSV or JSON.

Each panel is a small declarative record; :func:`write_figures` evaluates
them in a fixed order and writes one file per panel plus ``manifest.json``.

Parameters set explicitly in the run configuration are *pinned*: they replace
the panel's fixed value and, if the panel sweeps that parameter, every grid
point is evaluated at the pinned value (the grid itself is kept so files
stay comparable).  Pinning ``t = 0`` therefore reduces every panel to the
vacuum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import io
from .analysis import (
    TABLE2,
    Axis,
    CollectiveSpec,
    MonogamyInstance,
    RegionGrid,
    SweepRow,
    all_pentapartite_collective_specs,
    collective_blocks,
    collective_check,
    monogamy_eval,
    monogamy_partitions,
    monogamy_residual,
)
from .config import RunConfig, Tolerances
from .model import PARAMETERS, CouplingStrengths, covariance, covariance_blocks
from .steering import Bipartition, group_partitions, steerability_blocks, steering_matrix, steering_report

T_DEFAULT = 0.3

# probe/conjugate pairs as (conjugate -> probe); reversed direction is in each report
PAIRS_1_1 = tuple(Bipartition((c,), (p,)) for c in (1, 5, 6) for p in (2, 3, 4))
PAIRS_2_1 = tuple(Bipartition.of(a, b) for a, b in (("23", 1), ("23", 6), ("34", 5), ("34", 1), ("24", 1)))
PAIRS_3_1 = tuple(Bipartition.of(a, b) for a, b in
                  (("234", 1), ("234", 5), ("234", 6), ("156", 3), ("156", 2), ("156", 4)))


@dataclass(frozen=True)
class Panel:
    name: str
    kind: str
    fixed: CouplingStrengths
    description: str
    axis_x: Axis | None = None
    axis_y: Axis | None = None
    partitions: tuple[Bipartition, ...] = ()
    group_size: int = 1
    collective: CollectiveSpec | None = None
    monogamy: tuple[str, MonogamyInstance] | None = None
    extra: dict = field(default_factory=dict)


def _c(g1, g2, g3, t=T_DEFAULT) -> CouplingStrengths:
    return CouplingStrengths(g1, g2, g3, t)


def panels(resolution: int = 201, sweep_steps: int = 201) -> list[Panel]:
    """Every panel in output order."""
    g1_axis = Axis("g1", 0.0, 4.0, sweep_steps)
    t_axis = Axis("t", 0.0, 0.6, sweep_steps)
    g3_line = Axis("g3", 0.0, 6.0, resolution)

    def plane(x, y, hi):
        return Axis(x, 0.0, hi, resolution), Axis(y, 0.0, hi, resolution)

    out = [
        Panel("fig2a", "sweep", _c(2, 1.2, 2), "(1+1) steerings vs t", t_axis, partitions=PAIRS_1_1),
        Panel("fig2b", "sweep", _c(0, 1.2, 2), "(1+1) steerings vs g1", g1_axis, partitions=PAIRS_1_1),
        Panel("fig2c", "sweep", _c(0, 2, 1.2), "(1+1) steerings vs g1", g1_axis, partitions=PAIRS_1_1),
        Panel("fig3a", "matrix", _c(1, 1.2, 2), "(1+1) steering matrix"),
        Panel("fig3b", "matrix", _c(3.5, 1.2, 2), "(1+1) steering matrix"),
        Panel("fig3c", "matrix", _c(1, 2, 1.2), "(1+1) steering matrix"),
        Panel("fig4a", "sweep", _c(2, 1.2, 2), "(2+1)/(1+2) steerings vs t", t_axis, partitions=PAIRS_2_1),
        Panel("fig4b", "sweep", _c(0, 1.2, 2), "(2+1)/(1+2) steerings vs g1", g1_axis, partitions=PAIRS_2_1),
        Panel("fig4c", "sweep", _c(0, 2, 1.2), "(2+1)/(1+2) steerings vs g1", g1_axis, partitions=PAIRS_2_1),
        Panel("fig4d", "matrix", _c(3, 1.2, 2), "(2+1)/(1+2) steering table", group_size=2),
        Panel("fig4e", "matrix", _c(3, 2, 1.2), "(2+1)/(1+2) steering table", group_size=2),
        Panel("fig5a", "sweep", _c(2, 1.2, 2), "(3+1)/(1+3) steerings vs t", t_axis, partitions=PAIRS_3_1),
        Panel("fig5b", "sweep", _c(0, 1.2, 2), "(3+1)/(1+3) steerings vs g1", g1_axis, partitions=PAIRS_3_1),
        Panel("fig5c", "sweep", _c(0, 2, 1.2), "(3+1)/(1+3) steerings vs g1", g1_axis, partitions=PAIRS_3_1),
        Panel("fig5d", "matrix", _c(3, 1.2, 2), "(3+1)/(1+3) steering table", group_size=3),
        Panel("fig5e", "matrix", _c(3, 2, 1.2), "(3+1)/(1+3) steering table", group_size=3),
        Panel("table1", "table1", _c(0, 0, 0), "collective pentapartite configurations and mirror images"),
    ]
    collective = [
        ("a", CollectiveSpec(1, (2, 4, 5, 6)), 1.0, 3.2),
        ("b", CollectiveSpec(2, (3, 4, 5, 6)), 4.0, 2.0),
        ("c", CollectiveSpec(4, (2, 3, 5, 6)), 1.5, 4.0),
    ]
    for tag, spec, g1, g2 in collective:
        out.append(Panel(f"fig6{tag}", "collective", _c(g1, g2, 0), f"collective {spec.label} vs g3",
                         g3_line, collective=spec))
    for tag, spec, g1, g2 in collective:
        ax, ay = plane("g2", "g3", 6.0)
        out.append(Panel(f"fig6{tag}_prime", "collective", _c(g1, 0, 0), f"collective {spec.label}, g1 fixed",
                         ax, ay, collective=spec))
        ax, ay = plane("g1", "g3", 6.0)
        out.append(Panel(f"fig6{tag}_dprime", "collective", _c(0, g2, 0), f"collective {spec.label}, g2 fixed",
                         ax, ay, collective=spec))
    out.append(Panel("table2", "table2", _c(0, 0, 0), "every tabulated monogamy relation at the matrix-panel points"))
    for tag, type_tag, fixed, axes in (
        ("a", "IVa", _c(1.2, 0, 0), ("g2", "g3")),
        ("b", "IVb", _c(1.2, 0, 0), ("g2", "g3")),
        ("c", "IVa", _c(0, 2, 0), ("g1", "g3")),
        ("d", "IVb", _c(0, 2, 0), ("g1", "g3")),
    ):
        ax, ay = plane(*axes, 4.0)
        out.append(Panel(f"fig7{tag}", "monogamy", fixed, f"type {type_tag} residual", ax, ay,
                         monogamy=(type_tag, TABLE2[type_tag][0])))
    for tag, fixed in (("a", _c(1, 1.2, 2)), ("b", _c(3.5, 1.2, 2)), ("c", _c(1, 2, 1.2))):
        out.append(Panel(f"cm_fig3{tag}", "covariance", fixed, "output covariance, interleaved ordering"))
    return out


# representative in-window points for table1 (one per collective column)
TABLE1_POINTS = (_c(1, 3.2, 4.5), _c(4, 2, 2.7), _c(1.5, 4, 2.9))
TABLE2_POINTS = (("fig3a", _c(1, 1.2, 2)), ("fig3b", _c(3.5, 1.2, 2)), ("fig3c", _c(1, 2, 1.2)))


def _pin(c: CouplingStrengths, pins: dict[str, float]) -> CouplingStrengths:
    for name, value in pins.items():
        c = c.with_value(name, value)
    return c


def _grid(panel: Panel, pins: dict[str, float]):
    params = {name: np.asarray(getattr(panel.fixed, name)) for name in PARAMETERS}
    if panel.axis_y is None:
        params[panel.axis_x.name] = panel.axis_x.values()
    else:
        yy, xx = np.meshgrid(panel.axis_y.values(), panel.axis_x.values(), indexing="ij")
        params[panel.axis_x.name], params[panel.axis_y.name] = xx, yy
    for name, value in pins.items():
        params[name] = np.full(np.shape(params[panel.axis_x.name]), float(value))
    return covariance_blocks(params["g1"], params["g2"], params["g3"], params["t"])


def _evaluate(panel: Panel, pins: dict[str, float], tol: Tolerances):
    """Return ``(header, rows, record)`` for one panel."""
    meta = {"panel": panel.name, "description": panel.description}
    if panel.kind == "sweep":
        rows = []
        for x in panel.axis_x.values():
            sigma = covariance(_pin(panel.fixed.with_value(panel.axis_x.name, float(x)), pins), rel_tol=tol.eig_residual)
            rows.append(SweepRow(float(x), tuple(steering_report(sigma, p, tol.eps_zero) for p in panel.partitions)))
        header, body = io.sweep_table(panel.axis_x.name, rows)
        return header, body, io.sweep_record(panel.axis_x.name, rows, meta)
    if panel.kind == "matrix":
        sigma = covariance(_pin(panel.fixed, pins), rel_tol=tol.eig_residual)
        partitions = None if panel.group_size == 1 else group_partitions(panel.group_size)
        table = steering_matrix(sigma, partitions)
        header, body = io.matrix_table(table)
        return header, body, io.matrix_record(table, meta)
    if panel.kind == "covariance":
        sigma = covariance(_pin(panel.fixed, pins), rel_tol=tol.eig_residual)
        header, body = io.covariance_table(sigma)
        return header, body, {**meta, "ordering": "interleaved", "labels": header[1:],
                              "sigma": [row[1:] for row in body]}
    if panel.kind == "collective":
        sx, sy = _grid(panel, pins)
        passed, value = collective_blocks(sx, sy, panel.collective, tol)
        grid = RegionGrid(panel.axis_x, panel.axis_y, panel.fixed, np.where(passed, value, 0.0),
                          f"collective {panel.collective.label}", passed)
        header, body = io.region_table(grid)
        return header, body, io.region_record(grid, meta)
    if panel.kind == "monogamy":
        type_tag, instance = panel.monogamy
        sx, sy = _grid(panel, pins)
        lhs_p, rhs_p = monogamy_partitions(type_tag, instance)
        residual = monogamy_residual(type_tag, [steerability_blocks(sx, sy, p) for p in lhs_p],
                                     [steerability_blocks(sx, sy, p) for p in rhs_p])
        grid = RegionGrid(panel.axis_x, panel.axis_y, panel.fixed, residual,
                          f"monogamy {type_tag} {instance.label}", residual >= -tol.eps_zero)
        header, body = io.region_table(grid)
        return header, body, io.region_record(grid, meta)
    if panel.kind == "table1":
        header = ["column", "steered", "steering", "mirror_steered", "mirror_steering", "g1", "g2", "g3", "t",
                  "passed", "value", "mirror_passed", "mirror_value"]
        body, records = [], []
        for column, ((spec, mirror), point) in enumerate(zip(all_pentapartite_collective_specs(), TABLE1_POINTS), 1):
            c = _pin(point, pins)
            sigma = covariance(c, rel_tol=tol.eig_residual)
            r, m = collective_check(sigma, spec, tol), collective_check(sigma, mirror, tol)
            body.append([column, spec.steered, "".join(map(str, spec.steering)), mirror.steered,
                         "".join(map(str, mirror.steering)), c.g1, c.g2, c.g3, c.t,
                         r.passed, r.value, m.passed, m.value])
            records.append({"column": column, "spec": spec.label, "mirror": mirror.label, "params": c.as_dict(),
                            "passed": r.passed, "value": r.value, "witnesses": r.witnesses,
                            "mirror_passed": m.passed, "mirror_value": m.value, "mirror_witnesses": m.witnesses})
        return header, body, {**meta, "rows": records}
    if panel.kind == "table2":
        header = ["point", *io.MONOGAMY_HEADER]
        body, records = [], []
        for point_name, point in TABLE2_POINTS:
            sigma = covariance(_pin(point, pins), rel_tol=tol.eig_residual)
            for type_tag, instances in TABLE2.items():
                for instance in instances:
                    r = monogamy_eval(sigma, type_tag, instance, tol)
                    body.append([point_name, *io.monogamy_row(r)])
                    records.append({"point": point_name, **io.monogamy_record(r)})
        return header, body, {**meta, "rows": records}
    raise ValueError(f"unknown panel kind {panel.kind!r}")


def _manifest_entry(panel: Panel, filename: str, pins: dict[str, float]) -> dict:
    entry = {
        "panel": panel.name,
        "file": filename,
        "kind": panel.kind,
        "description": panel.description,
        "fixed": _pin(panel.fixed, pins).as_dict(),
        "axis_x": io.axis_record(panel.axis_x),
        "axis_y": io.axis_record(panel.axis_y),
    }
    if panel.partitions:
        entry["partitions"] = [p.label for p in panel.partitions]
    if panel.group_size > 1:
        entry["group_size"] = panel.group_size
    if panel.collective is not None:
        entry["collective"] = panel.collective.label
    if panel.monogamy is not None:
        entry["monogamy"] = {"type": panel.monogamy[0], "instance": panel.monogamy[1].label}
    return entry


def write_figures(
    out_dir: str | Path,
    config: RunConfig,
    only: Callable[[Panel], bool] | None = None,
) -> list[Path]:
    """Evaluate every panel and write it into ``out_dir``; returns the paths written."""
    out_dir = Path(out_dir)
    pins = {name: float(getattr(config, name)) for name in PARAMETERS if name in config.explicit}
    tol = config.tolerances
    ext = "json" if config.format == "json" else "csv"
    written, entries = [], []
    for panel in panels(config.resolution, config.sweep_steps):
        if only is not None and not only(panel):
            continue
        header, body, record = _evaluate(panel, pins, tol)
        filename = f"{panel.name}.{ext}"
        text = io.json_text(record) if ext == "json" else io.csv_text(header, body)
        written.append(io.write_text(out_dir / filename, text))
        entries.append(_manifest_entry(panel, filename, pins))
    manifest = {
        "format": ext,
        "pinned": pins,
        "resolution": config.resolution,
        "sweep_steps": config.sweep_steps,
        "tolerances": {
            "eps_zero": tol.eps_zero,
            "eps_region": tol.eps_region,
            "eig_residual": tol.eig_residual,
            "imag_residue": tol.imag_residue,
            "threshold_tol": tol.threshold_tol,
        },
        "panels": entries,
    }
    written.append(io.write_text(out_dir / "manifest.json", io.json_text(manifest)))
    return written
