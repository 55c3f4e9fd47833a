"""Build the capacity-sweep and amplifier-position figures from CSV files.

Input is the CSV written by the linkcap CLI. Three figures:

* ``fig2a``: spectral efficiency vs total length, one dashed (Shannon)
  and one solid (Holevo) curve per node count, color keyed by node
  count, plus the loss-only (black) and distributed-amplification
  (gray) reference curves taken from their Holevo rows.
* ``fig2b``: the same chart restricted to lengths up to 100 km.
* ``fig3``: cumulative amplifier positions vs total length from a
  locations CSV, the distributed-model termination point (gray) and a
  dotted diagonal guide. Absent positions (loss-only regime) render as
  gaps, never as zeros.

The renderer never rescales data: every plotted array equals the parsed
CSV column, which the tests assert literally.
"""

import csv
import re
from dataclasses import dataclass

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

FIGURE_IDS = ("fig2a", "fig2b", "fig3")

SWEEP_REQUIRED = ("criterion", "n_nodes", "length_km", "se_bits")

CLOSEUP_MAX_KM = 100.0

# slack for the non-increasing sanity check; covers 9-significant-digit
# rounding in the CSV without masking real violations
MONOTONE_SLACK = 1e-6

N_COLORS = [
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#bcbd22",
    "#17becf",
]
LOSS_ONLY_COLOR = "black"
DISTRIBUTED_COLOR = "0.55"


class FigureError(ValueError):
    """Unusable input CSV or figure request."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    figure: str
    out_path: str | None = None
    dpi: int = 150

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise FigureError(
                f"unknown figure {self.figure!r}, expected one of {FIGURE_IDS}"
            )


@dataclass
class RenderResult:
    figure: Figure
    series: dict  # label -> (x array, y array)


def read_rows(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise FigureError(f"{path}: empty file, no header row")
        rows = list(reader)
    if not rows:
        raise FigureError(f"{path}: no data rows")
    return list(reader.fieldnames), rows


def _require_columns(fieldnames, required, path):
    missing = [c for c in required if c not in fieldnames]
    if missing:
        raise FigureError(f"{path}: missing required columns {missing}")


def _to_float(raw, column, path):
    if raw is None or raw == "":
        return float("nan")
    try:
        return float(raw)
    except ValueError as exc:
        raise FigureError(f"{path}: bad value {raw!r} in column {column}") from exc


def render(spec):
    """Render the requested figure; writes spec.out_path when given.

    Returns the Figure plus every plotted series so callers can verify
    the data without touching pixels.
    """
    if spec.figure in ("fig2a", "fig2b"):
        result = _render_sweep(spec)
    else:
        result = _render_locations(spec)
    if spec.out_path:
        FigureCanvasAgg(result.figure)
        result.figure.savefig(spec.out_path, dpi=spec.dpi)
    return result


def _sweep_groups(spec):
    fieldnames, raw_rows = read_rows(spec.csv_path)
    _require_columns(fieldnames, SWEEP_REQUIRED, spec.csv_path)
    groups = {}
    for row in raw_rows:
        criterion = row["criterion"].strip().lower()
        try:
            n = int(row["n_nodes"])
        except ValueError as exc:
            raise FigureError(
                f"{spec.csv_path}: bad n_nodes {row['n_nodes']!r}"
            ) from exc
        length = _to_float(row["length_km"], "length_km", spec.csv_path)
        se = _to_float(row["se_bits"], "se_bits", spec.csv_path)
        if spec.figure == "fig2b" and length > CLOSEUP_MAX_KM:
            continue
        groups.setdefault((criterion, n), []).append((length, se))
    if not groups:
        raise FigureError(f"{spec.csv_path}: no rows left for {spec.figure}")
    for pts in groups.values():
        pts.sort(key=lambda p: p[0])
    return groups


def _render_sweep(spec):
    groups = _sweep_groups(spec)
    node_counts = sorted({n for _, n in groups if n > 0})
    fig = Figure(figsize=(8.0, 5.0))
    ax = fig.add_subplot(111)
    series = {}

    def add_line(key, label, color, style):
        if key not in groups:
            return
        x = np.array([p[0] for p in groups[key]])
        y = np.array([p[1] for p in groups[key]])
        drops = np.diff(y) > MONOTONE_SLACK
        if drops.any():
            at = x[1:][drops][0]
            raise FigureError(
                f"{spec.csv_path}: series {label!r} increases with length "
                f"near L={at:g} km; refusing to plot suspect data"
            )
        ax.plot(x, y, color=color, linestyle=style, linewidth=1.4, label=label)
        series[label] = (x, y)

    for idx, n in enumerate(node_counts):
        color = N_COLORS[idx % len(N_COLORS)]
        add_line(("shannon", n), f"N={n} Shannon", color, "--")
        add_line(("holevo", n), f"N={n} Holevo", color, "-")
    add_line(("holevo", 0), "loss only", LOSS_ONLY_COLOR, "-")
    add_line(("holevo", -1), "distributed", DISTRIBUTED_COLOR, "-")

    ax.set_xlabel("total length L (km)")
    ax.set_ylabel("spectral efficiency (bits/(s*Hz))")
    if spec.figure == "fig2b":
        ax.set_xlim(0.0, CLOSEUP_MAX_KM)
    ax.legend(fontsize=8, ncols=2)
    ax.grid(True, alpha=0.3)
    return RenderResult(fig, series)


def _render_locations(spec):
    fieldnames, raw_rows = read_rows(spec.csv_path)
    _require_columns(
        fieldnames, ("length_km", "distributed_termination_km"), spec.csv_path
    )
    pos_cols = sorted(
        (c for c in fieldnames if re.fullmatch(r"pos_\d+", c)),
        key=lambda c: int(c.split("_")[1]),
    )
    if not pos_cols:
        raise FigureError(f"{spec.csv_path}: no pos_<i> columns found")

    lengths = np.array(
        [_to_float(r["length_km"], "length_km", spec.csv_path) for r in raw_rows]
    )
    order = np.argsort(lengths)
    lengths = lengths[order]
    rows = [raw_rows[i] for i in order]

    fig = Figure(figsize=(7.0, 6.0))
    ax = fig.add_subplot(111)
    series = {}
    for idx, col in enumerate(pos_cols):
        y = np.array([_to_float(r[col], col, spec.csv_path) for r in rows])
        color = N_COLORS[idx % len(N_COLORS)]
        ax.plot(lengths, y, color=color, linewidth=1.0)
        series[col] = (lengths, y)
    term = np.array(
        [
            _to_float(r["distributed_termination_km"],
                      "distributed_termination_km", spec.csv_path)
            for r in rows
        ]
    )
    ax.plot(lengths, term, color=DISTRIBUTED_COLOR, linewidth=2.0,
            label="distributed termination")
    series["distributed_termination_km"] = (lengths, term)

    guide = np.array([lengths[0], lengths[-1]])
    ax.plot(guide, guide, color="black", linestyle=":", linewidth=1.0,
            label="link end")
    series["diagonal_guide"] = (guide, guide.copy())

    ax.set_xlabel("total length L (km)")
    ax.set_ylabel("position along link (km)")
    ax.legend(fontsize=8, loc="upper left")
    ax.grid(True, alpha=0.3)
    return RenderResult(fig, series)
