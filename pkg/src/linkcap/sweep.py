"""Distance and node-count sweeps with deterministic CSV/JSON output.

A sweep evaluates the placement optimizer on a grid of total lengths for
each requested node count and criterion, optionally appending the two
reference curves (bare fiber and the distributed-amplification model).
Rows are keyed by (criterion, n_nodes, length_km) where n_nodes 0 marks
the loss-only curve and -1 the distributed model.

Scenario files are flat ``key = value`` text with dotted names, e.g.::

    alpha_per_km = 0.05
    n_bar = 100
    sweep.l_max_km = 1000
    sweep.node_counts = 2,4,8,16,64

CLI flags override scenario values, which override the defaults.
"""

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from linkcap.capacity import InputPower, criterion_is_holevo
from linkcap.chain import LinkConfig, attenuation_db, check_power_constraint, end_to_end
from linkcap.distributed import golden_section_max, terminated_se
from linkcap.kernels import holevo_raw, shannon_raw
from linkcap.optimizer import (
    DEFAULT_SEED,
    OptimizationProblem,
    OptimizerSettings,
    loss_only_se,
    optimize,
)

SWEEP_COLUMNS = [
    "criterion",
    "n_nodes",
    "length_km",
    "se_bits",
    "tail_span_km",
    "converged",
    "evaluations",
]

LOSS_ONLY_NODES = 0
DISTRIBUTED_NODES = -1


class UsageError(ValueError):
    """Invalid sweep specification or scenario/CLI input."""


@dataclass(frozen=True)
class SweepSpec:
    l_min_km: float = 0.0
    l_max_km: float = 100.0
    l_step_km: float = 10.0
    node_counts: tuple = (2, 4)
    alpha_per_km: float = 0.05
    n_bar: float = 100.0
    criteria: tuple = ("shannon", "holevo")
    include_loss_only: bool = False
    include_distributed: bool = False
    seed: int = DEFAULT_SEED
    starts: int = 8
    budget_factor: int = 200

    def validate(self):
        if self.l_min_km > self.l_max_km:
            raise UsageError(
                f"l_min_km {self.l_min_km} exceeds l_max_km {self.l_max_km}"
            )
        if self.l_step_km <= 0:
            raise UsageError(f"l_step_km must be positive, got {self.l_step_km}")
        if self.l_min_km < 0:
            raise UsageError(f"l_min_km must be nonnegative, got {self.l_min_km}")
        if not self.node_counts and not self.include_loss_only:
            raise UsageError("node_counts is empty and loss-only curve not requested")
        if any(n < 0 for n in self.node_counts):
            raise UsageError(f"node counts must be >= 0, got {self.node_counts}")
        if not self.criteria:
            raise UsageError("no criteria selected")
        for c in self.criteria:
            try:
                criterion_is_holevo(c)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        if self.alpha_per_km <= 0:
            raise UsageError(f"alpha_per_km must be positive, got {self.alpha_per_km}")
        if self.n_bar <= 0:
            raise UsageError(f"n_bar must be positive, got {self.n_bar}")

    def lengths(self):
        count = int((self.l_max_km - self.l_min_km) / self.l_step_km + 1e-9) + 1
        return [self.l_min_km + i * self.l_step_km for i in range(count)]

    def optimizer_settings(self):
        return OptimizerSettings(
            starts=self.starts, budget_factor=self.budget_factor, seed=self.seed
        )


def _optimize_cell(args):
    criterion, n, length, alpha, nbar, settings = args
    problem = OptimizationProblem(
        total_length_km=length,
        node_count=n,
        alpha_per_km=alpha,
        n_bar=nbar,
        criterion=criterion,
        gain_mode="saturating",
    )
    res = optimize(problem, settings)
    return {
        "criterion": criterion,
        "n_nodes": n,
        "length_km": length,
        "se_bits": res.se,
        "tail_span_km": res.config.tail_span_km,
        "converged": res.converged,
        "evaluations": res.evaluations,
        "_config": res.config,
    }


def run_sweep(spec, jobs=1, keep_configs=False):
    """Evaluate every (criterion, N, L) cell; returns sorted row dicts.

    Cells are independent, so jobs > 1 fans them out over processes; the
    ordered collection keeps output identical to a sequential run.
    """
    spec.validate()
    settings = spec.optimizer_settings()
    lengths = spec.lengths()
    cells = [
        (criterion, n, length, spec.alpha_per_km, spec.n_bar, settings)
        for criterion in sorted(set(spec.criteria))
        for n in sorted(set(spec.node_counts))
        for length in lengths
    ]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_optimize_cell, cells, chunksize=1))
    else:
        rows = [_optimize_cell(c) for c in cells]
    for criterion in sorted(set(spec.criteria)):
        if spec.include_loss_only:
            for length in lengths:
                rows.append(_loss_only_row(spec, criterion, length))
        if spec.include_distributed:
            for length in lengths:
                rows.append(_distributed_row(spec, criterion, length))
    rows.sort(key=lambda r: (r["criterion"], r["n_nodes"], r["length_km"]))
    if not keep_configs:
        for r in rows:
            r.pop("_config", None)
    return rows


def _loss_only_row(spec, criterion, length):
    return {
        "criterion": criterion,
        "n_nodes": LOSS_ONLY_NODES,
        "length_km": length,
        "se_bits": loss_only_se(spec.alpha_per_km, spec.n_bar, length, criterion),
        "tail_span_km": length,
        "converged": True,
        "evaluations": 1,
    }


def _distributed_row(spec, criterion, length):
    p = InputPower(spec.n_bar)
    if length == 0.0:
        l_prime, se, evals = 0.0, terminated_se(spec.alpha_per_km, p, 0.0, 0.0, criterion), 1
    else:
        l_prime, se, evals = golden_section_max(
            lambda t: terminated_se(spec.alpha_per_km, p, length, t, criterion),
            0.0,
            length,
            1e-4,
        )
    return {
        "criterion": criterion,
        "n_nodes": DISTRIBUTED_NODES,
        "length_km": length,
        "se_bits": se,
        "tail_span_km": l_prime,
        "converged": True,
        "evaluations": evals,
    }


def locations_columns(n):
    return ["length_km"] + [f"pos_{i}" for i in range(1, n + 1)] + [
        "distributed_termination_km"
    ]


def run_locations(spec, jobs=1):
    """Cumulative amplifier positions along the link for a single N.

    Lengths where the optimum degenerates to the bare fiber report absent
    positions. The last column is where the distributed model stops
    amplifying (total length minus its optimal unamplified section).
    """
    spec.validate()
    if len(set(spec.node_counts)) != 1:
        raise UsageError("locations requires exactly one node count")
    if len(set(spec.criteria)) != 1:
        raise UsageError("locations requires exactly one criterion")
    n = spec.node_counts[0]
    criterion = spec.criteria[0]
    settings = spec.optimizer_settings()
    p = InputPower(spec.n_bar)
    cells = [
        (criterion, n, length, spec.alpha_per_km, spec.n_bar, settings)
        for length in spec.lengths()
    ]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_optimize_cell, cells, chunksize=1))
    else:
        results = [_optimize_cell(c) for c in cells]
    rows = []
    for cell in results:
        length = cell["length_km"]
        cfg = cell["_config"]
        row = {"length_km": length, "converged": cell["converged"]}
        degenerate = all(s.span_km == 0.0 for s in cfg.stages)
        pos = 0.0
        for i, stage in enumerate(cfg.stages, start=1):
            pos += stage.span_km
            row[f"pos_{i}"] = None if degenerate else pos
        if length == 0.0:
            row["distributed_termination_km"] = 0.0
        else:
            l_prime, _ = _distributed_termination(spec, p, length, criterion)
            row["distributed_termination_km"] = length - l_prime
        rows.append(row)
    rows.sort(key=lambda r: r["length_km"])
    return rows


def _distributed_termination(spec, p, length, criterion):
    from linkcap.distributed import optimal_termination

    return optimal_termination(spec.alpha_per_km, p, length, criterion)


def run_single(path):
    """Evaluate one link configuration document; returns a report dict."""
    cfg = LinkConfig.from_json_file(path)
    ch = end_to_end(cfg)
    margins = check_power_constraint(cfg)
    feasible = all(m >= -1e-9 for m in margins)
    return {
        "tau": ch.tau,
        "nu": ch.nu,
        "shannon_se_bits": shannon_raw(ch.tau, ch.nu, cfg.n_bar),
        "holevo_se_bits": holevo_raw(ch.tau, ch.nu, cfg.n_bar),
        "total_length_km": cfg.total_length_km,
        "attenuation_db": attenuation_db(cfg.total_length_km, cfg.alpha_per_km),
        "node_margins": margins,
        "feasible": feasible,
    }


def format_float(v):
    return f"{v:.9g}"


def format_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def write_csv(rows, columns, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])


def write_json(rows, columns, fh):
    out = [{c: row.get(c) for c in columns} for row in rows]
    json.dump(out, fh, indent=2)
    fh.write("\n")


# scenario files: flat dotted keys, '#' comments, values parsed per key

_SCENARIO_KEYS = {
    "alpha_per_km": ("alpha_per_km", float),
    "n_bar": ("n_bar", float),
    "seed": ("seed", int),
    "sweep.l_min_km": ("l_min_km", float),
    "sweep.l_max_km": ("l_max_km", float),
    "sweep.l_step_km": ("l_step_km", float),
    "sweep.node_counts": ("node_counts", "int_list"),
    "sweep.criteria": ("criteria", "criteria"),
    "sweep.loss_only": ("include_loss_only", "bool"),
    "sweep.distributed": ("include_distributed", "bool"),
    "optimizer.starts": ("starts", int),
    "optimizer.budget_factor": ("budget_factor", int),
}


def _parse_bool(raw, key):
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise UsageError(f"scenario key {key}: expected a boolean, got {raw!r}")


def parse_criteria(raw):
    low = raw.strip().lower()
    if low == "both":
        return ("shannon", "holevo")
    names = tuple(part.strip().lower() for part in low.split(",") if part.strip())
    if not names:
        raise UsageError(f"no criteria in {raw!r}")
    for n in names:
        if n not in ("shannon", "holevo"):
            raise UsageError(f"unknown criterion {n!r}")
    return names


def parse_scenario(path):
    """Read a scenario file into SweepSpec keyword overrides."""
    overrides = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in text.split("=", 1))
            if key not in _SCENARIO_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            field_name, kind = _SCENARIO_KEYS[key]
            try:
                if kind == "bool":
                    value = _parse_bool(raw, key)
                elif kind == "int_list":
                    value = tuple(int(part) for part in raw.split(",") if part.strip())
                elif kind == "criteria":
                    value = parse_criteria(raw)
                else:
                    value = kind(raw)
            except UsageError:
                raise
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from exc
            overrides[field_name] = value
    return overrides


def build_spec(scenario_overrides=None, **flag_overrides):
    kwargs = {}
    if scenario_overrides:
        kwargs.update(scenario_overrides)
    kwargs.update({k: v for k, v in flag_overrides.items() if v is not None})
    try:
        spec = SweepSpec(**kwargs)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    spec.validate()
    return spec
