"""Sweep table construction, scenario parsing, output formatting."""

import io
import json

import pytest

from linkcap.sweep import (
    SWEEP_COLUMNS,
    SweepSpec,
    UsageError,
    build_spec,
    format_value,
    locations_columns,
    parse_criteria,
    parse_scenario,
    run_locations,
    run_single,
    run_sweep,
    write_csv,
    write_json,
)

FAST = {"starts": 4, "budget_factor": 120}


def _csv_text(rows, columns):
    buf = io.StringIO()
    write_csv(rows, columns, buf)
    return buf.getvalue()


def test_zero_length_loss_only_rows():
    spec = SweepSpec(
        l_min_km=0.0,
        l_max_km=0.0,
        l_step_km=5.0,
        node_counts=(),
        include_loss_only=True,
        criteria=("shannon", "holevo"),
    )
    rows = run_sweep(spec)
    assert len(rows) == 2
    by_crit = {r["criterion"]: r for r in rows}
    assert by_crit["holevo"]["se_bits"] == pytest.approx(8.0937407804587989, abs=1e-7)
    assert by_crit["shannon"]["se_bits"] == pytest.approx(6.6582114827517947, abs=1e-7)
    gap = by_crit["holevo"]["se_bits"] - by_crit["shannon"]["se_bits"]
    assert gap == pytest.approx(1.4355, abs=1e-3)


def test_rows_sorted_and_schema_complete():
    spec = SweepSpec(
        l_min_km=0.0,
        l_max_km=30.0,
        l_step_km=15.0,
        node_counts=(2, 1),
        criteria=("holevo", "shannon"),
        include_loss_only=True,
        include_distributed=True,
        **FAST,
    )
    rows = run_sweep(spec)
    keys = [(r["criterion"], r["n_nodes"], r["length_km"]) for r in rows]
    assert keys == sorted(keys)
    assert {r["n_nodes"] for r in rows} == {-1, 0, 1, 2}
    for r in rows:
        assert set(SWEEP_COLUMNS) <= set(r)


def test_se_non_increasing_in_length():
    spec = SweepSpec(
        l_min_km=0.0,
        l_max_km=100.0,
        l_step_km=5.0,
        node_counts=(2,),
        criteria=("holevo",),
        **FAST,
    )
    rows = run_sweep(spec)
    ses = [r["se_bits"] for r in rows]
    assert all(a >= b - 1e-9 for a, b in zip(ses, ses[1:]))


def test_jobs_match_sequential():
    spec = SweepSpec(
        l_min_km=10.0,
        l_max_km=40.0,
        l_step_km=10.0,
        node_counts=(1,),
        criteria=("holevo",),
        **FAST,
    )
    assert run_sweep(spec, jobs=1) == run_sweep(spec, jobs=3)


def test_csv_deterministic_and_formatted():
    spec = SweepSpec(
        l_min_km=0.0,
        l_max_km=20.0,
        l_step_km=10.0,
        node_counts=(1,),
        criteria=("shannon",),
        include_distributed=True,
        **FAST,
    )
    text1 = _csv_text(run_sweep(spec), SWEEP_COLUMNS)
    text2 = _csv_text(run_sweep(spec), SWEEP_COLUMNS)
    assert text1 == text2
    lines = text1.splitlines()
    assert lines[0] == "criterion,n_nodes,length_km,se_bits,tail_span_km,converged,evaluations"
    assert all(line.count(",") == 6 for line in lines)
    assert "True" not in text1 and "true" in text1


def test_format_value_rules():
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value(3) == "3"
    assert format_value(8.093740780458799) == "8.09374078"
    assert format_value(5.0) == "5"
    assert format_value("holevo") == "holevo"


def test_json_mirrors_rows():
    spec = SweepSpec(
        l_min_km=0.0,
        l_max_km=0.0,
        l_step_km=5.0,
        node_counts=(),
        include_loss_only=True,
        criteria=("holevo",),
    )
    rows = run_sweep(spec)
    buf = io.StringIO()
    write_json(rows, SWEEP_COLUMNS, buf)
    parsed = json.loads(buf.getvalue())
    assert isinstance(parsed, list)
    assert parsed[0]["criterion"] == "holevo"
    assert parsed[0]["converged"] is True
    assert set(parsed[0]) == set(SWEEP_COLUMNS)


def test_spec_validation_errors():
    with pytest.raises(UsageError):
        SweepSpec(l_min_km=10.0, l_max_km=5.0).validate()
    with pytest.raises(UsageError):
        SweepSpec(l_step_km=0.0).validate()
    with pytest.raises(UsageError):
        SweepSpec(node_counts=(), include_loss_only=False).validate()
    with pytest.raises(UsageError):
        SweepSpec(criteria=("bogus",)).validate()
    with pytest.raises(UsageError):
        SweepSpec(node_counts=(-2,)).validate()


def test_lengths_grid_inclusive():
    spec = SweepSpec(l_min_km=0.0, l_max_km=1000.0, l_step_km=5.0)
    lengths = spec.lengths()
    assert len(lengths) == 201
    assert lengths[0] == 0.0 and lengths[-1] == 1000.0


def test_parse_criteria():
    assert parse_criteria("both") == ("shannon", "holevo")
    assert parse_criteria("Holevo") == ("holevo",)
    assert parse_criteria("shannon,holevo") == ("shannon", "holevo")
    with pytest.raises(UsageError):
        parse_criteria("qkd")


def test_scenario_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        """
# comment line
alpha_per_km = 0.06
n_bar = 50        # trailing comment
seed = 7
sweep.l_min_km = 5
sweep.l_max_km = 25
sweep.l_step_km = 10
sweep.node_counts = 1,3
sweep.criteria = both
sweep.loss_only = true
sweep.distributed = false
optimizer.starts = 3
optimizer.budget_factor = 90
"""
    )
    spec = build_spec(parse_scenario(path))
    assert spec.alpha_per_km == 0.06
    assert spec.n_bar == 50.0
    assert spec.seed == 7
    assert spec.node_counts == (1, 3)
    assert spec.criteria == ("shannon", "holevo")
    assert spec.include_loss_only and not spec.include_distributed
    assert spec.starts == 3 and spec.budget_factor == 90
    # CLI flags override scenario values
    spec2 = build_spec(parse_scenario(path), n_bar=200.0)
    assert spec2.n_bar == 200.0


def test_scenario_errors(tmp_path):
    bad_key = tmp_path / "a.cfg"
    bad_key.write_text("nope = 1\n")
    with pytest.raises(UsageError, match="unknown key"):
        parse_scenario(bad_key)
    bad_val = tmp_path / "b.cfg"
    bad_val.write_text("sweep.l_min_km = abc\n")
    with pytest.raises(UsageError):
        parse_scenario(bad_val)
    bad_line = tmp_path / "c.cfg"
    bad_line.write_text("just words\n")
    with pytest.raises(UsageError, match="key = value"):
        parse_scenario(bad_line)


def test_locations_structure():
    spec = SweepSpec(
        l_min_km=20.0,
        l_max_km=60.0,
        l_step_km=20.0,
        node_counts=(3,),
        criteria=("holevo",),
        **FAST,
    )
    rows = run_locations(spec)
    assert locations_columns(3) == [
        "length_km",
        "pos_1",
        "pos_2",
        "pos_3",
        "distributed_termination_km",
    ]
    below = rows[0]
    assert below["length_km"] == 20.0
    assert below["pos_1"] is None and below["pos_3"] is None
    assert below["distributed_termination_km"] == pytest.approx(0.0, abs=1e-3)
    above = rows[-1]
    assert 0.0 < above["pos_1"] < above["pos_2"] < above["pos_3"] < 60.0
    assert above["distributed_termination_km"] > 0.0


def test_locations_requires_single_cell_choices():
    with pytest.raises(UsageError):
        run_locations(SweepSpec(node_counts=(1, 2), criteria=("holevo",)))
    with pytest.raises(UsageError):
        run_locations(SweepSpec(node_counts=(2,), criteria=("holevo", "shannon")))


def test_run_single_loss_only(tmp_path):
    doc = {"alpha_per_km": 0.05, "n_bar": 100.0, "stages": [], "tail_span_km": 20.0}
    path = tmp_path / "link.json"
    path.write_text(json.dumps(doc))
    report = run_single(path)
    assert report["tau"] == pytest.approx(0.36787944117144233, rel=1e-12)
    assert report["nu"] == 0.0
    assert report["holevo_se_bits"] == pytest.approx(6.6632891551910986, rel=1e-9)
    assert report["feasible"] is True
    assert report["node_margins"] == []


def test_run_single_gain_above_saturation(tmp_path):
    doc = {
        "alpha_per_km": 0.05,
        "n_bar": 100.0,
        "stages": [{"span_km": 20.0, "gain": 4.0}],
        "tail_span_km": 10.0,
    }
    path = tmp_path / "hot.json"
    path.write_text(json.dumps(doc))
    report = run_single(path)
    assert report["feasible"] is False
    assert report["node_margins"][0] < 0.0
