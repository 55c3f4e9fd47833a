"""Renderer tests against CSVs shaped like the linkcap CLI output."""

import csv
import math

import numpy as np
import pytest

from linkfigs import FigureError, FigureSpec, render

SWEEP_COLUMNS = [
    "criterion",
    "n_nodes",
    "length_km",
    "se_bits",
    "tail_span_km",
    "converged",
    "evaluations",
]

NODE_COUNTS = (2, 4, 8, 16, 64)
LENGTHS = [float(l) for l in range(0, 1001, 100)]


def _sweep_se(criterion, n, length):
    # plausible stand-in values: decreasing in length, increasing in n,
    # holevo above shannon
    base = 6.658 if criterion == "shannon" else 8.094
    rate = 550.0 + 40.0 * math.log2(max(n, 1))
    return (base + 0.15 * math.log2(max(n, 1))) * math.exp(-length / rate)


def make_sweep_csv(path, node_counts=NODE_COUNTS, lengths=LENGTHS):
    """Sweep CSV with the same structure the full default scenario emits:
    both criteria for each node count plus loss-only and distributed."""
    rows = []
    for criterion in ("holevo", "shannon"):
        for n in (-1, 0, *node_counts):
            for length in lengths:
                if n == -1:
                    se = _sweep_se(criterion, 128, length)
                    tail = min(14.0, length)
                elif n == 0:
                    se = _sweep_se(criterion, 1, length) * 0.9
                    tail = length
                else:
                    se = _sweep_se(criterion, n, length)
                    tail = min(20.0, length)
                rows.append(
                    {
                        "criterion": criterion,
                        "n_nodes": n,
                        "length_km": f"{length:.9g}",
                        "se_bits": f"{se:.9g}",
                        "tail_span_km": f"{tail:.9g}",
                        "converged": "true",
                        "evaluations": "100",
                    }
                )
    rows.sort(key=lambda r: (r["criterion"], int(r["n_nodes"]), float(r["length_km"])))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return path


def make_locations_csv(path, n=16, lengths=LENGTHS):
    columns = ["length_km"] + [f"pos_{i}" for i in range(1, n + 1)] + [
        "distributed_termination_km"
    ]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for length in lengths:
            row = [f"{length:.9g}"]
            if length < 150.0:  # loss-only regime: absent positions
                row += [""] * n
            else:
                tail = min(0.08 * length, 75.0)
                row += [f"{i * (length - tail) / n:.9g}" for i in range(1, n + 1)]
            row.append(f"{max(length - 14.0, 0.0):.9g}")
            writer.writerow(row)
    return path


@pytest.fixture
def sweep_csv(tmp_path):
    return make_sweep_csv(tmp_path / "sweep.csv")


@pytest.fixture
def locations_csv(tmp_path):
    return make_locations_csv(tmp_path / "locations.csv")


def _column(path, column, where=None):
    with open(path, newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if where is None or where(r)]
    return np.array([float(r[column]) if r[column] != "" else np.nan for r in rows])


def test_fig2a_series_count_and_file(sweep_csv, tmp_path):
    out = tmp_path / "fig2a.png"
    result = render(FigureSpec(str(sweep_csv), "fig2a", str(out)))
    # 2 criteria x 5 node counts + loss-only + distributed
    assert len(result.series) == 12
    assert len(result.figure.axes[0].get_lines()) == 12
    assert out.exists() and out.stat().st_size > 0


def test_fig2a_series_equal_csv_columns(sweep_csv):
    result = render(FigureSpec(str(sweep_csv), "fig2a"))
    for n in NODE_COUNTS:
        for criterion, label in (("shannon", f"N={n} Shannon"),
                                 ("holevo", f"N={n} Holevo")):
            x, y = result.series[label]
            want = _column(
                sweep_csv,
                "se_bits",
                lambda r, c=criterion, m=n: r["criterion"] == c
                and int(r["n_nodes"]) == m,
            )
            assert np.array_equal(y, want), label
            assert np.array_equal(x, np.array(LENGTHS))
    for label, n in (("loss only", 0), ("distributed", -1)):
        _, y = result.series[label]
        want = _column(
            sweep_csv,
            "se_bits",
            lambda r, m=n: r["criterion"] == "holevo" and int(r["n_nodes"]) == m,
        )
        assert np.array_equal(y, want), label


def test_fig2a_lines_carry_same_arrays(sweep_csv):
    result = render(FigureSpec(str(sweep_csv), "fig2a"))
    by_label = {ln.get_label(): ln for ln in result.figure.axes[0].get_lines()}
    for label, (x, y) in result.series.items():
        line = by_label[label]
        assert np.array_equal(np.asarray(line.get_xdata()), x)
        assert np.array_equal(np.asarray(line.get_ydata()), y)


def test_fig2a_styles(sweep_csv):
    result = render(FigureSpec(str(sweep_csv), "fig2a"))
    by_label = {ln.get_label(): ln for ln in result.figure.axes[0].get_lines()}
    assert by_label["N=2 Shannon"].get_linestyle() == "--"
    assert by_label["N=2 Holevo"].get_linestyle() == "-"
    # same node count shares a color across criteria
    assert (
        by_label["N=2 Shannon"].get_color() == by_label["N=2 Holevo"].get_color()
    )
    assert by_label["loss only"].get_color() == "black"


def test_fig2b_filters_to_closeup(sweep_csv, tmp_path):
    out = tmp_path / "fig2b.png"
    result = render(FigureSpec(str(sweep_csv), "fig2b", str(out)))
    assert out.exists() and out.stat().st_size > 0
    x, y = result.series["N=2 Holevo"]
    assert x.max() <= 100.0
    want = _column(
        sweep_csv,
        "se_bits",
        lambda r: r["criterion"] == "holevo"
        and int(r["n_nodes"]) == 2
        and float(r["length_km"]) <= 100.0,
    )
    assert np.array_equal(y, want)


def test_render_is_pure_in_csv_content(sweep_csv):
    a = render(FigureSpec(str(sweep_csv), "fig2a"))
    b = render(FigureSpec(str(sweep_csv), "fig2a"))
    assert a.series.keys() == b.series.keys()
    for label in a.series:
        assert np.array_equal(a.series[label][0], b.series[label][0])
        assert np.array_equal(a.series[label][1], b.series[label][1])


def test_fig3_positions_and_guides(locations_csv, tmp_path):
    out = tmp_path / "fig3.png"
    result = render(FigureSpec(str(locations_csv), "fig3", str(out)))
    assert out.exists() and out.stat().st_size > 0
    # 16 position curves + termination + diagonal guide
    assert len(result.figure.axes[0].get_lines()) == 18
    for i in range(1, 17):
        x, y = result.series[f"pos_{i}"]
        want = _column(locations_csv, f"pos_{i}")
        assert np.array_equal(y, want, equal_nan=True)
        assert np.array_equal(x, np.array(LENGTHS))
    term = result.series["distributed_termination_km"][1]
    assert np.array_equal(term, _column(locations_csv, "distributed_termination_km"))


def test_fig3_absent_positions_render_as_gaps(locations_csv):
    result = render(FigureSpec(str(locations_csv), "fig3"))
    y = result.series["pos_1"][1]
    assert np.isnan(y[np.array(LENGTHS) < 150.0]).all()
    assert not np.any(y == 0.0)


def test_empty_csv_body_errors_and_writes_nothing(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(",".join(SWEEP_COLUMNS) + "\n")
    out = tmp_path / "nope.png"
    with pytest.raises(FigureError, match="no data rows"):
        render(FigureSpec(str(path), "fig2a", str(out)))
    assert not out.exists()


def test_headerless_csv_errors(tmp_path):
    path = tmp_path / "none.csv"
    path.write_text("")
    with pytest.raises(FigureError, match="empty file"):
        render(FigureSpec(str(path), "fig2a"))


def test_missing_columns_error(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("criterion,n_nodes\nholevo,2\n")
    with pytest.raises(FigureError, match="missing required columns"):
        render(FigureSpec(str(path), "fig2a"))
    with pytest.raises(FigureError, match="missing required columns"):
        render(FigureSpec(str(path), "fig3"))


def test_increasing_series_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for length, se in ((0.0, 1.0), (100.0, 2.0)):
            writer.writerow(
                {
                    "criterion": "holevo",
                    "n_nodes": 2,
                    "length_km": length,
                    "se_bits": se,
                    "tail_span_km": 0,
                    "converged": "true",
                    "evaluations": 1,
                }
            )
    with pytest.raises(FigureError, match="increases with length"):
        render(FigureSpec(str(path), "fig2a"))


def test_unknown_figure_id(sweep_csv):
    with pytest.raises(FigureError, match="unknown figure"):
        FigureSpec(str(sweep_csv), "fig9")
