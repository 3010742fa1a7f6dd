import json

import numpy as np
import pytest

from sparsekm.dataio import (
    read_fd_csv,
    read_labels,
    read_mv_csv,
    support_intervals,
    write_fd_csv,
    write_gap_curve,
    write_labels,
    write_mv_csv,
    write_summary,
    write_weight_function,
    write_weight_vector,
)
from sparsekm.datatypes import (
    Dataset,
    FunctionalDataset,
    Partition,
    WeightFunction,
    WeightVector,
    trapezoid_weights,
)
from sparsekm.errors import EmptyData, ValidationError
from sparsekm.tuning import GapCurve


class TestMvRoundTrip:
    def test_values_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        vals = rng.normal(size=(12, 5)) * 10.0 ** rng.integers(-8, 9, size=(12, 5))
        path = tmp_path / "data.csv"
        write_mv_csv(path, Dataset(vals))
        back, truth = read_mv_csv(path)
        assert truth is None
        assert np.array_equal(back.values, vals)
        assert back.feature_names == ("f1", "f2", "f3", "f4", "f5")

    def test_truth_column_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        vals = rng.normal(size=(9, 3))
        labels = Partition(np.array([1, 1, 2, 3, 2, 1, 3, 3, 2], dtype=np.int64), 3)
        path = tmp_path / "data.csv"
        write_mv_csv(path, Dataset(vals), truth=labels)
        back, truth = read_mv_csv(path, truth_col="label")
        assert np.array_equal(back.values, vals)
        assert truth == labels

    def test_truth_column_by_index(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("1.5,2.5,1\n0.5,3.5,2\n")
        back, truth = read_mv_csv(path, truth_col="2")
        assert back.values.tolist() == [[1.5, 2.5], [0.5, 3.5]]
        assert truth.labels.tolist() == [1, 2]

    def test_headerless_file(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("1.0,2.0\n3.0,4.0\n")
        back, _ = read_mv_csv(path)
        assert back.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]
        assert back.feature_names is None

    def test_name_without_header_rejected(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("1.0,2.0\n")
        with pytest.raises(ValidationError, match="no header"):
            read_mv_csv(path, truth_col="label")

    def test_non_integer_truth_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,label\n1.0,1.5\n")
        with pytest.raises(ValidationError, match="non-integer"):
            read_mv_csv(path, truth_col="label")


class TestParseErrors:
    def test_ragged_row_named(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1.0,2.0\n3.0\n")
        with pytest.raises(ValidationError, match="row 2 has 1 fields"):
            read_mv_csv(path)

    def test_bad_cell_named_by_row_and_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n4,5,oops\n")
        with pytest.raises(ValidationError, match=r"\(2, 3\)"):
            read_mv_csv(path)

    def test_missing_file_names_path(self, tmp_path):
        path = tmp_path / "nope.csv"
        with pytest.raises(ValidationError, match="nope.csv"):
            read_mv_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(EmptyData):
            read_mv_csv(path)

    def test_header_only_file(self, tmp_path):
        path = tmp_path / "hdr.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(EmptyData):
            read_mv_csv(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "gaps.csv"
        path.write_text("1.0,2.0\n\n3.0,4.0\n\n")
        back, _ = read_mv_csv(path)
        assert back.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]


class TestFdRoundTrip:
    def test_exact(self, tmp_path):
        rng = np.random.default_rng(2)
        grid = np.sort(rng.uniform(0.0, 1.0, 30))
        grid[0], grid[-1] = 0.0, 1.0
        fd = FunctionalDataset(grid, rng.normal(size=(7, 30)))
        path = tmp_path / "curves.csv"
        write_fd_csv(path, fd)
        back = read_fd_csv(path)
        assert np.array_equal(back.grid, fd.grid)
        assert np.array_equal(back.values, fd.values)
        assert np.array_equal(back.quad_weights, fd.quad_weights)

    def test_grid_row_required(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("0.0,0.5,1.0\n")
        with pytest.raises(EmptyData):
            read_fd_csv(path)


class TestLabels:
    def test_round_trip(self, tmp_path):
        part = Partition(np.array([1, 2, 2, 3, 1], dtype=np.int64), 3)
        path = tmp_path / "labels.csv"
        write_labels(path, part)
        assert read_labels(path) == part

    def test_non_integer_rejected(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("1\n2.5\n")
        with pytest.raises(ValidationError, match="row 2"):
            read_labels(path)

    def test_multi_field_row_rejected(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("1,2\n")
        with pytest.raises(ValidationError):
            read_labels(path)


class TestSupportIntervals:
    def test_two_runs(self):
        grid = np.linspace(0.0, 1.0, 6)
        qw = trapezoid_weights(grid)
        mask = np.array([False, True, True, False, True, False])
        c = 1.0 / np.sqrt(float(qw[mask].sum()))
        wf = WeightFunction(grid, np.where(mask, c, 0.0), 0.3, qw)
        assert support_intervals(wf) == [(0.2, 0.4), (0.8, 0.8)]

    def test_full_support_single_interval(self):
        grid = np.linspace(0.0, 1.0, 6)
        qw = trapezoid_weights(grid)
        wf = WeightFunction(grid, np.ones(6), 0.1, qw)
        assert support_intervals(wf) == [(0.0, 1.0)]

    def test_support_reaching_right_edge(self):
        grid = np.linspace(0.0, 1.0, 6)
        qw = trapezoid_weights(grid)
        mask = np.array([False, False, False, True, True, True])
        c = 1.0 / np.sqrt(float(qw[mask].sum()))
        wf = WeightFunction(grid, np.where(mask, c, 0.0), 0.35, qw)
        assert support_intervals(wf) == [(float(grid[3]), 1.0)]


class TestWriters:
    def test_weight_vector_round_trip(self, tmp_path):
        w = np.array([0.6, 0.8, 0.0])
        path = tmp_path / "w.csv"
        write_weight_vector(path, WeightVector(w, m=1))
        assert np.array_equal(np.loadtxt(path), w)

    def test_weight_function_round_trip(self, tmp_path):
        grid = np.linspace(0.0, 1.0, 5)
        qw = trapezoid_weights(grid)
        mask = np.array([False, True, True, True, False])
        c = 1.0 / np.sqrt(float(qw[mask].sum()))
        wf = WeightFunction(grid, np.where(mask, c, 0.0), 0.25, qw)
        path = tmp_path / "wf.csv"
        write_weight_function(path, wf)
        table = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(table[:, 0], grid)
        assert np.array_equal(table[:, 1], wf.w)

    def test_gap_curve_round_trip(self, tmp_path):
        curve = GapCurve(
            np.array([1.0, 2.0]),
            np.array([0.25, np.nan]),
            np.array([3.0, np.nan]),
            np.array([2.75, np.nan]),
            np.array([0.1, np.nan]),
            np.array([False, True]),
            4,
        )
        path = tmp_path / "gap.csv"
        write_gap_curve(path, curve)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "m,gap,obs_log_obj,perm_log_obj_mean,perm_log_obj_sd"
        assert len(lines) == 3
        first = lines[1].split(",")
        assert float(first[0]) == 1.0
        assert float(first[1]) == 0.25


class TestWriteSummary:
    def test_schema_stamp_and_nan_to_null(self, tmp_path):
        path = tmp_path / "summary.json"
        write_summary(
            path,
            {
                "score": np.float64(np.nan),
                "count": np.int64(3),
                "trace": np.array([1.5, np.nan]),
                "ok": np.bool_(True),
                "name": "run",
            },
        )
        text = path.read_text()
        assert text.endswith("\n")
        assert "NaN" not in text
        doc = json.loads(text)
        assert doc["schema"] == 1
        assert doc["score"] is None
        assert doc["count"] == 3
        assert doc["trace"] == [1.5, None]
        assert doc["ok"] is True
        assert doc["name"] == "run"
