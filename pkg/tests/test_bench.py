"""Benchmark suites and report serialization."""

from __future__ import annotations

import csv
import io
import json

import pytest

from qubodet import (
    BenchEntry,
    BenchmarkReport,
    DetectorConfig,
    GaussianSpec,
    METHODS,
    ProblemTooLargeError,
    SaConfig,
    run_csv_suite,
    run_gaussian_suite,
    save_csv,
)


def _report_fixture():
    """Hand-built two-scenario report with known means."""
    entries = (
        BenchEntry("a", "qubo", 0, 0.8, 0.1, {}),
        BenchEntry("a", "qubo", 1, 0.6, 0.1, {}),
        BenchEntry("a", "knn-dist", 0, 1.0, 0.1, {}),
        BenchEntry("b", "qubo", 0, 0.5, 0.1, {}),
    )
    return BenchmarkReport(scenario="toy", entries=entries, seeds=(0, 1))


def _exact_config():
    return DetectorConfig(alpha=0.5, k=1, solver="exact")


def _cells(report):
    return [(e.scenario, e.method, e.seed, e.auc) for e in report.entries]


# ---------------------------------------------------------------------------
# report arithmetic and serialization

class TestBenchmarkReport:
    def test_mean_auc_groups_by_scenario_and_method(self):
        report = _report_fixture()
        assert report.mean_auc() == [
            ("a", "qubo", pytest.approx(0.7)),
            ("a", "knn-dist", 1.0),
            ("b", "qubo", 0.5),
        ]

    def test_to_dict_round_trips_through_json(self):
        report = _report_fixture()
        payload = json.loads(json.dumps(report.to_dict()))
        assert payload["scenario"] == "toy"
        assert payload["seeds"] == [0, 1]
        assert len(payload["entries"]) == 4
        assert payload["summary"][0] == {
            "scenario": "a",
            "method": "qubo",
            "mean_auc": pytest.approx(0.7),
        }

    def test_to_csv_parses_back_row_per_entry(self):
        report = _report_fixture()
        rows = list(csv.reader(io.StringIO(report.to_csv())))
        assert rows[0] == ["scenario", "method", "seed", "auc", "wall_time", "params"]
        assert len(rows) == 1 + len(report.entries)
        assert rows[1][:3] == ["a", "qubo", "0"]
        assert float(rows[1][3]) == 0.8
        assert json.loads(rows[1][5]) == {}

    def test_to_svg_carries_labelled_bars(self):
        svg = _report_fixture().to_svg()
        assert svg.startswith("<svg")
        assert svg.rstrip().endswith("</svg>")
        assert ">qubo 0.7000</text>" in svg
        assert ">knn-dist 1.0000</text>" in svg
        assert svg.count("<rect") == 3

    def test_to_svg_escapes_markup(self):
        entries = (BenchEntry("a<b", "qubo", 0, 0.5, 0.1, {}),)
        svg = BenchmarkReport("x", entries, (0,)).to_svg()
        assert "a&lt;b" in svg
        assert "a<b" not in svg


# ---------------------------------------------------------------------------
# gaussian suite

class TestGaussianSuite:
    SPEC = GaussianSpec(
        n_inliers=13, n_outliers=2, dims=2, sigma=1.0, outlier_shift=6.0, seed=0
    )

    def test_single_cell(self):
        report = run_gaussian_suite(
            sigmas=[1.0],
            spec_template=self.SPEC,
            methods=["mahalanobis-topk"],
            seeds=[3],
        )
        assert len(report.entries) == 1
        entry = report.entries[0]
        assert entry.scenario == "gaussian sigma=1"
        assert entry.method == "mahalanobis-topk"
        assert entry.seed == 3
        assert entry.auc == 1.0  # outliers 6 sigma out are unmissable
        assert entry.wall_time >= 0.0
        assert entry.params["k"] == 2

    def test_full_grid_shape_and_params(self):
        report = run_gaussian_suite(
            sigmas=[0.5, 1.0],
            spec_template=self.SPEC,
            methods=list(METHODS),
            seeds=[0, 1, 2],
            config=_exact_config(),
        )
        assert len(report.entries) == 2 * 3 * 4
        assert report.seeds == (0, 1, 2)
        scenarios = {e.scenario for e in report.entries}
        assert scenarios == {"gaussian sigma=0.5", "gaussian sigma=1"}
        for entry in report.entries:
            assert 0.0 <= entry.auc <= 1.0
            if entry.method == "qubo":
                assert entry.params["solver"] == "exact"
                assert entry.params["k"] == 2
            if entry.method == "qubo-fitted":
                assert entry.params["grid_points"] == 21

    def test_deterministic_aucs(self):
        kwargs = dict(
            sigmas=[1.0],
            spec_template=self.SPEC,
            methods=["qubo", "knn-dist"],
            seeds=[7],
            config=DetectorConfig(alpha=0.5, k=1, sa=SaConfig(seed=9)),
        )
        first = run_gaussian_suite(**kwargs)
        second = run_gaussian_suite(**kwargs)
        assert _cells(first) == _cells(second)

    def test_separated_outliers_are_found_by_fit(self):
        report = run_gaussian_suite(
            sigmas=[1.0],
            spec_template=self.SPEC,
            methods=["qubo-fitted"],
            seeds=[0],
            config=_exact_config(),
        )
        assert report.entries[0].auc == 1.0

    def test_input_validation(self):
        with pytest.raises(ValueError, match="non-empty"):
            run_gaussian_suite([], self.SPEC, ["qubo"], [0])
        with pytest.raises(ValueError, match="non-empty"):
            run_gaussian_suite([1.0], self.SPEC, ["qubo"], [])
        with pytest.raises(ValueError, match="unknown method"):
            run_gaussian_suite([1.0], self.SPEC, ["isolation-forest"], [0])


# ---------------------------------------------------------------------------
# csv suite

class TestCsvSuite:
    def test_smoke_over_labeled_file(self, tmp_path, small_labeled):
        path = tmp_path / "points.csv"
        save_csv(small_labeled, path, label_column="label")
        report = run_csv_suite(
            files=[(str(path), "label")],
            methods=["qubo", "mahalanobis-topk", "knn-dist"],
            config=_exact_config(),
        )
        assert len(report.entries) == 3
        assert {e.scenario for e in report.entries} == {str(path)}
        by_method = {e.method: e.auc for e in report.entries}
        assert by_method["mahalanobis-topk"] == 1.0

    def test_missing_label_column_rejected(self, tmp_path, small_labeled):
        path = tmp_path / "points.csv"
        save_csv(small_labeled, path, label_column="label")
        with pytest.raises(ValueError, match="label column is required"):
            run_csv_suite(files=[(str(path), "")], methods=["qubo"])

    def test_single_class_file_rejected(self, tmp_path):
        path = tmp_path / "flat.csv"
        path.write_text(
            "x0,x1,label\n" + "".join(f"{i}.0,{i}.0,0\n" for i in range(5))
        )
        with pytest.raises(ValueError, match="both classes"):
            run_csv_suite(files=[(str(path), "label")], methods=["qubo"])

    def test_exact_solver_rejects_wide_file(self, tmp_path):
        path = tmp_path / "big.csv"
        rows = "".join(f"{i}.0,{i % 2}.0,{int(i >= 28)}\n" for i in range(30))
        path.write_text("x0,x1,label\n" + rows)
        with pytest.raises(ProblemTooLargeError, match="24"):
            run_csv_suite(
                files=[(str(path), "label")],
                methods=["qubo"],
                config=_exact_config(),
            )

    def test_input_validation(self):
        with pytest.raises(ValueError, match="non-empty"):
            run_csv_suite(files=[], methods=["qubo"])
        with pytest.raises(ValueError, match="unknown method"):
            run_csv_suite(files=[("x.csv", "label")], methods=["lof"])
