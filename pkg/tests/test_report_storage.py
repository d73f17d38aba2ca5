"""
Unit tests for report storage
Tests the JSON suite records, the margin CSV files and the aggregate report
"""

import csv
import json

import numpy as np
import pytest

from src.models.shared import MarginReport, SuiteResult
from src.storage.report_storage import ReportStorage, check_record, library_versions, suite_record


def _traced_report(name: str, margins, n: int = 2) -> MarginReport:
    margins = np.asarray(margins, dtype=float)
    locations = np.column_stack([np.arange(margins.size * n, dtype=float).reshape(margins.size, n), np.full(margins.size, 0.5)])
    return MarginReport.from_margins(name, margins, tolerance=1e-9, locations=locations, empirical_constant=2.0)


def _suite(name: str = "check-psi", passed: bool = True) -> SuiteResult:
    second = [0.5, 0.25] if passed else [0.5, -1.0]
    return SuiteResult(
        suite=name,
        seed=11,
        params={"kappas": [1.0, 2.0]},
        checks=[
            _traced_report("psi_lower_bound", [1.0, 2.0, 3.0]),
            _traced_report("gradient_growth", second),
            MarginReport.from_margins("critical_angle", [0.01], tolerance=0.0, details={"value": 109.47}),
        ],
    )


class TestRecords:
    """Test the JSON record layout"""

    def test_check_record(self):
        """Test every check record key"""
        record = check_record(_traced_report("psi_lower_bound", [1.0, 0.5]))
        assert set(record) == {
            "name",
            "min_margin",
            "argmin",
            "empirical_constant",
            "pass",
            "tolerance",
            "sample_count",
            "details",
        }
        assert record["min_margin"] == 0.5
        assert record["argmin"] == [2.0, 3.0, 0.5]
        assert record["pass"] is True

    def test_suite_record(self):
        """Test suite record keys and verdict"""
        record = suite_record(_suite(passed=False))
        assert set(record) == {"suite", "params", "checks", "versions", "seed", "passed"}
        assert record["passed"] is False
        assert record["seed"] == 11
        assert [c["name"] for c in record["checks"]] == ["psi_lower_bound", "gradient_growth", "critical_angle"]

    def test_versions(self):
        """Test library versions are recorded"""
        versions = library_versions()
        assert {"numpy", "scipy", "pydantic", "python", "carleman-lab"} <= set(versions)
        assert versions["numpy"] == np.__version__


class TestReportStorage:
    """Test files written by ReportStorage"""

    def setup_method(self):
        self.result = _suite()

    def test_creates_directory(self, tmp_path):
        """Test the base directory is created"""
        ReportStorage(tmp_path / "a" / "b")
        assert (tmp_path / "a" / "b").is_dir()

    def test_write_suite(self, tmp_path):
        """Test the suite JSON is deterministic and readable"""
        storage = ReportStorage(tmp_path)
        path = storage.write_suite(self.result)
        assert path.name == "check-psi.json"
        first = path.read_text(encoding="utf-8")
        storage.write_suite(self.result)
        assert path.read_text(encoding="utf-8") == first
        assert storage.read_suite("check-psi")["checks"][2]["details"] == {"value": 109.47}

    def test_margins_csv(self, tmp_path):
        """Test every traced margin appears once with its location"""
        path = ReportStorage(tmp_path).write_margins_csv(self.result)
        assert path.name == "check-psi_margins.csv"
        with open(path, encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["x1", "x2", "t", "check", "margin"]
        assert len(rows) == 1 + 3 + 2
        assert rows[1][3] == "psi_lower_bound"
        assert float(rows[1][4]) == 1.0
        assert float(rows[-1][2]) == 0.5

    def test_margins_csv_pads_lower_dimensions(self, tmp_path):
        """Test rows from lower-dimensional checks are left padded"""
        result = SuiteResult(
            suite="mixed",
            checks=[_traced_report("planar", [1.0], n=2), _traced_report("spatial", [2.0], n=3)],
        )
        path = ReportStorage(tmp_path).write_margins_csv(result)
        with open(path, encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0][:4] == ["x1", "x2", "x3", "t"]
        assert rows[1][0] == ""
        assert rows[2][0] != ""

    def test_margins_csv_without_traces(self, tmp_path):
        """Test nothing is written when no check is traced"""
        result = SuiteResult(suite="cone", checks=[MarginReport.from_margins("angle", [1.0], tolerance=0.0)])
        assert ReportStorage(tmp_path).write_margins_csv(result) is None
        assert not (tmp_path / "cone_margins.csv").exists()

    def test_write_all(self, tmp_path):
        """Test the aggregate report and per-suite files"""
        results = [self.result, _suite("check-cone", passed=False)]
        paths = ReportStorage(tmp_path).write_all(results)
        names = {p.name for p in paths}
        assert {"check-psi.json", "check-cone.json", "check-psi_margins.csv", "report_all.json"} <= names

        aggregate = json.loads((tmp_path / "report_all.json").read_text(encoding="utf-8"))
        assert aggregate["passed"] is False
        assert [s["suite"] for s in aggregate["suites"]] == ["check-psi", "check-cone"]
        assert "versions" in aggregate

    def test_write_all_without_margins(self, tmp_path):
        """Test CSV files can be skipped"""
        ReportStorage(tmp_path).write_all([self.result], margins=False)
        assert not list(tmp_path.glob("*.csv"))

    def test_infinite_margin(self, tmp_path):
        """Test an unbounded margin survives the JSON round trip"""
        result = SuiteResult(
            suite="inf", checks=[MarginReport.from_margins("overflow", [np.inf], tolerance=0.0)]
        )
        storage = ReportStorage(tmp_path)
        storage.write_suite(result)
        assert storage.read_suite("inf")["checks"][0]["min_margin"] == pytest.approx(float("inf"))
