"""
Report storage
Deterministic JSON suite reports and per-sample margin CSV files under one directory
"""

import csv
import json
import platform
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import structlog

from ..models.shared import MarginReport, SuiteResult

PACKAGE_NAME = "carleman-lab"
TRACKED_PACKAGES = ("numpy", "scipy", "pydantic")


def _version(package: str) -> str:
    try:
        return metadata.version(package)
    except metadata.PackageNotFoundError:
        return "unknown"


def library_versions() -> Dict[str, str]:
    versions = {name: _version(name) for name in TRACKED_PACKAGES}
    versions["python"] = platform.python_version()
    versions[PACKAGE_NAME] = _version(PACKAGE_NAME)
    return versions


def check_record(report: MarginReport) -> Dict[str, Any]:
    """JSON record of one check"""
    return {
        "name": report.check_name,
        "min_margin": report.min_margin,
        "argmin": report.argmin_location,
        "empirical_constant": report.empirical_constant,
        "pass": report.passed,
        "tolerance": report.tolerance,
        "sample_count": report.sample_count,
        "details": report.details,
    }


def suite_record(result: SuiteResult) -> Dict[str, Any]:
    return {
        "suite": result.suite,
        "params": result.params,
        "checks": [check_record(report) for report in result.checks],
        "versions": library_versions(),
        "seed": result.seed,
        "passed": result.passed,
    }


class ReportStorage:
    """
    File storage for suite reports
    - <suite>.json per suite, sorted keys and fixed indentation
    - <suite>_margins.csv with every pointwise margin a check traced
    - report_all.json aggregating several suites
    """

    def __init__(self, base_path: Optional[Union[str, Path]] = None):
        self.logger = structlog.get_logger(__name__)
        self.base_path = Path(base_path) if base_path else Path("reports")
        self.base_path.mkdir(parents=True, exist_ok=True)

    def _write_json(self, path: Path, data: Any) -> Path:
        # infinite margins are kept as the non-standard Infinity literal
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    def write_suite(self, result: SuiteResult) -> Path:
        path = self._write_json(self.base_path / f"{result.suite}.json", suite_record(result))
        self.logger.debug("suite_report_written", suite=result.suite, path=str(path))
        return path

    def write_margins_csv(self, result: SuiteResult) -> Optional[Path]:
        """Write traced margins; returns None when no check carries a trace"""
        traced = [report for report in result.checks if report.trace is not None]
        if not traced:
            return None

        width = max(report.trace.locations.shape[1] for report in traced)  # type: ignore[union-attr]
        header = [f"x{i + 1}" for i in range(width - 1)] + ["t", "check", "margin"]
        path = self.base_path / f"{result.suite}_margins.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for report in traced:
                trace = report.trace
                for location, margin in zip(trace.locations, trace.margins):  # type: ignore[union-attr]
                    padded = [""] * (width - location.size) + [repr(float(v)) for v in location]
                    writer.writerow(padded + [report.check_name, repr(float(margin))])
        self.logger.debug("margins_written", suite=result.suite, checks=len(traced), path=str(path))
        return path

    def write_all(self, results: Sequence[SuiteResult], margins: bool = True) -> List[Path]:
        """Write every suite plus the aggregate report_all.json"""
        paths = []
        for result in results:
            paths.append(self.write_suite(result))
            if margins:
                csv_path = self.write_margins_csv(result)
                if csv_path is not None:
                    paths.append(csv_path)
        aggregate = {
            "suites": [suite_record(result) for result in results],
            "passed": all(result.passed for result in results),
            "versions": library_versions(),
        }
        paths.append(self._write_json(self.base_path / "report_all.json", aggregate))
        self.logger.info("reports_written", suites=len(results), directory=str(self.base_path))
        return paths

    def read_suite(self, suite: str) -> Dict[str, Any]:
        with open(self.base_path / f"{suite}.json", "r", encoding="utf-8") as f:
            return json.load(f)
