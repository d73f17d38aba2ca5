"""
Storage package
File persistence of suite reports
"""

from .report_storage import ReportStorage, check_record, library_versions, suite_record

__all__ = ["ReportStorage", "check_record", "library_versions", "suite_record"]
