"""Tests for run reports."""

import json

from semimatch import __version__
from semimatch.reports import RunReport


class TestRunReport:
    """Test cases for RunReport."""

    def test_empty_report_is_ok(self):
        """Test a report without checks succeeds."""
        assert RunReport(command="verify worked-examples").ok

    def test_failed_check(self):
        """Test one failing check fails the report."""
        report = RunReport(command="match dual")
        report.add_check("inverse law", True, "0 violations")
        check = report.add_check("bijection", 0, 3)

        assert check.passed is False
        assert check.detail == "3"
        assert not report.ok

    def test_fail_records_error(self):
        """Test an exception becomes an error check."""
        report = RunReport(command="coords decode")
        report.fail(ValueError("bad map"))

        assert report.checks[-1].name == "error"
        assert report.checks[-1].detail == "ValueError: bad map"
        assert not report.ok

    def test_json_envelope(self):
        """Test the JSON form carries metadata, the report and the verdict."""
        report = RunReport(command="census t3-unique", inputs={"n": 3})
        report.results["total"] = 27
        report.add_check("unique strong inverse", True)

        data = json.loads(report.to_json())

        assert data["ok"] is True
        assert data["metadata"]["version"] == __version__
        assert data["report"]["results"] == {"total": 27}
        assert data["report"]["checks"] == [
            {"name": "unique strong inverse", "passed": True, "detail": ""}
        ]

    def test_json_is_canonical(self):
        """Test two runs differ only in their metadata."""
        report = RunReport(command="match natural", results={"b": 1, "a": [2, 3]})

        first = json.loads(report.to_json())
        second = json.loads(report.to_json())
        first.pop("metadata")
        second.pop("metadata")

        assert first == second
        assert report.to_json().index('"metadata"') < report.to_json().index('"ok"')

    def test_text_form(self):
        """Test the text form lists results and marks checks."""
        report = RunReport(command="esolid", results={"order": 5})
        report.add_check("oracle agreement", True)
        report.add_check("involution matching", False, "none")

        text = report.to_text()

        assert text.splitlines()[0] == "esolid: FAILED"
        assert "  order: 5" in text
        assert "  [PASS] oracle agreement" in text
        assert "  [FAIL] involution matching (none)" in text
