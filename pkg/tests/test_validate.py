"""Validation-suite wiring tests: report structure and pass/fail logic.
The full-size suites run in the acceptance tests; here they run shrunk."""

import json

from polynomiogram.validate import (
    SUITES,
    Check,
    SuiteReport,
    cubic_suite,
    kac_suite,
    lucas_suite,
)


class TestReport:
    def test_pass_fail_aggregation(self):
        r = SuiteReport("demo")
        r.add("a", 1.0, "<= 2", True)
        assert r.passed
        r.add("b", 3.0, "<= 2", False)
        assert not r.passed

    def test_lines_format(self):
        r = SuiteReport("demo", [Check("a", 0.5, "<= 1", True)])
        lines = r.lines()
        assert lines[0] == "suite=demo"
        assert "check=a" in lines[1] and "pass=true" in lines[1]
        assert lines[-1] == "result=pass"

    def test_json_round_trip(self):
        r = SuiteReport("demo", [Check("a", 0.5, "<= 1", True)])
        data = json.loads(r.to_json())
        assert data["suite"] == "demo"
        assert data["passed"] is True
        assert data["checks"][0]["name"] == "a"

    def test_registry(self):
        assert set(SUITES) == {"kac", "lucas", "cubic"}


class TestSuites:
    def test_lucas_small(self):
        report = lucas_suite(n=8, bits=53)
        assert report.passed
        names = {c.name for c in report.checks}
        assert any("error" in n for n in names)

    def test_lucas_high_precision_small(self):
        assert lucas_suite(n=8, bits=106).passed

    def test_cubic(self):
        assert cubic_suite().passed

    def test_kac_shrunk(self):
        report = kac_suite(degree=50, samples=2000, seed=1)
        assert report.passed
