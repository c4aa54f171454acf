"""Report rendering and the check runner."""

import json

from linctx.report import (
    CheckReport,
    GenBounds,
    all_passed,
    render_structured,
    render_text,
    run_check,
    run_checks,
)


def _passing(n):
    return n, None


def _failing(n):
    return n, "broken"


class TestRunner:
    def test_run_check_timing_and_verdict(self):
        report = run_check("x", lambda: (7, None))
        assert report.passed and report.cases == 7 and report.elapsed_ms >= 0

    def test_canonical_order(self):
        checks = [("b", _passing, (1,)), ("a", _failing, (2,))]
        reports = run_checks(checks)
        assert [r.name for r in reports] == ["a", "b"]
        assert not all_passed(reports)

    def test_jobs_do_not_change_results(self):
        checks = [("a", _passing, (1,)), ("b", _passing, (2,)), ("c", _failing, (3,))]
        sequential = run_checks(checks, jobs=1)
        parallel = run_checks(checks, jobs=2)
        strip = lambda rs: [(r.name, r.cases, r.verdict, r.counterexample) for r in rs]
        assert strip(sequential) == strip(parallel)


class TestRendering:
    def test_text(self):
        reports = [
            CheckReport("a", 3, "pass", None, 1.0),
            CheckReport("b", 1, "fail", "bad case", 2.0),
        ]
        text = render_text(reports)
        assert "PASS a (cases=3)" in text
        assert "FAIL b" in text and "bad case" in text

    def test_structured_is_reproducible_without_timings(self):
        reports = [CheckReport("a", 3, "pass", None, 17.0)]
        out = render_structured(reports)
        record = json.loads(out)
        assert record["elapsed_ms"] is None
        assert record == {
            "name": "a",
            "cases": 3,
            "verdict": "pass",
            "counterexample": None,
            "elapsed_ms": None,
        }

    def test_structured_with_timings(self):
        reports = [CheckReport("a", 3, "pass", None, 17.001)]
        record = json.loads(render_structured(reports, timings=True))
        assert record["elapsed_ms"] == 17.001


class TestBounds:
    def test_defaults(self):
        b = GenBounds()
        assert b.ctx_elems == 3 and b.union_depth == 2 and b.type_depth == 2
        assert b.base_types == ("i", "o")
