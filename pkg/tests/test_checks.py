import math

import pytest

from reparam import checks
from reparam.checks import CheckResult


def test_relations():
    assert CheckResult("s", "n", 1.0, 1.0).passed
    assert not CheckResult("s", "n", 1.0, 1.0, "<").passed
    assert CheckResult("s", "n", 2.0, 1.0, ">=").passed
    assert not CheckResult("s", "n", math.nan, 1.0).passed
    assert not CheckResult("s", "n", math.inf, 1.0, ">=").passed


def test_serialization():
    r = CheckResult("weights", "x", 2e-3, 1e-3)
    d = r.to_dict()
    assert d["verdict"] == "fail" and {"suite", "max_dev", "tolerance"} <= set(d)
    assert r.line().startswith("FAIL  weights.x: 2.000e-03 <= 1.0e-03")


def test_slowdown_crossover():
    assert checks.slowdown_crossover(0.5) == pytest.approx(4.0)


def test_run_all_passes():
    results = checks.run_all()
    failed = [r.line() for r in results if not r.passed]
    assert not failed
    assert {r.suite for r in results} == set(checks.SUITES)
    assert len({(r.suite, r.name) for r in results}) == len(results)
