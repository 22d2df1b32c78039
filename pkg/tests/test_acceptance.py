"""Acceptance criteria 1-10, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the same lines are
repeated in the terminal summary so they show up without ``-s``.
"""
import pytest

from laxjac.selftest import CHECKS

RESULTS = {}


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{c.number:02d}_{c.check_name.replace(' ', '_')}"
                                               for c in CHECKS])
def test_criterion(check):
    result = check(seed=0)
    RESULTS[result.number] = result
    print(result.line())
    assert result.passed, result.detail
