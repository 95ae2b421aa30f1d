"""End-to-end acceptance checks at the full profile.

Each check prints a PASS/FAIL line; the lines are repeated together at the
end of the session by the terminal summary hook in ``conftest.py``.
"""
from __future__ import annotations

import json

import pytest

from cantormarkov.acceptance import CRITERIA, run_criterion

LINES: list[str] = []


@pytest.mark.parametrize("cid", sorted(CRITERIA), ids=lambda c: f"criterion_{c:02d}")
def test_criterion(cid):
    res = run_criterion(cid, "full")
    line = res.line()
    LINES.append(line)
    print(line)
    assert res.passed, json.dumps(res.detail, default=str)[:2000]
