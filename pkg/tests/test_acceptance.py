"""Acceptance criteria 1-10, one test and one printed pass/fail line each.

The lines also appear in the pytest terminal summary; run this file directly
(``python3 tests/test_acceptance.py``) to get just the table.
"""

import pytest

from lcft.acceptance import CHECKS, run_check

SEED = 0
LINES: dict = {}


@pytest.mark.parametrize("number", [num for num, *_ in CHECKS], ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    result = run_check(number, SEED)
    LINES[number] = result.line()
    print(result.line())
    assert result.ok, result.detail


if __name__ == "__main__":
    import sys
    results = [run_check(num, SEED) for num, *_ in CHECKS]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.ok for r in results) else 1)
