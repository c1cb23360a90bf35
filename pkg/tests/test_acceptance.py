"""Acceptance gate: one printed PASS/FAIL line per criterion."""
import time

import pytest

from quasistar.acceptance import TITLES, run_criterion

# criterion -> (residual tolerance, runtime budget in seconds or None)
GATES = {
    1: (1e-10, 10.0),
    2: (1e-9, None),
    3: (1e-10, None),
    4: (1e-12, None),
    5: (1e-10, None),
    6: (1e-10, None),
    7: (1e-10, None),
    8: (1e-10, None),
    9: (0.0, None),
    10: (0.01, 5.0),
    11: (0.0, None),
}


@pytest.mark.parametrize("number", sorted(GATES), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, capsys):
    tol, budget = GATES[number]
    start = time.perf_counter()
    result = run_criterion(number, seed=0)
    elapsed = time.perf_counter() - start
    within_budget = budget is None or elapsed <= budget
    ok = result.passed and within_budget
    with capsys.disabled():
        timing = f", {elapsed:.2f} s" + (f" of {budget:.0f} s" if budget else "")
        print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {TITLES[number]} "
              f"(max residual {result.report.max_residual:.3e}, tol {tol:g}{timing})")
    assert result.passed, result.report.render()
    assert within_budget, f"took {elapsed:.2f} s, budget {budget} s"
