"""The thirteen acceptance criteria, one test each.

Every test prints a "[PASS] NN. title" or "[FAIL] NN. title" line that is
visible even under captured output.
"""

import pytest

from norma.suite import CRITERIA, SuiteContext, run_criterion


@pytest.fixture(scope="module")
def ctx():
    # shared so the expensive norm algebras are built once
    return SuiteContext(seed=0, samples=100)


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA],
                         ids=[f"criterion-{num:02d}" for num, _, _ in CRITERIA])
def test_criterion(number, ctx, capsys):
    result = run_criterion(number, ctx)
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, result.error
