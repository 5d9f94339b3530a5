from __future__ import annotations

import pytest

from splashwave import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CHECKS))
def test_acceptance_criterion(number, record_check):
    result = acceptance.run(number)
    record_check(result)
    print(result.line())
    assert result.passed, result.detail
