from __future__ import annotations

import pytest

acceptance_results = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[acceptance_results] = []


@pytest.fixture
def record_check(request):
    return request.config.stash[acceptance_results].append


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(acceptance_results, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(results, key=lambda r: r.number):
        terminalreporter.write_line(r.line())
    passed = sum(r.passed for r in results)
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
