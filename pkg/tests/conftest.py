"""Collects the outcome of every ``criterion``-marked test for the summary."""

import pytest

_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        notes = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        _RESULTS.append((marker.args[0], rep.passed, notes))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, notes in _RESULTS:
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if notes:
            line += f"  ({notes})"
        terminalreporter.write_line(line)
