import pytest

ACCEPTANCE_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    ACCEPTANCE_RESULTS.setdefault(marker.args[0], []).append((item.name, rep.passed))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        results = ACCEPTANCE_RESULTS[n]
        ok = all(passed for _, passed in results)
        names = ", ".join(name for name, _ in results)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  ({names})")
