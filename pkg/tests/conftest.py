"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import pytest

_outcomes: dict[int, list[tuple[str, bool]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _outcomes.setdefault(marker.args[0], []).append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        ok = all(passed for _, passed in results)
        failed = [name for name, passed in results if not passed]
        detail = f"{len(results)} check(s)" + (f", failed: {', '.join(failed)}" if failed else "")
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
