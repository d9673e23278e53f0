import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    prev = _CRITERIA.get(number, (title, True, ""))
    if rep.when == "call" or rep.failed:
        ok = prev[1] and rep.passed
        why = prev[2] or ("" if rep.passed else str(rep.longrepr.reprcrash.message if hasattr(rep.longrepr, "reprcrash") else rep.longrepr))
        _CRITERIA[number] = (title, ok, why)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, why = _CRITERIA[number]
        line = f"criterion {number} ({title}): {'PASS' if ok else 'FAIL'}"
        if not ok:
            line += f" -- {why.splitlines()[0][:300]}"
        terminalreporter.write_line(line)
