import pytest

_acceptance: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("acceptance") is None:
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    key = doc.split()[0]
    failed = rep.failed or rep.skipped
    if failed or key not in _acceptance:
        _acceptance[key] = (doc, "FAIL" if failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance):
        doc, status = _acceptance[key]
        terminalreporter.write_line(f"{status}  {doc}")
