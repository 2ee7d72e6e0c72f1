import pytest

from loopforge.catalog import builtin_catalog

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA[n] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict, title = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {title}")
