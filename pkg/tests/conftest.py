import mpmath
import pytest
from hypothesis import settings

from qmock.qcore import precision

settings.register_profile("qmock", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("qmock")


@pytest.fixture(autouse=True)
def dps50():
    with precision(50):
        yield


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the verdict follows the test outcome."""
    lines: list[str] = []
    yield lines
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    detail = "; ".join(lines)
    _ACCEPTANCE.append(f"{request.node.name.removeprefix('test_')}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
