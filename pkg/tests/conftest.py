from importlib.resources import files

import pytest

from qmendo.curve import integral_model, load_curve

DATA = files("qmendo") / "data"


@pytest.fixture(scope="session")
def c1_raw():
    return load_curve(DATA / "c1.curve")


@pytest.fixture(scope="session")
def c2_raw():
    return load_curve(DATA / "c2.curve")


@pytest.fixture(scope="session")
def c1(c1_raw):
    return integral_model(c1_raw)


@pytest.fixture(scope="session")
def c2(c2_raw):
    return integral_model(c2_raw)


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::test_criterion_")[1]
        num, _, title = name.partition("_")
        _ACCEPTANCE[int(num)] = ("PASS" if report.passed else "FAIL", title.replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title}")
