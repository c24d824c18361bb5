import pytest

from entanglab.model import ModelParams, normalization


@pytest.fixture(scope="session")
def exact10():
    p = ModelParams(10.0)
    return p, normalization(p, "exact")


@pytest.fixture(scope="session")
def asym10():
    p = ModelParams(10.0)
    return p, normalization(p, "asymptotic")


_acceptance: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _acceptance.append((props["criterion"], "PASS" if report.passed else "FAIL", props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, detail in _acceptance:
        line = f"{verdict}  {name}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
