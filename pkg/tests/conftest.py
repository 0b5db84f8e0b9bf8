import pytest

from polymix.catalog import CATALOG

_acceptance: dict[str, str] = {}


def catalog_params(entry, value):
    """Every parameter of ``entry`` set to ``value``; integer-only ones mapped onto {1, 2, 3}."""
    out = []
    for name in entry.param_names:
        if name in entry.integer_params:
            out.append({0.5: 1.0, 1.0: 2.0, 2.0: 3.0}.get(value, float(round(value))))
        else:
            out.append(value)
    return out


@pytest.fixture(params=sorted(CATALOG))
def catalog_name(request):
    return request.param


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        doc = report.nodeid.split("::")[-1]
        _acceptance[doc] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items(), key=lambda kv: int(kv[0].split("_")[1][2:])):
        mark = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
