import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from thermal_qubit import FormFactor, SystemParams

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def gauss():
    return FormFactor.gaussian(0.1, 1.0)


@pytest.fixture
def gauss_unit():
    return FormFactor.gaussian(1.0, 1.0)


@pytest.fixture
def unit_params():
    return SystemParams(m=1.0, beta=1.0)


@pytest.fixture
def gaussian_table():
    """Gaussian(1, 1) sampled at 200 points."""
    k = np.linspace(0.0, 10.0, 200)
    return FormFactor.tabulated(k, k * np.exp(-0.5 * k * k), coupling=1.0)


# acceptance summary: one line per criterion, printed after the run ------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    entry = _CRITERIA.setdefault(key, {"title": props.get("title", ""), "ok": True, "notes": []})
    if report.when == "call" or report.failed:
        entry["ok"] = entry["ok"] and report.passed
        if "detail" in props:
            entry["notes"].append(props["detail"])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=int):
        e = _CRITERIA[key]
        note = f" ({'; '.join(e['notes'])})" if e["notes"] else ""
        terminalreporter.line(f"criterion {key:>2} {'PASS' if e['ok'] else 'FAIL'}: {e['title']}{note}")
