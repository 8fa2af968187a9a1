import numpy as np
import pytest
from hypothesis import settings, strategies as st

from plasmode.structure import LayeredStructure

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    _CRITERIA[props["criterion"]] = (props.get("title", ""), report.outcome, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, outcome, detail = _CRITERIA[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] criterion {n:2d}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def criterion(request, record_property):
    """Tag a test with its acceptance criterion; ``detail`` is shown in the summary."""
    marker = request.node.get_closest_marker("criterion")
    n, title = marker.args
    record_property("criterion", n)
    record_property("title", title)

    def detail(text):
        record_property("detail", text)
        print(f"criterion {n}: {text}")

    return detail


@st.composite
def structures(draw, min_n=1, max_n=10, dimension=3):
    """Strictly decreasing radii built from a core radius plus positive gaps."""
    N = draw(st.integers(min_n, max_n))
    core = draw(st.floats(0.1, 1.0))
    gaps = draw(st.lists(st.floats(0.05, 1.0), min_size=N - 1, max_size=N - 1))
    radii = core + np.concatenate([np.cumsum(gaps[::-1])[::-1], [0.0]]) if N > 1 else np.array([core])
    return LayeredStructure(tuple(float(r) for r in radii), dimension)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
