import numpy as np
import pytest

from symridge.spaces import space_descriptor


@pytest.fixture
def ball():
    return space_descriptor("poincare_ball", 2)


@pytest.fixture
def ball3():
    return space_descriptor("poincare_ball", 3)


@pytest.fixture
def disk():
    return space_descriptor("poincare_disk_su11")


@pytest.fixture
def line():
    return space_descriptor("euclidean", 1)


@pytest.fixture
def spd2():
    return space_descriptor("spd", 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# acceptance bookkeeping: one PASS/FAIL line per criterion in the terminal summary
_CRITERIA = {}


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    label = str(marker.args[0]) if marker else request.node.name
    state = {}

    def record(ok, detail=""):
        state["done"] = True
        _CRITERIA[label] = (bool(ok), detail)
        return ok

    yield record
    if not state:
        _CRITERIA[label] = (False, "no measurement (raised before recording)")


def _order(label):
    head = label.split()[0]
    return (int(head) if head.isdigit() else 99, label)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=_order):
        ok, detail = _CRITERIA[label]
        terminalreporter.write_line(f"C{label}: {'PASS' if ok else 'FAIL'}  {detail}")
