import pytest

from qhfrob.exactlin import GF, QQ
from qhfrob.workbench.builders import build_sweedler, c2_algebra, s3_algebra, twisted_z2

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def c2():
    return c2_algebra(QQ)


@pytest.fixture(scope="session")
def s3():
    return s3_algebra(QQ)


@pytest.fixture(scope="session")
def sweedler():
    return build_sweedler(QQ)


@pytest.fixture(scope="session")
def tz2():
    return twisted_z2(QQ)


@pytest.fixture(scope="session")
def c2_f2():
    return c2_algebra(GF(2))


@pytest.fixture(scope="session")
def examples(c2, s3, sweedler, tz2):
    return {"C2": c2, "S3": s3, "Sweedler": sweedler, "twisted Z2": tz2}


@pytest.fixture(scope="session")
def all_examples(examples, c2_f2):
    return {**examples, "F2[C2]": c2_f2}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    num, title = marker.args
    status = "PASS" if call.excinfo is None else "FAIL"
    _ACCEPTANCE[num] = (title, status)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d} [{status}] {title}")
