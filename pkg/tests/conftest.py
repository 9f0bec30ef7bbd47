import io
import shutil
from pathlib import Path

import pytest

from wmkit.cli import main

DATA = Path(__file__).parent / "data"


class Result:
    def __init__(self, code, out, err):
        self.code, self.out, self.err = code, out, err

    def report(self):
        return dict(line.split("=", 1) for line in self.out.splitlines())


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return Result(code, out.getvalue(), err.getvalue())


@pytest.fixture
def cli():
    return run_cli


@pytest.fixture
def data_dir(tmp_path):
    """Copy of the checked-in fixtures in a scratch directory."""
    for f in DATA.iterdir():
        if f.suffix in (".wav", ".pgm"):
            shutil.copy(f, tmp_path / f.name)
    return tmp_path


# --------- acceptance summary ---------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker
        prev = _criteria.get(number, (title, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _criteria[number] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
