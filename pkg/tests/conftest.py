import copy
import json
from pathlib import Path

import pytest

from cutscene.bench import load_bundle

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def bundle():
    return load_bundle("S2_001")


@pytest.fixture
def gt_calls(bundle):
    return copy.deepcopy(bundle.gt_trajectory)


@pytest.fixture
def gt_snapshot(bundle):
    return copy.deepcopy(bundle.gt_snapshot)


@pytest.fixture(scope="session")
def sample_workbook():
    return FIXTURES / "sample_workbook"


def load_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


# -- acceptance summary: one line per criterion ------------------------------------

_CRITERIA: dict[int, tuple[str, str, str]] = {}


def _criterion(nodeid):
    import re

    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", nodeid)
    return (int(m.group(1)), m.group(2)) if m else None


def pytest_runtest_logreport(report):
    key = _criterion(report.nodeid)
    if key is None:
        return
    num, name = key
    detail = "; ".join(f"{k}={v}" for k, v in report.user_properties)
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA[num] = (name, "PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        name, outcome, detail = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d} {outcome}  {name.replace('_', ' ')}  {detail}".rstrip())
