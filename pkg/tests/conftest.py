import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from mindmapper.dmr import generate_dmr
from mindmapper.ontology import load_ontology
from mindmapper.sept import parse_sept_document

FIXTURES = Path(__file__).resolve().parent / "fixtures"

_ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _ACCEPTANCE_RESULTS.append((report.nodeid.split("::")[-1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, passed in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"  [{'PASS' if passed else 'FAIL'}] {name}")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def ontology():
    return load_ontology((FIXTURES / "ontology_historical.json").read_bytes())


def _doc(name):
    return parse_sept_document((FIXTURES / name).read_bytes())


@pytest.fixture(scope="session")
def shakespeare_doc():
    return _doc("shakespeare.sept.json")


@pytest.fixture(scope="session")
def ali_doc():
    return _doc("ali.sept.json")


@pytest.fixture(scope="session")
def ball_doc():
    return _doc("ball.sept.json")


@pytest.fixture(scope="session")
def performed_doc():
    return _doc("performed.sept.json")


@pytest.fixture(scope="session")
def biography_doc():
    return _doc("biography20.sept.json")


@pytest.fixture(scope="session")
def shakespeare_dmr(shakespeare_doc, ontology):
    return generate_dmr(shakespeare_doc, ontology)


@pytest.fixture(scope="session")
def ali_dmr(ali_doc, ontology):
    return generate_dmr(ali_doc, ontology)
