from pathlib import Path

import pytest

from alcpin.cli import parse

ONTOLOGIES = Path(__file__).resolve().parent.parent / "ontologies"


def load(name: str):
    return parse((ONTOLOGIES / name).read_text(encoding="utf-8")).ontology


@pytest.fixture
def texa():
    return load("texa.dl")


@pytest.fixture
def texa2():
    return load("texa2.dl")


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
