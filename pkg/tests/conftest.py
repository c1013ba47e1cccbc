from pathlib import Path

import pytest

from echeck.library import Library, Loader
from echeck.parser import parse

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

# criterion number -> (passed, description); filled in by test_acceptance.py
CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def assumed_library() -> Library:
    loader = Loader()
    loader.load(CORPUS / "assumed.e")
    return loader.library


@pytest.fixture(scope="session")
def book1(assumed_library):
    """The parsed Book I script, with statements resolved against the assumed theorems."""
    text = (CORPUS / "book1.e").read_text(encoding="utf-8")
    return parse(text, "book1.e", env=assumed_library.statements())


@pytest.fixture(scope="session")
def book1_loader():
    loader = Loader()
    loader.load(CORPUS / "book1.e")
    return loader


@pytest.fixture
def criterion(request):
    """Record the outcome of the acceptance criterion named by the test for the summary.

    A test that errors out before recording is reported as failed.
    """
    n = int(request.node.name.split("_")[2].split("[")[0])
    CRITERIA[n] = (False, "did not complete")

    def record(ok: bool, what: str):
        CRITERIA[n] = (bool(ok), what)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, what = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {what}")
