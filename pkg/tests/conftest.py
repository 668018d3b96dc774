import re

import pytest

from lpimod.builtins import builtin
from lpimod.conservativity import minimal_completion
from lpimod.embedding import build_embedding
from lpimod.surface import parse_context, parse_term

_criteria: dict[int, tuple[str, str, float]] = {}
_notes: dict[int, list[str]] = {}


@pytest.fixture(scope="session")
def hol():
    return builtin("HOL")


@pytest.fixture(scope="session")
def hol_emb(hol):
    return build_embedding(hol)


@pytest.fixture(scope="session")
def hol_star(hol):
    return minimal_completion(hol)


@pytest.fixture(scope="session")
def lpi(hol_emb):
    """Parse lambda-Pi/HOL terms and contexts."""
    from lpimod.lpi import LPI_SPEC

    class Reader:
        def term(self, text):
            return parse_term(text, LPI_SPEC, hol_emb.signature)

        def ctx(self, text):
            return parse_context(text, LPI_SPEC, hol_emb.signature)

    return Reader()


@pytest.fixture
def note(request):
    """Attach a line to this criterion's summary entry."""
    m = re.match(r"test_criterion_(\d+)", request.node.name)
    key = int(m.group(1)) if m else 0

    def add(line: str):
        _notes.setdefault(key, []).append(line)

    return add


def pytest_runtest_logreport(report):
    m = re.match(r".*::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[n] = (report.outcome, m.group(2).replace("_", " "), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcome, title, duration = _criteria[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {n}: {title} ({duration:.2f}s)")
        for line in _notes.get(n, []):
            terminalreporter.write_line(f"     {line}")
