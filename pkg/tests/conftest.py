import pytest

from onoma_relay.channel import RicianLink
from onoma_relay.presets import preset_table


@pytest.fixture(scope="session")
def presets():
    return preset_table()


@pytest.fixture(scope="session")
def fig4_links():
    return RicianLink(2.0, 9.0), RicianLink(5.0, 36.0), RicianLink(5.0, 36.0)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance line; printed in the terminal summary."""
    def _report(criterion: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
