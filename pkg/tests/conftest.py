import pytest

_LINES: list[str] = []
_RUNS: list[dict] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def _report(n: int, title: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}" + (f" -- {detail}" if detail else "")
        _LINES.append(line)
        print(line)
        assert ok, line

    return _report


@pytest.fixture(scope="session")
def run_log():
    """Every flow run made by the acceptance suite, for the integrity audit."""
    return _RUNS


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda l: int(l.split("]")[1].split(".")[0])):
            terminalreporter.write_line(line)
