import pytest

_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one pass/fail line for an acceptance criterion."""
    def record(number: int, title: str, passed: bool, seconds: float, limit: float):
        status = "PASS" if passed and seconds < limit else "FAIL"
        line = f"[{status}] criterion {number:>2}: {title} ({seconds:.2f}s, limit {limit:g}s)"
        _LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
