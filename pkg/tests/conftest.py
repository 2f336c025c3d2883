import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = []

    def record(label: str, passed: bool, detail: str = "") -> None:
        lines.append(f"[{'PASS' if passed else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))

    yield record
    if not lines:
        lines.append(f"[FAIL] {request.node.name}  (no result recorded)")
    ACCEPTANCE_LINES.extend(lines)
    print("\n".join(lines))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
