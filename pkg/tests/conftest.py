import pytest

RESULTS = {}


@pytest.fixture
def criterion():
    """``criterion(label, checks)`` prints and records one PASS/FAIL line, then asserts."""
    def record(label, checks):
        bad = [c for c in checks if not c[3]]
        shown = bad or checks
        detail = "; ".join(f"{name}: got {got}, want {want}" for name, got, want, _ in shown)
        line = f"{label}: {'PASS' if not bad else 'FAIL'} ({detail})"
        RESULTS[label] = line
        print(line)
        assert not bad, line
    return record


def check(name, got, want, ok=None):
    return (name, got, want, got == want if ok is None else bool(ok))


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance")
    for label in sorted(RESULTS, key=lambda s: int(s.split()[1]) if s.split()[1].isdigit() else 99):
        terminalreporter.write_line(RESULTS[label])
